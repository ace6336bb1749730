#include <benchmark/benchmark.h>

// The distro's prebuilt benchmark_main archive carries LTO bytecode from a
// different compiler release, so the entry point is compiled here.
BENCHMARK_MAIN();
