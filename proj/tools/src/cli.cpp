#include "ulsched_cli/cli.hpp"

#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>

#include "CLI11.hpp"
#include "ulsched/config.hpp"
#include "ulsched/engine.hpp"
#include "ulsched/example_replay.hpp"

namespace ulsched::cli {

namespace {

namespace fs = std::filesystem;

struct Overrides {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string policy;
  std::string ue_policy;
  std::optional<std::int64_t> ttis;
  std::string out_dir = "ulsched_out";
  int jobs = 1;
  bool trace = false;
};

void add_run_flags(CLI::App& cmd, Overrides& o, bool config_required) {
  auto* cfg = cmd.add_option("--config,-c", o.config, "Scenario JSON file")
                  ->envname(std::string(kEnvPrefix) + "CONFIG");
  if (config_required) cfg->required();
  cmd.add_option("--seed", o.seed, "Master seed")->envname(std::string(kEnvPrefix) + "SEED");
  cmd.add_option("--policy", o.policy, "dham | darts | dafs | dafs-pf")
      ->envname(std::string(kEnvPrefix) + "POLICY");
  cmd.add_option("--ue-policy", o.ue_policy, "strict | flip")
      ->envname(std::string(kEnvPrefix) + "UE_POLICY");
  cmd.add_option("--ttis", o.ttis, "Number of TTIs to simulate")
      ->envname(std::string(kEnvPrefix) + "TTIS");
  cmd.add_option("--out,-o", o.out_dir, "Output directory for CSV files")
      ->envname(std::string(kEnvPrefix) + "OUT");
}

ScenarioConfig resolve(const Overrides& o) {
  ScenarioConfig c = o.config.empty() ? ScenarioConfig{} : load_config(o.config);
  if (o.seed) c.seed = *o.seed;
  if (!o.policy.empty()) {
    try {
      const PolicyPair p = policy_pair_from_string(o.policy);
      c.policy = p.policy;
      c.ue_policy = p.ue_policy;
    } catch (const std::invalid_argument& e) {
      throw ConfigError("policy", e.what());
    }
  }
  if (!o.ue_policy.empty()) {
    try {
      c.ue_policy = ue_policy_from_string(o.ue_policy);
    } catch (const std::invalid_argument& e) {
      throw ConfigError("ue_policy", e.what());
    }
  }
  if (o.ttis) c.tti_count = *o.ttis;
  if (o.trace) c.record_trace = true;
  validate(c);
  return c;
}

fs::path prepare_out_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw ConfigError("out", "cannot create output directory '" + dir + "'");
  }
  return fs::path(dir);
}

// Appends rows; the header goes in only when the file is new or empty.
std::ofstream open_append(const fs::path& path, bool& fresh) {
  std::error_code ec;
  fresh = !fs::exists(path, ec) || fs::file_size(path, ec) == 0;
  std::ofstream f(path, std::ios::app);
  if (!f) throw ConfigError("out", "cannot write '" + path.string() + "'");
  return f;
}

RunLabel label_for(const ScenarioConfig& c) {
  return {c.name,
          PolicyPair{c.policy, c.ue_policy}.name(),
          std::string(to_string(c.ue_policy)),
          c.load.voice_mbps,
          c.load.video_mbps,
          c.load.data_mbps,
          c.seed};
}

void print_summary_line(std::ostream& out, const RunLabel& l, const MetricsSummary& s) {
  const UeCounters t = s.totals();
  out << "summary run=" << l.run << " policy=" << l.policy << " seed=" << l.seed
      << " ttis=" << s.ttis << " ues=" << s.n_ue << " tx_bytes=" << s.total_tx_bytes
      << " throughput_mbps=" << s.throughput_mbps << " jain=" << s.jain
      << " deadline_drop_bytes=" << t.deadline_dropped()
      << " overflow_drop_bytes=" << t.overflow_dropped()
      << " conserved=" << (s.conserved() ? 1 : 0) << '\n';
}

int do_run(const Overrides& o, std::ostream& out) {
  const ScenarioConfig c = resolve(o);
  const fs::path dir = prepare_out_dir(o.out_dir);
  const MetricsSummary s = run(c);
  const RunLabel label = label_for(c);

  bool fresh = false;
  std::ofstream csv = open_append(dir / "summary.csv", fresh);
  if (fresh) write_summary_csv_header(csv);
  write_summary_csv_row(csv, label, s);
  if (c.record_trace) {
    std::ofstream tr(dir / ("trace_" + label.policy + "_" + std::to_string(c.seed) + ".csv"));
    write_trace_csv(tr, s.trace);
  }
  print_summary_line(out, label, s);
  return kOk;
}

int do_sweep(const Overrides& o, std::ostream& out) {
  const ScenarioConfig c = resolve(o);
  const fs::path dir = prepare_out_dir(o.out_dir);
  const std::vector<SweepRun> runs = sweep(c, o.jobs);

  bool fresh = false;
  std::ofstream csv = open_append(dir / "sweep.csv", fresh);
  if (fresh) write_summary_csv_header(csv);
  bool conserved = true;
  for (const SweepRun& r : runs) {
    write_summary_csv_row(csv, r.label, r.summary);
    conserved = conserved && r.summary.conserved();
  }
  out << "summary sweep=" << c.name << " runs=" << runs.size()
      << " conserved=" << (conserved ? 1 : 0) << " csv=" << (dir / "sweep.csv").string()
      << '\n';
  return kOk;
}

int do_validate(const Overrides& o, std::ostream& out) {
  const ScenarioConfig c = resolve(o);
  out << "valid " << o.config << " (" << c.name << ", policy "
      << PolicyPair{c.policy, c.ue_policy}.name() << ", " << c.tti_count << " TTIs)\n";
  return kOk;
}

int do_example(const std::string& name, std::ostream& out, std::ostream& err) {
  const ExampleOutcome o = run_example(name);
  out << o.report;
  out << "summary example=" << o.name << " match=" << (o.matches ? 1 : 0) << '\n';
  if (!o.matches) {
    err << "example " << o.name << " does not match its expected result\n";
    return kGoldenMismatch;
  }
  return kOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Uplink LTE scheduling simulator", "ulsched"};
  app.require_subcommand(1);

  Overrides run_o, sweep_o, validate_o;
  std::string example_name;

  CLI::App* run_cmd = app.add_subcommand("run", "Run one scenario");
  add_run_flags(*run_cmd, run_o, false);
  run_cmd->add_flag("--trace", run_o.trace, "Also write the per-TTI event trace CSV");

  CLI::App* sweep_cmd = app.add_subcommand("sweep", "Run every load point, policy and seed");
  add_run_flags(*sweep_cmd, sweep_o, false);
  sweep_cmd->add_option("--jobs,-j", sweep_o.jobs, "Parallel runs")
      ->envname(std::string(kEnvPrefix) + "JOBS")
      ->check(CLI::PositiveNumber);

  CLI::App* validate_cmd = app.add_subcommand("validate", "Check a scenario file");
  add_run_flags(*validate_cmd, validate_o, true);

  CLI::App* example_cmd =
      app.add_subcommand("example", "Replay a worked example and check its totals");
  example_cmd->add_option("name", example_name, "table3 | table4 | table5 | sec2-objective")
      ->required()
      ->check(CLI::IsMember(example_names()));

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    if (!reversed.empty()) reversed.pop_back();  // program name
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n' << app.help();
    return kUsageError;
  }

  try {
    if (*run_cmd) return do_run(run_o, out);
    if (*sweep_cmd) return do_sweep(sweep_o, out);
    if (*validate_cmd) return do_validate(validate_o, out);
    if (*example_cmd) return do_example(example_name, out, err);
  } catch (const ConfigError& e) {
    err << "config error [" << e.key() << "]: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  }
  return kUsageError;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  return run_cli(std::vector<std::string>(argv, argv + argc), out, err);
}

}  // namespace ulsched::cli
