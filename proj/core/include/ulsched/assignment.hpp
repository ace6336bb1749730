#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace ulsched {

// Dense row-major matrix of signed byte rewards. Rows are UEs, columns are
// resource chunks; columns at index >= real_cols() are dummy RCs added to
// square the problem.
class RewardMatrix {
 public:
  RewardMatrix() = default;
  RewardMatrix(std::size_t rows, std::size_t cols, std::int64_t fill = 0);
  RewardMatrix(std::size_t rows, std::size_t cols,
               std::vector<std::int64_t> entries);

  // Builds from nested rows; every row must have the same length.
  static RewardMatrix from_rows(
      const std::vector<std::vector<std::int64_t>>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  // Columns before this index are real RCs; the rest are dummies.
  std::size_t real_cols() const { return real_cols_; }
  void set_real_cols(std::size_t n);

  std::int64_t& operator()(std::size_t r, std::size_t c) {
    return data_[r * cols_ + c];
  }
  std::int64_t operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  std::span<const std::int64_t> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }

  std::int64_t max_entry() const;
  std::int64_t min_entry() const;

  friend bool operator==(const RewardMatrix&, const RewardMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::size_t real_cols_ = 0;
  std::vector<std::int64_t> data_;
};

struct Assignment {
  static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

  // mapping[row] is the assigned column, or kNone.
  std::vector<std::size_t> mapping;
  std::int64_t objective = 0;
  // Copied from the solved matrix so callers can tell dummy columns apart.
  std::size_t real_cols = 0;

  // True when the row was left without a real RC (beta_i = 1).
  bool unscheduled(std::size_t row) const {
    return mapping[row] == kNone || mapping[row] >= real_cols;
  }

  friend bool operator==(const Assignment&, const Assignment&) = default;
};

// Maximum-reward perfect matching on a square matrix via the O(n^3)
// shortest-augmenting-path Hungarian method. Among all optimal matchings the
// lexicographically smallest mapping is returned (lowest row first, then
// lowest column), so results are reproducible across platforms.
//
// Throws std::invalid_argument if the matrix is not square or empty.
Assignment solve_max_assignment(const RewardMatrix& m);

// Exhaustive permutation search; test oracle. Same tie rule as
// solve_max_assignment. Throws std::length_error for n > 8.
Assignment brute_force_assignment(const RewardMatrix& m);

inline constexpr std::size_t kBruteForceLimit = 8;

// N_U x M (N_U > M) -> N_U x N_U with zero dummy columns. A square input is
// returned unchanged. Throws std::invalid_argument when rows < cols.
RewardMatrix pad_with_zero_dummies(const RewardMatrix& m);

// N_U x M (N_U < M) -> M x M with zero dummy rows appended.
// Throws std::invalid_argument when rows > cols.
RewardMatrix pad_with_zero_dummy_rows(const RewardMatrix& m);

// Squares a gamma matrix by replicating the "not scheduled" column N_U - M
// times; every dummy cell in row i holds -penalty[i]. With N_U == M the matrix
// is returned unchanged.
// Throws std::invalid_argument on a length mismatch, negative penalty, or
// rows < cols.
RewardMatrix replicate_penalty_dummies(const RewardMatrix& gamma,
                                       std::span<const std::int64_t> penalty);

}  // namespace ulsched
