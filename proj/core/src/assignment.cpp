#include "ulsched/assignment.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace ulsched {

RewardMatrix::RewardMatrix(std::size_t rows, std::size_t cols, std::int64_t fill)
    : rows_(rows), cols_(cols), real_cols_(cols), data_(rows * cols, fill) {}

RewardMatrix::RewardMatrix(std::size_t rows, std::size_t cols,
                           std::vector<std::int64_t> entries)
    : rows_(rows), cols_(cols), real_cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows * cols) {
    throw std::invalid_argument("RewardMatrix: entry count " +
                                std::to_string(data_.size()) + " != " +
                                std::to_string(rows) + "x" +
                                std::to_string(cols));
  }
}

RewardMatrix RewardMatrix::from_rows(
    const std::vector<std::vector<std::int64_t>>& rows) {
  if (rows.empty()) return {};
  const std::size_t cols = rows.front().size();
  std::vector<std::int64_t> flat;
  flat.reserve(rows.size() * cols);
  for (const auto& r : rows) {
    if (r.size() != cols) {
      throw std::invalid_argument("RewardMatrix: ragged rows");
    }
    flat.insert(flat.end(), r.begin(), r.end());
  }
  return RewardMatrix(rows.size(), cols, std::move(flat));
}

void RewardMatrix::set_real_cols(std::size_t n) {
  if (n > cols_) throw std::invalid_argument("real_cols exceeds cols");
  real_cols_ = n;
}

std::int64_t RewardMatrix::max_entry() const {
  return data_.empty() ? 0 : *std::max_element(data_.begin(), data_.end());
}

std::int64_t RewardMatrix::min_entry() const {
  return data_.empty() ? 0 : *std::min_element(data_.begin(), data_.end());
}

namespace {

void require_square(const RewardMatrix& m, const char* who) {
  if (m.rows() == 0 || m.cols() == 0) {
    throw std::invalid_argument(std::string(who) + ": empty matrix");
  }
  if (!m.square()) {
    throw std::invalid_argument(std::string(who) + ": matrix is " +
                                std::to_string(m.rows()) + "x" +
                                std::to_string(m.cols()) + ", not square");
  }
}

std::int64_t objective_of(const RewardMatrix& m,
                          const std::vector<std::size_t>& mapping) {
  std::int64_t total = 0;
  for (std::size_t r = 0; r < mapping.size(); ++r) total += m(r, mapping[r]);
  return total;
}

// Re-routes an optimal matching towards the lexicographically smallest one.
// Every optimal matching uses only edges that are tight under any optimal
// dual, so the search runs over the tight subgraph alone.
class LexMinMatcher {
 public:
  LexMinMatcher(std::vector<std::vector<std::size_t>> adj,
                std::vector<std::size_t> col_of_row)
      : n_(adj.size()),
        adj_(std::move(adj)),
        col_of_(std::move(col_of_row)),
        row_of_(n_),
        locked_(n_, false),
        visited_(n_, 0) {
    for (std::size_t r = 0; r < n_; ++r) row_of_[col_of_[r]] = r;
  }

  std::vector<std::size_t> run() {
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t c : adj_[i]) {
        if (locked_[c]) continue;
        if (col_of_[i] == c || reroute(i, c)) {
          locked_[c] = true;
          break;
        }
      }
    }
    return col_of_;
  }

 private:
  static constexpr std::size_t kFree = Assignment::kNone;

  // Tries to move row i onto column c while keeping a perfect matching.
  bool reroute(std::size_t i, std::size_t c) {
    const std::size_t displaced = row_of_[c];
    const std::size_t vacated = col_of_[i];

    col_of_[i] = c;
    row_of_[c] = i;
    row_of_[vacated] = kFree;
    col_of_[displaced] = kFree;
    locked_[c] = true;

    ++stamp_;
    const bool ok = augment(displaced);
    locked_[c] = false;
    if (ok) return true;

    col_of_[i] = vacated;
    row_of_[vacated] = i;
    row_of_[c] = displaced;
    col_of_[displaced] = c;
    return false;
  }

  bool augment(std::size_t row) {
    for (std::size_t c : adj_[row]) {
      if (locked_[c] || visited_[c] == stamp_) continue;
      visited_[c] = stamp_;
      if (row_of_[c] == kFree || augment(row_of_[c])) {
        row_of_[c] = row;
        col_of_[row] = c;
        return true;
      }
    }
    return false;
  }

  std::size_t n_;
  std::vector<std::vector<std::size_t>> adj_;
  std::vector<std::size_t> col_of_;
  std::vector<std::size_t> row_of_;
  std::vector<bool> locked_;
  std::vector<std::uint64_t> visited_;
  std::uint64_t stamp_ = 0;
};

}  // namespace

Assignment solve_max_assignment(const RewardMatrix& m) {
  require_square(m, "solve_max_assignment");
  const std::size_t n = m.rows();

  // Reward maximization as cost minimization against the global maximum;
  // every cost is then non-negative and the argmax is unchanged.
  const std::int64_t top = m.max_entry();
  auto cost = [&](std::size_t r, std::size_t c) { return top - m(r, c); };

  constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;
  // 1-based potentials; index 0 is the virtual source column.
  std::vector<std::int64_t> u(n + 1, 0), v(n + 1, 0), minv(n + 1);
  std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
  std::vector<bool> used(n + 1);

  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::fill(minv.begin(), minv.end(), kInf);
    std::fill(used.begin(), used.end(), false);
    do {
      used[j0] = true;
      const std::size_t i0 = p[j0];
      std::int64_t delta = kInf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const std::int64_t cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<std::size_t> col_of_row(n);
  for (std::size_t j = 1; j <= n; ++j) col_of_row[p[j] - 1] = j - 1;

  std::vector<std::vector<std::size_t>> tight(n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      if (cost(r, c) - u[r + 1] - v[c + 1] == 0) tight[r].push_back(c);
    }
  }

  Assignment out;
  out.mapping = LexMinMatcher(std::move(tight), std::move(col_of_row)).run();
  out.objective = objective_of(m, out.mapping);
  out.real_cols = m.real_cols();
  return out;
}

Assignment brute_force_assignment(const RewardMatrix& m) {
  require_square(m, "brute_force_assignment");
  if (m.rows() > kBruteForceLimit) {
    throw std::length_error("brute_force_assignment: n=" +
                            std::to_string(m.rows()) + " exceeds limit " +
                            std::to_string(kBruteForceLimit));
  }
  std::vector<std::size_t> perm(m.rows());
  std::iota(perm.begin(), perm.end(), std::size_t{0});

  Assignment best;
  best.mapping = perm;
  best.objective = objective_of(m, perm);
  best.real_cols = m.real_cols();
  while (std::next_permutation(perm.begin(), perm.end())) {
    const std::int64_t value = objective_of(m, perm);
    if (value > best.objective) {
      best.objective = value;
      best.mapping = perm;
    }
  }
  return best;
}

RewardMatrix pad_with_zero_dummies(const RewardMatrix& m) {
  if (m.rows() < m.cols()) {
    throw std::invalid_argument(
        "pad_with_zero_dummies: fewer UEs than RCs; pad rows instead");
  }
  if (m.square()) return m;
  RewardMatrix out(m.rows(), m.rows(), 0);
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) out(r, c) = m(r, c);
  out.set_real_cols(m.cols());
  return out;
}

RewardMatrix pad_with_zero_dummy_rows(const RewardMatrix& m) {
  if (m.rows() > m.cols()) {
    throw std::invalid_argument(
        "pad_with_zero_dummy_rows: more UEs than RCs; pad columns instead");
  }
  RewardMatrix out(m.cols(), m.cols(), 0);
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) out(r, c) = m(r, c);
  out.set_real_cols(m.real_cols());
  return out;
}

RewardMatrix replicate_penalty_dummies(const RewardMatrix& gamma,
                                       std::span<const std::int64_t> penalty) {
  if (penalty.size() != gamma.rows()) {
    throw std::invalid_argument("replicate_penalty_dummies: " +
                                std::to_string(penalty.size()) +
                                " penalties for " +
                                std::to_string(gamma.rows()) + " rows");
  }
  if (gamma.rows() < gamma.cols()) {
    throw std::invalid_argument(
        "replicate_penalty_dummies: fewer UEs than RCs");
  }
  for (std::int64_t k : penalty) {
    if (k < 0) {
      throw std::invalid_argument("replicate_penalty_dummies: negative penalty");
    }
  }
  RewardMatrix out = pad_with_zero_dummies(gamma);
  for (std::size_t r = 0; r < out.rows(); ++r)
    for (std::size_t c = gamma.cols(); c < out.cols(); ++c)
      out(r, c) = -penalty[r];
  return out;
}

}  // namespace ulsched
