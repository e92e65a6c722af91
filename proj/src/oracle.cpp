#include "rankzo/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "rankzo/errors.hpp"

namespace rankzo {

namespace core {

DirectionSet::DirectionSet(Matrix directions, std::int64_t iteration)
    : directions_(std::move(directions)), iteration_(iteration) {
  if (directions_.cols() == 0 || directions_.rows() == 0) {
    throw IntegrityError("direction set must hold at least one vector of dimension >= 1");
  }
  if (!directions_.allFinite()) throw IntegrityError("direction set has non-finite entries");
}

}  // namespace core

namespace oracle {

bool is_permutation(std::span<const std::size_t> order, std::size_t n) {
  if (order.size() != n) return false;
  std::vector<bool> seen(n, false);
  for (std::size_t i : order) {
    if (i >= n || seen[i]) return false;
    seen[i] = true;
  }
  return true;
}

std::vector<std::size_t> rank_values(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  return order;
}

Ranking RankOracle::rank(const Vector& center, const core::DirectionSet& dirs, double alpha,
                         const functions::Noise& xi, QueryLedger& ledger) const {
  if (!(alpha > 0.0)) throw DomainError("rank oracle: alpha must be > 0");
  if (dirs.dim() != problem_->dim() || center.size() != problem_->dim() ||
      xi.size() != problem_->dim()) {
    throw IntegrityError("rank oracle: dimension mismatch between problem, center and directions");
  }
  const int n = dirs.size();
  std::vector<double> values(static_cast<std::size_t>(n));
  Vector point(center.size());
  for (int i = 0; i < n; ++i) {
    point = center + alpha * dirs[i];
    double v = problem_->value(point, xi);
    if (transform_) v = transform_(v);
    values[static_cast<std::size_t>(i)] = v;
  }
  ledger.record(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    if (!std::isfinite(values[static_cast<std::size_t>(i)])) {
      throw OracleError("rank oracle: non-finite value at direction index " + std::to_string(i),
                        static_cast<std::size_t>(i));
    }
  }
  return Ranking{rank_values(values), dirs.iteration()};
}

}  // namespace oracle
}  // namespace rankzo
