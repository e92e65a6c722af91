#pragma once

// The rank oracle. Given N perturbed points sharing one noise draw it
// returns only their ascending order; function values never leave this
// translation unit.

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "rankzo/direction_set.hpp"
#include "rankzo/functions.hpp"

namespace rankzo::oracle {

/// order[k] is the (0-based) index of the k-th smallest value.
struct Ranking {
  std::vector<std::size_t> order;
  std::int64_t iteration = 0;

  std::size_t size() const { return order.size(); }
  bool operator==(const Ranking&) const = default;
};

/// True iff `order` is a bijection on {0, ..., n-1}.
bool is_permutation(std::span<const std::size_t> order, std::size_t n);

class QueryLedger {
 public:
  QueryLedger() = default;
  explicit QueryLedger(std::size_t per_iteration) : per_iteration_(per_iteration) {}

  void record(std::size_t evaluations) {
    total_ += evaluations;
    ++calls_;
  }
  std::uint64_t total_evaluations() const { return total_; }
  std::uint64_t calls() const { return calls_; }
  std::size_t per_iteration() const { return per_iteration_; }

 private:
  std::uint64_t total_ = 0;
  std::uint64_t calls_ = 0;
  std::size_t per_iteration_ = 0;
};

inline std::uint64_t ledger_total(const QueryLedger& ledger) { return ledger.total_evaluations(); }

/// Stable ascending argsort: ties keep the smaller original index first.
std::vector<std::size_t> rank_values(std::span<const double> values);

/// Strictly increasing map applied to every value before ranking. Models an
/// annotator who sees the same preference order through a different utility
/// scale; the identity by default.
using ValueTransform = std::function<double(double)>;

class RankOracle {
 public:
  explicit RankOracle(const functions::StochasticProblem& problem, ValueTransform transform = {})
      : problem_(&problem), transform_(std::move(transform)) {}

  /// Evaluates f(center + alpha u_i; xi) for every direction (one shared xi),
  /// charges N evaluations to `ledger` and returns the ascending order.
  /// Throws OracleError naming the first non-finite value, DomainError on
  /// alpha <= 0 and IntegrityError on a dimension mismatch.
  Ranking rank(const Vector& center, const core::DirectionSet& dirs, double alpha,
               const functions::Noise& xi, QueryLedger& ledger) const;

 private:
  const functions::StochasticProblem* problem_;
  ValueTransform transform_;
};

}  // namespace rankzo::oracle
