#pragma once

// Stochastic test problems with certified constants.
//
// Every problem here shares one noise channel: a linear perturbation
//   f(x; xi) = f(x) + <xi, x>,   xi uniform on the sphere of radius r,
// so grad f(x; xi) = grad f(x) + xi and ||xi|| = r for every draw. The
// smoothness, second-moment and gradient lower-bound constants are then
// available in closed form on a ball of radius R around the minimizer.

#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "rankzo/types.hpp"

namespace rankzo::functions {

struct ProblemConstants {
  double L = 0.0;                 ///< smoothness of f and of every f(.; xi)
  std::optional<double> mu;       ///< strong convexity, absent for nonconvex families
  double g_upper = 0.0;           ///< ||grad f(x; xi)|| <= g_upper on the region
  std::optional<double> g_lower;  ///< ||grad f(x; xi)|| >= g_lower; absent when noiseless
  double region_radius = 0.0;
};

/// Sphere-linear noise of radius r. r == 0 is the noiseless problem.
struct NoiseSpec {
  double radius = 0.0;
};

using Noise = Vector;

class StochasticProblem {
 public:
  virtual ~StochasticProblem() = default;

  virtual std::string_view family() const = 0;
  virtual double value(const Vector& x) const = 0;
  virtual Vector gradient(const Vector& x) const = 0;

  double value(const Vector& x, const Noise& xi) const { return value(x) + xi.dot(x); }
  Vector gradient(const Vector& x, const Noise& xi) const { return gradient(x) + xi; }

  /// One draw of xi. Always returns a vector of norm exactly `noise().radius`
  /// up to rounding; the zero vector when noiseless.
  Noise sample_noise(Rng& rng) const;

  int dim() const { return static_cast<int>(minimizer_.size()); }
  double f_star() const { return f_star_; }
  const Vector& minimizer() const { return minimizer_; }
  const ProblemConstants& constants() const { return constants_; }
  const NoiseSpec& noise() const { return noise_; }

  bool in_region(const Vector& x) const;
  /// Uniform sample from the certified ball around the minimizer.
  Vector sample_region_point(Rng& rng) const;

 protected:
  StochasticProblem(Vector minimizer, double f_star, ProblemConstants constants, NoiseSpec noise)
      : minimizer_(std::move(minimizer)), f_star_(f_star), constants_(constants), noise_(noise) {}

 private:
  Vector minimizer_;
  double f_star_;
  ProblemConstants constants_;
  NoiseSpec noise_;
};

/// f(x) = 1/2 x^T A x, A diagonal with eigenvalues evenly spaced in
/// [lambda_min, lambda_max].
class QuadraticProblem final : public StochasticProblem {
 public:
  using StochasticProblem::gradient;
  using StochasticProblem::value;

  QuadraticProblem(Vector eigenvalues, ProblemConstants constants, NoiseSpec noise);

  std::string_view family() const override { return "quadratic"; }
  double value(const Vector& x) const override;
  Vector gradient(const Vector& x) const override;
  const Vector& eigenvalues() const { return eigenvalues_; }

 private:
  Vector eigenvalues_;
};

/// f(x) = 1/2 ||x||^2 + a sum_i cos(x_i) - d m(a), where m(a) is the minimum
/// of s -> s^2/2 + a cos(s). f* = 0 and the global minimizers are the points
/// with every |x_i| = s*(a); the certified region is centred on s* (1,...,1).
class CosineProblem final : public StochasticProblem {
 public:
  using StochasticProblem::gradient;
  using StochasticProblem::value;

  CosineProblem(int dim, double a, double root, double offset, ProblemConstants constants,
                NoiseSpec noise);

  std::string_view family() const override { return "cosine"; }
  double value(const Vector& x) const override;
  Vector gradient(const Vector& x) const override;

  double amplitude() const { return a_; }
  /// Positive global minimizer of s^2/2 + a cos(s).
  double root() const { return root_; }
  /// Diagonal of the Hessian, 1 - a cos(x_i).
  Vector hessian_diagonal(const Vector& x) const;
  /// Point where the Hessian has a negative eigenvalue (the origin).
  Vector nonconvexity_witness() const { return Vector::Zero(dim()); }

 private:
  double a_;
  double root_;
  double offset_;
};

/// Noiseless linear objective f(x) = <g, x>. Unbounded below, so f* is -inf
/// and no region constants are certified; the exactly-rankable test bed.
class LinearProblem final : public StochasticProblem {
 public:
  using StochasticProblem::gradient;
  using StochasticProblem::value;

  explicit LinearProblem(Vector g);

  std::string_view family() const override { return "linear"; }
  double value(const Vector& x) const override { return g_.dot(x); }
  Vector gradient(const Vector&) const override { return g_; }
  const Vector& slope() const { return g_; }

 private:
  Vector g_;
};

std::unique_ptr<QuadraticProblem> make_quadratic(int dim, double lambda_min, double lambda_max,
                                                 NoiseSpec noise, double region_radius);

std::unique_ptr<CosineProblem> make_nonconvex_cosine(int dim, double a, NoiseSpec noise,
                                                     double region_radius);

std::unique_ptr<LinearProblem> make_linear(Vector g);

struct CertificationReport {
  int trials = 0;
  double max_grad_norm = 0.0;
  double min_grad_norm = std::numeric_limits<double>::infinity();
  double max_smoothness_ratio = 0.0;
};

/// Samples `trials` region points, noise draws and point pairs. Throws
/// CertificationError naming the violated assumption on any violation.
CertificationReport certify_constants(const StochasticProblem& problem, int trials, Rng& rng);

}  // namespace rankzo::functions
