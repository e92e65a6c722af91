#include "rankzo/functions.hpp"

#include <cmath>
#include <sstream>

#include "rankzo/errors.hpp"

namespace rankzo::functions {

namespace {

Vector standard_normal_vector(int dim, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector v(dim);
  for (int i = 0; i < dim; ++i) v[i] = normal(rng);
  return v;
}

Vector unit_vector(int dim, Rng& rng) {
  Vector v = standard_normal_vector(dim, rng);
  double n = v.norm();
  while (n == 0.0) {
    v = standard_normal_vector(dim, rng);
    n = v.norm();
  }
  return v / n;
}

void require_noise(const NoiseSpec& noise) {
  if (!(noise.radius >= 0.0) || !std::isfinite(noise.radius)) {
    throw DomainError("noise radius must be finite and nonnegative");
  }
}

// Lower/upper gradient-norm bounds for sphere noise of radius r on a ball
// where ||grad f|| <= sup_true.
void fill_noise_bounds(ProblemConstants& c, const NoiseSpec& noise, double sup_true,
                       const char* family) {
  c.g_upper = sup_true + noise.radius;
  if (noise.radius == 0.0) return;
  if (noise.radius <= sup_true) {
    std::ostringstream os;
    os << family << ": noise radius " << noise.radius
       << " must exceed the region's maximal true gradient norm " << sup_true
       << " (constants unsatisfiable)";
    throw DomainError(os.str());
  }
  c.g_lower = noise.radius - sup_true;
}

double cosine_profile(double s, double a) { return 0.5 * s * s + a * std::cos(s); }

// Positive global minimizer of s^2/2 + a cos s. Stationary points satisfy
// s = a sin s and lie in [0, a]; bracket sign changes of s - a sin s on a
// fine grid, refine each by bisection and keep the lowest profile value.
double cosine_root(double a) {
  auto g = [a](double s) { return s - a * std::sin(s); };
  const int cells = 4096;
  const double h = (a + 1.0) / cells;
  double best = 0.0;
  double best_val = cosine_profile(0.0, a);
  for (int i = 0; i < cells; ++i) {
    double lo = i * h + (i == 0 ? h * 1e-3 : 0.0);
    double hi = (i + 1) * h;
    if ((g(lo) < 0.0) == (g(hi) < 0.0)) continue;
    for (int it = 0; it < 200; ++it) {
      double mid = 0.5 * (lo + hi);
      if ((g(mid) < 0.0) == (g(lo) < 0.0)) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    double s = 0.5 * (lo + hi);
    double v = cosine_profile(s, a);
    if (v < best_val) {
      best_val = v;
      best = s;
    }
  }
  return best;
}

}  // namespace

Noise StochasticProblem::sample_noise(Rng& rng) const {
  if (noise_.radius == 0.0) return Noise::Zero(dim());
  return noise_.radius * unit_vector(dim(), rng);
}

bool StochasticProblem::in_region(const Vector& x) const {
  return (x - minimizer_).norm() <= constants_.region_radius;
}

Vector StochasticProblem::sample_region_point(Rng& rng) const {
  const int d = dim();
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Vector dir = unit_vector(d, rng);
  double radius = constants_.region_radius * std::pow(unif(rng), 1.0 / d);
  return minimizer_ + radius * dir;
}

QuadraticProblem::QuadraticProblem(Vector eigenvalues, ProblemConstants constants,
                                   NoiseSpec noise)
    : StochasticProblem(Vector::Zero(eigenvalues.size()), 0.0, constants, noise),
      eigenvalues_(std::move(eigenvalues)) {}

double QuadraticProblem::value(const Vector& x) const {
  return 0.5 * x.dot(eigenvalues_.cwiseProduct(x));
}

Vector QuadraticProblem::gradient(const Vector& x) const { return eigenvalues_.cwiseProduct(x); }

CosineProblem::CosineProblem(int dim, double a, double root, double offset,
                             ProblemConstants constants, NoiseSpec noise)
    : StochasticProblem(Vector::Constant(dim, root), 0.0, constants, noise),
      a_(a),
      root_(root),
      offset_(offset) {}

double CosineProblem::value(const Vector& x) const {
  return 0.5 * x.squaredNorm() + a_ * x.array().cos().sum() - offset_;
}

Vector CosineProblem::gradient(const Vector& x) const {
  return x - a_ * x.array().sin().matrix();
}

Vector CosineProblem::hessian_diagonal(const Vector& x) const {
  return (1.0 - a_ * x.array().cos()).matrix();
}

LinearProblem::LinearProblem(Vector g)
    : StochasticProblem(Vector::Zero(g.size()), -std::numeric_limits<double>::infinity(),
                        ProblemConstants{0.0, std::nullopt, g.norm(), std::nullopt, 0.0},
                        NoiseSpec{0.0}),
      g_(std::move(g)) {}

std::unique_ptr<QuadraticProblem> make_quadratic(int dim, double lambda_min, double lambda_max,
                                                 NoiseSpec noise, double region_radius) {
  if (dim < 1) throw DomainError("quadratic: dim must be >= 1");
  if (!(lambda_min > 0.0) || !(lambda_min <= lambda_max) || !std::isfinite(lambda_max)) {
    throw DomainError("quadratic: require 0 < lambda_min <= lambda_max");
  }
  if (!(region_radius >= 0.0)) throw DomainError("quadratic: region radius must be >= 0");
  require_noise(noise);

  Vector eig(dim);
  for (int i = 0; i < dim; ++i) {
    eig[i] = dim == 1 ? lambda_min
                      : lambda_min + (lambda_max - lambda_min) * static_cast<double>(i) / (dim - 1);
  }
  ProblemConstants c;
  c.L = eig.maxCoeff();
  c.mu = eig.minCoeff();
  c.region_radius = region_radius;
  fill_noise_bounds(c, noise, c.L * region_radius, "quadratic");
  return std::make_unique<QuadraticProblem>(std::move(eig), c, noise);
}

std::unique_ptr<CosineProblem> make_nonconvex_cosine(int dim, double a, NoiseSpec noise,
                                                     double region_radius) {
  if (dim < 1) throw DomainError("cosine: dim must be >= 1");
  if (!(a > 1.0) || !std::isfinite(a)) {
    throw DomainError("cosine: amplitude a must exceed 1 for the problem to be nonconvex");
  }
  if (!(region_radius >= 0.0)) throw DomainError("cosine: region radius must be >= 0");
  require_noise(noise);

  const double root = cosine_root(a);
  const double offset = dim * cosine_profile(root, a);
  ProblemConstants c;
  c.L = 1.0 + a;
  c.region_radius = region_radius;
  // ||grad f(x)|| = ||grad f(x) - grad f(x*)|| <= L ||x - x*|| on the ball.
  fill_noise_bounds(c, noise, c.L * region_radius, "cosine");
  return std::make_unique<CosineProblem>(dim, a, root, offset, c, noise);
}

std::unique_ptr<LinearProblem> make_linear(Vector g) {
  if (g.size() < 1) throw DomainError("linear: dim must be >= 1");
  return std::make_unique<LinearProblem>(std::move(g));
}

CertificationReport certify_constants(const StochasticProblem& problem, int trials, Rng& rng) {
  if (trials < 1000) throw DomainError("certify_constants: trials must be >= 1000");
  const ProblemConstants& c = problem.constants();
  CertificationReport report;
  report.trials = trials;

  for (int i = 0; i < trials; ++i) {
    const Vector x = problem.sample_region_point(rng);
    const Noise xi = problem.sample_noise(rng);
    const double g = problem.gradient(x, xi).norm();
    report.max_grad_norm = std::max(report.max_grad_norm, g);
    report.min_grad_norm = std::min(report.min_grad_norm, g);

    const Vector y = problem.sample_region_point(rng);
    const Vector step = y - x;
    const double sq = step.squaredNorm();
    if (sq > 0.0) {
      const double gap =
          problem.value(y, xi) - problem.value(x, xi) - problem.gradient(x, xi).dot(step);
      report.max_smoothness_ratio = std::max(report.max_smoothness_ratio, std::abs(gap) / (0.5 * sq));
    }
  }

  auto fail = [&](const char* assumption, const char* what, double observed, double bound) {
    std::ostringstream os;
    os << what << " observed " << observed << " vs certified " << bound;
    throw CertificationError(assumption, os.str());
  };
  const double tol = 1e-9 * std::max(1.0, c.g_upper);
  if (report.max_grad_norm > c.g_upper + tol) {
    fail("bounded second moment", "max ||grad f(x;xi)||", report.max_grad_norm, c.g_upper);
  }
  if (c.g_lower && report.min_grad_norm < *c.g_lower - tol) {
    fail("gradient lower bound", "min ||grad f(x;xi)||", report.min_grad_norm, *c.g_lower);
  }
  if (report.max_smoothness_ratio > c.L * (1.0 + 1e-6) + 1e-12) {
    fail("L-smoothness", "smoothness ratio", report.max_smoothness_ratio, c.L);
  }
  return report;
}

}  // namespace rankzo::functions
