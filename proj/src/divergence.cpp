#include <cmath>
#include <numbers>

#include "rankzo/errors.hpp"
#include "rankzo/verify.hpp"

namespace rankzo::verify {

double kl_binary(double q, double p) {
  if (!(q > 0.0 && q < 1.0) || !(p > 0.0 && p < 1.0)) {
    throw DomainError("kl_binary: q and p must lie strictly inside (0, 1)");
  }
  return q * std::log(q / p) + (1.0 - q) * std::log((1.0 - q) / (1.0 - p));
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double upper_tail_at_two() { return 0.5 * std::erfc(2.0 / std::numbers::sqrt2); }

// Closed forms of the regularized upper incomplete gamma Q(k/2, x/2) for
// integer k: a finite Poisson sum for even k, erfc plus a finite sum for odd k.
double chi_square_sf(int k, double x) {
  if (k < 1) throw DomainError("chi_square_sf: degrees of freedom must be >= 1");
  if (x <= 0.0) return 1.0;
  const double half = 0.5 * x;
  if (k % 2 == 0) {
    double term = std::exp(-half);
    double sum = term;
    for (int j = 1; j < k / 2; ++j) {
      term *= half / j;
      sum += term;
    }
    return sum;
  }
  double sum = std::erfc(std::sqrt(half));
  // term_j = sqrt(2/pi) e^{-x/2} x^{(2j-1)/2} / (1*3*...*(2j-1)), j = 1..(k-1)/2
  double term = std::sqrt(2.0 * x / std::numbers::pi) * std::exp(-half);
  for (int j = 1; j <= (k - 1) / 2; ++j) {
    if (j > 1) term *= x / (2.0 * j - 1.0);
    sum += term;
  }
  return sum;
}

}  // namespace rankzo::verify
