#include "skysample/harmonic.hpp"

#include <cmath>
#include <vector>

namespace skysample {

namespace {

// Taylor coefficients of Gamma(1 - z) = exp(gamma z + sum_{m>=2} zeta(m) z^m / m).
std::vector<double> gamma_reflection_coefficients(unsigned k) {
  std::vector<double> a(k + 1, 0.0);
  if (k >= 1) a[1] = kEulerGamma;
  for (unsigned m = 2; m <= k; ++m) a[m] = std::riemann_zeta(static_cast<double>(m)) / m;
  std::vector<double> c(k + 1, 0.0);
  c[0] = 1.0;
  for (unsigned n = 1; n <= k; ++n) {
    double acc = 0.0;
    for (unsigned m = 1; m <= n; ++m) acc += m * a[m] * c[n - m];
    c[n] = acc / n;
  }
  return c;
}

}  // namespace

double harmonic_recurrence(unsigned k, std::uint64_t n) {
  if (k == 0) return 1.0;
  // level[j] holds H_{j,i} after step i; H_{j,i} = H_{j,i-1} + H_{j-1,i}/i.
  std::vector<long double> level(k + 1, 0.0L);
  level[0] = 1.0L;
  for (std::uint64_t i = 1; i <= n; ++i) {
    const long double inv = 1.0L / static_cast<long double>(i);
    for (unsigned j = 1; j <= k; ++j) level[j] += level[j - 1] * inv;
  }
  return static_cast<double>(level[k]);
}

double harmonic_two_term(unsigned k, std::uint64_t n) {
  if (k == 0) return 1.0;
  const double ln = std::log(static_cast<double>(n));
  return std::pow(ln, k) / std::tgamma(k + 1.0) +
         kEulerGamma * std::pow(ln, k - 1) / std::tgamma(static_cast<double>(k));
}

double harmonic_asymptotic(unsigned k, std::uint64_t n) {
  if (k == 0) return 1.0;
  const double ln = std::log(static_cast<double>(n));
  const auto c = gamma_reflection_coefficients(k);
  double sum = 0.0;
  for (unsigned j = 0; j <= k; ++j) {
    sum += c[j] * std::pow(ln, k - j) / std::tgamma(k - j + 1.0);
  }
  return sum;
}

double harmonic(unsigned k, std::uint64_t n) {
  return n <= kHarmonicExactLimit ? harmonic_recurrence(k, n) : harmonic_asymptotic(k, n);
}

}  // namespace skysample
