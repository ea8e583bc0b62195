#include "prolate/special.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace prolate {

std::vector<double> spherical_bessel_j(int kmax, double z) {
  if (!(z > 0.0)) throw std::invalid_argument("spherical_bessel_j: z must be positive");
  std::vector<double> j(kmax + 1);
  const double s = std::sin(z), c = std::cos(z);
  const double j0 = s / z;
  if (kmax == 0) {
    j[0] = j0;
    return j;
  }
  const double j1 = s / (z * z) - c / z;
  if (z > kmax) {
    j[0] = j0;
    j[1] = j1;
    for (int k = 1; k < kmax; ++k) j[k + 1] = (2 * k + 1) / z * j[k] - j[k - 1];
    return j;
  }
  const int start = kmax + 20 + int(std::sqrt(40.0 * (kmax + z)));
  std::vector<double> f(start + 2, 0.0);
  f[start + 1] = 0.0;
  f[start] = 1e-300;
  for (int k = start; k >= 1; --k) {
    f[k - 1] = (2 * k + 1) / z * f[k] - f[k + 1];
    if (std::abs(f[k - 1]) > 1e100) {
      for (int i = k - 1; i <= start; ++i) f[i] *= 1e-100;
    }
  }
  double big = 0.0;
  for (int k = 0; k <= start; ++k) big = std::max(big, std::abs(f[k]));
  for (int k = 0; k <= start; ++k) f[k] /= big;
  double norm = 0.0;
  for (int k = 0; k <= start; ++k) norm += (2 * k + 1) * f[k] * f[k];
  double scale = 1.0 / std::sqrt(norm);
  // fix the sign against whichever closed form is better conditioned
  if (std::abs(j0) >= std::abs(j1)) {
    if ((f[0] < 0) != (j0 < 0)) scale = -scale;
  } else {
    if ((f[1] < 0) != (j1 < 0)) scale = -scale;
  }
  for (int k = 0; k <= kmax; ++k) j[k] = f[k] * scale;
  return j;
}

void normalized_legendre(int kmax, double x, std::vector<double>& p, std::vector<double>* dp) {
  std::vector<double> P(kmax + 1), D(kmax + 1, 0.0);
  P[0] = 1.0;
  if (kmax >= 1) {
    P[1] = x;
    D[1] = 1.0;
  }
  for (int k = 1; k < kmax; ++k) {
    P[k + 1] = ((2 * k + 1) * x * P[k] - k * P[k - 1]) / (k + 1);
    D[k + 1] = D[k - 1] + (2 * k + 1) * P[k];
  }
  p.resize(kmax + 1);
  for (int k = 0; k <= kmax; ++k) p[k] = std::sqrt(k + 0.5) * P[k];
  if (dp) {
    dp->resize(kmax + 1);
    for (int k = 0; k <= kmax; ++k) (*dp)[k] = std::sqrt(k + 0.5) * D[k];
  }
}

double log_factorial(int n) { return std::lgamma(n + 1.0); }

}  // namespace prolate
