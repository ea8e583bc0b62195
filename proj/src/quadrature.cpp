#include "prolate/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace prolate {

QuadRule gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be positive");
  QuadRule q;
  q.nodes.resize(n);
  q.weights.resize(n);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // recompute the derivative at the converged node
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    q.nodes[i] = -x;
    q.nodes[n - 1 - i] = x;
    q.weights[i] = q.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) q.nodes[n / 2] = 0.0;
  return q;
}

QuadRule gauss_legendre(int n, double a, double b) {
  QuadRule q = gauss_legendre(n);
  const double h = 0.5 * (b - a), m = 0.5 * (b + a);
  for (size_t i = 0; i < q.size(); ++i) {
    q.nodes[i] = m + h * q.nodes[i];
    q.weights[i] *= h;
  }
  return q;
}

QuadRule composite_gauss(int n, double a, double b, int panels) {
  if (panels < 1) throw std::invalid_argument("composite_gauss: panels must be positive");
  const QuadRule base = gauss_legendre(n);
  QuadRule q;
  q.nodes.reserve(size_t(n) * panels);
  q.weights.reserve(size_t(n) * panels);
  const double w = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * w;
    for (int i = 0; i < n; ++i) {
      q.nodes.push_back(lo + 0.5 * w * (base.nodes[i] + 1.0));
      q.weights.push_back(0.5 * w * base.weights[i]);
    }
  }
  return q;
}

void CompensatedSum::add(double x) {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x))
    comp_ += (sum_ - t) + x;
  else
    comp_ += (x - t) + sum_;
  sum_ = t;
}

}  // namespace prolate
