#pragma once

#include <functional>
#include <vector>

namespace prolate {

struct QuadRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  size_t size() const { return nodes.size(); }
};

// n-point Gauss-Legendre rule on [-1, 1], Newton iteration on P_n.
QuadRule gauss_legendre(int n);

// Gauss-Legendre rule mapped to [a, b].
QuadRule gauss_legendre(int n, double a, double b);

// Composite rule: [a, b] split into `panels` equal pieces, n nodes each.
QuadRule composite_gauss(int n, double a, double b, int panels);

// Kahan-Babuska (Neumaier) compensated accumulator.
class CompensatedSum {
 public:
  void add(double x);
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace prolate
