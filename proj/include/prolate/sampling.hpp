#pragma once

#include <functional>
#include <vector>

#include "prolate/linalg.hpp"
#include "prolate/pswf.hpp"

namespace prolate {

// f(k pi / W) for k = -K..K, K = floor(T W / pi).
struct UniformSamples {
  double rate_W = 0.0;
  int K = 0;
  std::vector<cplx> values;  // index k + K

  const cplx& at(int k) const { return values[size_t(k + K)]; }
  double node(int k) const;
};

int grid_half_count(double W, double T);

UniformSamples sample_on_grid(const ProlateBasis& b, const std::function<cplx(double)>& f);

// Truncated prolate sampling series; the K x N kernel xi_n(k pi/W) is built once.
class ProlateInterpolator {
 public:
  ProlateInterpolator(const ProlateBasis& b, int N);

  int N() const { return N_; }
  // Expansion coefficients (pi/W) sum_k f_k xi_n(t_k), n < N.
  std::vector<cplx> coefficients(const UniformSamples& s) const;
  cplx eval(const std::vector<cplx>& coeffs, double t) const;
  cplx operator()(const UniformSamples& s, double t) const { return eval(coefficients(s), t); }

 private:
  const ProlateBasis* basis_;
  int N_;
  int K_;
  std::vector<double> kernel_;  // [k + K][n]
};

cplx prolate_interpolate(const ProlateBasis& b, const UniformSamples& s, int N, double t);

double truncation_bound(const ProlateBasis& b, int N, double tail_energy, double tail_deriv_energy);

}  // namespace prolate
