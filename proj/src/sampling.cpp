#include "prolate/sampling.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace prolate {

int grid_half_count(double W, double T) { return int(std::floor(T * W / std::numbers::pi + 1e-9)); }

double UniformSamples::node(int k) const { return std::numbers::pi * k / rate_W; }

UniformSamples sample_on_grid(const ProlateBasis& b, const std::function<cplx(double)>& f) {
  UniformSamples s;
  s.rate_W = b.params.W;
  s.K = grid_half_count(b.params.W, b.params.T);
  s.values.resize(2 * size_t(s.K) + 1);
  for (int k = -s.K; k <= s.K; ++k) s.values[size_t(k + s.K)] = f(s.node(k));
  return s;
}

ProlateInterpolator::ProlateInterpolator(const ProlateBasis& b, int N)
    : basis_(&b), N_(N), K_(grid_half_count(b.params.W, b.params.T)) {
  if (N < 0 || N > b.n_max() + 1) throw std::invalid_argument("prolate_interpolate: N exceeds basis size");
  kernel_.assign(size_t(2 * K_ + 1) * std::max(N, 1), 0.0);
  std::vector<double> v;
  for (int k = -K_; k <= K_; ++k) {
    if (N == 0) break;
    eval_modes(b, N, std::numbers::pi * k / b.params.W, v);
    for (int n = 0; n < N; ++n) kernel_[size_t(k + K_) * N + n] = v[n];
  }
}

std::vector<cplx> ProlateInterpolator::coefficients(const UniformSamples& s) const {
  if (s.K != K_ || std::abs(s.rate_W - basis_->params.W) > 1e-12 * basis_->params.W)
    throw std::invalid_argument("prolate_interpolate: samples not on the basis grid");
  std::vector<cplx> a(N_, 0.0);
  for (int k = -K_; k <= K_; ++k) {
    const cplx f = s.at(k);
    const double* row = &kernel_[size_t(k + K_) * N_];
    for (int n = 0; n < N_; ++n) a[n] += f * row[n];
  }
  const double h = std::numbers::pi / basis_->params.W;
  for (auto& x : a) x *= h;
  return a;
}

cplx ProlateInterpolator::eval(const std::vector<cplx>& coeffs, double t) const {
  if (std::abs(t) > basis_->params.T * (1 + 1e-12)) throw std::invalid_argument("prolate_interpolate: |t| > T");
  if (N_ == 0) return 0.0;
  std::vector<double> v;
  eval_modes(*basis_, N_, t, v);
  cplx r = 0.0;
  for (int n = 0; n < N_; ++n) r += coeffs[n] * v[n];
  return r;
}

cplx prolate_interpolate(const ProlateBasis& b, const UniformSamples& s, int N, double t) {
  if (N > b.n_max()) throw std::invalid_argument("prolate_interpolate: N > n_max");
  return ProlateInterpolator(b, N)(s, t);
}

double truncation_bound(const ProlateBasis& b, int N, double tail_energy, double tail_deriv_energy) {
  if (N > b.n_max()) throw std::invalid_argument("truncation_bound: N > n_max");
  if (N < 0 || tail_energy < 0 || tail_deriv_energy < 0)
    throw std::invalid_argument("truncation_bound: negative argument");
  const double h = std::numbers::pi / b.params.W;
  double s = 0.0;
  for (int n = 0; n < N; ++n) {
    const auto& m = b.modes[n];
    s += m.gamma * m.one_minus_gamma * (1.0 + 2.0 * h * m.c_extra);
  }
  const double lead = tail_energy + 2.0 * h * std::sqrt(tail_energy * tail_deriv_energy);
  return lead * s + tail_energy / b.modes[N].one_minus_gamma;
}

}  // namespace prolate
