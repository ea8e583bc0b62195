#include "prolate/signal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace prolate {

LineSpectrum LineSpectrum::make(std::vector<double> freqs, std::vector<double> weights) {
  if (freqs.size() != weights.size()) throw std::invalid_argument("LineSpectrum: size mismatch");
  std::vector<size_t> idx(freqs.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) { return freqs[a] < freqs[b]; });
  LineSpectrum s;
  double total = 0.0;
  for (size_t i : idx) {
    if (!(weights[i] >= 0.0)) throw std::invalid_argument("LineSpectrum: negative weight");
    total += weights[i];
    if (!s.freqs.empty() && s.freqs.back() == freqs[i]) {
      s.weights.back() += weights[i];
    } else {
      s.freqs.push_back(freqs[i]);
      s.weights.push_back(weights[i]);
    }
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw std::invalid_argument("LineSpectrum: weights must sum to 1 (got " + std::to_string(total) + ")");
  return s;
}

LineSpectrum from_hermitian(const HermitianMatrix& h, const std::vector<cplx>& psi, double merge_tol) {
  const int n = h.dim();
  if (int(psi.size()) != n) throw std::invalid_argument("from_hermitian: state dimension mismatch");
  double nrm = 0.0;
  for (const auto& z : psi) nrm += std::norm(z);
  if (std::abs(std::sqrt(nrm) - 1.0) > 1e-10) throw std::invalid_argument("from_hermitian: state not normalised");
  if (merge_tol < 0) merge_tol = 1e-10 * h.frobenius();
  const HermEig e = herm_eig(h);
  std::vector<double> f, w;
  for (int j = n - 1; j >= 0; --j) {  // ascending
    cplx ov = 0.0;
    for (int i = 0; i < n; ++i) ov += std::conj(e.vectors(i, j)) * psi[i];
    const double wt = std::norm(ov);
    if (!f.empty() && std::abs(e.values[j] - f.back()) <= merge_tol) {
      const double tot = w.back() + wt;
      if (tot > 0) f.back() = (f.back() * w.back() + e.values[j] * wt) / tot;
      w.back() = tot;
    } else {
      f.push_back(e.values[j]);
      w.push_back(wt);
    }
  }
  LineSpectrum s;
  double total = 0.0;
  for (size_t i = 0; i < f.size(); ++i) {
    if (w[i] < 1e-14) continue;
    s.freqs.push_back(f[i]);
    s.weights.push_back(w[i]);
    total += w[i];
  }
  for (double& x : s.weights) x /= total;
  return s;
}

cplx eval_exact(const LineSpectrum& spec, double t) {
  double re = 0.0, im = 0.0;
  for (size_t i = 0; i < spec.size(); ++i) {
    re += spec.weights[i] * std::cos(spec.freqs[i] * t);
    im += spec.weights[i] * std::sin(spec.freqs[i] * t);
  }
  return {re, im};
}

cplx eval_exact_deriv(const LineSpectrum& spec, double t) {
  cplx s = 0.0;
  for (size_t i = 0; i < spec.size(); ++i)
    s += spec.weights[i] * cplx(0.0, spec.freqs[i]) * std::polar(1.0, spec.freqs[i] * t);
  return s;
}

SampleGrid::SampleGrid(double ws, int ns) : W_s(ws), N_s(ns) {
  if (!(ws > 0.0)) throw std::invalid_argument("SampleGrid: W_s must be positive");
  if (ns < 2 || ns % 2 != 0) throw std::invalid_argument("SampleGrid: N_s must be even and positive");
}

double SampleGrid::t(int k) const { return std::numbers::pi * k / W_s; }
double SampleGrid::T() const { return std::numbers::pi * N_s / (2.0 * W_s); }

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

RandomStream RandomStream::derive(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  return RandomStream(splitmix64(splitmix64(splitmix64(seed) ^ a) ^ (b + 0x5851F42D4C957F2Dull)));
}

std::uint64_t RandomStream::next() { return splitmix64(key_ + (ctr_++) * 0x9E3779B97F4A7C15ull); }

double RandomStream::uniform() { return double(next() >> 11) * 0x1.0p-53; }

namespace {

double bernoulli_mean(double expectation, int shots, RandomStream& rng) {
  const double p = 0.5 * (1.0 + expectation);
  if (p < -1e-9 || p > 1.0 + 1e-9)
    throw std::domain_error("hadamard_estimate: outcome probability outside [0, 1]");
  long plus = 0;
  for (int i = 0; i < shots; ++i)
    if (rng.uniform() < p) ++plus;
  return (2.0 * plus - shots) / shots;
}

}  // namespace

cplx hadamard_estimate(const LineSpectrum& spec, double t, int shots, RandomStream& re, RandomStream& im) {
  if (shots < 1) throw std::invalid_argument("hadamard_estimate: shots must be positive");
  const cplx c = eval_exact(spec, t);
  return {bernoulli_mean(c.real(), shots, re), bernoulli_mean(c.imag(), shots, im)};
}

SampleSet make_samples(const LineSpectrum& spec, double W_s, int N_s, int shots, std::uint64_t seed) {
  SampleSet s;
  s.grid = SampleGrid(W_s, N_s);
  s.values.assign(2 * size_t(N_s) + 1, 0.0);
  s.shots_per_sample = shots;
  s.seed = seed;
  s.noisy = shots > 0;
  s.at(0) = 1.0;
  for (int k = 1; k <= N_s; ++k) {
    const double t = s.grid.t(k);
    cplx v;
    if (shots > 0) {
      RandomStream re = RandomStream::derive(seed, std::uint64_t(k), 0);
      RandomStream im = RandomStream::derive(seed, std::uint64_t(k), 1);
      v = hadamard_estimate(spec, t, shots, re, im);
    } else {
      v = eval_exact(spec, t);
    }
    s.at(k) = v;
    s.at(-k) = std::conj(v);
  }
  return s;
}

SampleSet shift(const SampleSet& s, double omega_star) {
  SampleSet r = s;
  const int n = s.grid.N_s;
  for (int k = -n; k <= n; ++k) r.at(k) = s.at(k) * std::polar(1.0, -omega_star * s.grid.t(k));
  return r;
}

LineSpectrum shift(const LineSpectrum& s, double omega_star) {
  LineSpectrum r = s;
  for (double& f : r.freqs) f -= omega_star;
  return r;
}

double runtime(long shots, long N_s, double W_s) {
  return double(shots) * (std::numbers::pi / W_s) * (double(N_s) * double(N_s - 1) / 2.0);
}

int shots_schedule(int N_s, double F) {
  if (N_s < 2) throw std::invalid_argument("shots_schedule: N_s must be at least 2");
  return int(std::ceil(F * std::sqrt(N_s * std::log(double(N_s)))));
}

long hoeffding_shots(double eps, double delta, int N_s) {
  if (!(eps > 0 && eps < 1) || !(delta > 0 && delta < 1))
    throw std::invalid_argument("hoeffding_shots: eps and delta must lie in (0, 1)");
  return long(std::ceil(2.0 / (eps * eps) * std::log(4.0 * (N_s + 1) / delta)));
}

}  // namespace prolate
