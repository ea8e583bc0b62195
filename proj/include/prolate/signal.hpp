#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "prolate/linalg.hpp"

namespace prolate {

struct LineSpectrum {
  std::vector<double> freqs;    // ascending
  std::vector<double> weights;  // non-negative, sum 1

  // Sorts by frequency, merges exact duplicates, checks the weights.
  static LineSpectrum make(std::vector<double> freqs, std::vector<double> weights);
  size_t size() const { return freqs.size(); }
};

LineSpectrum from_hermitian(const HermitianMatrix& h, const std::vector<cplx>& psi,
                            double merge_tol = -1.0);

cplx eval_exact(const LineSpectrum& spec, double t);
// d/dt of eval_exact
cplx eval_exact_deriv(const LineSpectrum& spec, double t);

struct SampleGrid {
  double W_s = 0.0;
  int N_s = 0;  // even; nodes k = -N_s..N_s

  SampleGrid() = default;
  SampleGrid(double ws, int ns);
  double t(int k) const;
  double T() const;  // pi N_s / (2 W_s)
};

struct SampleSet {
  SampleGrid grid;
  std::vector<cplx> values;  // index k + N_s
  int shots_per_sample = 0;  // 0 = exact
  std::uint64_t seed = 0;
  bool noisy = false;

  const cplx& at(int k) const { return values[size_t(k + grid.N_s)]; }
  cplx& at(int k) { return values[size_t(k + grid.N_s)]; }
};

// Counter-based stream: the j-th draw is splitmix64(key + j * golden).
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t key) : key_(key) {}
  static RandomStream derive(std::uint64_t seed, std::uint64_t a, std::uint64_t b);
  std::uint64_t next();
  double uniform();  // [0, 1), 53 bits

 private:
  std::uint64_t key_;
  std::uint64_t ctr_ = 0;
};

std::uint64_t splitmix64(std::uint64_t x);

// Hadamard-test emulation: `shots` +-1 outcomes per quadrature.
cplx hadamard_estimate(const LineSpectrum& spec, double t, int shots, RandomStream& re,
                       RandomStream& im);

// shots = 0 gives exact samples.
SampleSet make_samples(const LineSpectrum& spec, double W_s, int N_s, int shots, std::uint64_t seed);

SampleSet shift(const SampleSet& s, double omega_star);
LineSpectrum shift(const LineSpectrum& s, double omega_star);

double runtime(long shots, long N_s, double W_s);
int shots_schedule(int N_s, double F);
long hoeffding_shots(double eps, double delta, int N_s);

}  // namespace prolate
