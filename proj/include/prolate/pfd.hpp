#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "prolate/linalg.hpp"
#include "prolate/pswf.hpp"
#include "prolate/signal.hpp"
#include "prolate/subspace.hpp"

namespace prolate {

struct BandSpec {
  double omega_star = 0.0;
  double W_f = 0.0;
};

// Everything that depends only on (band, grid, M). Frequencies handled here
// are in the shifted frame (band centred at 0).
struct PfdSetup {
  BandSpec band;
  SampleGrid grid;
  double T = 0.0;
  double W_s = 0.0;
  double W_C = 0.0;  // declared signal half-bandwidth around omega_star
  int M = 0;
  ProlateBasis basis_f;  // (W_f, T)
  ProlateBasis basis_s;  // (W_s, T), modes 0..N_s+1
  ProlateBasis dual_f;   // (T, W_f)

  // Inner quadrature over |k| <= N_s/2: q[k + N_s/2] and filter values
  // filt[l][k + N_s/2] = xi_l(t_k), dfilt likewise for xi_l'.
  std::vector<double> q;
  std::vector<std::vector<double>> filt, dfilt;

  int N_s() const { return grid.N_s; }
  int half() const { return grid.N_s / 2; }

  // W_C < 0 selects the largest admissible value W_s - W_f.
  static PfdSetup make(const BandSpec& band, double W_s, int N_s, int M, double W_C = -1.0);
};

int default_guess_dimension(double W_f, double T);

Gep build_gep_sampled(const SampleSet& shifted, const PfdSetup& setup);

// Oracle pencil from Fourier transforms of the time-limited filters.
// quad_order = 0 picks a rule resolving the highest line frequency.
Gep build_gep_quadrature(const LineSpectrum& shifted, const PfdSetup& setup, int quad_order = 0);
// Generic continuous-time signal: tensor Gauss-Legendre, -i d/dtau by central differences.
Gep build_gep_quadrature(const std::function<cplx(double)>& shifted_signal, const PfdSetup& setup,
                         int quad_order);

double eps_prlt(const PfdSetup& setup, int M);
// Closed-form large-c upper bound on eps_prlt.
double eps_prlt_closed_form(double c_f, double T, int M);

double noise_weight_bound(const PfdSetup& setup, int M, double offband_mass, double delta_B_bound);

// Entrywise bounds on |A_sampled - A_quad| and |B_sampled - B_quad| for exact
// samples of any signal of half-bandwidth W_C.
struct SamplingErrorBound {
  std::vector<double> eA, eB;  // M x M, row-major
  double norm_A = 0.0;         // Frobenius of eA
  double norm_B = 0.0;
};
SamplingErrorBound sampling_error_bound(const PfdSetup& setup);

// Matrix-variance parameter of the linear maps samples -> A, B: with
// independent per-sample noise of E|n|^2 <= sigma^2, dB = sum_j g_j H_j has
// ||sum_j Var(g_j) H_j^2|| <= sigma^2 rho_B^2.
struct NoiseGain {
  double rho_A = 0.0;
  double rho_B = 0.0;
};
NoiseGain noise_gain(const PfdSetup& setup);

// Rows: frequencies (shifted); columns: the refined filters xi U_m.
CMatrix alternant(const PfdSetup& setup, const CMatrix& U_m, const std::vector<double>& freqs);

struct AmplitudeEstimate {
  std::vector<double> amps;
  double offdiag_mass = 0.0;
};
AmplitudeEstimate amplitudes(const RefinedGep& refined, const CMatrix& F,
                             const std::vector<double>& freqs);

struct MinDetectable {
  double value = 0.0;
  bool singular = false;
};
MinDetectable min_detectable_amplitude(const CMatrix& F, double eps_th);

struct Interval {
  double lower = 0.0;
  double upper = 0.0;
};

// Off-band content in the shifted frame.
struct OffbandModel {
  bool known = false;
  std::vector<double> below_E, below_w, above_E, above_w;  // known lines
  double E_lo = 0.0, E_hi = 0.0, mass = 1.0;              // blind envelope
  double total_mass() const;
};
OffbandModel offband_known(const LineSpectrum& shifted, double W_f);
OffbandModel offband_blind(double E_lo, double E_hi, double mass);

// Perturbation of the pencil: measured matrices or norm bounds.
struct PencilPerturbation {
  bool measured = false;
  HermitianMatrix dA, dB;       // M x M, when measured
  double norm_A = 0.0, norm_B = 0.0;  // spectral-norm bounds otherwise
  double spectral_norm_B() const;
};

struct BoundResult {
  std::vector<Interval> intervals;
  bool valid = false;
  double noise_bound = 0.0;
};
BoundResult error_bounds(const RefinedGep& refined, const std::vector<double>& freqs, double eps,
                         const OffbandModel& off, const PencilPerturbation& pert);

struct ThresholdPolicy {
  double kappa = 3.0;
  std::optional<double> eps_th;  // overrides the default rule
  std::optional<int> known_m;
};

struct BlindMode {
  double E_lo = 0.0, E_hi = 0.0;  // unshifted spectral range
  double offband_mass = 1.0;
};
struct ValidationMode {
  LineSpectrum truth;  // unshifted
};
struct AnalysisMode {
  bool validation = false;
  BlindMode blind;
  ValidationMode truth;
  static AnalysisMode make_blind(double E_lo, double E_hi, double mass = 1.0);
  static AnalysisMode make_validation(LineSpectrum truth);
};

struct EstimateReport {
  int detected_m = 0;
  std::vector<double> freqs;  // unshifted, ascending
  std::vector<double> amplitudes;
  double amp_offdiag_mass = 0.0;
  std::vector<Interval> error_intervals;
  bool intervals_valid = false;
  double eps_prlt = 0.0;
  double eps_th = 0.0;
  double lambda_min_B = 0.0;
  double noise_weight_bound = 0.0;
  double min_detectable_amp = 0.0;
  ProtocolStatus status = ProtocolStatus::ok;
  std::string mode;          // blind | validation
  std::string bound_source;  // analytic | measured
  std::string note;
  // parameters
  double omega_star = 0.0, W_f = 0.0, W_s = 0.0, T = 0.0, W_C = 0.0;
  int N_s = 0, M = 0, shots = 0;
};

EstimateReport analyze(const SampleSet& samples, const PfdSetup& setup, const ThresholdPolicy& policy,
                       const AnalysisMode& mode);
EstimateReport analyze(const SampleSet& samples, const BandSpec& band, int M, const ThresholdPolicy& policy,
                       const AnalysisMode& mode, double W_C = -1.0);

}  // namespace prolate
