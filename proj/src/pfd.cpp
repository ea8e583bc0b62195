#include "prolate/pfd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "prolate/quadrature.hpp"
#include "prolate/sampling.hpp"
#include "prolate/special.hpp"

namespace prolate {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr cplx kI{0.0, 1.0};

// Neumaier summation on both components.
struct CSum {
  CompensatedSum re, im;
  void add(cplx z) {
    re.add(z.real());
    im.add(z.imag());
  }
  cplx value() const { return {re.value(), im.value()}; }
};

QuadRule panel_rule(double T, int nodes) {
  const int per = 32;
  const int panels = std::max(1, (nodes + per - 1) / per);
  return composite_gauss(per, -T, T, panels);
}

// xi_l(t_i) for l < M at the rule's nodes, [l][i].
std::vector<std::vector<double>> filter_table(const ProlateBasis& b, int M, const QuadRule& r) {
  std::vector<std::vector<double>> out(M, std::vector<double>(r.nodes.size()));
  std::vector<double> v;
  for (size_t i = 0; i < r.nodes.size(); ++i) {
    eval_modes(b, M, r.nodes[i], v);
    for (int l = 0; l < M; ++l) out[l][i] = v[l];
  }
  return out;
}

}  // namespace

int default_guess_dimension(double W_f, double T) { return int(std::floor(W_f * T / kPi + 1e-9)); }

PfdSetup PfdSetup::make(const BandSpec& band, double W_s, int N_s, int M, double W_C) {
  if (!(band.W_f > 0)) throw std::invalid_argument("PfdSetup: W_f must be positive");
  PfdSetup s;
  s.band = band;
  s.grid = SampleGrid(W_s, N_s);
  s.W_s = W_s;
  s.T = s.grid.T();
  s.W_C = W_C < 0 ? W_s - band.W_f : W_C;
  if (s.W_C < 0 || W_s < band.W_f + s.W_C * (1 - 1e-12))
    throw std::invalid_argument("PfdSetup: sampling rate below W_f + W_C");
  const int ct_f = int(std::floor(2.0 * band.W_f * s.T / kPi + 1e-9));
  if (M < 1 || M > std::max(ct_f, 1))
    throw std::invalid_argument("PfdSetup: M must lie in [1, floor(2 W_f T / pi)] = [1, " +
                                std::to_string(ct_f) + "]");
  s.M = M;
  const int nf = std::max(M, ct_f) + 4;
  s.basis_f = build_basis(band.W_f, s.T, nf);
  s.dual_f = dual(s.basis_f);
  s.basis_s = build_basis(W_s, s.T, N_s + 1);

  const int h = N_s / 2;
  s.q.assign(2 * h + 1, 0.0);
  std::vector<double> integral(N_s + 1, 0.0);
  for (int n = 0; n <= N_s; n += 2) integral[n] = ft_time_limited(s.basis_s, n, 0.0).real();
  std::vector<double> v, d;
  s.filt.assign(M, std::vector<double>(2 * h + 1));
  s.dfilt.assign(M, std::vector<double>(2 * h + 1));
  for (int k = -h; k <= h; ++k) {
    const double t = s.grid.t(k);
    eval_modes(s.basis_s, N_s + 1, t, v);
    CompensatedSum acc;
    for (int n = 0; n <= N_s; n += 2) acc.add(integral[n] * v[n]);
    s.q[k + h] = (kPi / W_s) * acc.value();
    eval_modes(s.basis_f, M, t, v, &d);
    for (int l = 0; l < M; ++l) {
      s.filt[l][k + h] = v[l];
      s.dfilt[l][k + h] = d[l];
    }
  }
  return s;
}

Gep build_gep_sampled(const SampleSet& x, const PfdSetup& s) {
  if (x.grid.N_s != s.N_s() || std::abs(x.grid.W_s - s.W_s) > 1e-12 * s.W_s)
    throw std::invalid_argument("build_gep_sampled: samples not on the setup grid");
  if (x.values.size() != 2 * size_t(s.N_s()) + 1)
    throw std::invalid_argument("build_gep_sampled: missing samples");
  const int M = s.M, h = s.half(), n = 2 * h + 1;
  std::vector<std::vector<double>> u(M, std::vector<double>(n)), du(M, std::vector<double>(n));
  for (int l = 0; l < M; ++l)
    for (int k = 0; k < n; ++k) {
      u[l][k] = s.q[k] * s.filt[l][k];
      du[l][k] = s.q[k] * s.dfilt[l][k];
    }
  // v_l(k2) = sum_k1 C(k2 - k1) u_l(k1), w_l likewise with du
  std::vector<std::vector<cplx>> v(M, std::vector<cplx>(n)), w(M, std::vector<cplx>(n));
  for (int l = 0; l < M; ++l)
    for (int k2 = -h; k2 <= h; ++k2) {
      CSum sv, sw;
      for (int k1 = -h; k1 <= h; ++k1) {
        const cplx c = x.at(k2 - k1);
        sv.add(c * u[l][k1 + h]);
        sw.add(c * du[l][k1 + h]);
      }
      v[l][k2 + h] = sv.value();
      w[l][k2 + h] = sw.value();
    }
  std::vector<double> at_T(M), at_mT(M);
  for (int l = 0; l < M; ++l) {
    at_T[l] = s.basis_f.modes[l].xi_at_T;
    at_mT[l] = (l % 2 == 0 ? 1.0 : -1.0) * at_T[l];
  }
  CMatrix A(M, M), B(M, M);
  for (int a = 0; a < M; ++a)
    for (int l = 0; l < M; ++l) {
      CSum sb, sa;
      for (int k = -h; k <= h; ++k) {
        const double us = u[a][k + h];
        sb.add(us * v[l][k + h]);
        sa.add(-kI * us * w[l][k + h]);
        sa.add(kI * us * (x.at(k - h) * at_T[l] - x.at(k + h) * at_mT[l]));
      }
      B(a, l) = sb.value();
      A(a, l) = sa.value();
    }
  return {HermitianMatrix(A), HermitianMatrix(B)};
}

Gep build_gep_quadrature(const LineSpectrum& spec, const PfdSetup& s, int quad_order) {
  const int M = s.M;
  double emax = 0.0;
  for (double e : spec.freqs) emax = std::max(emax, std::abs(e));
  if (quad_order <= 0) quad_order = 32 * (int(std::ceil(s.T * (emax + s.band.W_f) / kPi)) + 2);
  const QuadRule r = panel_rule(s.T, quad_order);
  const auto xi = filter_table(s.basis_f, M, r);
  CMatrix A(M, M), B(M, M);
  std::vector<cplx> F(M);
  for (size_t j = 0; j < spec.size(); ++j) {
    const double E = spec.freqs[j], wt = spec.weights[j];
    if (wt == 0.0) continue;
    for (int l = 0; l < M; ++l) {
      CSum acc;
      for (size_t i = 0; i < r.nodes.size(); ++i)
        acc.add(r.weights[i] * xi[l][i] * std::polar(1.0, -E * r.nodes[i]));
      F[l] = acc.value();
    }
    for (int a = 0; a < M; ++a)
      for (int l = 0; l < M; ++l) {
        const cplx g = wt * std::conj(F[a]) * F[l];
        B(a, l) += g;
        A(a, l) += E * g;
      }
  }
  return {HermitianMatrix(A), HermitianMatrix(B)};
}

Gep build_gep_quadrature(const std::function<cplx(double)>& sig, const PfdSetup& s, int quad_order) {
  const int M = s.M;
  const QuadRule r = panel_rule(s.T, quad_order);
  const auto xi = filter_table(s.basis_f, M, r);
  const size_t n = r.nodes.size();
  const double hfd = 1e-6 / s.W_s;
  // v_l(tau_i) = sum_j w_j C(tau_i - t_j) xi_l(t_j), and the same with dC/dtau
  std::vector<std::vector<cplx>> v(M, std::vector<cplx>(n)), w(M, std::vector<cplx>(n));
  for (size_t i = 0; i < n; ++i) {
    std::vector<CSum> sv(M), sw(M);
    for (size_t j = 0; j < n; ++j) {
      const double d = r.nodes[i] - r.nodes[j];
      const cplx c = sig(d);
      const cplx dc = (sig(d + hfd) - sig(d - hfd)) / (2 * hfd);
      for (int l = 0; l < M; ++l) {
        sv[l].add(r.weights[j] * xi[l][j] * c);
        sw[l].add(r.weights[j] * xi[l][j] * dc);
      }
    }
    for (int l = 0; l < M; ++l) {
      v[l][i] = sv[l].value();
      w[l][i] = sw[l].value();
    }
  }
  CMatrix A(M, M), B(M, M);
  for (int a = 0; a < M; ++a)
    for (int l = 0; l < M; ++l) {
      CSum sb, sa;
      for (size_t i = 0; i < n; ++i) {
        const double g = r.weights[i] * xi[a][i];
        sb.add(g * v[l][i]);
        sa.add(-kI * g * w[l][i]);
      }
      B(a, l) = sb.value();
      A(a, l) = sa.value();
    }
  return {HermitianMatrix(A), HermitianMatrix(B)};
}

double eps_prlt(const PfdSetup& s, int M) {
  if (M > s.dual_f.n_max() + 1) throw std::invalid_argument("eps_prlt: M exceeds the dual basis");
  double sum = 0.0;
  for (int l = 0; l < M; ++l) {
    const auto& m = s.dual_f.modes[l];
    sum += m.gamma * m.one_minus_gamma * m.c_extra;
  }
  return 2 * kPi * sum;
}

double eps_prlt_closed_form(double c_f, double T, int M) {
  const double lg = std::log(M * T) + 1.5 * std::log(kPi) + 3.0 * M * std::log(2.0) +
                    (M + 0.5) * std::log(c_f) - 2.0 * c_f - log_factorial(M - 1);
  return std::exp(lg);
}

double noise_weight_bound(const PfdSetup& s, int M, double offband_mass, double delta_B_bound) {
  if (offband_mass < 0 || offband_mass > 1 + 1e-12)
    throw std::invalid_argument("noise_weight_bound: off-band mass outside [0, 1]");
  return eps_prlt(s, M) * offband_mass + delta_B_bound;
}

SamplingErrorBound sampling_error_bound(const PfdSetup& s) {
  const int M = s.M, h = s.half(), n = 2 * h + 1;
  const int N = s.N_s() + 1;
  const double T = s.T, WC = s.W_C;
  auto tb = [&](double a, double b) { return std::sqrt(2 * T * truncation_bound(s.basis_s, N, a, b)); };

  std::vector<double> abs_u(M, 0.0), abs_du(M, 0.0);
  for (int l = 0; l < M; ++l)
    for (int k = 0; k < n; ++k) {
      abs_u[l] += std::abs(s.q[k] * s.filt[l][k]);
      abs_du[l] += std::abs(s.q[k] * s.dfilt[l][k]);
    }
  std::vector<double> inner_B(M), inner_A(M), G(M), Gp(M), omg(M), cx2(M);
  for (int l = 0; l < M; ++l) {
    const auto& m = s.basis_f.modes[l];
    omg[l] = m.one_minus_gamma;
    cx2[l] = m.c_extra * m.c_extra;
    inner_B[l] = tb(omg[l], 2 * omg[l] * (cx2[l] + WC * WC));
    const double d1 = omg[l] * cx2[l];
    inner_A[l] = tb(d1, 2 * (second_deriv_tail(s.basis_f, l) + WC * WC * d1));
    G[l] = std::sqrt(2 * T * m.gamma);
    Gp[l] = 2 * std::abs(m.xi_at_T) + std::sqrt(2 * T * m.gamma) * m.c_intra;
  }
  const double eps = std::numeric_limits<double>::epsilon();
  SamplingErrorBound out;
  out.eA.assign(size_t(M) * M, 0.0);
  out.eB.assign(size_t(M) * M, 0.0);
  double fa = 0.0, fb = 0.0;
  for (int a = 0; a < M; ++a)
    for (int l = 0; l < M; ++l) {
      const double tail = omg[a], deriv = cx2[a] + WC * WC;
      const double outer_B = tb(G[l] * G[l] * tail, 2 * G[l] * G[l] * tail * deriv);
      const double outer_A = tb(Gp[l] * Gp[l] * tail, 2 * Gp[l] * Gp[l] * tail * deriv);
      const double floor_B = 1e3 * eps * abs_u[a] * abs_u[l];
      const double floor_A = 1e3 * eps * abs_u[a] * (abs_du[l] + 2 * std::abs(s.basis_f.modes[l].xi_at_T));
      const double eb = abs_u[a] * inner_B[l] + outer_B + floor_B;
      const double ea = abs_u[a] * inner_A[l] + outer_A + floor_A;
      out.eB[size_t(a) * M + l] = eb;
      out.eA[size_t(a) * M + l] = ea;
      fb += eb * eb;
      fa += ea * ea;
    }
  out.norm_A = std::sqrt(fa);
  out.norm_B = std::sqrt(fb);
  return out;
}

NoiseGain noise_gain(const PfdSetup& s) {
  const int M = s.M, h = s.half(), n = 2 * h + 1;
  std::vector<std::vector<double>> u(M, std::vector<double>(n)), du(M, std::vector<double>(n));
  for (int l = 0; l < M; ++l)
    for (int k = 0; k < n; ++k) {
      u[l][k] = s.q[k] * s.filt[l][k];
      du[l][k] = s.q[k] * s.dfilt[l][k];
    }
  std::vector<double> at_T(M), at_mT(M);
  for (int l = 0; l < M; ++l) {
    at_T[l] = s.basis_f.modes[l].xi_at_T;
    at_mT[l] = (l % 2 == 0 ? 1.0 : -1.0) * at_T[l];
  }
  // Coefficient matrices of sample C(t_j) in B and A.
  auto coeff = [&](int j, CMatrix& KB, CMatrix& KA) {
    KB = CMatrix(M, M);
    KA = CMatrix(M, M);
    const int lo = std::max(0, -j), hi = std::min(n, n - j);
    for (int a = 0; a < M; ++a)
      for (int l = 0; l < M; ++l) {
        double b = 0.0, c = 0.0;
        for (int x = lo; x < hi; ++x) {
          b += u[a][x + j] * u[l][x];
          c += u[a][x + j] * du[l][x];
        }
        cplx av = -kI * c;
        if (j <= 0 && j + 2 * h >= 0) av += kI * u[a][j + 2 * h] * at_T[l];
        if (j >= 0 && j <= 2 * h) av -= kI * u[a][j] * at_mT[l];
        KB(a, l) = b;
        KA(a, l) = av;
      }
  };
  auto herm = [](const CMatrix& z) { return 0.5 * (z + z.adjoint()); };
  CMatrix SA(M, M), SB(M, M);
  for (int j = 1; j <= n - 1; ++j) {
    CMatrix bp, ap, bm, am;
    coeff(j, bp, ap);
    coeff(-j, bm, am);
    // Re n_j multiplies K_j + K_-j, Im n_j multiplies i (K_j - K_-j)
    const CMatrix xb = herm(bp + bm), yb = herm(kI * (bp - bm));
    const CMatrix xa = herm(ap + am), ya = herm(kI * (ap - am));
    SB = SB + xb * xb + yb * yb;
    SA = SA + xa * xa + ya * ya;
  }
  return {std::sqrt(spectral_norm(HermitianMatrix(SA)) / 2), std::sqrt(spectral_norm(HermitianMatrix(SB)) / 2)};
}

CMatrix alternant(const PfdSetup& s, const CMatrix& U, const std::vector<double>& freqs) {
  const int m = int(freqs.size());
  if (U.cols() != m || U.rows() > s.basis_f.n_max() + 1)
    throw std::invalid_argument("alternant: dimension mismatch");
  CMatrix F(m, m);
  for (int k = 0; k < m; ++k) {
    std::vector<cplx> f(U.rows());
    for (int l = 0; l < U.rows(); ++l) f[l] = ft_time_limited(s.basis_f, l, freqs[k]);
    for (int j = 0; j < m; ++j) {
      cplx acc = 0.0;
      for (int l = 0; l < U.rows(); ++l) acc += f[l] * U(l, j);
      F(k, j) = acc;
    }
  }
  return F;
}

AmplitudeEstimate amplitudes(const RefinedGep& r, const CMatrix& F, const std::vector<double>& freqs) {
  const std::vector<double> sv = singular_values(F);
  if (sv.empty() || sv.back() <= 1e-12 * sv.front()) {
    std::ostringstream msg;
    msg << "amplitudes: alternant matrix singular";
    if (freqs.size() >= 2) {
      size_t best = 0;
      for (size_t i = 1; i + 1 < freqs.size(); ++i)
        if (freqs[i + 1] - freqs[i] < freqs[best + 1] - freqs[best]) best = i;
      msg << " (closest frequencies " << freqs[best] << " and " << freqs[best + 1] << ")";
    }
    throw NumericalError(msg.str(), sv.empty() ? 0.0 : sv.back());
  }
  const CMatrix X = lu_solve(F, CMatrix::identity(F.rows()));
  const CMatrix G = X.adjoint() * r.B_mm.matrix() * X;
  AmplitudeEstimate out;
  double diag = 0.0, off = 0.0;
  for (int i = 0; i < G.rows(); ++i)
    for (int j = 0; j < G.cols(); ++j) {
      if (i == j) {
        out.amps.push_back(std::max(G(i, i).real(), 0.0));
        diag += std::norm(G(i, i));
      } else {
        off += std::norm(G(i, j));
      }
    }
  out.offdiag_mass = diag > 0 ? std::sqrt(off / diag) : 0.0;
  return out;
}

MinDetectable min_detectable_amplitude(const CMatrix& F, double eps_th) {
  const std::vector<double> sv = singular_values(F);
  if (sv.empty() || sv.back() <= 1e-12 * sv.front())
    return {std::numeric_limits<double>::infinity(), true};
  return {eps_th / (sv.back() * sv.back()), false};
}

double OffbandModel::total_mass() const {
  if (!known) return mass;
  double s = 0.0;
  for (double w : below_w) s += w;
  for (double w : above_w) s += w;
  return s;
}

OffbandModel offband_known(const LineSpectrum& spec, double W_f) {
  OffbandModel o;
  o.known = true;
  for (size_t i = 0; i < spec.size(); ++i) {
    if (spec.freqs[i] < -W_f) {
      o.below_E.push_back(spec.freqs[i]);
      o.below_w.push_back(spec.weights[i]);
    } else if (spec.freqs[i] > W_f) {
      o.above_E.push_back(spec.freqs[i]);
      o.above_w.push_back(spec.weights[i]);
    }
  }
  return o;
}

OffbandModel offband_blind(double E_lo, double E_hi, double mass) {
  if (mass < 0 || mass > 1 + 1e-12) throw std::invalid_argument("offband_blind: mass outside [0, 1]");
  OffbandModel o;
  o.E_lo = E_lo;
  o.E_hi = E_hi;
  o.mass = mass;
  return o;
}

double PencilPerturbation::spectral_norm_B() const { return measured ? spectral_norm(dB) : norm_B; }

BoundResult error_bounds(const RefinedGep& r, const std::vector<double>& freqs, double eps,
                         const OffbandModel& off, const PencilPerturbation& pert) {
  BoundResult out;
  out.noise_bound = eps * off.total_mass() + pert.spectral_norm_B();
  const double denom = r.lambda_min_B - out.noise_bound;
  if (!(denom > 0)) return out;
  HermitianMatrix dA, dB;
  if (pert.measured) {
    dA = pert.dA.congruence(r.U_m);
    dB = pert.dB.congruence(r.U_m);
  }
  const double nA = spectral_norm(r.A_mm), nB = spectral_norm(r.B_mm);
  for (double e : freqs) {
    double lo_int = 0.0, hi_int = 0.0;
    if (off.known) {
      for (size_t i = 0; i < off.below_E.size(); ++i) lo_int += (off.below_E[i] - e) * off.below_w[i];
      for (size_t i = 0; i < off.above_E.size(); ++i) hi_int += (off.above_E[i] - e) * off.above_w[i];
    } else {
      lo_int = std::min(off.E_lo - e, 0.0) * off.mass;
      hi_int = std::max(off.E_hi - e, 0.0) * off.mass;
    }
    double lam_lo, lam_hi;
    if (pert.measured) {
      CMatrix d = dA.matrix() - cplx(e) * dB.matrix();
      const std::vector<double> ev = herm_eigvals(HermitianMatrix(d));
      lam_hi = ev.front();
      lam_lo = ev.back();
    } else {
      lam_hi = pert.norm_A + std::abs(e) * pert.norm_B;
      lam_lo = -lam_hi;
    }
    const double fp = 1e-12 * (nA + std::abs(e) * nB) / denom;
    out.intervals.push_back({(eps * lo_int + lam_lo) / denom - fp, (eps * hi_int + lam_hi) / denom + fp});
  }
  out.valid = true;
  return out;
}

AnalysisMode AnalysisMode::make_blind(double E_lo, double E_hi, double mass) {
  AnalysisMode m;
  m.validation = false;
  m.blind = {E_lo, E_hi, mass};
  return m;
}

AnalysisMode AnalysisMode::make_validation(LineSpectrum truth) {
  AnalysisMode m;
  m.validation = true;
  m.truth.truth = std::move(truth);
  return m;
}

EstimateReport analyze(const SampleSet& samples, const BandSpec& band, int M, const ThresholdPolicy& policy,
                       const AnalysisMode& mode, double W_C) {
  const PfdSetup setup = PfdSetup::make(band, samples.grid.W_s, samples.grid.N_s, M, W_C);
  return analyze(samples, setup, policy, mode);
}

EstimateReport analyze(const SampleSet& samples, const PfdSetup& s, const ThresholdPolicy& policy,
                       const AnalysisMode& mode) {
  const double w0 = s.band.omega_star;
  EstimateReport rep;
  rep.mode = mode.validation ? "validation" : "blind";
  rep.bound_source = mode.validation ? "measured" : "analytic";
  rep.omega_star = w0;
  rep.W_f = s.band.W_f;
  rep.W_s = s.W_s;
  rep.T = s.T;
  rep.W_C = s.W_C;
  rep.N_s = s.N_s();
  rep.M = s.M;
  rep.shots = samples.shots_per_sample;

  const SampleSet x = shift(samples, w0);
  const Gep gep = build_gep_sampled(x, s);
  rep.eps_prlt = eps_prlt(s, s.M);

  const SamplingErrorBound sb = sampling_error_bound(s);
  const double sigma = samples.noisy && samples.shots_per_sample > 0
                           ? std::sqrt(2.0 / samples.shots_per_sample) : 0.0;
  NoiseGain gain;
  if (sigma > 0) gain = noise_gain(s);
  rep.eps_th = policy.eps_th ? *policy.eps_th
                             : rep.eps_prlt + sb.norm_B + policy.kappa * sigma * gain.rho_B;

  ProtocolResult pr;
  if (policy.known_m) {
    try {
      pr = run_known_m(gep, *policy.known_m);
    } catch (const NumericalError& e) {
      rep.status = ProtocolStatus::ill_conditioned;
      rep.note = e.what();
      return rep;
    }
  } else {
    pr = run_protocol(gep, rep.eps_th);
  }
  rep.status = pr.status;
  rep.detected_m = pr.m;
  if (pr.m == 0) {
    rep.intervals_valid = true;
    return rep;
  }
  rep.lambda_min_B = pr.refined.lambda_min_B;
  const std::vector<double>& shifted = pr.eigenvalues;
  for (double e : shifted) rep.freqs.push_back(e + w0);

  const CMatrix F = alternant(s, pr.refined.U_m, shifted);
  const MinDetectable md = min_detectable_amplitude(F, rep.eps_th);
  rep.min_detectable_amp = md.value;
  if (!md.singular) {
    const AmplitudeEstimate am = amplitudes(pr.refined, F, shifted);
    rep.amplitudes = am.amps;
    rep.amp_offdiag_mass = am.offdiag_mass;
  } else {
    rep.note = "alternant matrix singular; amplitudes unavailable";
  }

  OffbandModel off;
  PencilPerturbation pert;
  if (mode.validation) {
    const LineSpectrum truth = shift(mode.truth.truth, w0);
    off = offband_known(truth, s.band.W_f);
    const Gep q = build_gep_quadrature(truth, s);
    pert.measured = true;
    pert.dA = HermitianMatrix(gep.A.matrix() - q.A.matrix());
    pert.dB = HermitianMatrix(gep.B.matrix() - q.B.matrix());
  } else {
    off = offband_blind(mode.blind.E_lo - w0, mode.blind.E_hi - w0, mode.blind.offband_mass);
    pert.norm_A = sb.norm_A + policy.kappa * sigma * gain.rho_A;
    pert.norm_B = sb.norm_B + policy.kappa * sigma * gain.rho_B;
  }
  const BoundResult br = error_bounds(pr.refined, shifted, rep.eps_prlt, off, pert);
  rep.noise_weight_bound = br.noise_bound;
  rep.intervals_valid = br.valid;
  rep.error_intervals = br.intervals;
  if (!br.valid && rep.status == ProtocolStatus::ok) rep.status = ProtocolStatus::ill_conditioned;
  return rep;
}

}  // namespace prolate
