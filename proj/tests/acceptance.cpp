// Acceptance gate: one PASS/FAIL line per criterion.
// usage: acceptance [--only 1,2,...] [--allow-fail 3,8] [--fixtures DIR]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "prolate/io.hpp"
#include "prolate/linalg.hpp"
#include "prolate/pfd.hpp"
#include "prolate/pswf.hpp"
#include "prolate/quadrature.hpp"
#include "prolate/sampling.hpp"
#include "prolate/scan.hpp"
#include "prolate/signal.hpp"
#include "prolate/subspace.hpp"

using namespace prolate;
using std::numbers::pi;

namespace {

std::string fixtures = PROLATE_FIXTURES;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

// ---- PSWF oracles ----

template <class F>
double interior(const ProlateBasis& b, F f) {
  const QuadRule g = composite_gauss(24, -b.params.T, b.params.T, 16);
  double s = 0.0;
  for (size_t i = 0; i < g.size(); ++i) s += g.weights[i] * f(g.nodes[i]);
  return s;
}

// int_{|t|>T} of xi_n xi_m (deriv = false) or xi_n' xi_m' (deriv = true):
// quadrature to L = 2000 T plus the far-field tail of
// xi_n(t) ~ 2 xi_n(T) T sin(W t - n pi/2) / (lam_n c t).
std::vector<std::vector<double>> exterior_gram(const ProlateBasis& b, int count, bool deriv) {
  const double T = b.params.T, W = b.params.W, c = b.params.c;
  const double L = 2000 * T;
  const QuadRule g = composite_gauss(16, T, L, int(std::ceil((L - T) / (pi / W))));
  std::vector<std::vector<double>> G(count, std::vector<double>(count, 0.0));
  std::vector<double> v, d;
  for (size_t i = 0; i < g.size(); ++i) {
    eval_modes(b, count, g.nodes[i], v, deriv ? &d : nullptr);
    const auto& u = deriv ? d : v;
    for (int n = 0; n < count; ++n)
      for (int m = n % 2; m < count; m += 2) G[n][m] += g.weights[i] * u[n] * u[m];
  }
  for (int n = 0; n < count; ++n)
    for (int m = 0; m < count; ++m) {
      if ((n - m) % 2) {
        G[n][m] = 0.0;
        continue;
      }
      const ProlateMode &a = b.modes[n], &e = b.modes[m];
      const double sg = ((n - m) / 2) % 2 == 0 ? 1.0 : -1.0;
      double tail = sg * 2 * a.xi_at_T * e.xi_at_T * T * T / (a.lam * e.lam * c * c * L);
      if (deriv) tail *= W * W;
      G[n][m] = 2 * (G[n][m] + tail);
    }
  return G;
}

// ||f - f_N||^2 on [-T, T] for f = sum_n a_n xi_n
double reconstruction_error(const ProlateBasis& b, const std::vector<double>& a, int N) {
  const int count = int(a.size());
  auto f = [&](double t) {
    std::vector<double> v;
    eval_modes(b, count, t, v);
    double s = 0.0;
    for (int n = 0; n < count; ++n) s += a[n] * v[n];
    return s;
  };
  const UniformSamples s = sample_on_grid(b, [&](double t) { return cplx(f(t)); });
  const ProlateInterpolator ip(b, N);
  const auto coef = ip.coefficients(s);
  const QuadRule g = composite_gauss(20, -b.params.T, b.params.T, 12);
  double e = 0.0;
  for (size_t i = 0; i < g.size(); ++i) e += g.weights[i] * std::norm(ip.eval(coef, g.nodes[i]) - f(g.nodes[i]));
  return e;
}

// ---- PFD helpers ----

LineSpectrum random_spectrum(std::mt19937_64& rng, int n_in, int n_off, double gap, double W_C) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> f, w;
  while (int(f.size()) < n_in) {
    const double e = -0.8 + 1.6 * u(rng);
    bool ok = true;
    for (double x : f) ok = ok && std::abs(x - e) >= gap;
    if (ok) f.push_back(e), w.push_back(0.2 + u(rng));
  }
  for (int i = 0; i < n_off; ++i) {
    const double e = 1.02 + (W_C - 1.02) * u(rng);
    f.push_back(rng() % 2 ? e : -e);
    w.push_back(0.05 + u(rng));
  }
  double s = 0.0;
  for (double x : w) s += x;
  for (double& x : w) x /= s;
  return LineSpectrum::make(f, w);
}

std::vector<double> in_band(const LineSpectrum& s, double lo, double hi) {
  std::vector<double> r;
  for (double e : s.freqs)
    if (e >= lo && e <= hi) r.push_back(e);
  return r;
}

// ---- criteria ----

Outcome c1_signatures() {
  int bad = 0;
  std::string d;
  for (double c : {2.0, 5.0, 10.0, 20.0}) {
    const ProlateBasis b = build_basis(1.0, c, int(std::ceil(2 * c / pi)) + 2);
    const double ct = b.params.c_tilde;
    const int lo = int(std::floor(ct)) - 1, hi = int(std::ceil(ct));
    const auto &L = b.modes[lo], &H = b.modes[hi];
    const bool ok = L.gamma >= 0.5 && 0.5 >= H.gamma && L.chi <= -1.0 && -1.0 <= std::max(0.0, H.chi) && H.chi >= 0.0;
    if (!ok) ++bad;
    d += " c=" + fmt("%g", c) + ":g" + std::to_string(lo) + "=" + fmt("%.3f", L.gamma) + ",g" + std::to_string(hi) +
         "=" + fmt("%.3f", H.gamma);
  }
  return {bad == 0, "violations " + std::to_string(bad) + ";" + d};
}

Outcome c2_trace_gram() {
  const double W = 2.0, T = 5.0, ct = 2 * W * T / pi;
  const ProlateBasis big = build_basis(W, T, int(std::ceil(ct)) + 40);
  double tr = 0.0;
  for (const auto& m : big.modes) tr += m.gamma;
  const double trace_err = std::abs(tr - ct);

  const ProlateBasis b = build_basis(W, T, 9);
  const int n = b.n_max() + 1;
  const auto ext = exterior_gram(b, n, false);
  double worst_in = 0.0, worst_all = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      const double in = interior(b, [&](double t) { return eval(b, i, t) * eval(b, j, t); });
      worst_in = std::max(worst_in, std::abs(in - (i == j ? b.modes[i].gamma : 0.0)));
      worst_all = std::max(worst_all, std::abs(in + ext[i][j] - (i == j ? 1.0 : 0.0)));
    }
  return {trace_err < 1e-6 && worst_in < 1e-8 && worst_all < 1e-8,
          "|sum gamma - 2c/pi| " + fmt("%.2e", trace_err) + ", interior Gram " + fmt("%.2e", worst_in) +
              ", whole-line Gram " + fmt("%.2e", worst_all)};
}

Outcome c3_asymptotics() {
  const ProlateBasis b = build_basis(1.0, 10.0, 6);
  bool ok = true;
  std::string d;
  for (int n = 0; n <= 3; ++n) {
    const double a = asymptotic_one_minus_gamma(n, 10.0), v = b.modes[n].one_minus_gamma;
    const double dev = std::abs(v / a - 1.0);
    ok = ok && dev <= 0.3;
    d += " n=" + std::to_string(n) + ":" + fmt("%.3e", v) + "/" + fmt("%.3e", a) + "(" + fmt("%.0f", 100 * dev) + "%)";
  }
  return {ok, "basis/expansion" + d};
}

Outcome c4_theorem_b4() {
  const double W = 1.0, T = 10.0;
  const ProlateBasis b = build_basis(W, T, int(std::ceil(2 * W * T / pi)) + 2);
  const double c = b.params.c, ct = b.params.c_tilde;
  const int n_hi = b.n_max();
  const auto dext = exterior_gram(b, n_hi + 1, true);
  int bad = 0, eq = 0;
  double worst_rel = 0.0;
  std::string which;
  auto fail = [&](const std::string& what, int n) {
    ++bad;
    if (which.size() < 80) which += " " + what + "@" + std::to_string(n);
  };
  for (int n = 0; n <= n_hi; ++n) {
    const ProlateMode& m = b.modes[n];
    const double in = interior(b, [&](double t) { return std::pow(eval_deriv(b, n, t), 2); });
    const double out = dext[n][n];
    const double r_in = m.gamma * m.c_intra * m.c_intra, r_out = m.one_minus_gamma * m.c_extra * m.c_extra;
    if (in > 1e-12 && r_in > 1e-12) {
      ++eq;
      const double rel = std::abs(in / r_in - 1);
      worst_rel = std::max(worst_rel, rel);
      if (rel > 1e-6) fail("interior-energy", n);
    }
    if (out > 1e-12 && r_out > 1e-12) {
      ++eq;
      const double rel = std::abs(out / r_out - 1);
      worst_rel = std::max(worst_rel, rel);
      if (rel > 1e-6) fail("exterior-energy", n);
    }
    // sup bounds on dense grids, and the derivative sup for the regime caps
    double sup_out = 0.0, sup_in = 0.0, dsup = 0.0;
    std::vector<double> v, d;
    for (int i = 0; i <= 8000; ++i) {
      const double t = T + 4 * T * i / 8000.0;
      sup_out = std::max(sup_out, std::pow(eval(b, n, t), 2));
      dsup = std::max(dsup, std::abs(eval_deriv(b, n, t)));
      const double s = -T + 2 * T * i / 8000.0;
      sup_in = std::max(sup_in, std::pow(eval(b, n, s), 2));
      dsup = std::max(dsup, std::abs(eval_deriv(b, n, s)));
    }
    if (sup_out > m.one_minus_gamma * m.c_extra) fail("sup-outside", n);
    if (sup_in > m.gamma * m.c_intra_tilde) fail("sup-inside", n);
    if (!(dsup < W)) fail("sup|xi'|", n);
    const double Cn = std::sqrt(W * W + m.chi * m.chi / (4 * T * T));  // with the W cap on sup|xi'|
    if (n <= int(std::floor(ct)) - 1) {
      if (m.c_extra > Cn - m.chi / (2 * T)) fail("extra-cap", n);
      if (!(m.c_intra < W)) fail("intra-below-W", n);
      if (!(m.c_extra < W * (std::sqrt(1 + c * c / 4) + c / 2))) fail("extra-closed-form", n);
    }
    if (n >= int(std::ceil(ct))) {
      if (!(m.c_extra < W)) fail("extra-below-W", n);
      if (m.c_intra > Cn + m.chi / (2 * T)) fail("intra-cap", n);
    }
  }
  return {bad == 0, "n=0.." + std::to_string(n_hi) + ", " + std::to_string(eq) + " equalities, worst rel " +
                        fmt("%.2e", worst_rel) + ", violations " + std::to_string(bad) + which};
}

Outcome c5_soundness() {
  const ProlateBasis b = build_basis(3.0, 5.0, 16);
  const int ct = int(std::floor(b.params.c_tilde));
  const int count = ct + 5;
  const auto G = exterior_gram(b, count, true);
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> g;
  int checks = 0, bad = 0;
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> a(count);
    double norm = 0.0;
    for (double& x : a) x = g(rng), norm += x * x;
    for (double& x : a) x /= std::sqrt(norm);
    double tail = 0.0, dtail = 0.0;
    for (int n = 0; n < count; ++n) {
      tail += a[n] * a[n] * b.modes[n].one_minus_gamma;
      for (int m = 0; m < count; ++m) dtail += a[n] * a[m] * G[n][m];
    }
    for (int N = 1; N <= ct; ++N) {
      const double e = reconstruction_error(b, a, N), bound = truncation_bound(b, N, tail, dtail);
      ++checks;
      if (e > bound) ++bad;
      worst = std::max(worst, e / bound);
    }
  }
  return {bad == 0, std::to_string(checks) + " checks at c=15, violations " + std::to_string(bad) +
                        ", max error/bound " + fmt("%.3f", worst)};
}

Outcome c6_oracle() {
  const double W_s = 4 * pi, W_C = 2.14;
  const int N_s = 160;
  std::mt19937_64 rng(11);
  int bad_entry = 0;
  double worst_rel = 0.0, worst_rel_A = 0.0;
  int M_max = 0;
  for (int M = 1;; ++M) {
    const PfdSetup s = PfdSetup::make({0.0, 1.0}, W_s, N_s, M, W_C);
    if (M == 1) M_max = int(std::floor(s.basis_f.params.c_tilde / 2));
    const SamplingErrorBound eb = sampling_error_bound(s);
    for (int trial = 0; trial < 3; ++trial) {
      const LineSpectrum sp = random_spectrum(rng, 1 + trial, 3, 0.3, W_C);
      const Gep q = build_gep_quadrature(sp, s);
      const Gep g = build_gep_sampled(make_samples(sp, W_s, N_s, 0, 1), s);
      for (int a = 0; a < M; ++a)
        for (int l = 0; l < M; ++l) {
          if (std::abs(g.B(a, l) - q.B(a, l)) > eb.eB[size_t(a) * M + l]) ++bad_entry;
          if (std::abs(g.A(a, l) - q.A(a, l)) > eb.eA[size_t(a) * M + l]) ++bad_entry;
        }
      worst_rel = std::max(worst_rel, (g.B.matrix() - q.B.matrix()).frobenius() / q.B.frobenius());
      worst_rel_A = std::max(worst_rel_A, (g.A.matrix() - q.A.matrix()).frobenius() / q.A.frobenius());
    }
    if (M >= M_max) break;
  }
  return {bad_entry == 0 && worst_rel <= 1e-6,
          "c_f=20, M=1.." + std::to_string(M_max) + ", entries outside bound " + std::to_string(bad_entry) +
              ", max rel Frobenius B " + fmt("%.2e", worst_rel) + " (A " + fmt("%.2e", worst_rel_A) +
              ", held to the entrywise bound only)"};
}

Outcome c7_containment() {
  const PfdSetup s = PfdSetup::make({0.0, 1.0}, pi, 40, 6);
  const double eps = eps_prlt(s, 6);
  PencilPerturbation none;
  none.measured = true;
  none.dA = HermitianMatrix(6);
  none.dB = HermitianMatrix(6);
  std::mt19937_64 rng(7);
  int lines = 0, inside = 0, invalid = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const LineSpectrum sp = random_spectrum(rng, 1 + int(rng() % 3), int(rng() % 6), 0.3, s.W_C);
    const auto truth = in_band(sp, -1.0, 1.0);
    const auto r = run_known_m(build_gep_quadrature(sp, s), int(truth.size()));
    const auto b = error_bounds(r.refined, r.eigenvalues, eps, offband_known(sp, 1.0), none);
    if (!b.valid) {
      ++invalid;
      lines += int(truth.size());
      continue;
    }
    for (size_t i = 0; i < truth.size(); ++i) {
      const double err = r.eigenvalues[i] - truth[i];
      ++lines;
      if (err >= b.intervals[i].lower && err <= b.intervals[i].upper) ++inside;
    }
  }
  return {inside == lines, std::to_string(inside) + "/" + std::to_string(lines) + " lines contained, " +
                               std::to_string(invalid) + " spectra without valid bounds"};
}

Outcome c8_benzene() {
  const RunConfig cfg = load_config(fixtures + "/benzene_analog.json");
  const LineSpectrum spec = cfg.resolve_spectrum();
  const BandSpec band = *cfg.band;
  const auto truth = in_band(spec, band.omega_star - band.W_f, band.omega_star + band.W_f);
  const PfdSetup s = PfdSetup::make({band.omega_star, band.W_f}, cfg.W_s, cfg.N_s, 16);
  const int shots = cfg.shots_for(cfg.N_s);
  const double E_lo = band.omega_star - 2.0, E_hi = band.omega_star + 2.0;
  int good = 0, two = 0;
  double e1 = 0.0, e2 = 0.0;
  for (int seed = 0; seed < 50; ++seed) {
    const SampleSet x = make_samples(spec, cfg.W_s, cfg.N_s, shots, std::uint64_t(seed));
    const auto r = analyze(x, s, ThresholdPolicy{}, AnalysisMode::make_blind(E_lo, E_hi));
    if (r.detected_m != 2) continue;
    ++two;
    const double a = std::abs(r.freqs[0] - truth[0]), b = std::abs(r.freqs[1] - truth[1]);
    e1 += a;
    e2 += b;
    if (a <= 1e-3 && b <= 1e-3) ++good;
  }
  return {good >= 45, "T_max " + fmt("%.2f", 2 * s.T) + ", " + std::to_string(shots) + " shots: m=2 in " +
                          std::to_string(two) + "/50, both within 1e-3 in " + std::to_string(good) +
                          "/50, mean errors " + fmt("%.2e", two ? e1 / two : NAN) + " / " +
                          fmt("%.2e", two ? e2 / two : NAN)};
}

Outcome c9_heisenberg() {
  ScanConfig c = load_config(fixtures + "/h8_scan.json").scan;
  c.overlap_weights.clear();
  const ScanResult r = run_scan(c);
  const bool ok = r.slope_runtime >= -1.4 && r.slope_runtime <= -0.7 && r.slope_tmax >= -3.8 && r.slope_tmax <= -2.3;
  return {ok, std::to_string(r.points.size()) + " points, " + std::to_string(worker_count()) +
                  " workers, slope vs runtime " + fmt("%.3f", r.slope_runtime) + ", vs T_max " +
                  fmt("%.3f", r.slope_tmax)};
}

Outcome c10_phase() {
  const LineSpectrum sp = LineSpectrum::make({0.2, 1.5}, {0.6, 0.4});
  auto run = [&](int M) {
    const PfdSetup s = PfdSetup::make({0.0, 1.0}, pi, 40, M);
    const auto r = run_known_m(build_gep_quadrature(sp, s), 1);
    return std::pair{std::abs(r.eigenvalues[0] - 0.2), eps_prlt(s, M)};
  };
  const int ct = int(std::floor(2 * 20.0 / pi));
  const auto [e_half, eps_half] = run(ct / 2);
  const auto [e_full, eps_full] = run(ct);
  return {e_full >= 1e2 * e_half && eps_full >= 1e3 * eps_half,
          "M=" + std::to_string(ct / 2) + "->" + std::to_string(ct) + ": error " + fmt("%.2e", e_half) + "->" +
              fmt("%.2e", e_full) + ", eps " + fmt("%.2e", eps_half) + "->" + fmt("%.2e", eps_full)};
}

Outcome c11_overlap() {
  ScanConfig c = load_config(fixtures + "/h8_scan.json").scan;
  c.overlap_weights = {0.05, 0.9};
  c.overlap_seeds = 20;
  // the sweep is what matters; keep the main sweep to a single point
  c.points = 1;
  c.bins = 1;
  c.tmax_stop = c.tmax_start + 1;
  const ScanResult r = run_scan(c);
  const double lo = r.overlap[0].mean_error, hi = r.overlap[1].mean_error;
  return {hi < lo, "T_max " + fmt("%.0f", c.overlap_tmax) + ", mean error at 0.9 " + fmt("%.3e", hi) +
                       ", at 0.05 " + fmt("%.3e", lo)};
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  std::function<Outcome()> run;
};

std::set<int> parse_ids(const std::string& s) {
  std::set<int> out;
  std::stringstream ss(s);
  for (std::string t; std::getline(ss, t, ',');)
    if (!t.empty()) out.insert(std::stoi(t));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> only, allowed;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--only" && i + 1 < argc) {
      only = parse_ids(argv[++i]);
    } else if (a == "--allow-fail" && i + 1 < argc) {
      allowed = parse_ids(argv[++i]);
    } else if (a == "--fixtures" && i + 1 < argc) {
      fixtures = argv[++i];
    } else {
      std::fprintf(stderr, "usage: acceptance [--only 1,2] [--allow-fail 3,8] [--fixtures DIR]\n");
      return 2;
    }
  }

  const std::vector<Criterion> all{
      {1, "PSWF spectral signatures", 10, c1_signatures},
      {2, "trace and double orthogonality", 10, c2_trace_gram},
      {3, "1-gamma against the large-c expansion", 5, c3_asymptotics},
      {4, "derivative identities and constant bounds", 30, c4_theorem_b4},
      {5, "sampling soundness", 60, c5_soundness},
      {6, "sampled pencil vs quadrature oracle", 60, c6_oracle},
      {7, "deterministic bound containment", 120, c7_containment},
      {8, "benzene-regime analog", 120, c8_benzene},
      {9, "Heisenberg scaling", 900, c9_heisenberg},
      {10, "phase transition", 60, c10_phase},
      {11, "overlap sweep", 120, c11_overlap},
  };

  int passed = 0, failed = 0, failed_allowed = 0;
  std::string failed_ids;
  for (const auto& c : all) {
    if (!only.empty() && !only.count(c.id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = dt < c.budget_s;
    const bool ok = o.pass && in_time;
    if (!in_time) o.detail += "; over the " + fmt("%.0f", c.budget_s) + " s budget";
    std::printf("%s %2d %-42s %8.2f s  %s\n", ok ? "PASS" : "FAIL", c.id, c.name, dt, o.detail.c_str());
    std::fflush(stdout);
    if (ok) {
      ++passed;
    } else {
      ++failed;
      failed_ids += (failed_ids.empty() ? "" : ",") + std::to_string(c.id);
      if (allowed.count(c.id)) ++failed_allowed;
    }
  }
  std::printf("%d passed, %d failed%s%s\n", passed, failed, failed ? " (" : "",
              failed ? (failed_ids + (failed_allowed == failed ? "; all on the allowed list)" : ")")).c_str() : "");
  return failed > failed_allowed ? 1 : 0;
}
