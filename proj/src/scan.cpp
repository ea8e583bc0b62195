#include "prolate/scan.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <numbers>
#include <random>
#include <stdexcept>
#include <thread>

namespace prolate {

namespace {

void check_positive(const std::vector<double>& x, const std::vector<double>& y, const char* who) {
  if (x.size() != y.size()) throw std::invalid_argument(std::string(who) + ": size mismatch");
  if (x.empty()) throw std::invalid_argument(std::string(who) + ": no points");
  for (size_t i = 0; i < x.size(); ++i)
    if (!(x[i] > 0) || !(y[i] > 0)) throw std::invalid_argument(std::string(who) + ": data must be positive");
}

}  // namespace

FitResult fit_fixed_exponent(const std::vector<double>& x, const std::vector<double>& y, double b) {
  check_positive(x, y, "fit_fixed_exponent");
  const size_t n = x.size();
  double la = 0.0;
  for (size_t i = 0; i < n; ++i) la += std::log(y[i]) - b * std::log(x[i]);
  la /= double(n);
  double r = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double d = std::log(y[i]) - la - b * std::log(x[i]);
    r += d * d;
  }
  return {std::exp(la), std::sqrt(r / double(n))};
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  check_positive(x, y, "loglog_slope");
  const size_t n = x.size();
  if (n < 2) throw std::invalid_argument("loglog_slope: need two points");
  double mx = 0, my = 0;
  for (size_t i = 0; i < n; ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= double(n);
  my /= double(n);
  double sxy = 0, sxx = 0;
  for (size_t i = 0; i < n; ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  if (sxx == 0) throw std::invalid_argument("loglog_slope: x values identical");
  return sxy / sxx;
}

BinStats bin_average(const std::vector<double>& x, const std::vector<double>& y, int bins) {
  if (bins < 1) throw std::invalid_argument("bin_average: bins must be positive");
  check_positive(x, std::vector<double>(x.size(), 1.0), "bin_average");
  if (x.size() != y.size()) throw std::invalid_argument("bin_average: size mismatch");
  const auto [lo_it, hi_it] = std::minmax_element(x.begin(), x.end());
  const double lo = std::log(*lo_it), hi = std::log(*hi_it);
  const double width = (hi - lo) / bins;
  std::vector<std::vector<double>> ys(bins), xs(bins);
  for (size_t i = 0; i < x.size(); ++i) {
    int b = width > 0 ? int((std::log(x[i]) - lo) / width) : 0;
    b = std::clamp(b, 0, bins - 1);
    ys[b].push_back(y[i]);
    xs[b].push_back(x[i]);
  }
  BinStats out;
  for (int b = 0; b < bins; ++b) {
    if (ys[b].empty()) continue;
    const double n = double(ys[b].size());
    double m = 0, lx = 0;
    for (size_t i = 0; i < ys[b].size(); ++i) {
      m += ys[b][i];
      lx += std::log(xs[b][i]);
    }
    m /= n;
    double v = 0;
    for (double t : ys[b]) v += (t - m) * (t - m);
    out.centers.push_back(width > 0 ? std::exp(lo + (b + 0.5) * width) : std::exp(lx / n));
    out.means.push_back(m);
    out.stddevs.push_back(ys[b].size() > 1 ? std::sqrt(v / (n - 1)) : 0.0);
    out.counts.push_back(int(ys[b].size()));
  }
  return out;
}

LineSpectrum generate_spectrum(const SpectrumGenerator& g, const BandSpec& band) {
  if (g.in_band > g.count || g.in_band < 0) throw std::invalid_argument("generate_spectrum: bad in-band count");
  if (!(g.in_band_weight >= 0 && g.in_band_weight <= 1))
    throw std::invalid_argument("generate_spectrum: in-band weight outside [0, 1]");
  const double blo = band.omega_star - band.W_f, bhi = band.omega_star + band.W_f;
  if (g.E_lo > blo || g.E_hi < bhi) throw std::invalid_argument("generate_spectrum: range must contain the band");
  std::mt19937_64 rng(g.seed);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::vector<double> f, w;
  // in-band lines, kept away from the band edges
  const double margin = 0.1 * band.W_f;
  int guard = 0;
  while (int(f.size()) < g.in_band) {
    if (++guard > 100000) throw std::runtime_error("generate_spectrum: cannot place in-band lines");
    const double e = blo + margin + (bhi - blo - 2 * margin) * u01(rng);
    bool ok = true;
    for (double x : f) ok = ok && std::abs(x - e) >= g.min_gap;
    if (ok) f.push_back(e);
  }
  std::vector<double> win(g.in_band);
  double s = 0;
  for (double& x : win) s += (x = 0.2 + u01(rng));
  for (double& x : win) x *= g.in_band_weight / s;
  w = win;
  const int off = g.count - g.in_band;
  std::vector<double> woff(off);
  s = 0;
  for (double& x : woff) s += (x = 0.2 + u01(rng));
  for (int i = 0; i < off; ++i) {
    double e;
    do {
      e = g.E_lo + (g.E_hi - g.E_lo) * u01(rng);
    } while (e >= blo - 0.05 * band.W_f && e <= bhi + 0.05 * band.W_f);
    f.push_back(e);
    w.push_back(woff[i] * (1.0 - g.in_band_weight) / s);
  }
  if (off == 0 && g.in_band > 0)
    for (double& x : w) x /= g.in_band_weight;
  return LineSpectrum::make(f, w);
}

std::vector<double> match_errors(const std::vector<double>& truth, const std::vector<double>& found, double W_f) {
  std::vector<double> e;
  for (double t : truth) {
    double best = W_f;
    for (double x : found) best = std::min(best, std::abs(x - t));
    e.push_back(best);
  }
  return e;
}

int worker_count() {
  if (const char* s = std::getenv("PROLATE_THREADS")) {
    const int n = std::atoi(s);
    if (n > 0) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

template <class F>
void parallel_for(int n, F&& body) {
  const int workers = std::min(worker_count(), std::max(n, 1));
  std::atomic<int> next{0};
  std::exception_ptr err;
  std::mutex mu;
  auto run = [&] {
    for (int i; (i = next++) < n;) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!err) err = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < workers; ++t) pool.emplace_back(run);
  run();
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

std::vector<double> in_band_truth(const LineSpectrum& s, const BandSpec& b) {
  std::vector<double> t;
  for (double f : s.freqs)
    if (std::abs(f - b.omega_star) <= b.W_f) t.push_back(f);
  return t;
}

int grid_points(double W_s, double T_max) {
  const int n = 2 * int(std::lround(W_s * T_max / (2 * std::numbers::pi)));
  return std::max(n, 2);
}

struct RunOutcome {
  int m = 0;
  ProtocolStatus status = ProtocolStatus::ok;
  std::vector<double> errors;
  double mean = 0.0;
};

RunOutcome run_once(const LineSpectrum& spec, const PfdSetup& setup, int shots, std::uint64_t seed, double kappa,
                    const std::vector<double>& truth, double E_lo, double E_hi) {
  const SampleSet x = make_samples(spec, setup.W_s, setup.N_s(), shots, seed);
  ThresholdPolicy pol;
  pol.kappa = kappa;
  const EstimateReport r = analyze(x, setup, pol, AnalysisMode::make_blind(E_lo, E_hi));
  RunOutcome o;
  o.m = r.detected_m;
  o.status = r.status;
  o.errors = match_errors(truth, r.freqs, setup.band.W_f);
  for (double e : o.errors) o.mean += e;
  if (!o.errors.empty()) o.mean /= double(o.errors.size());
  return o;
}

}  // namespace

ScanResult run_scan(const ScanConfig& cfg) {
  if (!(cfg.tmax_start < cfg.tmax_stop)) throw std::invalid_argument("scan: T_max start must be below stop");
  if (cfg.points < cfg.bins) throw std::invalid_argument("scan: points must be at least bins");
  ScanResult res;
  res.spectrum = cfg.spectrum ? *cfg.spectrum : generate_spectrum(cfg.generator, cfg.band);
  const std::vector<double> truth = in_band_truth(res.spectrum, cfg.band);
  const double E_lo = res.spectrum.freqs.front(), E_hi = res.spectrum.freqs.back();

  res.points.resize(size_t(cfg.points) * cfg.seeds);
  parallel_for(cfg.points, [&](int p) {
    const double frac = cfg.points > 1 ? double(p) / (cfg.points - 1) : 0.0;
    const double tm = cfg.tmax_start * std::pow(cfg.tmax_stop / cfg.tmax_start, frac);
    const int N_s = grid_points(cfg.W_s, tm);
    const double T = std::numbers::pi * N_s / (2 * cfg.W_s);
    const int M = std::max(1, default_guess_dimension(cfg.band.W_f, T));
    const PfdSetup setup = PfdSetup::make(cfg.band, cfg.W_s, N_s, M, cfg.W_C);
    const int shots = cfg.exact ? 0 : cfg.fixed_shots > 0 ? cfg.fixed_shots : shots_schedule(N_s, cfg.shots_F);
    for (int s = 0; s < cfg.seeds; ++s) {
      const int idx = p * cfg.seeds + s;
      ScanPoint& pt = res.points[idx];
      pt.index = p;
      pt.seed_index = s;
      pt.T_max = 2 * T;
      pt.N_s = N_s;
      pt.M = M;
      pt.shots = shots;
      pt.runtime = runtime(shots, N_s, cfg.W_s);
      const RunOutcome o = run_once(res.spectrum, setup, shots, splitmix64(cfg.seed ^ std::uint64_t(idx)), cfg.kappa,
                                    truth, E_lo, E_hi);
      pt.detected_m = o.m;
      pt.status = o.status;
      pt.errors = o.errors;
      pt.mean_error = o.mean;
    }
  });

  std::vector<double> rt, rt_err, tm, tm_err;
  for (const auto& pt : res.points) {
    if (!(pt.mean_error > 0)) continue;
    tm.push_back(pt.T_max);
    tm_err.push_back(pt.mean_error);
    if (pt.runtime > 0) {
      rt.push_back(pt.runtime);
      rt_err.push_back(pt.mean_error);
    }
  }
  const bool by_runtime = cfg.axis != "tmax" && !rt.empty();
  res.bins_axis = by_runtime ? "runtime" : "tmax";
  if (!tm.empty()) {
    res.bins = by_runtime ? bin_average(rt, rt_err, cfg.bins) : bin_average(tm, tm_err, cfg.bins);
    res.fit = fit_fixed_exponent(res.bins.centers, res.bins.means, cfg.fixed_exponent);
    const BinStats bt = bin_average(tm, tm_err, cfg.bins);
    if (bt.centers.size() >= 2) res.slope_tmax = loglog_slope(bt.centers, bt.means);
  }
  if (!rt.empty()) {
    const BinStats br = bin_average(rt, rt_err, cfg.bins);
    if (br.centers.size() >= 2) res.slope_runtime = loglog_slope(br.centers, br.means);
  }

  if (!cfg.overlap_weights.empty()) {
    const double tmo = cfg.overlap_tmax > 0 ? cfg.overlap_tmax : cfg.tmax_start;
    const int N_s = grid_points(cfg.W_s, tmo);
    const double T = std::numbers::pi * N_s / (2 * cfg.W_s);
    const int M = std::max(1, default_guess_dimension(cfg.band.W_f, T));
    const PfdSetup setup = PfdSetup::make(cfg.band, cfg.W_s, N_s, M, cfg.W_C);
    const int shots = cfg.exact ? 0 : cfg.fixed_shots > 0 ? cfg.fixed_shots : shots_schedule(N_s, cfg.shots_F);
    const int nw = int(cfg.overlap_weights.size());
    res.overlap.resize(nw);
    std::vector<double> sums(size_t(nw) * cfg.overlap_seeds);
    parallel_for(nw * cfg.overlap_seeds, [&](int i) {
      const int wi = i / cfg.overlap_seeds;
      SpectrumGenerator g = cfg.generator;
      g.in_band_weight = cfg.overlap_weights[wi];
      g.seed = cfg.generator.seed + std::uint64_t(i % cfg.overlap_seeds);  // same lines for every weight
      const LineSpectrum spec = generate_spectrum(g, cfg.band);
      const std::vector<double> tr = in_band_truth(spec, cfg.band);
      sums[i] = run_once(spec, setup, shots, splitmix64(cfg.seed ^ (0x9E37ull + std::uint64_t(i))), cfg.kappa, tr,
                         spec.freqs.front(), spec.freqs.back())
                    .mean;
    });
    for (int wi = 0; wi < nw; ++wi) {
      double s = 0;
      for (int k = 0; k < cfg.overlap_seeds; ++k) s += sums[size_t(wi) * cfg.overlap_seeds + k];
      res.overlap[wi] = {cfg.overlap_weights[wi], s / cfg.overlap_seeds, cfg.overlap_seeds};
    }
  }
  return res;
}

}  // namespace prolate
