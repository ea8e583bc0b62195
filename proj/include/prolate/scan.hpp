#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "prolate/pfd.hpp"
#include "prolate/signal.hpp"

namespace prolate {

struct FitResult {
  double a = 0.0;
  double residual = 0.0;  // RMS in log y
};

// y = a x^b with b fixed, least squares in log-log.
FitResult fit_fixed_exponent(const std::vector<double>& x, const std::vector<double>& y, double b);

// Ordinary least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

struct BinStats {
  std::vector<double> centers;  // geometric centres
  std::vector<double> means;
  std::vector<double> stddevs;
  std::vector<int> counts;
};

// Equal-width bins in log x; empty bins are omitted.
BinStats bin_average(const std::vector<double>& x, const std::vector<double>& y, int bins);

// Random line spectrum: `count` lines in [E_lo, E_hi], `in_band` of them
// inside the band carrying total weight `in_band_weight`.
struct SpectrumGenerator {
  int count = 25;
  int in_band = 4;
  double E_lo = -2.5;
  double E_hi = 2.5;
  double in_band_weight = 0.5;
  double min_gap = 0.1;  // minimum in-band separation
  std::uint64_t seed = 42;
};

LineSpectrum generate_spectrum(const SpectrumGenerator& g, const BandSpec& band);

struct ScanConfig {
  std::optional<LineSpectrum> spectrum;  // takes precedence over the generator
  SpectrumGenerator generator;
  BandSpec band{0.0, 0.5};
  double W_s = 3.01;
  double W_C = -1.0;
  bool exact = false;       // noiseless samples
  int fixed_shots = 0;      // > 0: fixed shot count
  double shots_F = 10.0;    // otherwise shots_schedule(N_s, F)
  double tmax_start = 30.0;
  double tmax_stop = 300.0;
  int points = 40;
  int seeds = 1;
  int bins = 20;
  std::string axis = "runtime";  // runtime | tmax
  double fixed_exponent = -1.0;
  double kappa = 3.0;
  std::uint64_t seed = 42;
  std::vector<double> overlap_weights;  // optional in-band weight sweep
  double overlap_tmax = 0.0;
  int overlap_seeds = 20;
};

struct ScanPoint {
  int index = 0;
  int seed_index = 0;
  double T_max = 0.0;
  int N_s = 0;
  int M = 0;
  int shots = 0;
  double runtime = 0.0;
  int detected_m = 0;
  ProtocolStatus status = ProtocolStatus::ok;
  std::vector<double> errors;  // per true in-band line
  double mean_error = 0.0;
};

struct OverlapPoint {
  double weight = 0.0;
  double mean_error = 0.0;
  int runs = 0;
};

struct ScanResult {
  LineSpectrum spectrum;
  std::vector<ScanPoint> points;
  BinStats bins;  // on bins_axis
  std::string bins_axis;  // runtime, or tmax when configured or when samples are exact
  FitResult fit;
  double slope_runtime = 0.0;
  double slope_tmax = 0.0;
  std::vector<OverlapPoint> overlap;
};

// Errors of detected frequencies against the true in-band lines (nearest match;
// a line with no detection at all counts as W_f).
std::vector<double> match_errors(const std::vector<double>& truth, const std::vector<double>& found, double W_f);

int worker_count();  // PROLATE_THREADS, else hardware concurrency

ScanResult run_scan(const ScanConfig& cfg);

}  // namespace prolate
