#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>

#include "prolate/pfd.hpp"
#include "prolate/pswf.hpp"
#include "prolate/scan.hpp"
#include "prolate/signal.hpp"

namespace prolate {

// I/O or parse failure; `what()` names the file or field.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// 17 significant digits, the format used by every CSV writer here.
std::string fmt17(double x);

// n, gamma, one_minus_gamma, chi, xi_at_T, c_extra, c_intra, asymptotic_floor
void write_pswf_csv(const ProlateBasis& b, std::ostream& os);

// Samples: header k,t,re,im,shots and one row per k in [-N_s, N_s].
struct SamplesMeta {
  double W_s = 0.0;
  int N_s = 0;
  std::uint64_t seed = 0;
  int shots = 0;
  std::string spectrum_file;  // optional
};

void write_samples_csv(const SampleSet& s, std::ostream& os);
SampleSet read_samples_csv(std::istream& is, const SamplesMeta& meta);

std::string samples_meta_json(const SamplesMeta& m);
SamplesMeta parse_samples_meta(const std::string& text);

// <stem>.meta.json next to the CSV.
std::string sidecar_path(const std::string& csv_path);

void save_samples(const SampleSet& s, const std::string& csv_path, const std::string& spectrum_file = "");
SampleSet load_samples(const std::string& csv_path, SamplesMeta* meta = nullptr);

// Config file (JSON, one schema for simulate and scan):
// {
//   "spectrum": {"freqs": [...], "weights": [...]},          or
//   "generator": {"count", "in_band", "range": [lo, hi], "in_band_weight", "min_gap", "seed"},
//   "band": {"center", "width"},                               width is the half-width W_f
//   "sampling": {"W_s", "N_s"} or {"W_s", "T_max"},
//   "shots": "exact" | {"fixed": n} | {"schedule_F": F},
//   "seed": n,
//   "scan": {"tmax_start", "tmax_stop", "points", "seeds", "bins", "axis",
//            "fixed_exponent", "kappa", "W_C", "overlap_weights", "overlap_tmax", "overlap_seeds"}
// }
// All sections are optional as far as parsing goes; the commands check what they need.
struct RunConfig {
  std::optional<LineSpectrum> spectrum;
  std::optional<SpectrumGenerator> generator;
  std::optional<BandSpec> band;
  double W_s = 0.0;
  int N_s = 0;
  bool exact = false;
  int fixed_shots = 0;
  double shots_F = 0.0;
  std::uint64_t seed = 0;
  ScanConfig scan;  // filled from the other sections where they apply

  // shot count for a grid of N_s points under the configured rule
  int shots_for(int n_s) const;
  // explicit spectrum, else the generated one (needs band)
  LineSpectrum resolve_spectrum() const;
};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

std::string report_json(const EstimateReport& r);

// Point rows followed by summary rows (bins on the configured axis, the
// fixed-exponent fit, both log-log slopes, the overlap sweep).
void write_scan_csv(const ScanResult& r, const ScanConfig& cfg, std::ostream& os);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

}  // namespace prolate
