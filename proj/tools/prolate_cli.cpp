// prolate_cli: pswf tables, sample simulation, single analyses and scaling scans.
//
// Exit codes: 0 ok, 1 I/O or parse error, 2 increase_M, 3 ill_conditioned.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "prolate/io.hpp"
#include "prolate/pfd.hpp"
#include "prolate/pswf.hpp"
#include "prolate/scan.hpp"

using namespace prolate;

namespace {

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-")
    std::cout << text;
  else
    write_file(path, text);
}

struct PswfArgs {
  std::optional<double> c, W, T;
  int n_max = 10;
  std::string out;
};

int cmd_pswf(const PswfArgs& a) {
  double W = 0, T = 0;
  if (a.c) {
    if (a.W || a.T) throw IoError("pswf: give either --c or --W/--T");
    W = *a.c;  // psi_n on [-1, 1]
    T = 1.0;
  } else {
    if (!a.W || !a.T) throw IoError("pswf: need --c, or both --W and --T");
    W = *a.W;
    T = *a.T;
  }
  if (a.n_max < 0) throw IoError("pswf: --n-max must be non-negative");
  const ProlateBasis b = build_basis(W, T, a.n_max);
  std::ostringstream os;
  write_pswf_csv(b, os);
  emit(a.out, os.str());
  return 0;
}

struct SimulateArgs {
  std::string config, out;
  std::optional<std::uint64_t> seed;
  std::optional<int> shots;
};

int cmd_simulate(const SimulateArgs& a) {
  const RunConfig c = load_config(a.config);
  if (!(c.W_s > 0) || c.N_s == 0) throw IoError(a.config + ": simulate needs a 'sampling' section");
  const LineSpectrum spec = c.resolve_spectrum();
  const int shots = a.shots ? *a.shots : c.shots_for(c.N_s);
  if (shots < 0) throw IoError("simulate: --shots must be non-negative");
  const std::uint64_t seed = a.seed ? *a.seed : c.seed;
  const SampleSet s = make_samples(spec, c.W_s, c.N_s, shots, seed);
  // relative to the samples file so the pair can be moved together
  std::string ref;
  if (c.spectrum) {
    const auto base = std::filesystem::absolute(a.out).parent_path();
    ref = std::filesystem::relative(std::filesystem::absolute(a.config), base).generic_string();
  }
  save_samples(s, a.out, ref);
  return 0;
}

struct AnalyzeArgs {
  std::string samples, report, mode = "blind", truth;
  double center = 0.0, width = 0.0;
  int M = 0;
  double kappa = 3.0;
  std::optional<double> eps_th, E_lo, E_hi, W_C;
  std::optional<int> known_m;
};

int cmd_analyze(const AnalyzeArgs& a) {
  SamplesMeta meta;
  const SampleSet s = load_samples(a.samples, &meta);
  if (!(a.width > 0)) throw IoError("analyze: --band-width must be positive");
  const BandSpec band{a.center, a.width};
  const int M = a.M > 0 ? a.M : std::max(1, default_guess_dimension(a.width, s.grid.T()));

  ThresholdPolicy pol;
  pol.kappa = a.kappa;
  pol.eps_th = a.eps_th;
  pol.known_m = a.known_m;

  AnalysisMode mode;
  if (a.mode == "validation") {
    std::string path = a.truth;
    if (path.empty()) {
      if (meta.spectrum_file.empty()) throw IoError("analyze: validation mode needs --truth or a spectrum_file");
      path = (std::filesystem::path(a.samples).parent_path() / meta.spectrum_file).string();
    }
    const RunConfig t = load_config(path);
    mode = AnalysisMode::make_validation(t.resolve_spectrum());
  } else if (a.mode == "blind") {
    mode = AnalysisMode::make_blind(a.E_lo.value_or(-s.grid.W_s), a.E_hi.value_or(s.grid.W_s));
  } else {
    throw IoError("analyze: --mode must be blind or validation");
  }

  const EstimateReport r = analyze(s, band, M, pol, mode, a.W_C.value_or(-1.0));
  emit(a.report, report_json(r));
  switch (r.status) {
    case ProtocolStatus::ok: return 0;
    case ProtocolStatus::increase_M: return 2;
    case ProtocolStatus::ill_conditioned: return 3;
  }
  return 0;
}

struct ScanArgs {
  std::string config, out;
};

int cmd_scan(const ScanArgs& a) {
  const RunConfig c = load_config(a.config);
  const ScanResult r = run_scan(c.scan);
  std::ostringstream os;
  write_scan_csv(r, c.scan, os);
  emit(a.out, os.str());
  int flagged = 0;
  for (const auto& p : r.points) flagged += p.status != ProtocolStatus::ok;
  std::fprintf(stderr, "points %zu (not ok: %d)  slope vs runtime %.3f  slope vs T_max %.3f  fit a = %.4g (b = %g, %s)\n",
               r.points.size(), flagged, r.slope_runtime, r.slope_tmax, r.fit.a, c.scan.fixed_exponent,
               r.bins_axis.c_str());
  for (const auto& o : r.overlap)
    std::fprintf(stderr, "overlap weight %.3f  mean error %.4g over %d runs\n", o.weight, o.mean_error, o.runs);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"prolate filter diagonalization toolkit"};
  app.require_subcommand(1);

  PswfArgs pa;
  auto* pswf = app.add_subcommand("pswf", "tabulate prolate spheroidal wave functions");
  pswf->add_option("--c", pa.c, "bandwidth parameter c (uses W = c, T = 1)");
  pswf->add_option("--W", pa.W, "bandwidth");
  pswf->add_option("--T", pa.T, "half-duration");
  pswf->add_option("--n-max", pa.n_max, "highest order")->default_val(10);
  pswf->add_option("--out", pa.out, "CSV path (stdout if omitted)");

  SimulateArgs sa;
  auto* sim = app.add_subcommand("simulate", "emulate Hadamard-test samples of a line spectrum");
  sim->add_option("--config", sa.config, "config JSON")->required();
  sim->add_option("--out", sa.out, "samples CSV (metadata goes to <stem>.meta.json)")->required();
  sim->add_option("--seed", sa.seed, "override the config seed");
  sim->add_option("--shots", sa.shots, "override the shots rule (0 = exact)");

  AnalyzeArgs aa;
  auto* an = app.add_subcommand("analyze", "run sampled PFD on a samples file");
  an->add_option("--samples", aa.samples, "samples CSV")->required();
  an->add_option("--band-center", aa.center, "band centre omega*")->required();
  an->add_option("--band-width", aa.width, "band half-width W_f")->required();
  an->add_option("--M", aa.M, "subspace dimension (default floor(W_f T / pi))");
  an->add_option("--mode", aa.mode, "blind | validation")->default_val("blind");
  an->add_option("--truth", aa.truth, "config with the true spectrum (validation mode)");
  an->add_option("--E-lo", aa.E_lo, "lower edge of the signal range (blind mode, default -W_s)");
  an->add_option("--E-hi", aa.E_hi, "upper edge of the signal range (blind mode, default W_s)");
  an->add_option("--W-C", aa.W_C, "correlation bandwidth (default W_s - W_f)");
  an->add_option("--kappa", aa.kappa, "noise multiplier in the threshold")->default_val(3.0);
  an->add_option("--eps-th", aa.eps_th, "fixed detection threshold");
  an->add_option("--known-m", aa.known_m, "skip detection and use this dimension");
  an->add_option("--report", aa.report, "report JSON (stdout if omitted)");

  ScanArgs ca;
  auto* sc = app.add_subcommand("scan", "scaling scan over T_max");
  sc->add_option("--config", ca.config, "config JSON")->required();
  sc->add_option("--out", ca.out, "scan CSV (stdout if omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*pswf) return cmd_pswf(pa);
    if (*sim) return cmd_simulate(sa);
    if (*an) return cmd_analyze(aa);
    if (*sc) return cmd_scan(ca);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
