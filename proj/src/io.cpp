#include "prolate/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace prolate {

using json = nlohmann::ordered_json;

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

double to_double(const std::string& s, const std::string& what) {
  double v = 0.0;
  const char* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || p != end) throw IoError(what + ": not a number '" + s + "'");
  return v;
}

long to_long(const std::string& s, const std::string& what) {
  long v = 0;
  const char* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || p != end) throw IoError(what + ": not an integer '" + s + "'");
  return v;
}

json parse_json(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw IoError(what + ": " + e.what());
  }
}

// typed field access with the dotted path in the error message
const json& field(const json& j, const char* key, const std::string& path) {
  if (!j.is_object() || !j.contains(key)) throw IoError("missing field '" + path + key + "'");
  return j.at(key);
}

double num(const json& j, const char* key, const std::string& path) {
  const json& v = field(j, key, path);
  if (!v.is_number()) throw IoError("field '" + path + key + "' must be a number");
  return v.get<double>();
}

long integer(const json& j, const char* key, const std::string& path) {
  const json& v = field(j, key, path);
  if (!v.is_number_integer()) throw IoError("field '" + path + key + "' must be an integer");
  return v.get<long>();
}

std::uint64_t seed_of(const json& j, const char* key, const std::string& path) {
  const json& v = field(j, key, path);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long>() >= 0))
    throw IoError("field '" + path + key + "' must be a non-negative integer");
  return v.get<std::uint64_t>();
}

std::vector<double> num_array(const json& j, const char* key, const std::string& path) {
  const json& v = field(j, key, path);
  if (!v.is_array()) throw IoError("field '" + path + key + "' must be an array");
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number()) throw IoError("field '" + path + key + "' must hold numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

}  // namespace

void write_pswf_csv(const ProlateBasis& b, std::ostream& os) {
  os << "n,gamma,one_minus_gamma,chi,xi_at_T,c_extra,c_intra,asymptotic_floor\n";
  for (const auto& m : b.modes)
    os << m.n << ',' << fmt17(m.gamma) << ',' << fmt17(m.one_minus_gamma) << ',' << fmt17(m.chi) << ','
       << fmt17(m.xi_at_T) << ',' << fmt17(m.c_extra) << ',' << fmt17(m.c_intra) << ','
       << (m.asymptotic_floor ? 1 : 0) << '\n';
}

void write_samples_csv(const SampleSet& s, std::ostream& os) {
  const int N = s.grid.N_s;
  os << "k,t,re,im,shots\n";
  for (int k = -N; k <= N; ++k) {
    const cplx z = s.at(k);
    os << k << ',' << fmt17(s.grid.t(k)) << ',' << fmt17(z.real()) << ',' << fmt17(z.imag()) << ','
       << s.shots_per_sample << '\n';
  }
}

SampleSet read_samples_csv(std::istream& is, const SamplesMeta& meta) {
  SampleSet s;
  try {
    s.grid = SampleGrid(meta.W_s, meta.N_s);
  } catch (const std::exception& e) {
    throw IoError(std::string("samples metadata: ") + e.what());
  }
  s.seed = meta.seed;
  s.shots_per_sample = meta.shots;
  s.noisy = meta.shots > 0;
  const int N = meta.N_s;
  s.values.assign(size_t(2 * N + 1), cplx(0.0, 0.0));

  std::string line;
  if (!std::getline(is, line) || split_csv(line) != std::vector<std::string>{"k", "t", "re", "im", "shots"})
    throw IoError("samples: bad header (expected k,t,re,im,shots)");
  int expect = -N, row = 1;
  while (std::getline(is, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    const std::string where = "samples row " + std::to_string(row);
    const auto f = split_csv(line);
    if (f.size() != 5) throw IoError(where + ": expected 5 fields, got " + std::to_string(f.size()));
    const long k = to_long(f[0], where + " k");
    if (k != expect) throw IoError(where + ": expected k = " + std::to_string(expect));
    const double t = to_double(f[1], where + " t");
    if (std::abs(t - s.grid.t(int(k))) > 1e-12 * std::max(1.0, std::abs(t)))
      throw IoError(where + ": t does not match the grid pi k / W_s");
    const double re = to_double(f[2], where + " re"), im = to_double(f[3], where + " im");
    if (to_long(f[4], where + " shots") != meta.shots) throw IoError(where + ": shots differ from metadata");
    s.at(int(k)) = cplx(re, im);
    ++expect;
  }
  if (expect != N + 1)
    throw IoError("samples: truncated, " + std::to_string(expect + N) + " of " + std::to_string(2 * N + 1) +
                  " rows");
  return s;
}

std::string samples_meta_json(const SamplesMeta& m) {
  json j;
  j["W_s"] = m.W_s;
  j["N_s"] = m.N_s;
  j["seed"] = m.seed;
  j["shots"] = m.shots;
  if (!m.spectrum_file.empty()) j["spectrum_file"] = m.spectrum_file;
  return j.dump(2) + "\n";
}

SamplesMeta parse_samples_meta(const std::string& text) {
  const json j = parse_json(text, "samples metadata");
  SamplesMeta m;
  m.W_s = num(j, "W_s", "");
  m.N_s = int(integer(j, "N_s", ""));
  m.seed = seed_of(j, "seed", "");
  m.shots = int(integer(j, "shots", ""));
  if (m.shots < 0) throw IoError("field 'shots' must be non-negative");
  if (j.contains("spectrum_file")) {
    if (!j["spectrum_file"].is_string()) throw IoError("field 'spectrum_file' must be a string");
    m.spectrum_file = j["spectrum_file"].get<std::string>();
  }
  return m;
}

std::string sidecar_path(const std::string& csv_path) {
  return std::filesystem::path(csv_path).replace_extension(".meta.json").string();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << text;
  if (!out) throw IoError("write failed for '" + path + "'");
}

void save_samples(const SampleSet& s, const std::string& csv_path, const std::string& spectrum_file) {
  std::ostringstream os;
  write_samples_csv(s, os);
  write_file(csv_path, os.str());
  SamplesMeta m{s.grid.W_s, s.grid.N_s, s.seed, s.shots_per_sample, spectrum_file};
  write_file(sidecar_path(csv_path), samples_meta_json(m));
}

SampleSet load_samples(const std::string& csv_path, SamplesMeta* meta) {
  const SamplesMeta m = parse_samples_meta(read_file(sidecar_path(csv_path)));
  std::istringstream is(read_file(csv_path));
  SampleSet s = read_samples_csv(is, m);
  if (meta) *meta = m;
  return s;
}

int RunConfig::shots_for(int n_s) const {
  if (exact) return 0;
  if (fixed_shots > 0) return fixed_shots;
  if (shots_F > 0) return shots_schedule(n_s, shots_F);
  throw IoError("config: no shots rule");
}

LineSpectrum RunConfig::resolve_spectrum() const {
  if (spectrum) return *spectrum;
  if (generator) {
    if (!band) throw IoError("config: generator needs a 'band' section");
    return generate_spectrum(*generator, *band);
  }
  throw IoError("config: missing 'spectrum' or 'generator'");
}

RunConfig parse_config(const std::string& text) {
  const json j = parse_json(text, "config");
  if (!j.is_object()) throw IoError("config: top level must be an object");
  RunConfig c;
  try {
    if (j.contains("spectrum")) {
      const json& s = j["spectrum"];
      c.spectrum = LineSpectrum::make(num_array(s, "freqs", "spectrum."), num_array(s, "weights", "spectrum."));
    }
    if (j.contains("generator")) {
      const json& g = j["generator"];
      SpectrumGenerator gen;
      if (g.contains("count")) gen.count = int(integer(g, "count", "generator."));
      if (g.contains("in_band")) gen.in_band = int(integer(g, "in_band", "generator."));
      if (g.contains("range")) {
        const auto r = num_array(g, "range", "generator.");
        if (r.size() != 2 || !(r[0] < r[1])) throw IoError("field 'generator.range' must be [lo, hi] with lo < hi");
        gen.E_lo = r[0];
        gen.E_hi = r[1];
      }
      if (g.contains("in_band_weight")) gen.in_band_weight = num(g, "in_band_weight", "generator.");
      if (g.contains("min_gap")) gen.min_gap = num(g, "min_gap", "generator.");
      if (g.contains("seed")) gen.seed = seed_of(g, "seed", "generator.");
      c.generator = gen;
    }
    if (j.contains("band")) {
      const json& b = j["band"];
      const double w = num(b, "width", "band.");
      if (!(w > 0)) throw IoError("field 'band.width' must be positive");
      c.band = BandSpec{num(b, "center", "band."), w};
    }
    if (j.contains("sampling")) {
      const json& s = j["sampling"];
      c.W_s = num(s, "W_s", "sampling.");
      if (!(c.W_s > 0)) throw IoError("field 'sampling.W_s' must be positive");
      if (s.contains("N_s")) {
        c.N_s = int(integer(s, "N_s", "sampling."));
      } else if (s.contains("T_max")) {
        const double tm = num(s, "T_max", "sampling.");
        c.N_s = 2 * int(std::lround(c.W_s * tm / (2 * std::acos(-1.0))));
      } else {
        throw IoError("missing field 'sampling.N_s' (or 'sampling.T_max')");
      }
      if (c.N_s < 2 || c.N_s % 2) throw IoError("field 'sampling.N_s' must be even and at least 2");
    }
    if (j.contains("shots")) {
      const json& s = j["shots"];
      if (s.is_string() && s.get<std::string>() == "exact") {
        c.exact = true;
      } else if (s.is_object() && s.contains("fixed")) {
        c.fixed_shots = int(integer(s, "fixed", "shots."));
        if (c.fixed_shots < 1) throw IoError("field 'shots.fixed' must be at least 1");
      } else if (s.is_object() && s.contains("schedule_F")) {
        c.shots_F = num(s, "schedule_F", "shots.");
        if (!(c.shots_F > 0)) throw IoError("field 'shots.schedule_F' must be positive");
      } else {
        throw IoError("field 'shots' must be \"exact\", {\"fixed\": n} or {\"schedule_F\": F}");
      }
    }
    if (j.contains("seed")) c.seed = seed_of(j, "seed", "");

    ScanConfig& sc = c.scan;
    if (c.spectrum) sc.spectrum = c.spectrum;
    if (c.generator) sc.generator = *c.generator;
    if (c.band) sc.band = *c.band;
    if (c.W_s > 0) sc.W_s = c.W_s;
    sc.exact = c.exact;
    sc.fixed_shots = c.fixed_shots;
    if (c.shots_F > 0) sc.shots_F = c.shots_F;
    if (j.contains("seed")) sc.seed = c.seed;
    if (j.contains("scan")) {
      const json& s = j["scan"];
      const std::string p = "scan.";
      if (s.contains("tmax_start")) sc.tmax_start = num(s, "tmax_start", p);
      if (s.contains("tmax_stop")) sc.tmax_stop = num(s, "tmax_stop", p);
      if (s.contains("points")) sc.points = int(integer(s, "points", p));
      if (s.contains("seeds")) sc.seeds = int(integer(s, "seeds", p));
      if (s.contains("bins")) sc.bins = int(integer(s, "bins", p));
      if (s.contains("axis")) {
        if (!s["axis"].is_string()) throw IoError("field 'scan.axis' must be a string");
        sc.axis = s["axis"].get<std::string>();
        if (sc.axis != "runtime" && sc.axis != "tmax") throw IoError("field 'scan.axis' must be runtime or tmax");
      }
      if (s.contains("fixed_exponent")) sc.fixed_exponent = num(s, "fixed_exponent", p);
      if (s.contains("kappa")) sc.kappa = num(s, "kappa", p);
      if (s.contains("W_C")) sc.W_C = num(s, "W_C", p);
      if (s.contains("overlap_weights")) sc.overlap_weights = num_array(s, "overlap_weights", p);
      if (s.contains("overlap_tmax")) sc.overlap_tmax = num(s, "overlap_tmax", p);
      if (s.contains("overlap_seeds")) sc.overlap_seeds = int(integer(s, "overlap_seeds", p));
      if (!(sc.tmax_start < sc.tmax_stop)) throw IoError("field 'scan.tmax_start' must be below 'scan.tmax_stop'");
      if (sc.bins < 1 || sc.points < sc.bins) throw IoError("field 'scan.points' must be at least 'scan.bins'");
      if (sc.seeds < 1) throw IoError("field 'scan.seeds' must be at least 1");
    }
  } catch (const json::exception& e) {
    throw IoError(std::string("config: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw IoError(std::string("config: ") + e.what());
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  try {
    return parse_config(read_file(path));
  } catch (const IoError& e) {
    throw IoError(path + ": " + e.what());
  }
}

std::string report_json(const EstimateReport& r) {
  json j;
  j["m"] = r.detected_m;
  j["freqs"] = json::array();
  for (double f : r.freqs) j["freqs"].push_back(finite_or_null(f));
  j["amplitudes"] = json::array();
  for (double a : r.amplitudes) j["amplitudes"].push_back(finite_or_null(a));
  j["error_intervals"] = json::array();
  for (const auto& iv : r.error_intervals)
    j["error_intervals"].push_back(json::array({finite_or_null(iv.lower), finite_or_null(iv.upper)}));
  j["intervals_valid"] = r.intervals_valid;
  j["eps_prlt"] = finite_or_null(r.eps_prlt);
  j["eps_th"] = finite_or_null(r.eps_th);
  j["lambda_min_B"] = finite_or_null(r.lambda_min_B);
  j["noise_weight_bound"] = finite_or_null(r.noise_weight_bound);
  j["min_detectable_amp"] = finite_or_null(r.min_detectable_amp);
  j["offdiag_mass"] = finite_or_null(r.amp_offdiag_mass);
  j["status"] = to_string(r.status);
  j["mode"] = r.mode;
  j["bound_source"] = r.bound_source;
  if (!r.note.empty()) j["note"] = r.note;
  json p;
  p["omega_star"] = r.omega_star;
  p["W_f"] = r.W_f;
  p["W_s"] = r.W_s;
  p["T"] = r.T;
  p["T_max"] = 2 * r.T;
  p["W_C"] = r.W_C;
  p["N_s"] = r.N_s;
  p["M"] = r.M;
  p["shots"] = r.shots;
  j["params"] = p;
  return j.dump(2) + "\n";
}

void write_scan_csv(const ScanResult& r, const ScanConfig& cfg, std::ostream& os) {
  os << "kind,index,seed,T_max,N_s,M,shots,runtime,detected_m,status,mean_error,stddev,count,weight,a,b,residual,"
        "slope,errors\n";
  auto row = [&](const std::string& kind, const std::vector<std::string>& cells) {
    os << kind;
    for (const auto& c : cells) os << ',' << c;
    os << '\n';
  };
  const std::string e;
  for (const auto& p : r.points) {
    std::string errs;
    for (size_t i = 0; i < p.errors.size(); ++i) errs += (i ? ";" : "") + fmt17(p.errors[i]);
    row("point", {std::to_string(p.index), std::to_string(p.seed_index), fmt17(p.T_max), std::to_string(p.N_s),
                  std::to_string(p.M), std::to_string(p.shots), fmt17(p.runtime), std::to_string(p.detected_m),
                  to_string(p.status), fmt17(p.mean_error), e, e, e, e, e, e, e, errs});
  }
  const bool by_rt = r.bins_axis == "runtime";
  for (size_t i = 0; i < r.bins.centers.size(); ++i) {
    const std::string x = fmt17(r.bins.centers[i]);
    row(by_rt ? "bin_runtime" : "bin_tmax",
        {std::to_string(i), e, by_rt ? e : x, e, e, e, by_rt ? x : e, e, e, fmt17(r.bins.means[i]),
         fmt17(r.bins.stddevs[i]), std::to_string(r.bins.counts[i]), e, e, e, e, e, e});
  }
  if (!r.bins.centers.empty())
    row(by_rt ? "fit_runtime" : "fit_tmax", {e, e, e, e, e, e, e, e, e, e, e, e, e, fmt17(r.fit.a),
                                             fmt17(cfg.fixed_exponent), fmt17(r.fit.residual), e, e});
  row("slope_runtime", {e, e, e, e, e, e, e, e, e, e, e, e, e, e, e, e, fmt17(r.slope_runtime), e});
  row("slope_tmax", {e, e, e, e, e, e, e, e, e, e, e, e, e, e, e, e, fmt17(r.slope_tmax), e});
  for (size_t i = 0; i < r.overlap.size(); ++i) {
    const auto& o = r.overlap[i];
    row("overlap", {std::to_string(i), e, fmt17(cfg.overlap_tmax > 0 ? cfg.overlap_tmax : cfg.tmax_start), e, e, e,
                    e, e, e, fmt17(o.mean_error), e, std::to_string(o.runs), fmt17(o.weight), e, e, e, e, e});
  }
}

}  // namespace prolate
