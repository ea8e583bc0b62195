#include "prolate/pswf.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "prolate/linalg.hpp"
#include "prolate/special.hpp"

namespace prolate {

namespace {

constexpr double kPi = std::numbers::pi;

struct RawModes {
  int order = 0;
  std::vector<std::vector<double>> beta;  // unit-norm Legendre coefficients
  std::vector<double> chi;                // shifted: standard chi - c^2
  std::vector<double> lam;                // real amplitude of the Fourier eigenvalue
};

// x * Pbar_k = a(k+1) Pbar_{k+1} + a(k) Pbar_{k-1}
double xcoef(int k) { return k / std::sqrt((2.0 * k - 1.0) * (2.0 * k + 1.0)); }

// int psi_a * (x psi_b)
double moment_x(const std::vector<double>& a, const std::vector<double>& b) {
  const int K = int(a.size());
  double s = 0.0;
  for (int k = 0; k < K; ++k) {
    if (b[k] == 0.0) continue;
    if (k + 1 < K) s += a[k + 1] * xcoef(k + 1) * b[k];
    if (k >= 1) s += a[k - 1] * xcoef(k) * b[k];
  }
  return s;
}

// int psi_a * psi_b'
double moment_deriv(const std::vector<double>& a, const std::vector<double>& b) {
  // Pbar_k' = sum_{j<k, j+k odd} 2 sqrt((k+1/2)(j+1/2)) Pbar_j
  const int K = int(a.size());
  double prefix[2] = {0.0, 0.0};  // sum over j of parity p of sqrt(j+1/2) a_j, j < k
  double s = 0.0;
  for (int k = 0; k < K; ++k) {
    s += b[k] * 2.0 * std::sqrt(k + 0.5) * prefix[(k + 1) % 2];
    prefix[k % 2] += std::sqrt(k + 0.5) * a[k];
  }
  return s;
}

double norm_x(const std::vector<double>& b) {
  // || x psi ||^2 over [-1, 1]
  const int K = int(b.size());
  double s = 0.0;
  for (int j = 0; j <= K; ++j) {
    double v = 0.0;
    if (j >= 1 && j - 1 < K) v += xcoef(j) * b[j - 1];
    if (j + 1 < K) v += xcoef(j + 1) * b[j + 1];
    s += v * v;
  }
  return std::sqrt(s);
}

// Legendre coefficients of psi' (same normalised basis).
std::vector<double> deriv_coeffs(const std::vector<double>& b) {
  const int K = int(b.size());
  std::vector<double> d(K, 0.0);
  double suffix[2] = {0.0, 0.0};  // sum_{k > j, k of parity p} sqrt(k+1/2) b_k
  for (int j = K - 1; j >= 0; --j) {
    d[j] = 2.0 * std::sqrt(j + 0.5) * suffix[(j + 1) % 2];
    suffix[j % 2] += std::sqrt(j + 0.5) * b[j];
  }
  return d;
}

// Coefficients of x * psi.
std::vector<double> times_x(const std::vector<double>& b) {
  const int K = int(b.size());
  std::vector<double> r(K + 1, 0.0);
  for (int k = 0; k < K; ++k) {
    r[k + 1] += xcoef(k + 1) * b[k];
    if (k >= 1) r[k - 1] += xcoef(k) * b[k];
  }
  return r;
}

double sumsq(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s;
}

double psi_at(const std::vector<double>& beta, const std::vector<double>& pbar) {
  double s = 0.0;
  for (size_t k = 0; k < beta.size(); ++k) s += beta[k] * pbar[k];
  return s;
}

// Eigenvectors are formed for n_lo..n_max only.
RawModes solve_modes(double c, int n_max, double tol, bool use_ratio, int n_lo = 0) {
  const double ct = 2.0 * c / kPi;
  int K = std::max(2 * int(std::ceil(ct)) + 30, n_max + 30);
  for (int attempt = 0; attempt < 12; ++attempt, K *= 2) {
    RawModes r;
    r.order = K;
    r.beta.assign(n_max + 1, {});
    r.chi.assign(n_max + 1, 0.0);
    r.lam.assign(n_max + 1, 0.0);
    bool converged = true;
    double worst_tail = 0.0;
    int worst_n = 0;
    for (int p = 0; p < 2; ++p) {
      std::vector<int> ks;
      for (int k = p; k < K; k += 2) ks.push_back(k);
      const int m = int(ks.size());
      std::vector<double> d(m), e(std::max(m - 1, 0));
      for (int i = 0; i < m; ++i) {
        const double k = ks[i];
        d[i] = k * (k + 1) + c * c * (2 * k * (k + 1) - 1) / ((2 * k + 3) * (2 * k - 1));
      }
      for (int i = 0; i + 1 < m; ++i) {
        const double k = ks[i];
        e[i] = c * c * (k + 2) * (k + 1) / ((2 * k + 3) * std::sqrt((2 * k + 1) * (2 * k + 5)));
      }
      const std::vector<double> ev = tridiag_sym_eigvals(d, e);
      for (int j = 0; 2 * j + p <= n_max; ++j) {
        const int n = 2 * j + p;
        r.chi[n] = ev[j] - c * c;
        if (n < n_lo) continue;
        const std::vector<double> v = tridiag_eigvec(d, e, ev[j]);
        std::vector<double> beta(K, 0.0);
        double big = 0.0;
        for (int i = 0; i < m; ++i) {
          beta[ks[i]] = v[i];
          big = std::max(big, std::abs(v[i]));
        }
        double tail = 0.0;
        for (int i = std::max(0, m - 4); i < m; ++i) tail = std::max(tail, std::abs(v[i]));
        if (tail > tol * big) {
          converged = false;
          if (tail / big > worst_tail) worst_tail = tail / big, worst_n = n;
        }
        r.beta[n] = std::move(beta);
      }
    }
    if (!converged) {
      if (attempt == 11)
        throw ProlateError("build_basis: Legendre truncation failed for n = " +
                           std::to_string(worst_n) + " (tail " + std::to_string(worst_tail) + ")");
      continue;
    }

    std::vector<double> p0, dp0;
    normalized_legendre(K - 1, 0.0, p0, &dp0);
    for (int n = n_lo; n <= n_max; ++n) {
      auto& beta = r.beta[n];
      const double s = (n % 2 == 0) ? psi_at(beta, p0) : psi_at(beta, dp0);
      if (s < 0)
        for (double& x : beta) x = -x;
    }
    // direct evaluation of the Fourier eigenvalue at x = 0, switching to the
    // ratio recursion once the direct route loses relative accuracy
    bool direct = true;
    for (int n = n_lo; n <= n_max; ++n) {
      const auto& beta = r.beta[n];
      double lam;
      if (direct || !use_ratio) {
        if (n % 2 == 0) {
          lam = std::sqrt(2.0) * beta[0] / psi_at(beta, p0);
          if ((n / 2) % 2 == 1) lam = -lam;
        } else {
          lam = c * std::sqrt(2.0 / 3.0) * beta[1] / psi_at(beta, dp0);
          if (((n - 1) / 2) % 2 == 1) lam = -lam;
        }
        if (c * lam * lam / (2 * kPi) < 1e-4) direct = false;
      } else {
        const double num = moment_x(r.beta[n - 1], beta);
        const double den = moment_deriv(r.beta[n - 1], beta);
        lam = r.lam[n - 1] * c * num / den;
      }
      r.lam[n] = lam;
    }
    return r;
  }
  throw ProlateError("build_basis: Legendre truncation failed");
}

double psi_one(const std::vector<double>& beta) {
  double s = 0.0;
  for (size_t k = 0; k < beta.size(); ++k) s += beta[k] * std::sqrt(k + 0.5);
  return s;
}

// 1 - gamma_n(c) = int_c^inf (2/s) gamma_n(s) psi_n(s; 1)^2 ds, for n = 0..n_hi
std::vector<double> complement_by_c_integration(double c, int n_hi, double tol) {
  std::vector<double> total(n_hi + 1, 0.0);
  const QuadRule g = gauss_legendre(10);
  const double width = 2.0;
  for (int panel = 0; panel < 200; ++panel) {
    const double lo = c + panel * width;
    std::vector<double> contrib(n_hi + 1, 0.0);
    // modes far below the floor are left at zero
    int n_lo = 0;
    while (n_lo <= n_hi && asymptotic_one_minus_gamma(n_lo, lo) < 1e-30) ++n_lo;
    if (n_lo > n_hi) break;
    for (size_t q = 0; q < g.size(); ++q) {
      const double s = lo + 0.5 * width * (g.nodes[q] + 1.0);
      const double w = 0.5 * width * g.weights[q];
      const RawModes r = solve_modes(s, n_hi, tol, false, n_lo);
      for (int n = n_lo; n <= n_hi; ++n) {
        const double gam = s * r.lam[n] * r.lam[n] / (2 * kPi);
        const double p1 = psi_one(r.beta[n]);
        contrib[n] += w * (2.0 / s) * gam * p1 * p1;
      }
    }
    bool all = true;
    for (int n = 0; n <= n_hi; ++n) {
      total[n] += contrib[n];
      if (contrib[n] > std::max(1e-17 * total[n], 1e-6 * kOneMinusGammaFloor)) all = false;
    }
    if (all) break;
  }
  return total;
}

void fill_grid_sup(ProlateBasis& b) {
  const int ng = 2048;
  std::vector<double> val, der;
  const double T = b.params.T;
  std::vector<double> sup(b.modes.size(), 0.0);
  for (int i = 0; i < ng; ++i) {
    const double t = -T + 2.0 * T * i / (ng - 1);
    eval_modes(b, int(b.modes.size()), t, val, &der);
    for (size_t n = 0; n < b.modes.size(); ++n) sup[n] = std::max(sup[n], std::abs(der[n]));
  }
  for (size_t n = 0; n < b.modes.size(); ++n)
    b.modes[n].deriv_sup = std::min(1.01 * sup[n], b.params.W);
}

}  // namespace

ProlateParams make_params(double W, double T) {
  if (!(W > 0.0) || !(T > 0.0)) throw std::invalid_argument("prolate params: W and T must be positive");
  ProlateParams p;
  p.W = W;
  p.T = T;
  p.c = W * T;
  p.c_tilde = 2.0 * p.c / kPi;
  return p;
}

double asymptotic_one_minus_gamma(int n, double c) {
  if (!(c > 0.0)) throw std::invalid_argument("asymptotic_one_minus_gamma: c must be positive");
  const double lg = std::log(4.0 * std::sqrt(kPi)) + 3.0 * n * std::log(2.0) +
                    (n + 0.5) * std::log(c) - 2.0 * c - log_factorial(n);
  return std::exp(lg);
}

ConcentrationConstants concentration_constants(const ProlateBasis& b, int n) {
  const ProlateMode& m = b.modes.at(n);
  const double W = b.params.W, T = b.params.T, ct = b.params.c_tilde;
  const double dn2 = m.deriv_norm * m.deriv_norm;
  const double cn = std::sqrt(dn2 + m.chi * m.chi / (4 * T * T));
  const bool below = n <= int(std::floor(ct)) - 1;
  const bool above = n >= int(std::ceil(ct));
  const double cap96 = W * (std::sqrt(1.0 + b.params.c * b.params.c / 4.0) + b.params.c / 2.0);

  ConcentrationConstants out;
  // xi(T)^2 / T, i.e. gamma psi(1)^2 / T^2
  const double edge = m.gamma * m.psi_one * m.psi_one / (T * T);
  const double rad_extra = dn2 - m.chi * edge / m.one_minus_gamma;
  const double rad_intra = dn2 + m.chi * edge / m.gamma;
  if (m.asymptotic_floor || rad_extra < 0.0 || rad_intra < 0.0) {
    out.capped = true;
    if (below) {
      out.c_extra = std::min(cn - m.chi / (2 * T), cap96);
      out.c_intra = std::min(m.deriv_norm, W);
    } else if (above) {
      out.c_extra = W;
      out.c_intra = cn + m.chi / (2 * T);
    } else {
      out.c_extra = cn + std::abs(m.chi) / (2 * T);
      out.c_intra = cn + std::abs(m.chi) / (2 * T);
    }
  } else {
    out.c_extra = std::sqrt(rad_extra);
    out.c_intra = std::sqrt(rad_intra);
    if (below) {
      out.c_extra = std::min(out.c_extra, std::min(cn - m.chi / (2 * T), cap96));
      out.c_intra = std::min(out.c_intra, W);
    }
    if (above) {
      out.c_extra = std::min(out.c_extra, W);
      out.c_intra = std::min(out.c_intra, cn + m.chi / (2 * T));
    }
  }
  out.c_intra_tilde = out.c_intra;
  if (n == 0) out.c_intra_tilde += m.xi_at_T * m.xi_at_T / m.gamma;
  return out;
}

ProlateBasis build_basis(double W, double T, int n_max, double tol) {
  if (n_max < 0) throw std::invalid_argument("build_basis: n_max must be non-negative");
  ProlateBasis b;
  b.params = make_params(W, T);
  const double c = b.params.c;
  const RawModes r = solve_modes(c, n_max, tol, true);
  b.order = r.order;
  b.modes.resize(n_max + 1);
  int n_hi = -1;
  for (int n = 0; n <= n_max; ++n) {
    ProlateMode& m = b.modes[n];
    m.n = n;
    m.legendre_coeffs = r.beta[n];
    m.chi = r.chi[n];
    m.lam = r.lam[n];
    m.gamma = c * m.lam * m.lam / (2 * kPi);
    m.psi_one = psi_one(m.legendre_coeffs);
    if (m.gamma > 0.5) n_hi = n;
  }
  std::vector<double> comp;
  if (n_hi >= 0) comp = complement_by_c_integration(c, n_hi, tol);
  for (int n = 0; n <= n_max; ++n) {
    ProlateMode& m = b.modes[n];
    if (n <= n_hi && m.gamma > 0.5) {
      m.one_minus_gamma = comp[n];
    } else {
      m.one_minus_gamma = 1.0 - m.gamma;
    }
    if (m.one_minus_gamma < kOneMinusGammaFloor) {
      // the expansion needs n << c; near the plunge it overshoots, so keep the floor
      m.one_minus_gamma = std::min(asymptotic_one_minus_gamma(n, c), kOneMinusGammaFloor);
      m.asymptotic_floor = true;
    }
    if (m.one_minus_gamma > 1e-12) m.gamma = 1.0 - m.one_minus_gamma;
    m.gamma = std::min(m.gamma, 1.0);
    const std::complex<double> in = std::pow(std::complex<double>(0.0, 1.0), n);
    m.mu = in * (m.lam * std::sqrt(c));
    m.xi_at_T = std::sqrt(m.gamma / T) * m.psi_one;
    m.deriv_norm = W * norm_x(m.legendre_coeffs);
  }
  b.quad = gauss_legendre(4 * (n_max + int(std::ceil(b.params.c_tilde))) + 64, -T, T);
  fill_grid_sup(b);
  for (int n = 0; n <= n_max; ++n) {
    const ConcentrationConstants k = concentration_constants(b, n);
    ProlateMode& m = b.modes[n];
    m.c_extra = k.c_extra;
    m.c_intra = k.c_intra;
    m.c_intra_tilde = k.c_intra_tilde;
    m.constants_capped = k.capped;
  }
  return b;
}

void eval_modes(const ProlateBasis& b, int count, double t, std::vector<double>& val,
                std::vector<double>* deriv) {
  const double T = b.params.T, c = b.params.c;
  const int K = b.order;
  val.assign(count, 0.0);
  if (deriv) deriv->assign(count, 0.0);
  const double x = t / T;
  if (std::abs(x) <= 1.0) {
    std::vector<double> p, dp;
    normalized_legendre(K - 1, x, p, deriv ? &dp : nullptr);
    for (int n = 0; n < count; ++n) {
      const ProlateMode& m = b.modes[n];
      const double amp = std::sqrt(m.gamma / T);
      double s = 0.0, ds = 0.0;
      for (int k = n % 2; k < K; k += 2) {
        s += m.legendre_coeffs[k] * p[k];
        if (deriv) ds += m.legendre_coeffs[k] * dp[k];
      }
      val[n] = amp * s;
      if (deriv) (*deriv)[n] = amp * ds / T;
    }
    return;
  }
  // Outside: psi(x) = (2/lam) sum_k (-1)^{(k-n)/2} sqrt(k+1/2) beta_k j_k(c x),
  // and sqrt(gamma)/lam = sign(lam) sqrt(c/2pi).
  const double ax = std::abs(x);
  const double z = c * ax;
  const std::vector<double> j = spherical_bessel_j(K, z);
  std::vector<double> jd;
  if (deriv) {
    jd.resize(K);
    jd[0] = -j[1];
    for (int k = 1; k < K; ++k) jd[k] = j[k - 1] - (k + 1) / z * j[k];
  }
  const double pref = 2.0 * std::sqrt(c / (2 * kPi)) / std::sqrt(T);
  for (int n = 0; n < count; ++n) {
    const ProlateMode& m = b.modes[n];
    double s = 0.0, ds = 0.0;
    for (int k = n % 2; k < K; k += 2) {
      const double sg = (((k - n) / 2) % 2 == 0) ? 1.0 : -1.0;
      const double term = sg * std::sqrt(k + 0.5) * m.legendre_coeffs[k];
      s += term * j[k];
      if (deriv) ds += term * jd[k];
    }
    const double sl = m.lam < 0 ? -1.0 : 1.0;
    const double par = (x < 0 && n % 2 == 1) ? -1.0 : 1.0;
    val[n] = sl * par * pref * s;
    // d/dt of an even function is odd and vice versa
    if (deriv) (*deriv)[n] = sl * ((x < 0 && n % 2 == 0) ? -1.0 : 1.0) * pref * ds * c / T;
  }
}

double eval(const ProlateBasis& b, int n, double t) {
  if (n < 0 || n > b.n_max()) throw std::out_of_range("eval: mode index out of range");
  std::vector<double> v;
  eval_modes(b, n + 1, t, v);
  return v[n];
}

double eval_deriv(const ProlateBasis& b, int n, double t) {
  if (n < 0 || n > b.n_max()) throw std::out_of_range("eval_deriv: mode index out of range");
  std::vector<double> v, d;
  eval_modes(b, n + 1, t, v, &d);
  return d[n];
}

ProlateBasis dual(const ProlateBasis& b) {
  const double W = b.params.W, T = b.params.T;
  ProlateBasis d = build_basis(T, W, b.n_max());
  // rescaling identity dual_n(omega) = sqrt(T/W) xi_n(T omega / W)
  const int ng = 9;
  std::vector<double> vd, vb;
  double worst = 0.0;
  for (int i = 0; i < ng; ++i) {
    const double om = -1.5 * W + 3.0 * W * i / (ng - 1);
    eval_modes(d, d.n_max() + 1, om, vd);
    eval_modes(b, b.n_max() + 1, T * om / W, vb);
    for (int n = 0; n <= b.n_max(); ++n) {
      const double ref = std::sqrt(T / W) * vb[n];
      const double scale = std::sqrt(1.0 / W);
      worst = std::max(worst, std::abs(vd[n] - ref) / scale);
    }
  }
  if (worst > 1e-6)
    throw ProlateError("dual: rescaling identity violated (" + std::to_string(worst) + ")");
  return d;
}

double second_deriv_tail(const ProlateBasis& b, int n) {
  const ProlateMode& m = b.modes.at(n);
  const double W = b.params.W, T = b.params.T;
  const double whole = std::pow(W, 4) * sumsq(times_x(times_x(m.legendre_coeffs)));
  const double inside = m.gamma * sumsq(deriv_coeffs(deriv_coeffs(m.legendre_coeffs))) / std::pow(T, 4);
  return std::max(whole - inside, 0.0) + 1e-13 * whole;
}

std::complex<double> ft_time_limited(const ProlateBasis& b, int n, double omega) {
  const double W = b.params.W, T = b.params.T;
  return std::conj(b.modes.at(n).mu) * (std::sqrt(T / W) * eval(b, n, T * omega / W));
}

}  // namespace prolate
