#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "doctest.h"
#include "prolate/linalg.hpp"
#include "prolate/pswf.hpp"
#include "prolate/quadrature.hpp"

using namespace prolate;
using std::numbers::pi;

namespace {

// Eigenvalues of the time-frequency concentration operator, by Nystrom
// discretisation of sin(W(t-s))/(pi(t-s)) on [-T, T]. Descending.
std::vector<double> nystrom_gammas(double W, double T, int nodes) {
  const QuadRule g = gauss_legendre(nodes, -T, T);
  CMatrix k(nodes, nodes);
  for (int i = 0; i < nodes; ++i)
    for (int j = 0; j < nodes; ++j) {
      const double d = g.nodes[i] - g.nodes[j];
      const double ker = i == j ? W / pi : std::sin(W * d) / (pi * d);
      k(i, j) = std::sqrt(g.weights[i] * g.weights[j]) * ker;
    }
  return herm_eigvals(HermitianMatrix(k));
}

// int_{-T}^{T} f, fine Gauss rule independent of the basis' own rule
template <class F>
double interior(const ProlateBasis& b, F f) {
  const QuadRule g = composite_gauss(24, -b.params.T, b.params.T, 16);
  double s = 0.0;
  for (size_t i = 0; i < g.size(); ++i) s += g.weights[i] * f(g.nodes[i]);
  return s;
}

// Far-field form of the extension: xi_n(t) ~ 2 xi_n(T) T sin(W t - n pi/2) / (lam_n c t),
// so int_L^inf xi_n xi_m ~ sign * 2 xi_n(T) xi_m(T) T^2 / (lam_n lam_m c^2 L) averaged.
double far_tail(const ProlateBasis& b, int n, int m, double L) {
  if ((n - m) % 2) return 0.0;
  const double c = b.params.c, T = b.params.T;
  const double sg = ((n - m) / 2) % 2 == 0 ? 1.0 : -1.0;
  const ProlateMode &a = b.modes[n], &e = b.modes[m];
  return sg * 2.0 * a.xi_at_T * e.xi_at_T * T * T / (a.lam * e.lam * c * c * L);
}

// int_{|t|>T} xi_n xi_m over the real line for n, m < count: quadrature out to
// L plus the far-field tail, whose error falls off like 1/L^2.
std::vector<std::vector<double>> exterior(const ProlateBasis& b, int count) {
  const double T = b.params.T, W = b.params.W;
  const double L = 2000 * T;
  const int panels = int(std::ceil((L - T) / (pi / W)));
  const QuadRule g = composite_gauss(16, T, L, panels);
  std::vector<std::vector<double>> out(count, std::vector<double>(count, 0.0));
  std::vector<double> v;
  for (size_t i = 0; i < g.size(); ++i) {
    eval_modes(b, count, g.nodes[i], v);
    for (int n = 0; n < count; ++n)
      for (int m = n % 2; m < count; m += 2) out[n][m] += g.weights[i] * v[n] * v[m];
  }
  // the product is even in t when n - m is even, odd otherwise
  for (int n = 0; n < count; ++n)
    for (int m = 0; m < count; ++m) out[n][m] = (n - m) % 2 ? 0.0 : 2 * (out[n][m] + far_tail(b, n, m, L));
  return out;
}

}  // namespace

TEST_CASE("Landau and differential-operator signatures") {
  for (double c : {2.0, 5.0, 10.0, 20.0}) {
    const ProlateBasis b = build_basis(1.0, c, int(std::ceil(2 * c / pi)) + 4);
    const double ct = b.params.c_tilde;
    const int lo = int(std::floor(ct)) - 1, hi = int(std::ceil(ct));
    if (lo >= 0) {
      CHECK(b.modes[lo].gamma >= 0.5);
      CHECK(b.modes[lo].chi <= -1.0);
    }
    CHECK(b.modes[hi].gamma <= 0.5);
    CHECK(b.modes[hi].chi >= 0.0);
    CHECK(b.modes[0].chi > -c * c);
    for (int n = 0; n + 1 <= b.n_max(); ++n) {
      CHECK(b.modes[n].chi < b.modes[n + 1].chi);
      CHECK(b.modes[n].gamma > b.modes[n + 1].gamma);
    }
  }
  const ProlateBasis q = build_basis(1.0, pi / 2, 4);
  CHECK(q.modes[0].gamma >= 0.5);
  CHECK(q.modes[1].gamma <= 0.5);
}

TEST_CASE("trace rule") {
  for (auto [W, T] : {std::pair{1.0, 3.0}, {2.0, 5.0}, {0.7, 30.0}}) {
    const double ct = 2 * W * T / pi;
    const ProlateBasis b = build_basis(W, T, int(std::ceil(ct)) + 40);
    double s = 0.0, partial = 0.0;
    for (const auto& m : b.modes) s += m.gamma;
    for (int n = 0; n <= int(ct); ++n) partial += b.modes[n].gamma;
    CHECK(std::abs(s - ct) < 1e-6);
    CHECK(partial <= ct);
  }
}

TEST_CASE("mode invariants") {
  const ProlateBasis b = build_basis(2.0, 5.0, 16);
  for (const auto& m : b.modes) {
    if (m.one_minus_gamma > 1e-12) CHECK(std::abs(m.gamma + m.one_minus_gamma - 1.0) < 1e-12);
    CHECK(std::norm(m.mu) == doctest::Approx(2 * pi * m.gamma).epsilon(1e-8));
    for (size_t k = (m.n + 1) % 2; k < m.legendre_coeffs.size(); k += 2) CHECK(m.legendre_coeffs[k] == 0.0);
    CHECK(m.deriv_sup < b.params.W);
    CHECK(m.one_minus_gamma > 0.0);
  }
}

TEST_CASE("one minus gamma against a Nystrom discretisation") {
  for (auto [W, T] : {std::pair{1.0, 5.0}, {2.0, 5.0}}) {
    const ProlateBasis b = build_basis(W, T, int(std::ceil(2 * W * T / pi)) + 4);
    const auto g = nystrom_gammas(W, T, 120);
    for (const auto& m : b.modes) {
      const double ny = 1.0 - g[m.n];
      if (ny < 1e-8) continue;  // Nystrom resolves 1 - gamma only to ~1e-15 absolute
      CHECK(m.one_minus_gamma == doctest::Approx(ny).epsilon(1e-6));
    }
  }
  // c = 10, n = 0: about 4.62e-8 (large-c expansion)
  const ProlateBasis b = build_basis(2.0, 5.0, 12);
  CHECK(b.modes[0].one_minus_gamma == doctest::Approx(4.62e-8).epsilon(0.25));
}

TEST_CASE("large-c expansion") {
  CHECK(asymptotic_one_minus_gamma(0, 10.0) == doctest::Approx(4.62e-8).epsilon(1e-3));
  CHECK(asymptotic_one_minus_gamma(1, 10.0) / asymptotic_one_minus_gamma(0, 10.0) ==
        doctest::Approx(80.0).epsilon(1e-12));
  CHECK(asymptotic_one_minus_gamma(1, 10.0) == doctest::Approx(3.70e-6).epsilon(1e-3));
  // leading order: close to the basis value for the lowest modes only
  const ProlateBasis b = build_basis(1.0, 10.0, 4);
  for (int n = 0; n <= 1; ++n)
    CHECK(std::abs(asymptotic_one_minus_gamma(n, 10.0) / b.modes[n].one_minus_gamma - 1.0) < 0.3);
  // the correction grows with n, so agreement degrades monotonically
  double prev = 0.0;
  for (int n = 0; n <= 3; ++n) {
    const double dev = std::abs(asymptotic_one_minus_gamma(n, 10.0) / b.modes[n].one_minus_gamma - 1.0);
    CHECK(dev >= prev);
    prev = dev;
  }
}

TEST_CASE("near the plunge the substituted floor never exceeds it") {
  // c = 398: modes ~35 below c~ have 1 - gamma under the 1e-24 floor
  const ProlateBasis b = build_basis(3.01, 132.2, 240);
  for (const auto& m : b.modes) {
    CHECK(m.gamma > 0.0);
    CHECK(m.gamma <= 1.0);
    if (m.asymptotic_floor) CHECK(m.one_minus_gamma <= kOneMinusGammaFloor);
  }
}

TEST_CASE("double orthogonality") {
  const ProlateBasis b = build_basis(2.0, 5.0, 9);
  const int n = b.n_max() + 1;
  std::vector<std::vector<double>> inner(n, std::vector<double>(n));
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      inner[i][j] = interior(b, [&](double t) { return eval(b, i, t) * eval(b, j, t); });
      CHECK(std::abs(inner[i][j] - (i == j ? b.modes[i].gamma : 0.0)) < 1e-8);
    }
  const auto ext = exterior(b, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      const double whole = inner[i][j] + ext[i][j];
      CHECK(std::abs(whole - (i == j ? 1.0 : 0.0)) < 1e-8);
    }
}

TEST_CASE("tail energy of the extension") {
  const ProlateBasis b = build_basis(1.0, 5.0, 8);
  const auto ext = exterior(b, 9);
  for (const auto& m : b.modes) {
    if (m.one_minus_gamma < 1e-10) continue;
    CHECK(ext[m.n][m.n] == doctest::Approx(m.one_minus_gamma).epsilon(1e-6));
  }
}

TEST_CASE("evaluation parity and derivatives") {
  const ProlateBasis b = build_basis(2.0, 5.0, 10);
  const double T = b.params.T, W = b.params.W;
  for (int n = 0; n <= 10; ++n) {
    if (n % 2) CHECK(eval(b, n, 0.0) == 0.0);
    else CHECK(eval_deriv(b, n, 0.0) == 0.0);
    for (double t : {0.3, 2.0, 4.9, 6.0, 40.0}) {
      const double s = n % 2 ? -1.0 : 1.0;
      CHECK(eval(b, n, -t) == doctest::Approx(s * eval(b, n, t)).epsilon(1e-12));
    }
    const double h = 1e-5 * T;
    for (double t : {-4.2, -1.0, 0.4, 3.3}) {
      const double fd = (eval(b, n, t + h) - eval(b, n, t - h)) / (2 * h);
      CHECK(std::abs(eval_deriv(b, n, t) - fd) <= 1e-6);
    }
    double sup = 0.0;
    for (int i = 0; i <= 4000; ++i) sup = std::max(sup, std::abs(eval_deriv(b, n, -3 * T + 6 * T * i / 4000)));
    CHECK(sup < W);
  }
  // the extension joins the interior continuously
  for (int n = 0; n <= 10; ++n) {
    const double in = eval(b, n, T * (1 - 1e-12)), out = eval(b, n, T * (1 + 1e-12));
    CHECK(std::abs(in - out) < 1e-9);
    CHECK(b.modes[n].xi_at_T == doctest::Approx(in).epsilon(1e-9));
  }
}

TEST_CASE("dual basis") {
  const ProlateBasis b = build_basis(2.0, 3.0, 8);
  const ProlateBasis d = dual(b);
  CHECK(d.params.W == 3.0);
  CHECK(d.params.T == 2.0);
  CHECK(d.params.c == b.params.c);
  for (int n = 0; n <= 8; ++n) CHECK(std::abs(d.modes[n].gamma - b.modes[n].gamma) < 1e-10);
  CHECK(eval(d, 0, 0.0) == doctest::Approx(std::sqrt(3.0 / 2.0) * eval(b, 0, 0.0)).epsilon(1e-12));
  for (int n = 0; n <= 8; ++n) {
    const QuadRule g = gauss_legendre(120, -2.0, 2.0);
    double s = 0.0;
    for (size_t i = 0; i < g.size(); ++i) s += g.weights[i] * std::pow(eval(d, n, g.nodes[i]), 2);
    CHECK(s == doctest::Approx(d.modes[n].gamma).epsilon(1e-9));
  }
}

TEST_CASE("Fourier transform of the time-limited prolates") {
  const ProlateBasis b = build_basis(2.0, 5.0, 8);
  const double T = b.params.T, W = b.params.W;
  const auto f00 = ft_time_limited(b, 0, 0.0);
  CHECK(f00.real() > 0.0);
  CHECK(std::abs(f00.imag()) < 1e-14);
  CHECK(std::abs(f00 - std::conj(b.modes[0].mu) * eval(dual(b), 0, 0.0)) < 1e-12);

  const QuadRule g = composite_gauss(24, -T, T, 20);
  for (double om : {W / 2, 0.1, 1.7 * W, 3.0 * W}) {
    for (int n = 0; n <= 3; ++n) {
      std::complex<double> s = 0.0;
      for (size_t i = 0; i < g.size(); ++i)
        s += g.weights[i] * eval(b, n, g.nodes[i]) * std::exp(std::complex<double>(0, -om * g.nodes[i]));
      CHECK(std::abs(ft_time_limited(b, n, om) - s) < 1e-8);
    }
  }
}

TEST_CASE("concentration constants") {
  const ProlateBasis b = build_basis(1.0, 10.0, 12);  // c = 10
  const double T = b.params.T, W = b.params.W;
  const int below = int(std::floor(b.params.c_tilde)) - 1;
  const double cap = std::sqrt(1.0 + 25.0) + 5.0;
  for (int n = 0; n <= below; ++n) {
    CHECK(b.modes[n].c_intra < W);
    CHECK(b.modes[n].c_extra <= cap + 1e-12);
  }
  for (int n = 0; n <= 12; ++n) {
    const auto& m = b.modes[n];
    double sup = 0.0;
    for (int i = 0; i <= 8000; ++i) sup = std::max(sup, std::pow(eval(b, n, T + 4 * T * i / 8000.0), 2));
    CHECK(sup <= m.one_minus_gamma * m.c_extra);
  }
}

TEST_CASE("derivative energy identities") {
  const ProlateBasis b = build_basis(1.0, 10.0, 9);
  const double T = b.params.T, W = b.params.W;
  for (const auto& m : b.modes) {
    if (m.constants_capped) continue;
    const int n = m.n;
    const double in = interior(b, [&](double t) { return std::pow(eval_deriv(b, n, t), 2); });
    // whole-line energy from the spectrum: xi_n's transform is xi_n(T w / W) on [-W, W]
    const QuadRule g = composite_gauss(24, -W, W, 16);
    double num = 0.0, den = 0.0;
    for (size_t i = 0; i < g.size(); ++i) {
      const double v = std::pow(eval(b, n, T * g.nodes[i] / W), 2);
      num += g.weights[i] * g.nodes[i] * g.nodes[i] * v;
      den += g.weights[i] * v;
    }
    const double out = num / den - in;
    const double rhs_in = m.gamma * m.c_intra * m.c_intra, rhs_out = m.one_minus_gamma * m.c_extra * m.c_extra;
    if (in > 1e-12 && rhs_in > 1e-12) CHECK(in == doctest::Approx(rhs_in).epsilon(1e-6));
    if (out > 1e-12 && rhs_out > 1e-12) CHECK(out == doctest::Approx(rhs_out).epsilon(1e-6));
  }
}

TEST_CASE("second-derivative tail is non-negative and bounded by the whole-line energy") {
  const ProlateBasis b = build_basis(1.0, 10.0, 9);
  for (int n = 0; n <= 9; ++n) {
    const double t = second_deriv_tail(b, n);
    CHECK(t >= 0.0);
    CHECK(t <= std::pow(b.params.W, 4));
  }
}

TEST_CASE("projection onto the first N prolates") {
  const ProlateBasis b = build_basis(1.0, 15.0, 14);
  const int ct = int(std::floor(b.params.c_tilde));
  const int N = ct + 1;
  const std::vector<double> a{0.3, -0.2, 0.1, 0.5, 0.05, -0.4, 0.2, 0.3, -0.1, 0.2, 0.25, -0.15, 0.3, 0.1, 0.2};
  double norm = 0.0;
  for (double x : a) norm += x * x;
  norm = std::sqrt(norm);
  auto f = [&](double t) {
    std::vector<double> v;
    eval_modes(b, int(a.size()), t, v);
    double s = 0.0;
    for (size_t n = 0; n < a.size(); ++n) s += a[n] / norm * v[n];
    return s;
  };
  double tail = 0.0;
  for (size_t n = 0; n < a.size(); ++n) tail += a[n] * a[n] / (norm * norm) * b.modes[n].one_minus_gamma;
  // projection error on [-T, T] with coefficients <f, xi_n>_T / gamma_n
  double err = interior(b, [&](double t) { return f(t) * f(t); });
  for (int n = 0; n < N; ++n) {
    const double p = interior(b, [&](double t) { return f(t) * eval(b, n, t); });
    err -= p * p / b.modes[n].gamma;
  }
  CHECK(1.0 / b.modes[N].one_minus_gamma <= 2.0);
  CHECK(err < tail / b.modes[N].one_minus_gamma);
}

TEST_CASE("invalid input") {
  CHECK_THROWS_AS(build_basis(-1.0, 1.0, 3), std::invalid_argument);
  CHECK_THROWS_AS(build_basis(1.0, 1.0, -1), std::invalid_argument);
  const ProlateBasis b = build_basis(1.0, 1.0, 2);
  CHECK_THROWS_AS(eval(b, 3, 0.0), std::out_of_range);
}
