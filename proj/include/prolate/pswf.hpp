#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "prolate/quadrature.hpp"

namespace prolate {

struct ProlateParams {
  double W = 0.0;        // bandwidth
  double T = 0.0;        // half-duration
  double c = 0.0;        // W*T
  double c_tilde = 0.0;  // 2c/pi
};

ProlateParams make_params(double W, double T);

struct ProlateMode {
  int n = 0;
  // xi_n(t) = sqrt(gamma/T) * sum_k legendre_coeffs[k] * sqrt(k+1/2) P_k(t/T) on [-T, T];
  // the coefficient vector has unit norm.
  std::vector<double> legendre_coeffs;
  double chi = 0.0;  // eigenvalue of (T^2-t^2)xi'' - 2t xi' + W^2(T^2-t^2) xi = -chi xi
  double gamma = 0.0;
  double one_minus_gamma = 0.0;
  std::complex<double> mu;
  double xi_at_T = 0.0;
  double deriv_sup = 0.0;   // grid sup of |xi'| on [-T, T], capped at W
  double deriv_norm = 0.0;  // ||xi'|| in L2 over the real line
  double c_extra = 0.0;
  double c_intra = 0.0;
  double c_intra_tilde = 0.0;
  bool asymptotic_floor = false;  // one_minus_gamma taken from the large-c expansion
  bool constants_capped = false;  // c_extra/c_intra taken from the regime caps

  // internal: real amplitude of the Fourier eigenvalue on [-1, 1]
  // (int e^{icxy} psi(y) dy = i^n lam psi(x)), and psi(1) for unit-norm psi.
  double lam = 0.0;
  double psi_one = 0.0;
};

struct ProlateBasis {
  ProlateParams params;
  std::vector<ProlateMode> modes;
  QuadRule quad;  // Gauss-Legendre on [-T, T]
  int order = 0;  // Legendre truncation length

  int n_max() const { return int(modes.size()) - 1; }
};

class ProlateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

ProlateBasis build_basis(double W, double T, int n_max, double tol = 1e-13);

double eval(const ProlateBasis& b, int n, double t);
double eval_deriv(const ProlateBasis& b, int n, double t);

// xi_0..xi_{count-1} (and derivatives) at t, sharing one Legendre/Bessel pass.
void eval_modes(const ProlateBasis& b, int count, double t, std::vector<double>& val,
                std::vector<double>* deriv = nullptr);

ProlateBasis dual(const ProlateBasis& b);

// int_{-T}^{T} xi_n(t) e^{-i omega t} dt, evaluated as conj(mu_n) * dual_n(omega).
std::complex<double> ft_time_limited(const ProlateBasis& b, int n, double omega);

// ||xi_n''||^2 outside [-T, T]: whole-line energy minus the interior part,
// clamped and padded by a relative rounding floor.
double second_deriv_tail(const ProlateBasis& b, int n);

struct ConcentrationConstants {
  double c_extra = 0.0;
  double c_intra = 0.0;
  double c_intra_tilde = 0.0;
  bool capped = false;
};

ConcentrationConstants concentration_constants(const ProlateBasis& b, int n);

// Leading-order large-c expansion of 1 - gamma_n(c), log-domain evaluation.
double asymptotic_one_minus_gamma(int n, double c);

// Values below which one_minus_gamma is replaced by the asymptotic expansion.
inline constexpr double kOneMinusGammaFloor = 1e-24;

}  // namespace prolate
