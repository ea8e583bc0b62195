#pragma once

#include <vector>

namespace prolate {

// j_0(z) .. j_kmax(z) for z > 0. Upward recurrence when z > kmax, otherwise
// Miller's downward recurrence normalised by sum (2k+1) j_k^2 = 1.
std::vector<double> spherical_bessel_j(int kmax, double z);

// Orthonormal Legendre functions sqrt(k+1/2) P_k(x), k = 0..kmax, and their
// x-derivatives (derivatives optional).
void normalized_legendre(int kmax, double x, std::vector<double>& p, std::vector<double>* dp = nullptr);

// log(n!) via lgamma.
double log_factorial(int n);

}  // namespace prolate
