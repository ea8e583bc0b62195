#pragma once

#include <vector>

#include "prolate/linalg.hpp"

namespace prolate {

struct Gep {
  HermitianMatrix A;
  HermitianMatrix B;
  int M() const { return B.dim(); }
};

struct RefinedGep {
  HermitianMatrix A_mm;
  HermitianMatrix B_mm;
  CMatrix U_m;  // M x m, orthonormal columns
  int m = 0;
  double lambda_min_B = 0.0;
};

enum class ProtocolStatus { ok, increase_M, ill_conditioned };

const char* to_string(ProtocolStatus s);

struct DimensionResult {
  int m = 0;
  ProtocolStatus status = ProtocolStatus::ok;  // increase_M when m == M
};

DimensionResult detect_dimension(const HermitianMatrix& B, double eps_th);

RefinedGep refine(const Gep& gep, int m);

struct ProtocolResult {
  int m = 0;
  std::vector<double> eigenvalues;  // ascending
  RefinedGep refined;               // empty when m == 0
  ProtocolStatus status = ProtocolStatus::ok;
};

ProtocolResult run_protocol(const Gep& gep, double eps_th);
// Throws NumericalError ("ill-conditioned pencil") when lambda_min_B <= 0.
ProtocolResult run_known_m(const Gep& gep, int m);

}  // namespace prolate
