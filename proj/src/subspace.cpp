#include "prolate/subspace.hpp"

#include <stdexcept>

namespace prolate {

const char* to_string(ProtocolStatus s) {
  switch (s) {
    case ProtocolStatus::ok: return "ok";
    case ProtocolStatus::increase_M: return "increase_M";
    case ProtocolStatus::ill_conditioned: return "ill_conditioned";
  }
  return "?";
}

DimensionResult detect_dimension(const HermitianMatrix& B, double eps_th) {
  if (eps_th < 0) throw std::invalid_argument("detect_dimension: negative threshold");
  DimensionResult r;
  for (double v : herm_eigvals(B))
    if (v > eps_th) ++r.m;
  if (r.m == B.dim() && r.m > 0) r.status = ProtocolStatus::increase_M;
  return r;
}

RefinedGep refine(const Gep& gep, int m) {
  const int M = gep.M();
  if (gep.A.dim() != M) throw std::invalid_argument("refine: A and B differ in dimension");
  if (m < 1 || m > M) throw std::invalid_argument("refine: m must lie in [1, M]");
  const HermEig e = herm_eig(gep.B);
  RefinedGep r;
  r.m = m;
  r.U_m = CMatrix(M, m);
  for (int i = 0; i < M; ++i)
    for (int j = 0; j < m; ++j) r.U_m(i, j) = e.vectors(i, j);
  r.A_mm = gep.A.congruence(r.U_m);
  r.B_mm = gep.B.congruence(r.U_m);
  r.lambda_min_B = lambda_min(r.B_mm);
  return r;
}

namespace {

ProtocolResult solve(const Gep& gep, int m) {
  ProtocolResult r;
  r.m = m;
  r.refined = refine(gep, m);
  if (r.refined.lambda_min_B <= 0)
    throw NumericalError("ill-conditioned pencil: refined B not positive definite", r.refined.lambda_min_B);
  r.eigenvalues = gep_whiten_solve(r.refined.A_mm, r.refined.B_mm).values;
  return r;
}

}  // namespace

ProtocolResult run_protocol(const Gep& gep, double eps_th) {
  const DimensionResult d = detect_dimension(gep.B, eps_th);
  if (d.m == 0) return {};
  ProtocolResult r = solve(gep, d.m);
  r.status = d.status;
  return r;
}

ProtocolResult run_known_m(const Gep& gep, int m) { return solve(gep, m); }

}  // namespace prolate
