#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace prolate {

using cplx = std::complex<double>;

// Dense complex matrix, row-major.
class CMatrix {
 public:
  CMatrix() = default;
  CMatrix(int rows, int cols) : rows_(rows), cols_(cols), a_(size_t(rows) * cols) {}

  static CMatrix identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  cplx& operator()(int i, int j) { return a_[size_t(i) * cols_ + j]; }
  const cplx& operator()(int i, int j) const { return a_[size_t(i) * cols_ + j]; }
  const std::vector<cplx>& data() const { return a_; }

  CMatrix adjoint() const;
  double frobenius() const;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<cplx> a_;
};

CMatrix operator*(const CMatrix& x, const CMatrix& y);
CMatrix operator+(const CMatrix& x, const CMatrix& y);
CMatrix operator-(const CMatrix& x, const CMatrix& y);
CMatrix operator*(cplx s, const CMatrix& x);

// Square matrix equal to its adjoint. The constructor replaces its input by
// (M + M^H)/2, so the invariant holds exactly.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;
  explicit HermitianMatrix(int n) : m_(n, n) {}
  explicit HermitianMatrix(const CMatrix& m);

  static HermitianMatrix diagonal(const std::vector<double>& d);

  int dim() const { return m_.rows(); }
  const cplx& operator()(int i, int j) const { return m_(i, j); }
  const CMatrix& matrix() const { return m_; }
  double frobenius() const { return m_.frobenius(); }

  // Leading principal dim x dim block.
  HermitianMatrix leading(int dim) const;
  // U^H M U.
  HermitianMatrix congruence(const CMatrix& u) const;

 private:
  CMatrix m_;
};

class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, double value)
      : std::runtime_error(what), value_(value) {}
  double value() const { return value_; }

 private:
  double value_;
};

class NotPositiveDefinite : public NumericalError {
 public:
  explicit NotPositiveDefinite(double lambda_min);
};

struct HermEig {
  std::vector<double> values;  // descending
  CMatrix vectors;             // columns
};

struct TridiagEig {
  std::vector<double> values;   // ascending
  std::vector<double> vectors;  // column j at [j*n, (j+1)*n)
  int n = 0;
  double vec(int row, int col) const { return vectors[size_t(col) * n + row]; }
};

struct GepSolution {
  std::vector<double> values;  // ascending
  CMatrix vectors;             // columns, B-orthonormal
};

HermEig herm_eig(const HermitianMatrix& m);
TridiagEig tridiag_sym_eig(const std::vector<double>& diag, const std::vector<double>& offdiag);
// Eigenvalues only, ascending.
std::vector<double> tridiag_sym_eigvals(const std::vector<double>& diag,
                                        const std::vector<double>& offdiag);
// Unit eigenvector for a (converged) eigenvalue by inverse iteration.
std::vector<double> tridiag_eigvec(const std::vector<double>& diag,
                                   const std::vector<double>& offdiag, double lambda);

GepSolution gep_whiten_solve(const HermitianMatrix& a, const HermitianMatrix& b);

// Eigenvalues only, descending; convenience for bound evaluation.
std::vector<double> herm_eigvals(const HermitianMatrix& m);

// Largest and smallest eigenvalue of a Hermitian matrix.
double lambda_max(const HermitianMatrix& m);
double lambda_min(const HermitianMatrix& m);

// Spectral norm of a Hermitian matrix.
double spectral_norm(const HermitianMatrix& m);

// Solve x = m^{-1} rhs for a general square complex matrix (partial pivoting).
// Throws NumericalError when a pivot vanishes.
CMatrix lu_solve(const CMatrix& m, const CMatrix& rhs);

// Singular values, descending.
std::vector<double> singular_values(const CMatrix& m);

}  // namespace prolate
