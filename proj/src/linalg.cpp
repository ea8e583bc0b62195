#include "prolate/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace prolate {

CMatrix CMatrix::identity(int n) {
  CMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

CMatrix CMatrix::adjoint() const {
  CMatrix r(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) r(j, i) = std::conj((*this)(i, j));
  return r;
}

double CMatrix::frobenius() const {
  double s = 0.0;
  for (const auto& z : a_) s += std::norm(z);
  return std::sqrt(s);
}

CMatrix operator*(const CMatrix& x, const CMatrix& y) {
  if (x.cols() != y.rows()) throw std::invalid_argument("matrix product: shape mismatch");
  CMatrix r(x.rows(), y.cols());
  for (int i = 0; i < x.rows(); ++i)
    for (int k = 0; k < x.cols(); ++k) {
      const cplx xik = x(i, k);
      if (xik == 0.0) continue;
      for (int j = 0; j < y.cols(); ++j) r(i, j) += xik * y(k, j);
    }
  return r;
}

CMatrix operator+(const CMatrix& x, const CMatrix& y) {
  CMatrix r(x.rows(), x.cols());
  for (int i = 0; i < x.rows(); ++i)
    for (int j = 0; j < x.cols(); ++j) r(i, j) = x(i, j) + y(i, j);
  return r;
}

CMatrix operator-(const CMatrix& x, const CMatrix& y) {
  CMatrix r(x.rows(), x.cols());
  for (int i = 0; i < x.rows(); ++i)
    for (int j = 0; j < x.cols(); ++j) r(i, j) = x(i, j) - y(i, j);
  return r;
}

CMatrix operator*(cplx s, const CMatrix& x) {
  CMatrix r(x.rows(), x.cols());
  for (int i = 0; i < x.rows(); ++i)
    for (int j = 0; j < x.cols(); ++j) r(i, j) = s * x(i, j);
  return r;
}

HermitianMatrix::HermitianMatrix(const CMatrix& m) : m_(m.rows(), m.cols()) {
  if (m.rows() != m.cols()) throw std::invalid_argument("HermitianMatrix: not square");
  const int n = m.rows();
  for (int i = 0; i < n; ++i) {
    m_(i, i) = m(i, i).real();
    for (int j = i + 1; j < n; ++j) {
      const cplx v = 0.5 * (m(i, j) + std::conj(m(j, i)));
      m_(i, j) = v;
      m_(j, i) = std::conj(v);
    }
  }
}

HermitianMatrix HermitianMatrix::diagonal(const std::vector<double>& d) {
  CMatrix m(int(d.size()), int(d.size()));
  for (size_t i = 0; i < d.size(); ++i) m(int(i), int(i)) = d[i];
  return HermitianMatrix(m);
}

HermitianMatrix HermitianMatrix::leading(int dim) const {
  CMatrix r(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) r(i, j) = m_(i, j);
  return HermitianMatrix(r);
}

HermitianMatrix HermitianMatrix::congruence(const CMatrix& u) const {
  return HermitianMatrix(u.adjoint() * (m_ * u));
}

NotPositiveDefinite::NotPositiveDefinite(double lambda_min)
    : NumericalError("weight matrix not positive definite (lambda_min = " +
                         std::to_string(lambda_min) + ")",
                     lambda_min) {}

HermEig herm_eig(const HermitianMatrix& m) {
  const int n = m.dim();
  if (n < 1) throw std::invalid_argument("herm_eig: empty matrix");
  CMatrix a = m.matrix();
  CMatrix v = CMatrix::identity(n);
  const double scale = std::max(a.frobenius(), 1e-300);

  auto off_norm = [&] {
    double s = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) s += std::norm(a(i, j));
    return std::sqrt(2.0 * s);
  };

  const int max_sweeps = 100;
  int sweep = 0;
  for (; sweep < max_sweeps; ++sweep) {
    if (off_norm() <= 1e-15 * scale) break;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const cplx apq = a(p, q);
        const double r = std::abs(apq);
        if (r <= 1e-300 || r < 1e-18 * scale) {
          a(p, q) = a(q, p) = 0.0;
          continue;
        }
        const cplx ph = apq / r;  // e^{i phi}
        const double app = a(p, p).real(), aqq = a(q, q).real();
        const double theta = 0.5 * (aqq - app) / r;
        double t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        if (theta < 0) t = -t;
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        // G = diag(1, conj(ph)) * [[c, s], [-s, c]]
        const cplx gpp = c, gpq = s;
        const cplx gqp = -s * std::conj(ph), gqq = c * std::conj(ph);
        for (int k = 0; k < n; ++k) {
          const cplx akp = a(k, p), akq = a(k, q);
          a(k, p) = akp * gpp + akq * gqp;
          a(k, q) = akp * gpq + akq * gqq;
        }
        for (int k = 0; k < n; ++k) {
          const cplx apk = a(p, k), aqk = a(q, k);
          a(p, k) = std::conj(gpp) * apk + std::conj(gqp) * aqk;
          a(q, k) = std::conj(gpq) * apk + std::conj(gqq) * aqk;
        }
        a(p, q) = a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        for (int k = 0; k < n; ++k) {
          const cplx vkp = v(k, p), vkq = v(k, q);
          v(k, p) = vkp * gpp + vkq * gqp;
          v(k, q) = vkp * gpq + vkq * gqq;
        }
      }
    }
  }
  if (sweep == max_sweeps && off_norm() > 1e-12 * scale)
    throw NumericalError("herm_eig: Jacobi iteration did not converge", off_norm());

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int i, int j) { return a(i, i).real() > a(j, j).real(); });
  HermEig out;
  out.values.resize(n);
  out.vectors = CMatrix(n, n);
  for (int j = 0; j < n; ++j) {
    out.values[j] = a(order[j], order[j]).real();
    for (int k = 0; k < n; ++k) out.vectors(k, j) = v(k, order[j]);
  }
  return out;
}

std::vector<double> herm_eigvals(const HermitianMatrix& m) { return herm_eig(m).values; }

double lambda_max(const HermitianMatrix& m) { return herm_eigvals(m).front(); }
double lambda_min(const HermitianMatrix& m) { return herm_eigvals(m).back(); }

double spectral_norm(const HermitianMatrix& m) {
  const auto ev = herm_eigvals(m);
  return std::max(std::abs(ev.front()), std::abs(ev.back()));
}

TridiagEig tridiag_sym_eig(const std::vector<double>& diag, const std::vector<double>& offdiag) {
  const int n = int(diag.size());
  if (n < 1) throw std::invalid_argument("tridiag_sym_eig: empty matrix");
  if (int(offdiag.size()) != n - 1)
    throw std::invalid_argument("tridiag_sym_eig: offdiag must have length n-1");
  std::vector<double> d = diag, e(n, 0.0);
  for (int i = 0; i < n - 1; ++i) e[i] = offdiag[i];
  std::vector<double> z(size_t(n) * n, 0.0);  // z[col*n + row]
  for (int i = 0; i < n; ++i) z[size_t(i) * n + i] = 1.0;

  // implicit QL with Wilkinson-type shift
  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= std::numeric_limits<double>::epsilon() * dd) break;
      }
      if (m != l) {
        if (++iter > 60) throw NumericalError("tridiag_sym_eig: QL did not converge", std::abs(e[l]));
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        int i;
        for (i = m - 1; i >= l; --i) {
          double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
          double* zi = &z[size_t(i) * n];
          double* zi1 = &z[size_t(i + 1) * n];
          for (int k = 0; k < n; ++k) {
            f = zi1[k];
            zi1[k] = s * zi[k] + c * f;
            zi[k] = c * zi[k] - s * f;
          }
        }
        if (r == 0.0 && i >= l) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int i, int j) { return d[i] < d[j]; });
  TridiagEig out;
  out.n = n;
  out.values.resize(n);
  out.vectors.resize(size_t(n) * n);
  for (int j = 0; j < n; ++j) {
    out.values[j] = d[order[j]];
    std::copy(z.begin() + size_t(order[j]) * n, z.begin() + size_t(order[j] + 1) * n,
              out.vectors.begin() + size_t(j) * n);
  }
  return out;
}

GepSolution gep_whiten_solve(const HermitianMatrix& a, const HermitianMatrix& b) {
  const int n = b.dim();
  if (a.dim() != n) throw std::invalid_argument("gep_whiten_solve: dimension mismatch");
  const HermEig eb = herm_eig(b);
  const double lmin = eb.values.back();
  if (!(lmin > 0.0)) throw NotPositiveDefinite(lmin);
  CMatrix w(n, n);  // B^{-1/2} = V diag(1/sqrt(lambda)) V^H
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      cplx s = 0.0;
      for (int k = 0; k < n; ++k)
        s += eb.vectors(i, k) * std::conj(eb.vectors(j, k)) / std::sqrt(eb.values[k]);
      w(i, j) = s;
    }
  const HermitianMatrix c = a.congruence(w);
  const HermEig ec = herm_eig(c);
  GepSolution out;
  out.values.assign(ec.values.rbegin(), ec.values.rend());
  CMatrix y(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) y(i, j) = ec.vectors(i, n - 1 - j);
  out.vectors = w * y;
  return out;
}

CMatrix lu_solve(const CMatrix& m, const CMatrix& rhs) {
  const int n = m.rows();
  if (m.cols() != n || rhs.rows() != n) throw std::invalid_argument("lu_solve: shape mismatch");
  CMatrix a = m, x = rhs;
  double scale = 0.0;
  for (const auto& z : m.data()) scale = std::max(scale, std::abs(z));
  for (int k = 0; k < n; ++k) {
    int piv = k;
    for (int i = k + 1; i < n; ++i)
      if (std::abs(a(i, k)) > std::abs(a(piv, k))) piv = i;
    if (std::abs(a(piv, k)) <= 1e-300 || std::abs(a(piv, k)) < 1e-15 * scale)
      throw NumericalError("lu_solve: singular matrix", std::abs(a(piv, k)));
    if (piv != k) {
      for (int j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
      for (int j = 0; j < x.cols(); ++j) std::swap(x(k, j), x(piv, j));
    }
    for (int i = k + 1; i < n; ++i) {
      const cplx f = a(i, k) / a(k, k);
      if (f == 0.0) continue;
      for (int j = k; j < n; ++j) a(i, j) -= f * a(k, j);
      for (int j = 0; j < x.cols(); ++j) x(i, j) -= f * x(k, j);
    }
  }
  for (int k = n - 1; k >= 0; --k)
    for (int j = 0; j < x.cols(); ++j) {
      cplx s = x(k, j);
      for (int i = k + 1; i < n; ++i) s -= a(k, i) * x(i, j);
      x(k, j) = s / a(k, k);
    }
  return x;
}

std::vector<double> singular_values(const CMatrix& m) {
  const HermEig e = herm_eig(HermitianMatrix(m.adjoint() * m));
  std::vector<double> s(e.values.size());
  for (size_t i = 0; i < s.size(); ++i) s[i] = std::sqrt(std::max(e.values[i], 0.0));
  return s;
}

}  // namespace prolate

namespace prolate {

std::vector<double> tridiag_sym_eigvals(const std::vector<double>& diag,
                                        const std::vector<double>& offdiag) {
  const int n = int(diag.size());
  if (n < 1) throw std::invalid_argument("tridiag_sym_eigvals: empty matrix");
  if (int(offdiag.size()) != n - 1)
    throw std::invalid_argument("tridiag_sym_eigvals: offdiag must have length n-1");
  std::vector<double> d = diag, e(n, 0.0);
  for (int i = 0; i < n - 1; ++i) e[i] = offdiag[i];
  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= std::numeric_limits<double>::epsilon() * dd) break;
      }
      if (m != l) {
        if (++iter > 60) throw NumericalError("tridiag_sym_eigvals: QL did not converge", std::abs(e[l]));
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        int i;
        for (i = m - 1; i >= l; --i) {
          const double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
        }
        if (r == 0.0 && i >= l) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
  std::sort(d.begin(), d.end());
  return d;
}

std::vector<double> tridiag_eigvec(const std::vector<double>& diag,
                                   const std::vector<double>& offdiag, double lambda) {
  const int n = int(diag.size());
  if (n == 1) return {1.0};
  double scale = 0.0;
  for (int i = 0; i < n; ++i) scale = std::max(scale, std::abs(diag[i]));
  for (double v : offdiag) scale = std::max(scale, std::abs(v));
  const double tiny = std::numeric_limits<double>::epsilon() * std::max(scale, 1e-300);

  // LU with partial pivoting of (T - lambda I); U has two superdiagonals.
  std::vector<double> u0(n), u1(n, 0.0), u2(n, 0.0), mult(n, 0.0);
  std::vector<char> swapped(n, 0);
  std::vector<double> a(n), b(n, 0.0);
  for (int i = 0; i < n; ++i) a[i] = diag[i] - lambda;
  for (int i = 0; i < n - 1; ++i) b[i] = offdiag[i];
  double ra = a[0], rb = n > 1 ? b[0] : 0.0, rc = 0.0;
  for (int i = 0; i < n - 1; ++i) {
    const double sub = offdiag[i];
    const double na = a[i + 1], nb = i + 1 < n - 1 ? b[i + 1] : 0.0;
    if (std::abs(sub) > std::abs(ra)) {
      swapped[i] = 1;
      const double m = ra / sub;
      mult[i] = m;
      u0[i] = sub;
      u1[i] = na;
      u2[i] = nb;
      ra = rb - m * na;
      rb = rc - m * nb;
      rc = 0.0;
    } else {
      const double piv = ra == 0.0 ? tiny : ra;
      const double m = sub / piv;
      mult[i] = m;
      u0[i] = piv;
      u1[i] = rb;
      u2[i] = rc;
      ra = na - m * rb;
      rb = nb - m * rc;
      rc = 0.0;
    }
  }
  u0[n - 1] = ra == 0.0 ? tiny : ra;
  for (int i = 0; i < n; ++i)
    if (std::abs(u0[i]) < tiny) u0[i] = std::copysign(tiny, u0[i] == 0.0 ? 1.0 : u0[i]);

  std::vector<double> x(n, 1.0);
  for (int it = 0; it < 3; ++it) {
    // forward: apply L^{-1} with recorded swaps
    for (int i = 0; i < n - 1; ++i) {
      if (swapped[i]) std::swap(x[i], x[i + 1]);
      x[i + 1] -= mult[i] * x[i];
    }
    for (int i = n - 1; i >= 0; --i) {
      double s = x[i];
      if (i + 1 < n) s -= u1[i] * x[i + 1];
      if (i + 2 < n) s -= u2[i] * x[i + 2];
      x[i] = s / u0[i];
    }
    double nrm = 0.0;
    for (double v : x) nrm += v * v;
    nrm = std::sqrt(nrm);
    for (double& v : x) v /= nrm;
  }
  return x;
}

}  // namespace prolate
