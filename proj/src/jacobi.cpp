#include "latentvqe/jacobi.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "latentvqe/errors.hpp"

namespace latentvqe {

double DenseMatrix::off_diagonal_norm() const {
  double s = 0.0;
  for (std::size_t r = 0; r < dim; ++r)
    for (std::size_t c = 0; c < dim; ++c)
      if (r != c) s += std::norm((*this)(r, c));
  return std::sqrt(s);
}

bool DenseMatrix::is_hermitian(double tol) const {
  for (std::size_t r = 0; r < dim; ++r)
    for (std::size_t c = r; c < dim; ++c)
      if (std::abs((*this)(r, c) - std::conj((*this)(c, r))) > tol) return false;
  return true;
}

EigenDecomposition jacobi_eigen(DenseMatrix a, double tolerance, int max_sweeps) {
  const std::size_t n = a.dim;
  if (n == 0) throw std::invalid_argument("jacobi_eigen: empty matrix");
  if (!a.is_hermitian(1e-10)) throw std::invalid_argument("jacobi_eigen: matrix is not Hermitian");
  for (std::size_t i = 0; i < n; ++i) a(i, i) = a(i, i).real();

  DenseMatrix v(n);
  for (std::size_t i = 0; i < n; ++i) v(i, i) = 1.0;

  int sweep = 0;
  while (a.off_diagonal_norm() >= tolerance) {
    if (sweep == max_sweeps)
      throw NumericalError("Jacobi eigensolver did not converge in " + std::to_string(max_sweeps) + " sweeps");
    ++sweep;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const cplx apq = a(p, q);
        const double mag = std::abs(apq);
        if (mag == 0.0) continue;
        // G = diag(1, e^{-i phi}) * R zeroes A(p, q) for A(p, q) = |A(p, q)| e^{i phi}.
        const cplx phase = apq / mag;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double tau = (aqq - app) / (2.0 * mag);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double cs = 1.0 / std::sqrt(1.0 + t * t);
        const double sn = t * cs;
        const cplx gpp = cs;
        const cplx gpq = sn;
        const cplx gqp = -sn * std::conj(phase);
        const cplx gqq = cs * std::conj(phase);

        for (std::size_t k = 0; k < n; ++k) { // A <- A G
          const cplx akp = a(k, p);
          const cplx akq = a(k, q);
          a(k, p) = akp * gpp + akq * gqp;
          a(k, q) = akp * gpq + akq * gqq;
        }
        for (std::size_t k = 0; k < n; ++k) { // A <- G^dagger A
          const cplx apk = a(p, k);
          const cplx aqk = a(q, k);
          a(p, k) = std::conj(gpp) * apk + std::conj(gqp) * aqk;
          a(q, k) = std::conj(gpq) * apk + std::conj(gqq) * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        for (std::size_t k = 0; k < n; ++k) { // V <- V G
          const cplx vkp = v(k, p);
          const cplx vkq = v(k, q);
          v(k, p) = vkp * gpp + vkq * gqp;
          v(k, q) = vkp * gpq + vkq * gqq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return a(x, x).real() < a(y, y).real(); });

  EigenDecomposition out;
  out.sweeps = sweep;
  for (std::size_t k : order) {
    out.values.push_back(a(k, k).real());
    std::vector<cplx> col(n);
    double nrm = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      col[r] = v(r, k);
      nrm += std::norm(col[r]);
    }
    nrm = std::sqrt(nrm);
    for (cplx& c : col) c /= nrm;
    out.vectors.push_back(std::move(col));
  }
  return out;
}

} // namespace latentvqe
