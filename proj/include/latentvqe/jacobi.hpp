#pragma once

#include <cstddef>
#include <vector>

#include "latentvqe/pauli.hpp"

namespace latentvqe {

// Dense square complex matrix, row-major.
struct DenseMatrix {
  std::size_t dim = 0;
  std::vector<cplx> data;

  explicit DenseMatrix(std::size_t n = 0) : dim(n), data(n * n, cplx{0.0, 0.0}) {}
  cplx& operator()(std::size_t r, std::size_t c) { return data[r * dim + c]; }
  const cplx& operator()(std::size_t r, std::size_t c) const { return data[r * dim + c]; }

  double off_diagonal_norm() const;
  bool is_hermitian(double tol) const;
};

struct EigenDecomposition {
  std::vector<double> values;             // ascending
  std::vector<std::vector<cplx>> vectors; // vectors[k] pairs with values[k], unit norm
  int sweeps = 0;
};

/// Cyclic complex Jacobi rotations until the off-diagonal Frobenius norm drops
/// below `tolerance`. Throws NumericalError after `max_sweeps` sweeps.
EigenDecomposition jacobi_eigen(DenseMatrix a, double tolerance = 1e-12, int max_sweeps = 200);

} // namespace latentvqe
