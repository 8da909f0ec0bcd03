#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace drw {

struct EigsOptions {
  int ncv = 0;            // Krylov dimension; 0 picks max(3 nev, 40)
  int max_restarts = 3000;
  double tol = 1e-12;
};

struct EigenPair {
  std::complex<double> value;
  Eigen::VectorXcd vector;
};

// The `nev` eigenvalues of a real sparse matrix closest to the real shift
// sigma, via ARPACK on (A - sigma I)^-1. Sorted by |lambda - sigma|.
std::vector<EigenPair> shift_invert_eigs(const Eigen::SparseMatrix<double>& a, double sigma,
                                         int nev, const EigsOptions& opts = {});

}  // namespace drw
