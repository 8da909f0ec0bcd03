#include "drw/eigensolver.hpp"

#include <algorithm>
#include <cstddef>
#include <mutex>
#include <random>
#include <string>

#include <Eigen/SparseLU>

#include "drw/error.hpp"

extern "C" {
void dnaupd_(int* ido, const char* bmat, const int* n, const char* which, const int* nev,
             const double* tol, double* resid, const int* ncv, double* v, const int* ldv,
             int* iparam, int* ipntr, double* workd, double* workl, const int* lworkl, int* info,
             std::size_t bmat_len, std::size_t which_len);
void dneupd_(const int* rvec, const char* howmny, int* select, double* dr, double* di, double* z,
             const int* ldz, const double* sigmar, const double* sigmai, double* workev,
             const char* bmat, const int* n, const char* which, const int* nev, const double* tol,
             double* resid, const int* ncv, double* v, const int* ldv, int* iparam, int* ipntr,
             double* workd, double* workl, const int* lworkl, int* info, std::size_t howmny_len,
             std::size_t bmat_len, std::size_t which_len);
}

namespace drw {

namespace {
// dnaupd/dneupd keep their iteration state in Fortran SAVE variables, so only
// one Arnoldi iteration may run at a time. Factorisation stays outside.
std::mutex arpack_mutex;
}  // namespace

std::vector<EigenPair> shift_invert_eigs(const Eigen::SparseMatrix<double>& a, double sigma,
                                         int nev, const EigsOptions& opts) {
  const int n = static_cast<int>(a.rows());
  if (a.rows() != a.cols() || n < 3) throw Error(ErrorCode::InvalidArgument, "eigs: bad matrix");
  nev = std::min(nev, n - 2);
  if (nev < 1) throw Error(ErrorCode::InvalidArgument, "eigs: nev must be >= 1");
  int ncv = opts.ncv > 0 ? opts.ncv : std::max(3 * nev, 40);
  ncv = std::min(std::max(ncv, nev + 2), n);

  Eigen::SparseMatrix<double> shifted = a;
  Eigen::SparseMatrix<double> eye(n, n);
  eye.setIdentity();
  shifted -= sigma * eye;
  shifted.makeCompressed();
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
  lu.analyzePattern(shifted);
  lu.factorize(shifted);
  if (lu.info() != Eigen::Success)
    throw Error(ErrorCode::Solver, "shifted operator is singular: " + lu.lastErrorMessage());

  const char bmat = 'I';
  const char which[] = "LM";
  const int lworkl = 3 * ncv * ncv + 6 * ncv;
  std::vector<double> resid(n), v(static_cast<std::size_t>(n) * ncv), workd(3 * n),
      workl(lworkl);
  int iparam[11] = {0};
  int ipntr[14] = {0};
  iparam[0] = 1;  // exact shifts
  iparam[2] = opts.max_restarts;
  iparam[6] = 1;  // OP = (A - sigma I)^-1 applied by us

  // Fixed start vector: results must not depend on global RNG state.
  std::mt19937_64 rng(0x5eed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (auto& r : resid) r = dist(rng);
  int info = 1;
  int ido = 0;
  const double tol = opts.tol;

  Eigen::VectorXd rhs(n), sol(n);
  std::lock_guard<std::mutex> lock(arpack_mutex);
  while (true) {
    dnaupd_(&ido, &bmat, &n, which, &nev, &tol, resid.data(), &ncv, v.data(), &n, iparam, ipntr,
            workd.data(), workl.data(), &lworkl, &info, 1, 2);
    if (ido == -1 || ido == 1) {
      std::copy_n(workd.data() + ipntr[0] - 1, n, rhs.data());
      sol = lu.solve(rhs);
      std::copy_n(sol.data(), n, workd.data() + ipntr[1] - 1);
    } else {
      break;
    }
  }
  if (info < 0) throw Error(ErrorCode::Solver, "dnaupd failed with info " + std::to_string(info));
  if (info == 1) throw Error(ErrorCode::Solver, "dnaupd: maximum restarts reached");

  const int rvec = 1;
  const char howmny = 'A';
  std::vector<int> select(ncv);
  std::vector<double> dr(nev + 1), di(nev + 1), z(static_cast<std::size_t>(n) * (nev + 1)),
      workev(3 * ncv);
  const double zero = 0.0;
  int info2 = 0;
  dneupd_(&rvec, &howmny, select.data(), dr.data(), di.data(), z.data(), &n, &zero, &zero,
          workev.data(), &bmat, &n, which, &nev, &tol, resid.data(), &ncv, v.data(), &n, iparam,
          ipntr, workd.data(), workl.data(), &lworkl, &info2, 1, 1, 2);
  if (info2 != 0) throw Error(ErrorCode::Solver, "dneupd failed with info " + std::to_string(info2));

  const int nconv = iparam[4];
  std::vector<EigenPair> out;
  for (int k = 0; k < nconv && k < nev + 1; ++k) {
    const std::complex<double> mu(dr[k], di[k]);
    if (std::abs(mu) == 0.0) continue;
    EigenPair ep;
    ep.value = sigma + 1.0 / mu;
    ep.vector.resize(n);
    const double* re = z.data() + static_cast<std::size_t>(k) * n;
    if (di[k] == 0.0) {
      for (int i = 0; i < n; ++i) ep.vector[i] = re[i];
    } else if (di[k] > 0.0 && k + 1 < nev + 1) {
      const double* im = re + n;
      for (int i = 0; i < n; ++i) ep.vector[i] = {re[i], im[i]};
      out.push_back(ep);
      EigenPair conj_pair{std::conj(ep.value), ep.vector.conjugate()};
      out.push_back(std::move(conj_pair));
      ++k;
      continue;
    } else {
      continue;
    }
    out.push_back(std::move(ep));
  }
  std::stable_sort(out.begin(), out.end(), [sigma](const EigenPair& l, const EigenPair& r) {
    return std::abs(l.value - sigma) < std::abs(r.value - sigma);
  });
  if (static_cast<int>(out.size()) > nev) out.resize(nev);
  return out;
}

}  // namespace drw
