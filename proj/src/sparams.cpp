#include "drw/sparams.hpp"

#include <cmath>

#include "drw/error.hpp"

namespace drw {

SParameterSet::SParameterSet(FrequencyGrid freqs, std::vector<Eigen::MatrixXcd> matrices)
    : freqs_(std::move(freqs)), mats_(std::move(matrices)) {
  if (mats_.size() != freqs_.size())
    throw Error(ErrorCode::InvalidArgument, "one matrix per frequency required");
  n_ports_ = mats_.empty() ? 0 : static_cast<int>(mats_.front().rows());
  for (const auto& m : mats_)
    if (m.rows() != n_ports_ || m.cols() != n_ports_)
      throw Error(ErrorCode::InvalidArgument, "inconsistent S-matrix shapes");
}

SParameterSet SParameterSet::identity(const FrequencyGrid& freqs, int n_ports) {
  if (n_ports % 2 != 0) throw Error(ErrorCode::InvalidArgument, "identity needs even port count");
  const int h = n_ports / 2;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n_ports, n_ports);
  m.topRightCorner(h, h).setIdentity();
  m.bottomLeftCorner(h, h).setIdentity();
  return {freqs, std::vector<Eigen::MatrixXcd>(freqs.size(), m)};
}

double SParameterSet::passivity_violation() const {
  double worst = 0.0;
  for (const auto& m : mats_) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    worst = std::max(worst, svd.singularValues()(0) - 1.0);
  }
  return worst;
}

double SParameterSet::reciprocity_violation() const {
  double worst = 0.0;
  for (const auto& m : mats_) worst = std::max(worst, (m - m.transpose()).cwiseAbs().maxCoeff());
  return worst;
}

Eigen::MatrixXcd star_product(const Eigen::MatrixXcd& a, int na, const Eigen::MatrixXcd& b) {
  const int m = static_cast<int>(a.rows()) - na;
  const int nb = static_cast<int>(b.rows()) - m;
  if (m < 0 || nb < 0) throw Error(ErrorCode::InvalidArgument, "star product: port mismatch");
  const auto a11 = a.topLeftCorner(na, na);
  const auto a12 = a.topRightCorner(na, m);
  const auto a21 = a.bottomLeftCorner(m, na);
  const auto a22 = a.bottomRightCorner(m, m);
  const auto b11 = b.topLeftCorner(m, m);
  const auto b12 = b.topRightCorner(m, nb);
  const auto b21 = b.bottomLeftCorner(nb, m);
  const auto b22 = b.bottomRightCorner(nb, nb);
  const Eigen::MatrixXcd eye = Eigen::MatrixXcd::Identity(m, m);
  const Eigen::PartialPivLU<Eigen::MatrixXcd> l1(eye - b11 * a22);
  const Eigen::PartialPivLU<Eigen::MatrixXcd> l2(eye - a22 * b11);

  Eigen::MatrixXcd s(na + nb, na + nb);
  s.topLeftCorner(na, na) = a11 + a12 * l1.solve(b11 * a21);
  s.topRightCorner(na, nb) = a12 * l1.solve(b12);
  s.bottomLeftCorner(nb, na) = b21 * l2.solve(a21);
  s.bottomRightCorner(nb, nb) = b22 + b21 * l2.solve(a22 * b12);
  return s;
}

SParameterSet cascade(const SParameterSet& a, const SParameterSet& b) {
  if (!(a.frequencies() == b.frequencies()))
    throw Error(ErrorCode::InvalidArgument, "cascade: frequency grids differ");
  std::vector<Eigen::MatrixXcd> out;
  out.reserve(a.size());
  for (std::size_t k = 0; k < a.size(); ++k)
    out.push_back(star_product(a.at(k), a.n_ports() / 2, b.at(k)));
  return {a.frequencies(), std::move(out)};
}

double to_db(std::complex<double> s) {
  const double p = std::norm(s);
  return p > 0.0 ? 10.0 * std::log10(p) : -INFINITY;
}

}  // namespace drw
