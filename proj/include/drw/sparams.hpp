#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "drw/geometry.hpp"

namespace drw {

// Per-frequency scattering matrices over power-normalised modal waves.
// Ports are ordered left block first, then right block.
class SParameterSet {
 public:
  SParameterSet(FrequencyGrid freqs, std::vector<Eigen::MatrixXcd> matrices);

  static SParameterSet identity(const FrequencyGrid& freqs, int n_ports = 2);

  int n_ports() const { return n_ports_; }
  const FrequencyGrid& frequencies() const { return freqs_; }
  std::size_t size() const { return mats_.size(); }
  const Eigen::MatrixXcd& at(std::size_t k) const { return mats_[k]; }
  const std::vector<Eigen::MatrixXcd>& matrices() const { return mats_; }

  // 1-based port indices, as in S21.
  std::complex<double> s(int out, int in, std::size_t k) const { return mats_[k](out - 1, in - 1); }

  // max over frequencies of (largest singular value - 1), clipped at 0.
  double passivity_violation() const;
  // max over frequencies of max |S - S^T|.
  double reciprocity_violation() const;

 private:
  FrequencyGrid freqs_;
  std::vector<Eigen::MatrixXcd> mats_;
  int n_ports_;
};

// Redheffer star product. `a` has n_a left ports and the remaining ports on
// the right; `b` has as many left ports as `a` has right ports.
Eigen::MatrixXcd star_product(const Eigen::MatrixXcd& a, int n_a_left, const Eigen::MatrixXcd& b);

// Frequency-wise star product of two 2-ports (or multiport pairs with
// matching inner port counts, left/right split at n_ports/2).
SParameterSet cascade(const SParameterSet& a, const SParameterSet& b);

double to_db(std::complex<double> s);

}  // namespace drw
