#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "drw/bend.hpp"
#include "drw/fdfd.hpp"
#include "drw/sparams.hpp"

namespace drw {

struct TaperSegment {
  double length;  // m, >= 0
  CrossSection cs;
};

// Staircase taper between two port cross-sections. The ports themselves have
// no length; an empty segment list is an abrupt butt junction.
class TaperProfile {
 public:
  TaperProfile(CrossSection in, CrossSection out, std::vector<TaperSegment> segments);

  const CrossSection& in() const { return in_; }
  const CrossSection& out() const { return out_; }
  const std::vector<TaperSegment>& segments() const { return segments_; }
  double total_length() const;

  // Port, segments, port.
  std::vector<CrossSection> sections() const;

  // Same geometry with the core loss tangent replaced everywhere.
  TaperProfile with_tan_delta(double core_tan_delta) const;

 private:
  CrossSection in_;
  CrossSection out_;
  std::vector<TaperSegment> segments_;
};

// n equal segments whose dimensions interpolate linearly at the segment
// midpoints. With `f_check`, every section must carry a guided fundamental
// (Marcatili estimate) at that frequency, else TaperInfeasible.
TaperProfile make_linear_taper(const CrossSection& cs_in, const CrossSection& cs_out,
                               double length, int n_segments,
                               std::optional<double> f_check = std::nullopt);

// Launch guide used when none is configured: same materials, each dimension
// scaled by `scale` (sqrt 3 gives three times the cross-section area).
CrossSection default_launch(const CrossSection& channel, double scale = 1.7320508075688772);

struct Junction {
  Eigen::MatrixXcd s;        // (nl + nr) square, left ports first
  Eigen::MatrixXd overlap;   // nl x nr, <left_i|right_j>
  int n_left = 0;
  int n_right = 0;
  // Per-mode power not carried by the other side's retained modes,
  // 1 - sum_j overlap_ij^2 (can be slightly negative from discretisation).
  std::vector<double> truncated_left;
  std::vector<double> truncated_right;
  double max_imag_overlap = 0.0;
};

// Lossless, reciprocal junction from the overlap matrix O = U diag(sigma) V^T:
// per singular channel r = (1 - sigma^2) / (1 + sigma^2), t = 2 sigma / (1 + sigma^2).
Junction junction_from_modes(const std::vector<ModeSolution>& left,
                             const std::vector<ModeSolution>& right);

Junction junction_scattering(const CrossSection& left, const CrossSection& right, double f,
                             int n_modes, const SolverSettings& s = {});

struct TaperResult {
  SParameterSet fundamental;  // 2-port, fundamental to fundamental
  std::vector<Eigen::MatrixXcd> multimode;  // full cascade per frequency
  std::vector<int> n_in;                    // retained modes at the input port
  // Worst truncated power over all junctions, per frequency.
  std::vector<double> max_truncated;
};

TaperResult cascade(const TaperProfile& profile, const FrequencyGrid& fg, int n_modes = 5,
                    const SolverSettings& s = {}, int workers = 1);

// max over junctions of (1 - |<psi_k|psi_k+1>|^2) / len, len being the
// mean length of the segments adjacent to the junction (ports count as 0).
double adiabaticity(const TaperProfile& profile, double f, const SolverSettings& s = {});

// Taper, straight guide, bends, taper. Each bend is a matched 2-port with
// |S21| set by its excess loss (clamped at 0 dB). `core_tan_delta` applies to
// every piece.
SParameterSet end_to_end_link(const TaperProfile& taper_in, double straight_length,
                              const std::vector<BendSpec>& bends, const TaperProfile& taper_out,
                              const FrequencyGrid& fg, double core_tan_delta,
                              const SolverSettings& s = {}, int n_modes = 5, int workers = 1);

// Matched 2-port with the given excess loss in dB (real, positive S21).
SParameterSet attenuator(const FrequencyGrid& fg, const std::vector<double>& loss_db);

}  // namespace drw
