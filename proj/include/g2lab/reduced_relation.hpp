#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "g2lab/cobordism_flow.hpp"
#include "g2lab/invariant_forms.hpp"

namespace g2lab {

struct TooFewSamples : std::runtime_error {
  explicit TooFewSamples(const std::string& what) : std::runtime_error(what) {}
};
struct NonSPDSample : std::runtime_error {
  explicit NonSPDSample(const std::string& what) : std::runtime_error(what) {}
};

/// Image of a triple under the projection to scale + frame metric.
struct ReducedPoint {
  double f = 1.0;
  Eigen::Matrix3d Gamma = Eigen::Matrix3d::Identity();
};

ReducedPoint project(const InvariantTriple& t);

/// Time-sampled reduced path (t, f, Gamma).  Derivatives come from exact
/// per-sample values when attached (projections of flow traces carry
/// Gamma_dot = E^T (K + K^T) E) and from second-order finite differences
/// otherwise.
class ReducedPath {
 public:
  ReducedPath() = default;
  ReducedPath(std::vector<double> t, std::vector<double> f,
              std::vector<Eigen::Matrix3d> gamma);

  void attach_gamma_dot(std::vector<Eigen::Matrix3d> gamma_dot);
  bool has_exact_gamma_dot() const { return !gamma_dot_.empty(); }

  int size() const { return static_cast<int>(t_.size()); }
  double t(int k) const { return t_[static_cast<std::size_t>(k)]; }
  double f(int k) const { return f_[static_cast<std::size_t>(k)]; }
  const Eigen::Matrix3d& gamma(int k) const {
    return gamma_[static_cast<std::size_t>(k)];
  }

  /// Exact when attached; otherwise central differences at interior samples
  /// and one-sided second-order stencils at the two ends.
  Eigen::Matrix3d gamma_dot(int k) const;
  /// Finite-difference derivative of f (same stencils).
  double f_dot(int k) const;

  /// Keep every stride-th sample (plus the last one if hit exactly).
  ReducedPath subsample(int stride) const;

 private:
  std::vector<double> t_;
  std::vector<double> f_;
  std::vector<Eigen::Matrix3d> gamma_;
  std::vector<Eigen::Matrix3d> gamma_dot_;
};

/// Projection of a whole trace, with exact metric velocities attached.
ReducedPath project_trace(const FlowTrace& trace);

struct ReducedCheckSample {
  double t = 0.0;
  double residual = 0.0;          // | fdot + (1/2) tr[(G + f Id) Gdot_onf] |
  double residual_literal = 0.0;  // | fdot + (1/2) (tr G + 3 f) |
  double min_gamma_dot_eig = 0.0;
};

struct ReducedCheckReport {
  bool verdict = false;
  std::vector<ReducedCheckSample> samples;  // interior samples only
  double max_residual = 0.0;
  double max_residual_literal = 0.0;
  double tolerance = 0.0;
  int witness_index = -1;  // index into samples when verdict is false
  std::string witness_reason;
};

/// Verifies the reduced evolution identity
///   fdot = -(1/2) tr[(G + f Id) Gamma_dot]   (orthonormal-frame contraction)
/// and positivity of Gamma_dot at every interior sample.  G is the Einstein
/// tensor of Gamma computed by the independent frame oracle.  The
/// "literal" residual replaces Gamma_dot by Gamma in the contraction and is
/// reported for comparison (see --paper-literal in the CLI).
ReducedCheckReport check_reduced(const ReducedPath& path,
                                 const ModelAlgebra& alg, double tau_f = 1e-6);

/// Max identity residual over the projection of a gated trace; the
/// executable consistency statement for flows.  With literal = true the
/// alternative contraction is used (expected to fail on curved models).
double theorem1_consistency(const FlowTrace& trace, const ModelAlgebra& alg,
                            bool literal = false);

/// CSV round-trip: header `t,f,G11,G12,G13,G21,G22,G23,G31,G32,G33`.
std::string reduced_path_to_csv(const ReducedPath& path);
ReducedPath reduced_path_from_csv(const std::string& csv);

}  // namespace g2lab
