#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "g2lab/homogeneous.hpp"
#include "g2lab/invariant_forms.hpp"

namespace g2lab {

/// The positivity gate rejected an evaluated K (min eigenvalue of the
/// symmetric part below the configured floor).
struct PolicyViolation : std::runtime_error {
  PolicyViolation(double when, double eig)
      : std::runtime_error("policy gate: symmetric part of K has eigenvalue " +
                           std::to_string(eig) + " at t = " +
                           std::to_string(when)),
        t(when),
        min_eig(eig) {}
  double t;
  double min_eig;
};

/// The scale function f reached a non-positive value; the family leaves the
/// admissible region and integration stops.
struct NonPositiveF : std::runtime_error {
  explicit NonPositiveF(double when)
      : std::runtime_error("f became non-positive at t = " +
                           std::to_string(when)),
        t(when) {}
  double t;
};

struct TooFewRecords : std::runtime_error {
  explicit TooFewRecords(const std::string& what) : std::runtime_error(what) {}
};

struct FlowState {
  double t = 0.0;
  Eigen::Matrix3d E = Eigen::Matrix3d::Identity();
  double f = 1.0;
};

/// Velocity matrix source, evaluated at every integrator stage.
using KPolicy = std::function<Eigen::Matrix3d(const FlowState&)>;

inline KPolicy constant_policy(const Eigen::Matrix3d& k) {
  return [k](const FlowState&) { return k; };
}

struct FlowRecord {
  double t;
  Eigen::Matrix3d E;
  double f;
  Eigen::Matrix3d K;  // policy value at the record
  Eigen::Matrix3d A;  // Levi-Civita connection of E
  Eigen::Matrix3d G;  // curvature matrix of (A, E)
};

struct FlowTrace {
  std::vector<FlowRecord> records;
  double step = 0.0;
  std::string model;
  std::string policy_desc;
  std::uint64_t seed = 0;
};

struct FlowRhs {
  Eigen::Matrix3d Edot;
  double fdot;
};

/// Evolution right-hand side: Edot = K E, fdot = -f tr(K) - tr(K G) with
/// G the curvature of the Levi-Civita connection of E.
FlowRhs flow_rhs(const FlowState& s, const Eigen::Matrix3d& K,
                 const ModelAlgebra& alg);

/// Classical 4th-order fixed-step integration of the evolution system over
/// [t1, t2].  The policy is gated at every stage: min eig of sym(K) must be
/// >= kappa_min (PolicyViolation otherwise); f must stay positive
/// (NonPositiveF).  Records are written at t1 and after every step.
FlowTrace integrate(const FlowState& s0, const KPolicy& policy, double t1,
                    double t2, int steps, const ModelAlgebra& alg,
                    double kappa_min = 1e-3);

/// Per-record closedness/evolution residuals:
///   r_closed = |slice_d(psi_t)|_inf (uses the recorded connection, so a
///   corrupted trace is detected);
///   r_evolution = |(psi_{k+1}-psi_{k-1})/(2h) - slice_d(omega_k)|_inf at
///   interior records, NaN at the two endpoints.
std::vector<std::pair<double, double>> dphi_residual(const FlowTrace& trace,
                                                     const ModelAlgebra& alg);

struct VolumeReport {
  bool monotone = false;              // det E strictly increases step-to-step
  std::vector<double> det_e;          // per record
  std::vector<double> tr_k;           // per record
  double max_derivative_residual = 0; // |d(detE)/dt - trK detE| (interior)
};

/// Frame-volume monotonicity monitor; a true verdict certifies that the
/// initial and final 3-forms differ.
VolumeReport volume_monotone(const FlowTrace& trace);

/// psi and omega of a trace record (assembled from the recorded data).
AltForm record_psi(const FlowRecord& r);
AltForm record_omega(const FlowRecord& r);

/// 7-dimensional product form of a state under velocity K:
/// wedge(omega, dt) + psi, with the Levi-Civita connection of E.
AltForm assemble_phi(const FlowState& s, const Eigen::Matrix3d& k,
                     const ModelAlgebra& alg);

}  // namespace g2lab
