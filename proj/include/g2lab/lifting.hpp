#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "g2lab/reduced_relation.hpp"

namespace g2lab {

struct MetricMismatch : std::runtime_error {
  explicit MetricMismatch(const std::string& what) : std::runtime_error(what) {}
};
struct OrientationFlip : std::runtime_error {
  explicit OrientationFlip(const std::string& what)
      : std::runtime_error(what) {}
};
struct FrameMetricMismatch : std::runtime_error {
  explicit FrameMetricMismatch(const std::string& what)
      : std::runtime_error(what) {}
};
struct WitnessFailure : std::runtime_error {
  explicit WitnessFailure(const std::string& what) : std::runtime_error(what) {}
};

/// Unique symmetric S with d(E^T E)/dt = Gamma_dot when E' = S E:
/// S = (1/2) E^{-T} Gamma_dot E^{-1}.
Eigen::Matrix3d horizontal_velocity(const Eigen::Matrix3d& etilde,
                                    const Eigen::Matrix3d& gamma_dot);

struct LiftPath {
  std::vector<double> t;
  std::vector<Eigen::Matrix3d> frames;      // lifted frames per sample
  std::vector<Eigen::Matrix3d> velocities;  // symmetric S per sample
  double max_tracking_residual = 0.0;       // max |E^T E - Gamma|_inf
};

/// Integrates E' = S(E, Gamma_dot(t)) E from e_init across the sampled
/// metric path (one 4th-order step per interval; the metric and its
/// velocity are interpolated by a cubic Hermite polynomial per interval).
/// The frame metric tracks Gamma at fourth order and det stays positive.
LiftPath horizontal_lift(const ReducedPath& path,
                         const Eigen::Matrix3d& e_init);

struct GaugeResult {
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  double defect = 0.0;  // |X^T X - Id|_inf before the polar projection
};

/// Rotation closest to first * second^{-1} (polar projection).  The two
/// frames must induce the same metric; the pre-projection orthogonality
/// defect must be <= 1e-8 (MetricMismatch otherwise) and the result must be
/// orientation-preserving (OrientationFlip otherwise).
GaugeResult recover_gauge(const Eigen::Matrix3d& first,
                          const Eigen::Matrix3d& second);

struct PipelineOptions {
  double tol_tracking = 1e-8;
  double tol_defect = 1e-8;
  double tol_evolution = 1e-4;
  double tau_f = 1e-6;
};

struct PipelineResult {
  LiftPath lift;
  Eigen::Matrix3d tau = Eigen::Matrix3d::Identity();
  double tau_defect = 0.0;
  double max_evolution_residual = 0.0;
  double gauge_coherence_residual = 0.0;
  bool one_one_all = false;
  ReducedCheckReport reduced_report;
};

/// Full witness pipeline for a gated trace: project, verify the reduced
/// identity, lift horizontally from the trace's initial frame, recover the
/// gauge rotation against the trace's final frame, and verify the witness
/// family psi_k = assemble_psi(f_k, levi_civita(E_k), E_k),
/// omega_k = assemble_omega(S_k, .): wedge-orthogonality at every sample,
/// the evolution identity at interior samples, and metric coherence of the
/// endpoints.  Throws WitnessFailure when any check fails.
PipelineResult theorem3_pipeline(const FlowTrace& trace,
                                 const ModelAlgebra& alg,
                                 const PipelineOptions& opt = {});

/// CSV export: per-sample `t,E11..E33,S11..S33,tracking_residual`.
std::string lift_path_to_csv(const LiftPath& lift, const ReducedPath& path);

}  // namespace g2lab
