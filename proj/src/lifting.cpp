#include "g2lab/lifting.hpp"

#include <cmath>
#include <cstdio>

#include "g2lab/homogeneous.hpp"
#include "g2lab/invariant_forms.hpp"

namespace g2lab {

namespace {

Eigen::Matrix3d sym(const Eigen::Matrix3d& m) {
  return 0.5 * (m + m.transpose());
}

double inf_norm(const Eigen::Matrix3d& m) {
  return m.cwiseAbs().maxCoeff();
}

/// Cubic Hermite velocity of the metric across one interval, evaluated at
/// local coordinate tau in [0, 1]; d/dt = (1/h) d/dtau.
Eigen::Matrix3d hermite_velocity(const Eigen::Matrix3d& g0,
                                 const Eigen::Matrix3d& g1,
                                 const Eigen::Matrix3d& d0,
                                 const Eigen::Matrix3d& d1, double h,
                                 double tau) {
  const double t2 = tau * tau;
  const double dh00 = 6.0 * t2 - 6.0 * tau;
  const double dh10 = 3.0 * t2 - 4.0 * tau + 1.0;
  const double dh01 = -6.0 * t2 + 6.0 * tau;
  const double dh11 = 3.0 * t2 - 2.0 * tau;
  return (dh00 / h) * g0 + dh10 * d0 + (dh01 / h) * g1 + dh11 * d1;
}

}  // namespace

Eigen::Matrix3d horizontal_velocity(const Eigen::Matrix3d& etilde,
                                    const Eigen::Matrix3d& gamma_dot) {
  const double asym = inf_norm(gamma_dot - gamma_dot.transpose());
  if (asym > 1e-12 * (1.0 + inf_norm(gamma_dot))) {
    throw std::invalid_argument("metric velocity must be symmetric");
  }
  Eigen::FullPivLU<Eigen::Matrix3d> lu(etilde);
  if (!lu.isInvertible()) {
    throw SingularFrame("frame is singular in horizontal_velocity");
  }
  const Eigen::Matrix3d inv = lu.inverse();
  return sym(0.5 * inv.transpose() * sym(gamma_dot) * inv);
}

LiftPath horizontal_lift(const ReducedPath& path,
                         const Eigen::Matrix3d& e_init) {
  if (path.size() < 2) {
    throw TooFewSamples("horizontal_lift needs at least two samples");
  }
  const Eigen::Matrix3d gamma0 = path.gamma(0);
  const double scale0 = std::max(1.0, inf_norm(gamma0));
  if (inf_norm(e_init.transpose() * e_init - gamma0) > 1e-10 * scale0) {
    throw FrameMetricMismatch(
        "initial frame does not induce the initial metric");
  }
  if (e_init.determinant() <= 0.0) {
    throw std::invalid_argument("initial frame must have positive det");
  }

  LiftPath out;
  out.t.reserve(path.size());
  out.frames.reserve(path.size());
  out.velocities.reserve(path.size());
  out.t.push_back(path.t(0));
  out.frames.push_back(e_init);

  Eigen::Matrix3d e = e_init;
  for (int k = 0; k + 1 < path.size(); ++k) {
    const double h = path.t(k + 1) - path.t(k);
    const Eigen::Matrix3d g0 = path.gamma(k);
    const Eigen::Matrix3d g1 = path.gamma(k + 1);
    const Eigen::Matrix3d d0 = path.gamma_dot(k);
    const Eigen::Matrix3d d1 = path.gamma_dot(k + 1);
    auto rhs = [&](double tau, const Eigen::Matrix3d& frame) {
      return horizontal_velocity(frame,
                                 hermite_velocity(g0, g1, d0, d1, h, tau)) *
             frame;
    };
    const Eigen::Matrix3d k1 = rhs(0.0, e);
    const Eigen::Matrix3d k2 = rhs(0.5, e + 0.5 * h * k1);
    const Eigen::Matrix3d k3 = rhs(0.5, e + 0.5 * h * k2);
    const Eigen::Matrix3d k4 = rhs(1.0, e + h * k3);
    e += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (e.determinant() <= 0.0) {
      throw SingularFrame("lifted frame lost positive orientation");
    }
    out.t.push_back(path.t(k + 1));
    out.frames.push_back(e);
  }

  double worst = 0.0;
  for (int k = 0; k < path.size(); ++k) {
    out.velocities.push_back(
        horizontal_velocity(out.frames[static_cast<size_t>(k)],
                            path.gamma_dot(k)));
    worst = std::max(worst,
                     inf_norm(out.frames[static_cast<size_t>(k)].transpose() *
                                  out.frames[static_cast<size_t>(k)] -
                              path.gamma(k)));
  }
  out.max_tracking_residual = worst;
  return out;
}

GaugeResult recover_gauge(const Eigen::Matrix3d& first,
                          const Eigen::Matrix3d& second) {
  Eigen::FullPivLU<Eigen::Matrix3d> lu(second);
  if (!lu.isInvertible()) {
    throw SingularFrame("second frame is singular in recover_gauge");
  }
  const Eigen::Matrix3d m1 = first.transpose() * first;
  const Eigen::Matrix3d m2 = second.transpose() * second;
  if (inf_norm(m1 - m2) > 1e-8 * std::max(1.0, inf_norm(m2))) {
    throw MetricMismatch("frames do not induce the same metric");
  }
  const Eigen::Matrix3d x = first * lu.inverse();
  GaugeResult out;
  out.defect = inf_norm(x.transpose() * x - Eigen::Matrix3d::Identity());
  if (out.defect > 1e-8) {
    throw MetricMismatch("orthogonality defect above tolerance");
  }
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(
      x, Eigen::ComputeFullU | Eigen::ComputeFullV);
  out.rotation = svd.matrixU() * svd.matrixV().transpose();
  if (out.rotation.determinant() < 0.0) {
    throw OrientationFlip("recovered gauge reverses orientation");
  }
  return out;
}

PipelineResult theorem3_pipeline(const FlowTrace& trace,
                                 const ModelAlgebra& alg,
                                 const PipelineOptions& opt) {
  if (trace.records.size() < 3) {
    throw TooFewRecords("pipeline needs at least three records");
  }
  PipelineResult out;
  ReducedPath path = project_trace(trace);

  out.reduced_report = check_reduced(path, alg, opt.tau_f);
  if (!out.reduced_report.verdict) {
    throw WitnessFailure("reduced identity failed: " +
                         out.reduced_report.witness_reason);
  }

  out.lift = horizontal_lift(path, trace.records.front().E);
  if (out.lift.max_tracking_residual > opt.tol_tracking) {
    throw WitnessFailure("lift does not track the metric path");
  }

  GaugeResult gauge =
      recover_gauge(trace.records.back().E, out.lift.frames.back());
  out.tau = gauge.rotation;
  out.tau_defect = gauge.defect;
  if (out.tau_defect > opt.tol_defect) {
    throw WitnessFailure("gauge rotation defect above tolerance");
  }

  const int n = path.size();
  std::vector<AltForm> psis;
  std::vector<AltForm> omegas;
  psis.reserve(static_cast<size_t>(n));
  omegas.reserve(static_cast<size_t>(n));
  out.one_one_all = true;
  for (int k = 0; k < n; ++k) {
    InvariantTriple triple;
    triple.f = path.f(k);
    triple.E = out.lift.frames[static_cast<size_t>(k)];
    triple.A = levi_civita(triple.E, alg);
    const AltForm psi = assemble_psi(triple);
    const AltForm omega =
        assemble_omega(out.lift.velocities[static_cast<size_t>(k)], triple);
    if (!is_one_one(omega, psi)) {
      out.one_one_all = false;
      throw WitnessFailure("witness pair is not wedge-orthogonal at sample " +
                           std::to_string(k));
    }
    psis.push_back(psi);
    omegas.push_back(omega);
  }

  double worst = 0.0;
  for (int k = 1; k + 1 < n; ++k) {
    const double span = path.t(k + 1) - path.t(k - 1);
    AltForm diff = psis[static_cast<size_t>(k + 1)];
    diff -= psis[static_cast<size_t>(k - 1)];
    diff *= 1.0 / span;
    diff -= slice_d(omegas[static_cast<size_t>(k)], alg);
    worst = std::max(worst, diff.norm_inf());
  }
  out.max_evolution_residual = worst;
  if (worst > opt.tol_evolution) {
    throw WitnessFailure("evolution identity residual above tolerance");
  }

  const Eigen::Matrix3d gamma_end = path.gamma(n - 1);
  const Eigen::Matrix3d lifted_end = out.lift.frames.back();
  out.gauge_coherence_residual =
      inf_norm(lifted_end.transpose() * lifted_end - gamma_end);
  if (out.gauge_coherence_residual >
      1e-8 * std::max(1.0, inf_norm(gamma_end))) {
    throw WitnessFailure("endpoint metrics disagree");
  }
  return out;
}

std::string lift_path_to_csv(const LiftPath& lift, const ReducedPath& path) {
  std::string out =
      "t,E11,E12,E13,E21,E22,E23,E31,E32,E33,"
      "S11,S12,S13,S21,S22,S23,S31,S32,S33,tracking_residual\n";
  char buf[64];
  auto put = [&](double v, char sep) {
    std::snprintf(buf, sizeof(buf), "%.17g%c", v, sep);
    out += buf;
  };
  for (size_t k = 0; k < lift.t.size(); ++k) {
    put(lift.t[k], ',');
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        put(lift.frames[k](i, j), ',');
      }
    }
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        put(lift.velocities[k](i, j), ',');
      }
    }
    const Eigen::Matrix3d res = lift.frames[k].transpose() * lift.frames[k] -
                                path.gamma(static_cast<int>(k));
    put(res.cwiseAbs().maxCoeff(), '\n');
  }
  return out;
}

}  // namespace g2lab
