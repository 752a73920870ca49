#include "g2lab/cobordism_flow.hpp"

#include <cmath>
#include <limits>

namespace g2lab {
namespace {

double min_sym_eig(const Eigen::Matrix3d& k) {
  Eigen::Matrix3d sym = 0.5 * (k + k.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(sym);
  return es.eigenvalues().minCoeff();
}

Eigen::Matrix3d gated_policy_value(const KPolicy& policy, const FlowState& s,
                                   double kappa_min) {
  Eigen::Matrix3d k = policy(s);
  double eig = min_sym_eig(k);
  if (eig < kappa_min) throw PolicyViolation(s.t, eig);
  return k;
}

}  // namespace

FlowRhs flow_rhs(const FlowState& s, const Eigen::Matrix3d& K,
                 const ModelAlgebra& alg) {
  Eigen::Matrix3d a = levi_civita(s.E, alg);
  Eigen::Matrix3d g = curvature(a, s.E, alg);
  FlowRhs rhs;
  rhs.Edot = K * s.E;
  rhs.fdot = -s.f * K.trace() - (K * g).trace();
  return rhs;
}

FlowTrace integrate(const FlowState& s0, const KPolicy& policy, double t1,
                    double t2, int steps, const ModelAlgebra& alg,
                    double kappa_min) {
  if (!(t1 < t2)) throw std::invalid_argument("integrate requires t1 < t2");
  if (steps < 1) throw std::invalid_argument("integrate requires steps >= 1");
  if (!(s0.f > 0.0)) throw NonPositiveF(t1);
  if (!(s0.E.determinant() > 0.0))
    throw SingularFrame("initial frame must have positive determinant");

  double h = (t2 - t1) / steps;
  FlowTrace trace;
  trace.step = h;
  trace.model = alg.name();

  auto record = [&trace, &policy, &alg, kappa_min](const FlowState& s) {
    FlowRecord r;
    r.t = s.t;
    r.E = s.E;
    r.f = s.f;
    r.K = gated_policy_value(policy, s, kappa_min);
    r.A = levi_civita(s.E, alg);
    r.G = curvature(r.A, s.E, alg);
    trace.records.push_back(r);
  };

  FlowState s = s0;
  s.t = t1;
  record(s);
  auto eval = [&](double t, const Eigen::Matrix3d& e, double f) {
    FlowState stage{t, e, f};
    Eigen::Matrix3d k = gated_policy_value(policy, stage, kappa_min);
    return flow_rhs(stage, k, alg);
  };
  for (int i = 0; i < steps; ++i) {
    double t = t1 + i * h;
    FlowRhs k1 = eval(t, s.E, s.f);
    FlowRhs k2 = eval(t + 0.5 * h, s.E + 0.5 * h * k1.Edot,
                      s.f + 0.5 * h * k1.fdot);
    FlowRhs k3 = eval(t + 0.5 * h, s.E + 0.5 * h * k2.Edot,
                      s.f + 0.5 * h * k2.fdot);
    FlowRhs k4 = eval(t + h, s.E + h * k3.Edot, s.f + h * k3.fdot);
    s.E += (h / 6.0) * (k1.Edot + 2.0 * k2.Edot + 2.0 * k3.Edot + k4.Edot);
    s.f += (h / 6.0) * (k1.fdot + 2.0 * k2.fdot + 2.0 * k3.fdot + k4.fdot);
    s.t = t1 + (i + 1) * h;
    if (!(s.f > 0.0)) throw NonPositiveF(s.t);
    if (!(s.E.determinant() > 0.0))
      throw SingularFrame("frame left the positive-determinant component");
    record(s);
  }
  return trace;
}

AltForm record_psi(const FlowRecord& r) {
  return assemble_psi(InvariantTriple{r.f, r.A, r.E});
}

AltForm record_omega(const FlowRecord& r) {
  return assemble_omega(r.K, InvariantTriple{r.f, r.A, r.E});
}

AltForm assemble_phi(const FlowState& s, const Eigen::Matrix3d& k,
                     const ModelAlgebra& alg) {
  const InvariantTriple triple{s.f, levi_civita(s.E, alg), s.E};
  return assemble_phi(assemble_omega(k, triple), assemble_psi(triple));
}

std::vector<std::pair<double, double>> dphi_residual(const FlowTrace& trace,
                                                     const ModelAlgebra& alg) {
  const auto& rec = trace.records;
  if (rec.size() < 3)
    throw TooFewRecords("dphi_residual needs at least 3 records");
  std::vector<AltForm> psi(rec.size());
  for (std::size_t k = 0; k < rec.size(); ++k) psi[k] = record_psi(rec[k]);
  std::vector<std::pair<double, double>> out(rec.size());
  double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t k = 0; k < rec.size(); ++k) {
    double r_closed = slice_d(psi[k], alg).norm_inf();
    double r_evolution = nan;
    if (k > 0 && k + 1 < rec.size()) {
      double dt = rec[k + 1].t - rec[k - 1].t;
      AltForm diff = psi[k + 1] - psi[k - 1];
      diff *= 1.0 / dt;
      diff -= slice_d(record_omega(rec[k]), alg);
      r_evolution = diff.norm_inf();
    }
    out[k] = {r_closed, r_evolution};
  }
  return out;
}

VolumeReport volume_monotone(const FlowTrace& trace) {
  VolumeReport rep;
  const auto& rec = trace.records;
  rep.det_e.reserve(rec.size());
  rep.tr_k.reserve(rec.size());
  for (const auto& r : rec) {
    rep.det_e.push_back(r.E.determinant());
    rep.tr_k.push_back(r.K.trace());
  }
  rep.monotone = rec.size() >= 2;
  for (std::size_t k = 0; k + 1 < rep.det_e.size(); ++k)
    if (!(rep.det_e[k + 1] > rep.det_e[k])) rep.monotone = false;
  for (std::size_t k = 1; k + 1 < rec.size(); ++k) {
    double dt = rec[k + 1].t - rec[k - 1].t;
    double ddet = (rep.det_e[k + 1] - rep.det_e[k - 1]) / dt;
    double resid = std::abs(ddet - rep.tr_k[k] * rep.det_e[k]);
    rep.max_derivative_residual = std::max(rep.max_derivative_residual, resid);
  }
  return rep;
}

}  // namespace g2lab
