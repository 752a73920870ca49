#include "g2lab/reduced_relation.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace g2lab {

ReducedPoint project(const InvariantTriple& t) {
  return ReducedPoint{t.f, metric_of_frame(t.E)};
}

ReducedPath::ReducedPath(std::vector<double> t, std::vector<double> f,
                         std::vector<Eigen::Matrix3d> gamma)
    : t_(std::move(t)), f_(std::move(f)), gamma_(std::move(gamma)) {
  if (t_.size() != f_.size() || t_.size() != gamma_.size())
    throw std::invalid_argument("reduced path columns have mismatched lengths");
  for (std::size_t k = 0; k + 1 < t_.size(); ++k)
    if (!(t_[k] < t_[k + 1]))
      throw std::invalid_argument("reduced path times must strictly increase");
}

void ReducedPath::attach_gamma_dot(std::vector<Eigen::Matrix3d> gamma_dot) {
  if (gamma_dot.size() != t_.size())
    throw std::invalid_argument("gamma_dot length mismatch");
  gamma_dot_ = std::move(gamma_dot);
}

Eigen::Matrix3d ReducedPath::gamma_dot(int k) const {
  if (!gamma_dot_.empty()) return gamma_dot_[static_cast<std::size_t>(k)];
  int n = size();
  if (n < 3) throw TooFewSamples("need at least 3 samples for derivatives");
  auto g = [this](int i) -> const Eigen::Matrix3d& {
    return gamma_[static_cast<std::size_t>(i)];
  };
  if (k == 0) {
    double h = t_[1] - t_[0];
    return (-3.0 * g(0) + 4.0 * g(1) - g(2)) / (2.0 * h);
  }
  if (k == n - 1) {
    double h = t_[static_cast<std::size_t>(n - 1)] -
               t_[static_cast<std::size_t>(n - 2)];
    return (3.0 * g(n - 1) - 4.0 * g(n - 2) + g(n - 3)) / (2.0 * h);
  }
  double dt = t_[static_cast<std::size_t>(k + 1)] -
              t_[static_cast<std::size_t>(k - 1)];
  return (g(k + 1) - g(k - 1)) / dt;
}

double ReducedPath::f_dot(int k) const {
  int n = size();
  if (n < 3) throw TooFewSamples("need at least 3 samples for derivatives");
  if (k == 0) {
    double h = t_[1] - t_[0];
    return (-3.0 * f_[0] + 4.0 * f_[1] - f_[2]) / (2.0 * h);
  }
  if (k == n - 1) {
    double h = t_[static_cast<std::size_t>(n - 1)] -
               t_[static_cast<std::size_t>(n - 2)];
    return (3.0 * f_[static_cast<std::size_t>(n - 1)] -
            4.0 * f_[static_cast<std::size_t>(n - 2)] +
            f_[static_cast<std::size_t>(n - 3)]) /
           (2.0 * h);
  }
  double dt = t_[static_cast<std::size_t>(k + 1)] -
              t_[static_cast<std::size_t>(k - 1)];
  return (f_[static_cast<std::size_t>(k + 1)] -
          f_[static_cast<std::size_t>(k - 1)]) /
         dt;
}

ReducedPath ReducedPath::subsample(int stride) const {
  if (stride < 1) throw std::invalid_argument("stride must be >= 1");
  std::vector<double> t, f;
  std::vector<Eigen::Matrix3d> g, gd;
  for (int k = 0; k < size(); k += stride) {
    t.push_back(t_[static_cast<std::size_t>(k)]);
    f.push_back(f_[static_cast<std::size_t>(k)]);
    g.push_back(gamma_[static_cast<std::size_t>(k)]);
    if (!gamma_dot_.empty())
      gd.push_back(gamma_dot_[static_cast<std::size_t>(k)]);
  }
  ReducedPath out(std::move(t), std::move(f), std::move(g));
  if (!gd.empty()) out.attach_gamma_dot(std::move(gd));
  return out;
}

ReducedPath project_trace(const FlowTrace& trace) {
  std::vector<double> t, f;
  std::vector<Eigen::Matrix3d> g, gd;
  t.reserve(trace.records.size());
  for (const auto& r : trace.records) {
    t.push_back(r.t);
    f.push_back(r.f);
    g.push_back(metric_of_frame(r.E));
    gd.push_back(r.E.transpose() * (r.K + r.K.transpose()) * r.E);
  }
  ReducedPath path(std::move(t), std::move(f), std::move(g));
  path.attach_gamma_dot(std::move(gd));
  return path;
}

ReducedCheckReport check_reduced(const ReducedPath& path,
                                 const ModelAlgebra& alg, double tau_f) {
  if (path.size() < 3)
    throw TooFewSamples("check_reduced needs at least 3 samples");
  ReducedCheckReport rep;
  rep.verdict = true;
  double hmax = 0.0;
  for (int k = 0; k + 1 < path.size(); ++k)
    hmax = std::max(hmax, path.t(k + 1) - path.t(k));
  double fdot_scale = 1.0;
  for (int k = 1; k + 1 < path.size(); ++k)
    fdot_scale = std::max(fdot_scale, std::abs(path.f_dot(k)));
  rep.tolerance = tau_f + 10.0 * hmax * hmax * fdot_scale;

  for (int k = 1; k + 1 < path.size(); ++k) {
    ReducedCheckSample s;
    s.t = path.t(k);
    const Eigen::Matrix3d& gamma = path.gamma(k);
    Eigen::LLT<Eigen::Matrix3d> llt(gamma);
    if (llt.info() != Eigen::Success)
      throw NonSPDSample("metric sample is not positive definite at t = " +
                         std::to_string(s.t));
    // Orthonormal frame of the sample: Gamma = L L^T, frame E = L^T.
    Eigen::Matrix3d e = llt.matrixL().transpose();
    Eigen::Matrix3d e_inv = e.inverse();
    Eigen::Matrix3d gdot = path.gamma_dot(k);
    Eigen::Matrix3d gdot_onf = e_inv.transpose() * gdot * e_inv;
    Eigen::Matrix3d g = einstein_oracle(e, alg);
    double fdot = path.f_dot(k);
    double f = path.f(k);
    s.residual = std::abs(
        fdot + 0.5 * ((g + f * Eigen::Matrix3d::Identity()) * gdot_onf).trace());
    s.residual_literal = std::abs(fdot + 0.5 * (g.trace() + 3.0 * f));
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(0.5 *
                                                      (gdot + gdot.transpose()));
    s.min_gamma_dot_eig = es.eigenvalues().minCoeff();
    rep.max_residual = std::max(rep.max_residual, s.residual);
    rep.max_residual_literal =
        std::max(rep.max_residual_literal, s.residual_literal);
    if (rep.verdict && s.min_gamma_dot_eig <= 0.0) {
      rep.verdict = false;
      rep.witness_index = static_cast<int>(rep.samples.size());
      rep.witness_reason = "metric velocity is not positive definite";
    }
    if (rep.verdict && s.residual > rep.tolerance) {
      rep.verdict = false;
      rep.witness_index = static_cast<int>(rep.samples.size());
      rep.witness_reason = "scale-velocity identity residual above tolerance";
    }
    rep.samples.push_back(s);
  }
  return rep;
}

double theorem1_consistency(const FlowTrace& trace, const ModelAlgebra& alg,
                            bool literal) {
  ReducedCheckReport rep = check_reduced(project_trace(trace), alg);
  return literal ? rep.max_residual_literal : rep.max_residual;
}

std::string reduced_path_to_csv(const ReducedPath& path) {
  std::string out = "t,f,G11,G12,G13,G21,G22,G23,G31,G32,G33\n";
  char buf[64];
  for (int k = 0; k < path.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%.17g", path.t(k));
    out += buf;
    std::snprintf(buf, sizeof buf, ",%.17g", path.f(k));
    out += buf;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        std::snprintf(buf, sizeof buf, ",%.17g", path.gamma(k)(i, j));
        out += buf;
      }
    out += '\n';
  }
  return out;
}

ReducedPath reduced_path_from_csv(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  if (!std::getline(in, line))
    throw std::invalid_argument("empty reduced-path CSV");
  std::vector<double> t, f;
  std::vector<Eigen::Matrix3d> g;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell;
    std::vector<double> vals;
    while (std::getline(row, cell, ',')) vals.push_back(std::stod(cell));
    if (vals.size() != 11)
      throw std::invalid_argument("reduced-path CSV row needs 11 columns");
    t.push_back(vals[0]);
    f.push_back(vals[1]);
    Eigen::Matrix3d m;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        m(i, j) = vals[static_cast<std::size_t>(2 + 3 * i + j)];
    g.push_back(m);
  }
  return ReducedPath(std::move(t), std::move(f), std::move(g));
}

}  // namespace g2lab
