#include <cmath>

#include <doctest.h>

#include "g2lab/cobordism_flow.hpp"
#include "g2lab/invariant_forms.hpp"
#include "g2lab/rng.hpp"
#include "g2lab/stable_forms.hpp"

using namespace g2lab;

namespace {

FlowTrace abelian_trace(double k, int steps) {
  const ModelAlgebra flat = ModelAlgebra::preset("abelian");
  FlowState s0;
  return integrate(s0, constant_policy(k * Eigen::Matrix3d::Identity()), 0.0,
                   1.0, steps, flat);
}

}  // namespace

TEST_CASE("right-hand side closed forms") {
  const ModelAlgebra flat = ModelAlgebra::preset("abelian");
  FlowState s;
  s.E = 2.0 * Eigen::Matrix3d::Identity();
  s.f = 0.7;
  const Eigen::Matrix3d k = 0.1 * Eigen::Matrix3d::Identity();
  const FlowRhs rhs = flow_rhs(s, k, flat);
  CHECK((rhs.Edot - 0.2 * Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() <=
        1e-15);
  // flat base: curvature term drops, f' = -f tr K
  CHECK(rhs.fdot == doctest::Approx(-0.7 * 0.3).epsilon(1e-13));

  // round base: f' = -3k f + 3k/(4c^2)
  const ModelAlgebra su2 = ModelAlgebra::preset("su2");
  for (double c : {0.8, 1.0, 2.0}) {
    FlowState r;
    r.E = c * Eigen::Matrix3d::Identity();
    r.f = 1.3;
    const double kk = 0.05;
    const FlowRhs rr = flow_rhs(r, kk * Eigen::Matrix3d::Identity(), su2);
    CHECK(rr.fdot == doctest::Approx(-3.0 * kk * 1.3 +
                                     3.0 * kk / (4.0 * c * c))
                        .epsilon(1e-12));
  }
}

TEST_CASE("flat flow matches the exponential solution") {
  FlowTrace trace = abelian_trace(0.1, 100);
  REQUIRE(trace.records.size() == 101);
  const FlowRecord& last = trace.records.back();
  CHECK(std::abs(last.t - 1.0) <= 1e-12);
  CHECK(std::abs(last.f - std::exp(-0.3)) <= 1e-9);
  CHECK(std::abs(last.E.determinant() - std::exp(0.3)) <= 1e-9);

  // every record solves the same closed form
  for (const FlowRecord& r : trace.records) {
    CHECK(std::abs(r.f - std::exp(-0.3 * r.t)) <= 1e-9);
    CHECK((r.E - std::exp(0.1 * r.t) * Eigen::Matrix3d::Identity())
              .cwiseAbs()
              .maxCoeff() <= 1e-9);
    CHECK(r.A.cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(r.G.cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("integrator converges at fourth order") {
  const double exact = std::exp(-0.3);
  const double e50 = std::abs(abelian_trace(0.1, 50).records.back().f - exact);
  const double e100 =
      std::abs(abelian_trace(0.1, 100).records.back().f - exact);
  CHECK(e100 > 0.0);
  CHECK(e50 / e100 >= 12.0);
  CHECK(e50 / e100 <= 20.0);
}

TEST_CASE("expansion gate rejects non-expanding policies") {
  const ModelAlgebra flat = ModelAlgebra::preset("abelian");
  FlowState s0;

  Eigen::Matrix3d bad = Eigen::Matrix3d::Identity() * 0.1;
  bad(2, 2) = -0.001;
  CHECK_THROWS_AS(
      (void)integrate(s0, constant_policy(bad), 0.0, 1.0, 10, flat),
      PolicyViolation);

  // trace-free rotation generator: symmetric part vanishes
  Eigen::Matrix3d rot = Eigen::Matrix3d::Zero();
  rot(0, 1) = -1.0;
  rot(1, 0) = 1.0;
  try {
    (void)integrate(s0, constant_policy(rot), 0.0, 1.0, 10, flat);
    CHECK(false);
  } catch (const PolicyViolation& e) {
    CHECK(e.t == doctest::Approx(0.0));
    CHECK(e.min_eig <= 0.0);
  }

  // the threshold is configurable
  CHECK_NOTHROW((void)integrate(
      s0, constant_policy(0.1 * Eigen::Matrix3d::Identity()), 0.0, 1.0, 10,
      flat, 0.05));
  CHECK_THROWS_AS(
      (void)integrate(s0,
                      constant_policy(0.1 * Eigen::Matrix3d::Identity()), 0.0,
                      1.0, 10, flat, 0.2),
      PolicyViolation);
}

TEST_CASE("scale collapse raises a positivity error") {
  const ModelAlgebra heis = ModelAlgebra::preset("heisenberg");
  FlowState s0;
  s0.f = 0.01;
  Eigen::Matrix3d k = Eigen::Matrix3d::Identity() * 0.01;
  k(0, 0) = 0.25;
  CHECK_THROWS_AS(
      (void)integrate(s0, constant_policy(k), 0.0, 1.0, 200, heis),
      NonPositiveF);

  FlowState singular;
  singular.E.setZero();
  CHECK_THROWS_AS((void)integrate(singular,
                                  constant_policy(Eigen::Matrix3d::Identity()),
                                  0.0, 1.0, 10, heis),
                  SingularFrame);

  CHECK_THROWS_AS(
      (void)integrate(FlowState{}, constant_policy(Eigen::Matrix3d::Identity()),
                      1.0, 0.0, 10, heis),
      std::invalid_argument);
}

TEST_CASE("closedness and evolution residuals on closed scenarios") {
  const ModelAlgebra su2 = ModelAlgebra::preset("su2");
  FlowState s0;
  FlowTrace trace = integrate(
      s0, constant_policy(0.05 * Eigen::Matrix3d::Identity()), 0.0, 1.0, 100,
      su2);
  auto res = dphi_residual(trace, su2);
  REQUIRE(res.size() == trace.records.size());
  CHECK(std::isnan(res.front().second));
  CHECK(std::isnan(res.back().second));
  for (size_t k = 0; k < res.size(); ++k) {
    CHECK(res[k].first <= 1e-12);
    if (k > 0 && k + 1 < res.size()) {
      CHECK(res[k].second <= 5e-4);  // second-order in the step
    }
  }

  // order-2 decay of the evolution residual
  FlowTrace fine = integrate(
      s0, constant_policy(0.05 * Eigen::Matrix3d::Identity()), 0.0, 1.0, 200,
      su2);
  auto res_fine = dphi_residual(fine, su2);
  double worst = 0.0, worst_fine = 0.0;
  for (size_t k = 1; k + 1 < res.size(); ++k) {
    worst = std::max(worst, res[k].second);
  }
  for (size_t k = 1; k + 1 < res_fine.size(); ++k) {
    worst_fine = std::max(worst_fine, res_fine[k].second);
  }
  const double ratio = worst / worst_fine;
  CHECK(ratio >= 3.5);
  CHECK(ratio <= 4.5);

  CHECK_THROWS_AS(
      (void)dphi_residual(
          integrate(s0, constant_policy(0.05 * Eigen::Matrix3d::Identity()),
                    0.0, 0.01, 1, su2),
          su2),
      TooFewRecords);
}

TEST_CASE("a corrupted connection is caught by the closedness residual") {
  const ModelAlgebra su2 = ModelAlgebra::preset("su2");
  FlowState s0;
  FlowTrace trace = integrate(
      s0, constant_policy(0.05 * Eigen::Matrix3d::Identity()), 0.0, 1.0, 50,
      su2);
  trace.records[25].A(0, 1) += 1e-3;
  auto res = dphi_residual(trace, su2);
  CHECK(res[25].first > 1e-6);
}

TEST_CASE("volume certificate") {
  FlowTrace trace = abelian_trace(0.1, 100);
  const VolumeReport rep = volume_monotone(trace);
  CHECK(rep.monotone);
  REQUIRE(rep.det_e.size() == trace.records.size());
  CHECK(rep.max_derivative_residual <= 1e-5);
  for (size_t k = 1; k < rep.det_e.size(); ++k) {
    CHECK(rep.det_e[k] > rep.det_e[k - 1]);
  }

  // hand-built stalled trace: strict growth fails
  FlowTrace flat_trace = trace;
  for (FlowRecord& r : flat_trace.records) {
    r.E = Eigen::Matrix3d::Identity();
  }
  CHECK(!volume_monotone(flat_trace).monotone);
}

TEST_CASE("record forms and the product-metric splitting") {
  const ModelAlgebra su2 = ModelAlgebra::preset("su2");
  FlowState s0;
  FlowTrace trace = integrate(
      s0, constant_policy(0.05 * Eigen::Matrix3d::Identity()), 0.0, 1.0, 20,
      su2);
  const FlowRecord& r = trace.records[10];

  const AltForm psi = record_psi(r);
  InvariantTriple t;
  t.f = r.f;
  t.A = r.A;
  t.E = r.E;
  AltForm expected = assemble_psi(t);
  expected -= psi;
  CHECK(expected.norm_inf() == 0.0);

  const AltForm omega = record_omega(r);
  AltForm expected_omega = assemble_omega(r.K, t);
  expected_omega -= omega;
  CHECK(expected_omega.norm_inf() == 0.0);

  // symmetric policies split the product metric orthogonally
  CHECK(is_one_one(omega, psi));
  const AltForm phi = assemble_phi(omega, psi);
  const MetricResult mr = metric_from_phi(phi);
  CHECK(mr.volume > 0.0);
  for (int i = 0; i < 6; ++i) {
    CHECK(std::abs(mr.metric(6, i)) <= 1e-10);
    CHECK(std::abs(mr.metric(i, 6)) <= 1e-10);
  }
  CHECK(mr.metric(6, 6) > 0.0);

  // the state-level overload agrees with the per-record composition
  FlowState mid;
  mid.t = r.t;
  mid.E = r.E;
  mid.f = r.f;
  AltForm phi2 = assemble_phi(mid, r.K, su2);
  phi2 -= phi;
  CHECK(phi2.norm_inf() == 0.0);
}
