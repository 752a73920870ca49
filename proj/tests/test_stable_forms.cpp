#include <cmath>

#include <doctest.h>

#include "g2lab/exterior.hpp"
#include "g2lab/rng.hpp"
#include "g2lab/stable_forms.hpp"

using namespace g2lab;

namespace {

AltForm product_orbit_form() {
  // v^123 + w^123: stable with positive invariant (other open orbit)
  AltForm a = monomial_from_labels(6, "v1 v2 v3");
  a += monomial_from_labels(6, "w1 w2 w3");
  return a;
}

Eigen::MatrixXd mat7(Rng& rng) { return rng.well_conditioned(7, 0.5, 2.0); }

}  // namespace

TEST_CASE("normal forms have the pinned coefficients") {
  const AltForm psi = psi0();
  CHECK(psi.coeff({1, 3, 5}) == -1.0);  // -w^123
  CHECK(psi.coeff({1, 2, 4}) == 1.0);   // w^1 v^23
  CHECK(psi.coeff({0, 3, 4}) == 1.0);   // w^2 v^31
  CHECK(psi.coeff({0, 2, 5}) == 1.0);   // w^3 v^12
  int nonzero = 0;
  for (int i = 0; i < psi.size(); ++i) nonzero += psi[i] != 0.0;
  CHECK(nonzero == 4);

  const AltForm omega = omega0();
  CHECK(omega.coeff({0, 1}) == 1.0);
  CHECK(omega.coeff({2, 3}) == 1.0);
  CHECK(omega.coeff({4, 5}) == 1.0);

  const AltForm phi = phi0();
  CHECK(phi.coeff({0, 1, 6}) == 1.0);
  CHECK(phi.coeff({2, 3, 6}) == 1.0);
  CHECK(phi.coeff({4, 5, 6}) == 1.0);
  CHECK(phi.coeff({1, 3, 5}) == -1.0);
  CHECK(phi.coeff({1, 2, 4}) == 1.0);
}

TEST_CASE("quartic invariant normalization and scaling") {
  CHECK(lambda_invariant(psi0()) == doctest::Approx(-1.0).epsilon(1e-14));

  AltForm two_psi = psi0();
  two_psi *= 2.0;
  CHECK(lambda_invariant(two_psi) == doctest::Approx(-16.0).epsilon(1e-13));

  // doubling the reference volume coefficient quarters the invariant
  CHECK(lambda_invariant(psi0(), 2.0) ==
        doctest::Approx(-0.25).epsilon(1e-13));

  CHECK(lambda_invariant(product_orbit_form()) ==
        doctest::Approx(0.25).epsilon(1e-13));
}

TEST_CASE("tangent endomorphism squares to a scalar") {
  const Eigen::Matrix<double, 6, 6> k = k_endomorphism(psi0());
  CHECK((k * k + 4.0 * Eigen::Matrix<double, 6, 6>::Identity())
            .cwiseAbs()
            .maxCoeff() <= 1e-13);
  CHECK((k * k).trace() == doctest::Approx(-24.0).epsilon(1e-14));
  // K(v1) = -2 w1, K(w1) = 2 v1 in the paired slot convention
  CHECK(k(1, 0) == doctest::Approx(-2.0));
  CHECK(k(0, 1) == doctest::Approx(2.0));
}

TEST_CASE("invariant transforms with det^2 under pullback") {
  Rng rng(2024);
  const double base = lambda_invariant(psi0());
  for (int rep = 0; rep < 20; ++rep) {
    Eigen::MatrixXd g = rng.gaussian_matrix(6, 6);
    if (std::abs(g.determinant()) < 1e-3) continue;
    const double lam = lambda_invariant(pullback(psi0(), g));
    const double want = g.determinant() * g.determinant() * base;
    CHECK(lam == doctest::Approx(want).epsilon(1e-9));
  }
}

TEST_CASE("exact classification hits all three orbits") {
  CHECK(classify_exact(psi0()) == Definiteness::Definite);
  CHECK(classify_exact(product_orbit_form()) == Definiteness::OtherOpenOrbit);
  CHECK(classify_exact(AltForm(6, 3)) == Definiteness::Degenerate);
  // a decomposable form is unstable
  CHECK(classify_exact(monomial_from_labels(6, "v1 v2 v3")) ==
        Definiteness::Degenerate);
  // definiteness survives pullback by any invertible map
  Rng rng(7);
  for (int rep = 0; rep < 10; ++rep) {
    Eigen::MatrixXd g = rng.well_conditioned(6, 0.4, 2.5);
    CHECK(classify_exact(pullback(psi0(), g)) == Definiteness::Definite);
  }
}

TEST_CASE("sampled classification agrees and produces usable witnesses") {
  Rng rng(99);
  SampledCheck ok = classify_sampled(psi0(), 64, rng);
  CHECK(ok.plausible_definite);
  CHECK(!ok.witness.has_value());

  SampledCheck bad = classify_sampled(product_orbit_form(), 64, rng);
  CHECK(!bad.plausible_definite);
  REQUIRE(bad.witness.has_value());
  // the witness direction certifies non-definiteness: contraction not rank 4
  TangentVector u(6, {(*bad.witness)(0), (*bad.witness)(1), (*bad.witness)(2),
                      (*bad.witness)(3), (*bad.witness)(4),
                      (*bad.witness)(5)});
  CHECK(two_form_rank(interior(u, product_orbit_form())) != 4);

  SampledCheck degenerate =
      classify_sampled(monomial_from_labels(6, "v1 v2 v3"), 16, rng);
  CHECK(!degenerate.plausible_definite);
}

TEST_CASE("almost complex structure on the normal form") {
  const Eigen::Matrix<double, 6, 6> j = almost_complex_structure(psi0());
  // J v_i = w_i, J w_i = -v_i
  Eigen::Matrix<double, 6, 6> expected = Eigen::Matrix<double, 6, 6>::Zero();
  for (int i = 0; i < 3; ++i) {
    expected(2 * i + 1, 2 * i) = 1.0;
    expected(2 * i, 2 * i + 1) = -1.0;
  }
  CHECK((j - expected).cwiseAbs().maxCoeff() <= 1e-13);
  CHECK((j * j + Eigen::Matrix<double, 6, 6>::Identity())
            .cwiseAbs()
            .maxCoeff() <= 1e-12);

  // scale invariance
  AltForm scaled = psi0();
  scaled *= 3.0;
  CHECK((almost_complex_structure(scaled) - j).cwiseAbs().maxCoeff() <=
        1e-12);

  CHECK_THROWS_AS((void)almost_complex_structure(product_orbit_form()),
                  NotDefinite);
  CHECK_THROWS_AS((void)almost_complex_structure(AltForm(6, 3)), NotDefinite);
}

TEST_CASE("almost complex structure is natural") {
  Rng rng(1717);
  const Eigen::Matrix<double, 6, 6> j0 = almost_complex_structure(psi0());
  for (int rep = 0; rep < 10; ++rep) {
    Eigen::MatrixXd g = rng.well_conditioned(6, 0.5, 2.0);
    Eigen::MatrixXd jg = almost_complex_structure(pullback(psi0(), g));
    Eigen::MatrixXd want = g.inverse() * j0 * g;
    CHECK((jg - want).cwiseAbs().maxCoeff() <=
          1e-9 * (1.0 + want.cwiseAbs().maxCoeff()));
    CHECK((jg * jg + Eigen::MatrixXd::Identity(6, 6)).cwiseAbs().maxCoeff() <=
          1e-9);
  }
}

TEST_CASE("dimension-7 bilinear form on the normal form") {
  const Eigen::Matrix<double, 7, 7> b = bilinear_from_phi(phi0());
  CHECK((b - 6.0 * Eigen::Matrix<double, 7, 7>::Identity())
            .cwiseAbs()
            .maxCoeff() <= 1e-13);

  AltForm two_phi = phi0();
  two_phi *= 2.0;
  const Eigen::Matrix<double, 7, 7> b2 = bilinear_from_phi(two_phi);
  CHECK((b2 - 8.0 * b).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("metric and volume of the normal form") {
  const MetricResult mr = metric_from_phi(phi0());
  CHECK((mr.metric - Eigen::Matrix<double, 7, 7>::Identity())
            .cwiseAbs()
            .maxCoeff() <= 1e-13);
  CHECK(mr.volume == doctest::Approx(1.0).epsilon(1e-13));

  // scaling law: metric(t phi) = t^{2/3} metric, volume = t^{7/3}
  AltForm two_phi = phi0();
  two_phi *= 2.0;
  const MetricResult mr2 = metric_from_phi(two_phi);
  const double s = std::pow(2.0, 2.0 / 3.0);
  CHECK((mr2.metric - s * Eigen::Matrix<double, 7, 7>::Identity())
            .cwiseAbs()
            .maxCoeff() <= 1e-12);
  CHECK(mr2.volume == doctest::Approx(std::pow(2.0, 7.0 / 3.0)).epsilon(1e-12));

  // the reversed-orientation form induces the same metric
  AltForm neg = phi0();
  neg *= -1.0;
  const MetricResult mrn = metric_from_phi(neg);
  CHECK((mrn.metric - Eigen::Matrix<double, 7, 7>::Identity())
            .cwiseAbs()
            .maxCoeff() <= 1e-13);
  CHECK(mrn.volume == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("metric is natural under orientation-preserving pullback") {
  Rng rng(31);
  const MetricResult base = metric_from_phi(phi0());
  for (int rep = 0; rep < 8; ++rep) {
    Eigen::MatrixXd g = mat7(rng);
    REQUIRE(g.determinant() > 0.0);
    const MetricResult mr = metric_from_phi(pullback(phi0(), g));
    Eigen::MatrixXd want = g.transpose() * base.metric * g;
    CHECK((mr.metric - want).cwiseAbs().maxCoeff() <=
          1e-9 * (1.0 + want.cwiseAbs().maxCoeff()));
    CHECK(mr.volume ==
          doctest::Approx(g.determinant() * base.volume).epsilon(1e-9));
  }
}

TEST_CASE("non-definite 7-forms are rejected") {
  // a decomposable 3-form has a degenerate bilinear form
  CHECK_THROWS_AS((void)metric_from_phi(AltForm::monomial(7, {0, 1, 2})),
                  NotDefinite);
  CHECK_THROWS_AS((void)metric_from_phi(AltForm(7, 3)), NotDefinite);
}

TEST_CASE("normal forms restrict consistently") {
  AltForm restricted = restrict_hyperplane(phi0(), 6);
  AltForm diff = restricted;
  diff -= psi0();
  CHECK(diff.norm_inf() == 0.0);

  AltForm slice = interior(TangentVector::basis(7, 6), phi0());
  AltForm omega_slice = restrict_hyperplane(slice, 6);
  AltForm d2 = omega_slice;
  d2 -= omega0();
  CHECK(d2.norm_inf() == 0.0);
}
