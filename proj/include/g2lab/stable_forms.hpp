#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "g2lab/exterior.hpp"
#include "g2lab/rng.hpp"

namespace g2lab {

/// Thrown when a 3-form in dimension 7 fails to induce a positive-definite
/// bilinear form (so no metric can be extracted from it).
struct NotDefinite : std::runtime_error {
  explicit NotDefinite(const std::string& what) : std::runtime_error(what) {}
};

/// Reference 3-form on R^6: -w123 + w1^v23 + w2^v31 + w3^v12 in the
/// (v1,w1,v2,w2,v3,w3) slot naming.  Normalised so lambda(psi0) = -1.
AltForm psi0();

/// Reference 2-form omega0 = v1^w1 + v2^w2 + v3^w3.
AltForm omega0();

/// Reference 3-form on R^7: omega0 ^ v0 + psi0 (v0 is the last slot).
AltForm phi0();

/// Standard volume coefficient: vol = volcoef * e^{1..n}.
/// Quartic invariant of a 3-form on a 6-dim space, normalised so that the
/// reference form has lambda = -1 (definite forms: lambda < 0).
/// Scaling laws: lambda(t psi) = t^4 lambda(psi), and multiplying the
/// volume coefficient by c divides lambda by c^2.
double lambda_invariant(const AltForm& psi, double volcoef = 1.0);

/// K endomorphism with ι(K v) vol = ι(v) psi ∧ psi, as a matrix (raw,
/// un-normalised; lambda_raw = tr(K^2)).
Eigen::Matrix<double, 6, 6> k_endomorphism(const AltForm& psi, double volcoef = 1.0);

enum class Definiteness { Definite, OtherOpenOrbit, Degenerate };

/// Exact classification of a 3-form on a 6-dim space via the invariant.
Definiteness classify_exact(const AltForm& psi, double volcoef = 1.0);

struct SampledCheck {
  bool plausible_definite = true;  // no witness against definiteness found
  std::optional<Eigen::VectorXd> witness;  // direction with deficient rank
};

/// Randomised definiteness probe: a form is definite iff iota(v)psi has
/// rank 4 for every v != 0.  Each sampled direction is screened, and the
/// 2-dim kernel plane of the contracted 2-form is additionally scanned for
/// rank-deficient directions (a circle search), which catches the
/// measure-zero bad sets of non-definite forms with lambda > 0.
SampledCheck classify_sampled(const AltForm& psi, int samples, Rng& rng);

/// Almost complex structure J with J^2 = -Id induced by a definite psi.
/// Matches J(v_i) = w_i on the reference form.  Equivariance:
/// J_{g* psi} = g^{-1} J_psi g for det g > 0.
Eigen::Matrix<double, 6, 6> almost_complex_structure(const AltForm& psi,
                                                     double volcoef = 1.0);

struct MetricResult {
  Eigen::Matrix<double, 7, 7> metric;
  double volume = 0.0;  // volume coefficient against e^{1..7}
};

/// Metric and volume induced by a definite 3-form on a 7-dim space via the
/// bilinear form b(u,v) vol = iota(u)phi ^ iota(v)phi ^ phi.  The reference
/// form yields (Id, 1).  Throws NotDefinite when b is indefinite/singular.
MetricResult metric_from_phi(const AltForm& phi);

/// Raw bilinear map b (before normalisation), for tests: b(phi0) = 6 Id.
Eigen::Matrix<double, 7, 7> bilinear_from_phi(const AltForm& phi);

}  // namespace g2lab
