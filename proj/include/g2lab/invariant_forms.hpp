#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "g2lab/exterior.hpp"
#include "g2lab/homogeneous.hpp"
#include "g2lab/stable_forms.hpp"

namespace g2lab {

struct NotDecomposable : std::runtime_error {
  explicit NotDecomposable(const std::string& what) : std::runtime_error(what) {}
};
struct FiberNonVanishing : std::runtime_error {
  explicit FiberNonVanishing(const std::string& what)
      : std::runtime_error(what) {}
};
struct NotInPencil : std::runtime_error {
  explicit NotInPencil(const std::string& what) : std::runtime_error(what) {}
};

/// Reduced data of an invariant definite 3-form on the slice:
/// positive scale f, connection matrix A (a^i = mu^i + A_{ij} sigma^j) and
/// solder frame E (e^i = E_{ij} sigma^j) with det E > 0.
struct InvariantTriple {
  double f = 1.0;
  Eigen::Matrix3d A = Eigen::Matrix3d::Zero();
  Eigen::Matrix3d E = Eigen::Matrix3d::Identity();
};

/// Exterior derivative on the 6-dimensional slice coframe, extended as a
/// degree-1 antiderivation from
///   d sigma^i = -(1/2) c^i_{jk} sigma^{jk},   d mu^i = +(1/2) eps_{ijk} mu^{jk}.
/// Satisfies d(d(alpha)) = 0 coefficient-exactly.
AltForm slice_d(const AltForm& a, const ModelAlgebra& alg);

/// psi = -f e^{123} + e^1 a^{23} + e^2 a^{31} + e^3 a^{12}.
/// The result is definite and has zero mu^{123} coefficient.
AltForm assemble_psi(const InvariantTriple& t);

/// Inverse of assemble_psi on the assembled family; the frame 1-forms are
/// recovered by double fiber contractions (e^1 = -i(dmu2) i(dmu3) psi,
/// cyclically), A by a 9x9 linear solve, f from the sigma^{123} coefficient.
/// Round-trips coefficient-exactly or throws NotDecomposable.
InvariantTriple decompose_psi(const AltForm& psi);

/// omega = K_{ij} a^i ^ e^j for the connection/frame of the triple.
AltForm assemble_omega(const Eigen::Matrix3d& K, const InvariantTriple& t);

/// Inverse of assemble_omega given the triple: K_{ij} from the fiber
/// contractions i(dmu_i) omega = K_{ij} e^j.  Throws NotInPencil when the
/// reconstruction does not reproduce omega.
Eigen::Matrix3d decompose_omega(const AltForm& omega, const InvariantTriple& t);

/// |slice_d(assemble_psi(t))|_inf; vanishes exactly when A is the
/// Levi-Civita connection of E (independent of f).
double closedness_residual(const InvariantTriple& t, const ModelAlgebra& alg);

/// True when the 5-form omega ^ psi vanishes (relative tolerance 1e-12).
/// For pencil forms this is equivalent to symmetry of decompose_omega.
/// Throws NotDefinite when psi is not definite.
bool is_one_one(const AltForm& omega, const AltForm& psi);

/// phi = omega ^ dt + psi on the 7-dimensional product (dt = last slot).
AltForm assemble_phi(const AltForm& omega, const AltForm& psi);

}  // namespace g2lab
