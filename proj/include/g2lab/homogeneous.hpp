#pragma once

#include <array>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "g2lab/exterior.hpp"

namespace g2lab {

struct SingularFrame : std::runtime_error {
  explicit SingularFrame(const std::string& what) : std::runtime_error(what) {}
};
struct JacobiViolation : std::runtime_error {
  explicit JacobiViolation(const std::string& what) : std::runtime_error(what) {}
};
struct NonHorizontalCurvature : std::runtime_error {
  explicit NonHorizontalCurvature(const std::string& what)
      : std::runtime_error(what) {}
};

/// Levi-Civita symbol on three indices in {0,1,2}.
double eps3(int i, int j, int k);

/// Structure constants c^i_{jk} of a 3-dimensional Lie algebra, in the
/// convention d sigma^i = -(1/2) c^i_{jk} sigma^j ^ sigma^k (equivalently
/// [X_j, X_k] = c^i_{jk} X_i).  Antisymmetry in (j,k) and the Jacobi
/// identity are enforced at construction.
class ModelAlgebra {
 public:
  /// Named presets accepted everywhere (scenario files included):
  /// "abelian", "su2", "heisenberg", "e11", "e2", "sl2r".
  static ModelAlgebra preset(const std::string& name);

  /// Diagonal (class A) algebra: [X2,X3] = n1 X1, [X3,X1] = n2 X2,
  /// [X1,X2] = n3 X3.
  static ModelAlgebra diagonal(double n1, double n2, double n3,
                               std::string name);

  /// General constructor; c[(i*3+j)*3+k] = c^i_{jk}.  Throws
  /// std::invalid_argument on broken antisymmetry, JacobiViolation when the
  /// Jacobi identity fails.
  static ModelAlgebra from_constants(const std::array<double, 27>& c,
                                     std::string name);

  double c(int i, int j, int k) const {
    return c_[static_cast<std::size_t>((i * 3 + j) * 3 + k)];
  }
  const std::string& name() const { return name_; }

 private:
  ModelAlgebra() = default;
  std::array<double, 27> c_{};
  std::string name_;
};

/// Unique connection A solving the sigma-block torsion equation
/// de^i + eps_{jki} (A sigma)^j ^ e^k = 0 with e^i = E_{ij} sigma^j.
/// Gauge-equivariant: levi_civita(R E) = R levi_civita(E) for R in SO(3).
Eigen::Matrix3d levi_civita(const Eigen::Matrix3d& E, const ModelAlgebra& alg);

/// Max |coefficient| of the sigma-block torsion 2-forms for a candidate A;
/// vanishes exactly when A = levi_civita(E).
double torsion_residual(const Eigen::Matrix3d& A, const Eigen::Matrix3d& E,
                        const ModelAlgebra& alg);

/// Curvature matrix G with F^j = G_{ij} ehat^i on the sigma block, where
/// F^i = d(A sigma)^i + (1/2) eps_{jki} (A sigma)^j ^ (A sigma)^k and
/// ehat^i = (1/2) eps_{ijk} e^j ^ e^k.  Transforms as G -> R G R^T under
/// E -> R E, A -> R A.
Eigen::Matrix3d curvature(const Eigen::Matrix3d& A, const Eigen::Matrix3d& E,
                          const ModelAlgebra& alg);

/// Overload taking the connection as slice 1-forms a^i; the vertical part
/// must be exactly mu^i (throws NonHorizontalCurvature otherwise).
Eigen::Matrix3d curvature(const std::array<AltForm, 3>& a,
                          const Eigen::Matrix3d& E, const ModelAlgebra& alg);

/// Einstein tensor Ric - (R/2) Id of the left-invariant metric with
/// orthonormal coframe e^i = E_{ij} sigma^j, computed along an independent
/// path (orthonormal-frame Koszul formula; no connection matrices).
Eigen::Matrix3d einstein_oracle(const Eigen::Matrix3d& E,
                                const ModelAlgebra& alg);

/// Frame metric Gamma = E^T E (gauge-invariant, SPD for invertible E).
Eigen::Matrix3d metric_of_frame(const Eigen::Matrix3d& E);

}  // namespace g2lab
