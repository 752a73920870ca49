#include "g2lab/homogeneous.hpp"

#include <cmath>
#include <utility>

namespace g2lab {

double eps3(int i, int j, int k) {
  if (i == j || j == k || i == k) return 0.0;
  // parity of the permutation (i,j,k) of (0,1,2)
  return ((j - i + 3) % 3 == 1) ? 1.0 : -1.0;
}

namespace {

int pair_row(int m, int n) {  // (0,1)->0, (0,2)->1, (1,2)->2
  return m + n - 1;
}

void check_invertible(const Eigen::Matrix3d& e) {
  Eigen::FullPivLU<Eigen::Matrix3d> lu(e);
  if (!lu.isInvertible()) throw SingularFrame("frame matrix is singular");
}

}  // namespace

ModelAlgebra ModelAlgebra::preset(const std::string& name) {
  if (name == "abelian") return diagonal(0, 0, 0, name);
  if (name == "su2") return diagonal(1, 1, 1, name);
  if (name == "heisenberg") return diagonal(1, 0, 0, name);
  if (name == "e11") return diagonal(1, -1, 0, name);
  if (name == "e2") return diagonal(1, 1, 0, name);
  if (name == "sl2r") return diagonal(1, 1, -1, name);
  throw std::invalid_argument("unknown model preset: " + name);
}

ModelAlgebra ModelAlgebra::diagonal(double n1, double n2, double n3,
                                    std::string name) {
  std::array<double, 27> c{};
  auto set = [&c](int i, int j, int k, double v) {
    c[static_cast<std::size_t>((i * 3 + j) * 3 + k)] = v;
    c[static_cast<std::size_t>((i * 3 + k) * 3 + j)] = -v;
  };
  set(0, 1, 2, n1);
  set(1, 2, 0, n2);
  set(2, 0, 1, n3);
  return from_constants(c, std::move(name));
}

ModelAlgebra ModelAlgebra::from_constants(const std::array<double, 27>& c,
                                          std::string name) {
  double scale = 0.0;
  for (double v : c) scale = std::max(scale, std::abs(v));
  double tol = 1e-12 * (1.0 + scale * scale);
  auto at = [&c](int i, int j, int k) {
    return c[static_cast<std::size_t>((i * 3 + j) * 3 + k)];
  };
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        if (std::abs(at(i, j, k) + at(i, k, j)) > tol)
          throw std::invalid_argument(
              "structure constants are not antisymmetric in the lower indices");
  for (int l = 0; l < 3; ++l)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) {
          double s = 0.0;
          for (int m = 0; m < 3; ++m)
            s += at(m, i, j) * at(l, m, k) + at(m, j, k) * at(l, m, i) +
                 at(m, k, i) * at(l, m, j);
          if (std::abs(s) > tol)
            throw JacobiViolation("structure constants violate the Jacobi identity");
        }
  ModelAlgebra alg;
  alg.c_ = c;
  alg.name_ = std::move(name);
  return alg;
}

Eigen::Matrix3d levi_civita(const Eigen::Matrix3d& E, const ModelAlgebra& alg) {
  check_invertible(E);
  // Unknowns x[3p+q] = A_{pq}; equations indexed by (i; m<n):
  //   eps_{jki} (A_{jm} E_{kn} - A_{jn} E_{km}) = E_{ip} c^p_{mn}
  Eigen::Matrix<double, 9, 9> m = Eigen::Matrix<double, 9, 9>::Zero();
  Eigen::Matrix<double, 9, 1> rhs = Eigen::Matrix<double, 9, 1>::Zero();
  for (int i = 0; i < 3; ++i) {
    for (int mm = 0; mm < 3; ++mm) {
      for (int nn = mm + 1; nn < 3; ++nn) {
        int row = 3 * i + pair_row(mm, nn);
        for (int p = 0; p < 3; ++p) {
          rhs(row) += E(i, p) * alg.c(p, mm, nn);
          for (int q = 0; q < 3; ++q) {
            double coef = 0.0;
            for (int k = 0; k < 3; ++k) {
              if (q == mm) coef += eps3(p, k, i) * E(k, nn);
              if (q == nn) coef -= eps3(p, k, i) * E(k, mm);
            }
            m(row, 3 * p + q) += coef;
          }
        }
      }
    }
  }
  Eigen::FullPivLU<Eigen::Matrix<double, 9, 9>> lu(m);
  if (!lu.isInvertible())
    throw SingularFrame("torsion system is singular for this frame");
  Eigen::Matrix<double, 9, 1> x = lu.solve(rhs);
  Eigen::Matrix3d a;
  for (int p = 0; p < 3; ++p)
    for (int q = 0; q < 3; ++q) a(p, q) = x(3 * p + q);
  return a;
}

double torsion_residual(const Eigen::Matrix3d& A, const Eigen::Matrix3d& E,
                        const ModelAlgebra& alg) {
  double res = 0.0;
  for (int i = 0; i < 3; ++i) {
    for (int mm = 0; mm < 3; ++mm) {
      for (int nn = mm + 1; nn < 3; ++nn) {
        double t = 0.0;
        for (int p = 0; p < 3; ++p) t -= E(i, p) * alg.c(p, mm, nn);
        for (int j = 0; j < 3; ++j)
          for (int k = 0; k < 3; ++k)
            t += eps3(j, k, i) * (A(j, mm) * E(k, nn) - A(j, nn) * E(k, mm));
        res = std::max(res, std::abs(t));
      }
    }
  }
  return res;
}

Eigen::Matrix3d curvature(const Eigen::Matrix3d& A, const Eigen::Matrix3d& E,
                          const ModelAlgebra& alg) {
  check_invertible(E);
  // F^i over sigma^{mn} (m<n): -A_{ip} c^p_{mn} + eps_{jki} A_{jm} A_{kn}
  // then  F^j = Phi_{jp} sighat^p  with sighat^1 = s23, sighat^2 = s31,
  // sighat^3 = s12, and  ehat^i = cof(E)_{ip} sighat^p  gives
  // Phi = G^T cof(E), i.e. G = E Phi^T / det E.
  Eigen::Matrix3d phi = Eigen::Matrix3d::Zero();
  for (int j = 0; j < 3; ++j) {
    double f[3][3] = {};
    for (int mm = 0; mm < 3; ++mm) {
      for (int nn = mm + 1; nn < 3; ++nn) {
        double v = 0.0;
        for (int p = 0; p < 3; ++p) v -= A(j, p) * alg.c(p, mm, nn);
        for (int a = 0; a < 3; ++a)
          for (int b = 0; b < 3; ++b)
            v += eps3(a, b, j) * A(a, mm) * A(b, nn);
        f[mm][nn] = v;
      }
    }
    phi(j, 0) = f[1][2];
    phi(j, 1) = -f[0][2];
    phi(j, 2) = f[0][1];
  }
  return E * phi.transpose() / E.determinant();
}

Eigen::Matrix3d curvature(const std::array<AltForm, 3>& a,
                          const Eigen::Matrix3d& E, const ModelAlgebra& alg) {
  Eigen::Matrix3d va = Eigen::Matrix3d::Zero();  // vertical part a^i = V_{ij} mu^j + ...
  Eigen::Matrix3d ha = Eigen::Matrix3d::Zero();  // horizontal part A_{ij} sigma^j
  for (int i = 0; i < 3; ++i) {
    const AltForm& ai = a[static_cast<std::size_t>(i)];
    if (ai.dim() != 6 || ai.degree() != 1)
      throw std::invalid_argument("connection forms must be 1-forms on the slice");
    for (int s = 0; s < 3; ++s) {
      ha(i, s) = ai[s];
      va(i, s) = ai[s + 3];
    }
  }
  Eigen::Matrix3d defect = va - Eigen::Matrix3d::Identity();
  double scale = 1.0 + va.cwiseAbs().maxCoeff();
  if (defect.cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw NonHorizontalCurvature(
        "vertical part of the candidate connection is not the fiber coframe");
  return curvature(ha, E, alg);
}

Eigen::Matrix3d einstein_oracle(const Eigen::Matrix3d& E,
                                const ModelAlgebra& alg) {
  check_invertible(E);
  Eigen::Matrix3d b = E.inverse();
  // Structure constants of the orthonormal frame U_j = B_{mj} X_m:
  // [U_i, U_j] = gamma^k_{ij} U_k.
  double gamma[3][3][3] = {};
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        double s = 0.0;
        for (int p = 0; p < 3; ++p)
          for (int mm = 0; mm < 3; ++mm)
            for (int nn = 0; nn < 3; ++nn)
              s += alg.c(p, mm, nn) * b(mm, i) * b(nn, j) * E(k, p);
        gamma[k][i][j] = s;
      }
  // Koszul in an orthonormal frame: 2 <nabla_i U_j, U_k> =
  //   gamma^k_{ij} - gamma^i_{jk} + gamma^j_{ki}
  double conn[3][3][3] = {};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        conn[i][j][k] =
            0.5 * (gamma[k][i][j] - gamma[i][j][k] + gamma[j][k][i]);
  auto riemann = [&](int i, int j, int k, int l) {
    double r = 0.0;
    for (int mm = 0; mm < 3; ++mm) {
      r += conn[j][k][mm] * conn[i][mm][l] - conn[i][k][mm] * conn[j][mm][l];
      r -= gamma[mm][i][j] * conn[mm][k][l];
    }
    return r;
  };
  Eigen::Matrix3d ric = Eigen::Matrix3d::Zero();
  for (int j = 0; j < 3; ++j)
    for (int l = 0; l < 3; ++l) {
      double s = 0.0;
      for (int i = 0; i < 3; ++i) s += riemann(i, j, l, i);
      ric(j, l) = s;
    }
  double scal = ric.trace();
  return ric - 0.5 * scal * Eigen::Matrix3d::Identity();
}

Eigen::Matrix3d metric_of_frame(const Eigen::Matrix3d& E) {
  return E.transpose() * E;
}

}  // namespace g2lab
