#include "g2lab/invariant_forms.hpp"

#include <array>
#include <cmath>

namespace g2lab {
namespace {

/// sigma^j as a slice 1-form (slot j), mu^j as slot 3+j, for j in 0..2.
AltForm sigma(int j) { return AltForm::monomial(6, {j}); }
AltForm mu(int j) { return AltForm::monomial(6, {3 + j}); }

AltForm frame_one_form(const Eigen::Matrix3d& e, int i) {
  AltForm out(6, 1);
  for (int j = 0; j < 3; ++j) out[j] = e(i, j);
  return out;
}

AltForm connection_one_form(const Eigen::Matrix3d& a, int i) {
  AltForm out(6, 1);
  for (int j = 0; j < 3; ++j) out[j] = a(i, j);
  out[3 + i] = 1.0;
  return out;
}

AltForm assemble_psi_raw(double f, const Eigen::Matrix3d& a,
                         const Eigen::Matrix3d& e) {
  std::array<AltForm, 3> ef{frame_one_form(e, 0), frame_one_form(e, 1),
                            frame_one_form(e, 2)};
  std::array<AltForm, 3> af{connection_one_form(a, 0),
                            connection_one_form(a, 1),
                            connection_one_form(a, 2)};
  AltForm psi = (-f) * wedge(wedge(ef[0], ef[1]), ef[2]);
  for (int i = 0; i < 3; ++i) {
    int j = (i + 1) % 3;
    int k = (i + 2) % 3;
    psi += wedge(ef[static_cast<std::size_t>(i)],
                 wedge(af[static_cast<std::size_t>(j)],
                       af[static_cast<std::size_t>(k)]));
  }
  return psi;
}

/// Exterior derivative of the basis 1-form for the given slot.
AltForm d_of_slot(int s, const ModelAlgebra& alg) {
  AltForm d(6, 2);
  if (s < 3) {
    for (int j = 0; j < 3; ++j)
      for (int k = j + 1; k < 3; ++k)
        d.coeffs()[static_cast<std::size_t>(subset_index(
            6, 2, static_cast<std::uint8_t>((1u << j) | (1u << k))))] =
            -alg.c(s, j, k);
  } else {
    int m = s - 3;
    for (int j = 0; j < 3; ++j)
      for (int k = j + 1; k < 3; ++k) {
        double v = eps3(m, j, k);
        if (v != 0.0)
          d.coeffs()[static_cast<std::size_t>(subset_index(
              6, 2,
              static_cast<std::uint8_t>((1u << (3 + j)) | (1u << (3 + k)))))] =
              v;
      }
  }
  return d;
}

}  // namespace

AltForm slice_d(const AltForm& a, const ModelAlgebra& alg) {
  if (a.dim() != 6)
    throw std::invalid_argument("slice_d expects forms on the 6-dim slice");
  AltForm out(6, a.degree() + 1);
  if (a.degree() >= 6) return out;  // empty zero form
  std::array<AltForm, 6> d1;
  for (int s = 0; s < 6; ++s) d1[static_cast<std::size_t>(s)] = d_of_slot(s, alg);
  const auto& masks = subset_masks(6, a.degree());
  for (int idx = 0; idx < a.size(); ++idx) {
    double coeff = a[idx];
    if (coeff == 0.0) continue;
    std::uint8_t mask = masks[static_cast<std::size_t>(idx)];
    int pos = 0;
    for (int s = 0; s < 6; ++s) {
      if (!(mask & (1u << s))) continue;
      std::vector<int> rest;
      for (int r = 0; r < 6; ++r)
        if (r != s && (mask & (1u << r))) rest.push_back(r);
      double sign = (pos % 2 == 0) ? 1.0 : -1.0;
      AltForm term = d1[static_cast<std::size_t>(s)];
      if (!rest.empty()) term = wedge(term, AltForm::monomial(6, rest));
      out += (sign * coeff) * term;
      ++pos;
    }
  }
  return out;
}

AltForm assemble_psi(const InvariantTriple& t) {
  if (!(t.f > 0.0))
    throw std::invalid_argument("assemble_psi requires f > 0");
  if (!(t.E.determinant() > 0.0))
    throw std::invalid_argument("assemble_psi requires det E > 0");
  return assemble_psi_raw(t.f, t.A, t.E);
}

InvariantTriple decompose_psi(const AltForm& psi) {
  if (psi.dim() != 6 || psi.degree() != 3)
    throw std::invalid_argument("decompose_psi expects a 3-form on the slice");
  double scale = std::max(1.0, psi.norm_inf());
  if (std::abs(psi.coeff({3, 4, 5})) > 1e-12 * scale)
    throw FiberNonVanishing("3-form has a nonzero fiber-top coefficient");
  if (classify_exact(psi) != Definiteness::Definite)
    throw NotDefinite("3-form is not definite");

  // e^i from double fiber contractions: e^1 = -i(dmu2) i(dmu3) psi, cyclic.
  Eigen::Matrix3d e;
  for (int i = 0; i < 3; ++i) {
    int j = (i + 1) % 3;
    int k = (i + 2) % 3;
    AltForm one =
        -1.0 * interior(TangentVector::basis(6, 3 + j),
                        interior(TangentVector::basis(6, 3 + k), psi));
    for (int s = 0; s < 3; ++s) {
      e(i, s) = one[s];
      if (std::abs(one[3 + s]) > 1e-12 * scale)
        throw NotDecomposable("recovered frame 1-form has fiber components");
    }
  }
  Eigen::FullPivLU<Eigen::Matrix3d> lu(e);
  if (!lu.isInvertible() || e.determinant() <= 0.0)
    throw NotDecomposable("recovered frame is not orientation-positive");

  // A from the sigma-sigma block of the fiber contractions:
  //   sigma-part of i(dmu_m) psi = -eps_{pmr} e^p ^ (A_r sigma).
  Eigen::Matrix<double, 9, 9> m = Eigen::Matrix<double, 9, 9>::Zero();
  Eigen::Matrix<double, 9, 1> rhs = Eigen::Matrix<double, 9, 1>::Zero();
  for (int mm = 0; mm < 3; ++mm) {
    AltForm contr = interior(TangentVector::basis(6, 3 + mm), psi);
    for (int s = 0; s < 3; ++s) {
      for (int tt = s + 1; tt < 3; ++tt) {
        int row = 3 * mm + (s + tt - 1);
        rhs(row) = contr.coeff({s, tt});
        for (int u = 0; u < 3; ++u) {
          for (int v = 0; v < 3; ++v) {
            double coef = 0.0;
            for (int p = 0; p < 3; ++p) {
              if (v == tt) coef -= eps3(p, mm, u) * e(p, s);
              if (v == s) coef += eps3(p, mm, u) * e(p, tt);
            }
            m(row, 3 * u + v) += coef;
          }
        }
      }
    }
  }
  Eigen::FullPivLU<Eigen::Matrix<double, 9, 9>> alu(m);
  if (!alu.isInvertible())
    throw NotDecomposable("connection solve is singular");
  Eigen::Matrix<double, 9, 1> x = alu.solve(rhs);
  Eigen::Matrix3d a;
  for (int u = 0; u < 3; ++u)
    for (int v = 0; v < 3; ++v) a(u, v) = x(3 * u + v);

  // f from the sigma^{123} coefficient: psi_s123 = -f det E + C(E, A).
  AltForm horiz = assemble_psi_raw(0.0, a, e);
  double c_ea = horiz.coeff({0, 1, 2});
  double f = (c_ea - psi.coeff({0, 1, 2})) / e.determinant();
  if (!(f > 0.0)) throw NotDecomposable("recovered scale f is not positive");

  InvariantTriple t{f, a, e};
  AltForm rebuilt = assemble_psi_raw(f, a, e);
  rebuilt -= psi;
  if (rebuilt.norm_inf() > 1e-12 * scale)
    throw NotDecomposable("round-trip residual exceeds tolerance");
  return t;
}

AltForm assemble_omega(const Eigen::Matrix3d& K, const InvariantTriple& t) {
  AltForm omega(6, 2);
  for (int i = 0; i < 3; ++i) {
    AltForm ai = connection_one_form(t.A, i);
    for (int j = 0; j < 3; ++j) {
      if (K(i, j) == 0.0) continue;
      omega += K(i, j) * wedge(ai, frame_one_form(t.E, j));
    }
  }
  return omega;
}

Eigen::Matrix3d decompose_omega(const AltForm& omega,
                                const InvariantTriple& t) {
  if (omega.dim() != 6 || omega.degree() != 2)
    throw std::invalid_argument("decompose_omega expects a 2-form on the slice");
  Eigen::FullPivLU<Eigen::Matrix3d> lu(t.E);
  if (!lu.isInvertible()) throw SingularFrame("triple frame is singular");
  double scale = std::max(1.0, omega.norm_inf());
  Eigen::Matrix3d m;
  for (int i = 0; i < 3; ++i) {
    AltForm one = interior(TangentVector::basis(6, 3 + i), omega);
    for (int s = 0; s < 3; ++s) {
      m(i, s) = one[s];
      if (std::abs(one[3 + s]) > 1e-12 * scale)
        throw NotInPencil("2-form does not vanish on the fiber plane");
    }
  }
  Eigen::Matrix3d k = m * lu.inverse();  // M = K E
  AltForm rebuilt = assemble_omega(k, t);
  rebuilt -= omega;
  if (rebuilt.norm_inf() > 1e-12 * scale)
    throw NotInPencil("reconstruction residual exceeds tolerance");
  return k;
}

double closedness_residual(const InvariantTriple& t, const ModelAlgebra& alg) {
  return slice_d(assemble_psi(t), alg).norm_inf();
}

bool is_one_one(const AltForm& omega, const AltForm& psi) {
  if (classify_exact(psi) != Definiteness::Definite)
    throw NotDefinite("3-form is not definite");
  double scale = std::max(1.0, omega.norm_inf() * psi.norm_inf());
  return wedge(omega, psi).norm_inf() <= 1e-12 * scale;
}

AltForm assemble_phi(const AltForm& omega, const AltForm& psi) {
  if (omega.dim() != 6 || omega.degree() != 2 || psi.dim() != 6 ||
      psi.degree() != 3)
    throw std::invalid_argument(
        "assemble_phi expects a slice 2-form and 3-form");
  AltForm dt = AltForm::monomial(7, {6});
  return wedge(embed_in_dim7(omega), dt) + embed_in_dim7(psi);
}

}  // namespace g2lab
