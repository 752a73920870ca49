#include "g2lab/stable_forms.hpp"

#include <array>
#include <cmath>
#include <functional>
#include <utility>

namespace g2lab {
namespace {

TangentVector to_tangent(const Eigen::VectorXd& v) {
  TangentVector t;
  t.dim = static_cast<int>(v.size());
  for (int i = 0; i < t.dim; ++i) t.comp[static_cast<std::size_t>(i)] = v(i);
  return t;
}

AltForm contract(const AltForm& a, const Eigen::VectorXd& v) {
  return interior(to_tangent(v), a);
}

/// Coefficient matrix of a 2-form: M(i,j) = beta(e_i, e_j), antisymmetric.
Eigen::MatrixXd two_form_matrix(const AltForm& beta) {
  int n = beta.dim();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  const auto& masks = subset_masks(n, 2);
  for (int idx = 0; idx < static_cast<int>(masks.size()); ++idx) {
    std::uint8_t mask = masks[static_cast<std::size_t>(idx)];
    int i = 0;
    while (!(mask & (1u << i))) ++i;
    int j = i + 1;
    while (!(mask & (1u << j))) ++j;
    m(i, j) = beta[idx];
    m(j, i) = -beta[idx];
  }
  return m;
}

double golden_minimize(const std::function<double(double)>& fn, double a,
                       double b, int iters) {
  constexpr double kInvPhi = 0.61803398874989484820;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = fn(x1);
  double f2 = fn(x2);
  for (int it = 0; it < iters; ++it) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = fn(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = fn(x2);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

AltForm psi0() {
  AltForm p = monomial_from_labels(6, "w1 w2 w3", -1.0);
  p += monomial_from_labels(6, "w1 v2 v3");
  p += monomial_from_labels(6, "w2 v3 v1");
  p += monomial_from_labels(6, "w3 v1 v2");
  return p;
}

AltForm omega0() {
  AltForm w = monomial_from_labels(6, "v1 w1");
  w += monomial_from_labels(6, "v2 w2");
  w += monomial_from_labels(6, "v3 w3");
  return w;
}

AltForm phi0() {
  AltForm dt = AltForm::monomial(7, {6});
  return wedge(embed_in_dim7(omega0()), dt) + embed_in_dim7(psi0());
}

Eigen::Matrix<double, 6, 6> k_endomorphism(const AltForm& psi, double volcoef) {
  if (psi.dim() != 6 || psi.degree() != 3)
    throw std::invalid_argument("k_endomorphism expects a 3-form in dimension 6");
  if (volcoef == 0.0) throw std::invalid_argument("zero reference volume");
  Eigen::Matrix<double, 6, 6> k;
  for (int j = 0; j < 6; ++j) {
    AltForm five = wedge(interior(TangentVector::basis(6, j), psi), psi);
    for (int i = 0; i < 6; ++i) {
      std::uint8_t comp = static_cast<std::uint8_t>(0x3F & ~(1u << i));
      double sign = (i % 2 == 0) ? 1.0 : -1.0;
      k(i, j) = sign * five[subset_index(6, 5, comp)] / volcoef;
    }
  }
  return k;
}

namespace {

double lambda_raw(const AltForm& psi, double volcoef) {
  Eigen::Matrix<double, 6, 6> k = k_endomorphism(psi, volcoef);
  return (k * k).trace();
}

/// Normalization constant: raw invariant of the reference form (= -24).
double reference_constant() {
  static const double c0 = lambda_raw(psi0(), 1.0);
  return c0;
}

}  // namespace

double lambda_invariant(const AltForm& psi, double volcoef) {
  return -lambda_raw(psi, volcoef) / reference_constant();
}

Definiteness classify_exact(const AltForm& psi, double volcoef) {
  double lam = lambda_invariant(psi, volcoef);
  double n = psi.norm_inf();
  double scale = (n * n) * (n * n) / (volcoef * volcoef);
  double band = 1e-10 * scale / std::abs(reference_constant());
  if (std::abs(lam) <= band) return Definiteness::Degenerate;
  return lam < 0.0 ? Definiteness::Definite : Definiteness::OtherOpenOrbit;
}

SampledCheck classify_sampled(const AltForm& psi, int samples, Rng& rng) {
  if (psi.dim() != 6 || psi.degree() != 3)
    throw std::invalid_argument("classify_sampled expects a 3-form in dimension 6");
  SampledCheck res;
  auto fail = [&res](const Eigen::VectorXd& v) {
    res.plausible_definite = false;
    res.witness = v;
  };
  for (int s = 0; s < samples; ++s) {
    Eigen::VectorXd v = rng.unit_vector(6);
    AltForm beta = contract(psi, v);
    if (two_form_rank(beta) != 4) {
      fail(v);
      return res;
    }
    // The contraction has a 2-dimensional kernel plane.  A non-definite
    // form with both open-orbit contractions of rank 4 still has
    // rank-deficient directions inside that plane; scan the circle of
    // kernel directions for them.
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(two_form_matrix(beta),
                                          Eigen::ComputeFullV);
    Eigen::VectorXd k1 = svd.matrixV().col(4);
    Eigen::VectorXd k2 = svd.matrixV().col(5);
    AltForm b1 = contract(psi, k1);
    AltForm b2 = contract(psi, k2);
    AltForm q11 = wedge(b1, b1);
    AltForm q12 = wedge(b1, b2);
    AltForm q22 = wedge(b2, b2);
    auto probe = [&](double theta) {
      double c = std::cos(theta);
      double sn = std::sin(theta);
      AltForm q = (c * c) * q11;
      q += (2.0 * c * sn) * q12;
      q += (sn * sn) * q22;
      return q.norm_inf();
    };
    constexpr int kGrid = 48;
    constexpr double kPi = 3.14159265358979323846;
    double best = probe(0.0);
    double best_theta = 0.0;
    for (int g = 1; g < kGrid; ++g) {
      double theta = kPi * g / kGrid;
      double p = probe(theta);
      if (p < best) {
        best = p;
        best_theta = theta;
      }
    }
    double half = kPi / kGrid;
    double theta_min =
        golden_minimize(probe, best_theta - half, best_theta + half, 60);
    Eigen::VectorXd u =
        std::cos(theta_min) * k1 + std::sin(theta_min) * k2;
    u.normalize();
    if (two_form_rank(contract(psi, u)) != 4) {
      fail(u);
      return res;
    }
  }
  return res;
}

Eigen::Matrix<double, 6, 6> almost_complex_structure(const AltForm& psi,
                                                     double volcoef) {
  Eigen::Matrix<double, 6, 6> k = k_endomorphism(psi, volcoef);
  double raw = (k * k).trace();
  double n = psi.norm_inf();
  double scale = (n * n) * (n * n) / (volcoef * volcoef);
  if (!(raw < -1e-10 * scale))
    throw NotDefinite("invariant is not negative: form is not definite");
  Eigen::Matrix<double, 6, 6> j = -k / std::sqrt(-raw / 6.0);
  Eigen::Matrix<double, 6, 6> defect =
      j * j + Eigen::Matrix<double, 6, 6>::Identity();
  double tol = 1e-9 * (1.0 + j.squaredNorm());
  if (defect.cwiseAbs().maxCoeff() > tol)
    throw NotDefinite("contraction endomorphism does not square to a negative "
                      "multiple of the identity");
  return j;
}

Eigen::Matrix<double, 7, 7> bilinear_from_phi(const AltForm& phi) {
  if (phi.dim() != 7 || phi.degree() != 3)
    throw std::invalid_argument("bilinear_from_phi expects a 3-form in dimension 7");
  std::array<AltForm, 7> contr;
  for (int i = 0; i < 7; ++i)
    contr[static_cast<std::size_t>(i)] =
        interior(TangentVector::basis(7, i), phi);
  Eigen::Matrix<double, 7, 7> b;
  for (int i = 0; i < 7; ++i) {
    for (int j = i; j < 7; ++j) {
      AltForm seven = wedge(wedge(contr[static_cast<std::size_t>(i)],
                                  contr[static_cast<std::size_t>(j)]),
                            phi);
      b(i, j) = seven[0];
      b(j, i) = seven[0];
    }
  }
  return b;
}

MetricResult metric_from_phi(const AltForm& phi) {
  Eigen::Matrix<double, 7, 7> b = bilinear_from_phi(phi);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, 7, 7>> es(b);
  Eigen::Matrix<double, 7, 1> ev = es.eigenvalues();
  double bnorm = ev.cwiseAbs().maxCoeff();
  if (bnorm == 0.0) throw NotDefinite("bilinear form vanishes");
  double floor = 1e-10 * bnorm;
  bool pos = (ev.array() >= floor).all();
  bool neg = (ev.array() <= -floor).all();
  if (!pos && !neg)
    throw NotDefinite("bilinear form is indefinite or singular");
  if (neg) {  // orientation flip: measure against the negated volume
    b = -b;
    ev = -ev;
  }
  double det_b = ev.prod();
  double scale = std::pow(6.0, -2.0 / 9.0) * std::pow(det_b, -1.0 / 9.0);
  MetricResult out;
  out.metric = scale * b;
  out.volume = std::sqrt(out.metric.determinant());
  return out;
}

}  // namespace g2lab
