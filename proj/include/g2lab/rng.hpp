#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace g2lab {

/// Deterministic random source.  mt19937_64 output is pinned by the
/// standard; the distribution mappings below are written out explicitly so
/// that identical seeds give identical streams on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  double uniform() {  // [0,1)
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  Eigen::VectorXd gaussian_vector(int n) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v(i) = gaussian();
    return v;
  }

  Eigen::VectorXd unit_vector(int n) {
    Eigen::VectorXd v;
    double nrm = 0.0;
    do {
      v = gaussian_vector(n);
      nrm = v.norm();
    } while (nrm < 1e-6);
    return v / nrm;
  }

  Eigen::MatrixXd gaussian_matrix(int r, int c) {
    Eigen::MatrixXd m(r, c);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j) m(i, j) = gaussian();
    return m;
  }

  /// Random rotation from the QR factor of a Gaussian matrix, sign-fixed.
  Eigen::Matrix3d rotation3() {
    Eigen::Matrix3d a = gaussian_matrix(3, 3);
    Eigen::HouseholderQR<Eigen::Matrix3d> qr(a);
    Eigen::Matrix3d q = qr.householderQ();
    Eigen::Matrix3d r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < 3; ++i)
      if (r(i, i) < 0) q.col(i) = -q.col(i);
    if (q.determinant() < 0) q.col(2) = -q.col(2);
    return q;
  }

  /// Invertible matrix with singular values in [smin, smax] and det > 0.
  Eigen::MatrixXd well_conditioned(int n, double smin, double smax) {
    Eigen::MatrixXd a = gaussian_matrix(n, n);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Eigen::VectorXd s(n);
    for (int i = 0; i < n; ++i) s(i) = uniform(smin, smax);
    Eigen::MatrixXd m = svd.matrixU() * s.asDiagonal() * svd.matrixV().transpose();
    if (m.determinant() < 0) m.row(0) = -m.row(0);
    return m;
  }

  std::uint64_t raw() { return eng_(); }

 private:
  std::mt19937_64 eng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace g2lab
