#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace g2lab {

/// Number of k-element subsets of an n-element set (small n only).
int binom(int n, int k);

/// Basis k-subsets of {0..n-1} as bitmasks, in lexicographic order of the
/// sorted element lists.  Index into this list is the coefficient index
/// used by AltForm.
const std::vector<std::uint8_t>& subset_masks(int n, int k);

/// Inverse of subset_masks: lexicographic index of a given subset mask.
int subset_index(int n, int k, std::uint8_t mask);

/// Tangent vector on the n-dimensional model space (n <= 7).
struct TangentVector {
  int dim = 0;
  std::array<double, 7> comp{};

  TangentVector() = default;
  TangentVector(int n, std::initializer_list<double> values);
  static TangentVector basis(int n, int slot);
  double& operator[](int i) { return comp[static_cast<std::size_t>(i)]; }
  double operator[](int i) const { return comp[static_cast<std::size_t>(i)]; }
};

/// Alternating k-form with dense coefficients over the lexicographic basis
/// of k-subsets of coframe slots.  The supported model spaces have
/// dimension 6 (slice) and 7 (slice x interval); smaller dimensions are
/// allowed for internal use.
class AltForm {
 public:
  AltForm() = default;
  AltForm(int dim, int degree);

  static AltForm zero(int dim, int degree) { return AltForm(dim, degree); }
  /// Basis monomial for the given slots (need not be sorted; repeated slots
  /// give the zero form).  The coefficient carries the sort sign.
  static AltForm monomial(int dim, const std::vector<int>& slots,
                          double coeff = 1.0);

  int dim() const { return dim_; }
  int degree() const { return degree_; }
  int size() const { return static_cast<int>(c_.size()); }

  double& operator[](int i) { return c_[static_cast<std::size_t>(i)]; }
  double operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }

  /// Value on the listed coframe slots; an unsorted list carries its
  /// permutation sign.
  double coeff(const std::vector<int>& slots) const;

  const std::vector<double>& coeffs() const { return c_; }
  std::vector<double>& coeffs() { return c_; }

  AltForm& operator+=(const AltForm& rhs);
  AltForm& operator-=(const AltForm& rhs);
  AltForm& operator*=(double s);
  friend AltForm operator+(AltForm a, const AltForm& b) { return a += b; }
  friend AltForm operator-(AltForm a, const AltForm& b) { return a -= b; }
  friend AltForm operator*(double s, AltForm a) { return a *= s; }

  double norm_inf() const;
  bool same_shape(const AltForm& other) const {
    return dim_ == other.dim_ && degree_ == other.degree_;
  }

 private:
  int dim_ = 0;
  int degree_ = 0;
  std::vector<double> c_;
};

/// Exterior product.  Throws std::invalid_argument on dimension mismatch or
/// degree overflow (p + q > dim).
AltForm wedge(const AltForm& a, const AltForm& b);

/// Interior product (contraction with X in the first argument slot);
/// antiderivation of degree -1.  Requires degree >= 1.
AltForm interior(const TangentVector& x, const AltForm& a);

/// Pullback along the linear map with matrix g (column-action on vectors):
/// (g*alpha)(v1..vk) = alpha(g v1, .., g vk).
AltForm pullback(const AltForm& a, const Eigen::MatrixXd& g);

/// Restriction to the coordinate hyperplane {slot = 0}: drops every
/// monomial containing the slot and renumbers the remaining slots.
AltForm restrict_hyperplane(const AltForm& a, int slot);

/// Inclusion of a 6-dimensional slice form into the 7-dimensional space
/// (the added last slot never appears).
AltForm embed_in_dim7(const AltForm& a);

/// Rank of a 2-form via exact wedge powers: the largest r with beta^r
/// nonzero gives rank 2r.  Coefficients of beta^r are treated as zero below
/// 1e-12 relative to |beta|_inf^r, so exact integer inputs never hit the
/// tolerance path.
int two_form_rank(const AltForm& beta);

/// Relative zero tolerance used by two_form_rank.
inline constexpr double kRankEps = 1e-12;

/// Coframe slot naming.  Dimension 6 uses (s1,s2,s3,m1,m2,m3); dimension 7
/// appends dt.  The alternate scheme (v1,w1,v2,w2,v3,w3[,v0]) names the
/// same slots in order.
int slot_from_label(const std::string& label, int dim);
std::string label_of_slot(int slot, int dim, bool alternate = false);

/// Monomial built from whitespace-separated slot labels, e.g. "w1 v2 v3".
AltForm monomial_from_labels(int dim, const std::string& labels,
                             double coeff = 1.0);

/// Human-readable rendering ("-1*s123 + 1*s1m2m3" style), for witnesses.
std::string to_string(const AltForm& a);

}  // namespace g2lab
