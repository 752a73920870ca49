#include <algorithm>
#include <map>
#include <vector>

#include <doctest.h>

#include "g2lab/exterior.hpp"
#include "g2lab/rng.hpp"

using namespace g2lab;

namespace {

/// Independent oracle: forms as sorted-index-tuple -> coefficient maps, with
/// the wedge implemented by concatenate-and-sort with an explicit sign.
struct NaiveForm {
  int dim = 6;
  int degree = 0;
  std::map<std::vector<int>, double> terms;

  void add(std::vector<int> idx, double c) {
    int sign = 1;
    for (size_t i = 0; i + 1 < idx.size(); ++i) {
      for (size_t j = 0; j + 1 < idx.size() - i; ++j) {
        if (idx[j] == idx[j + 1]) return;  // repeated index kills the term
        if (idx[j] > idx[j + 1]) {
          std::swap(idx[j], idx[j + 1]);
          sign = -sign;
        }
      }
    }
    if (idx.size() >= 2 && idx[idx.size() - 2] == idx.back()) return;
    terms[idx] += sign * c;
  }
};

NaiveForm naive_of(const AltForm& a) {
  NaiveForm out;
  out.dim = a.dim();
  out.degree = a.degree();
  const auto& masks = subset_masks(a.dim(), a.degree());
  for (int i = 0; i < a.size(); ++i) {
    std::vector<int> idx;
    for (int s = 0; s < a.dim(); ++s) {
      if (masks[static_cast<size_t>(i)] & (1u << s)) idx.push_back(s);
    }
    if (a[i] != 0.0) out.terms[idx] += a[i];
  }
  return out;
}

NaiveForm naive_wedge(const NaiveForm& a, const NaiveForm& b) {
  NaiveForm out;
  out.dim = a.dim;
  out.degree = a.degree + b.degree;
  for (const auto& [ia, ca] : a.terms) {
    for (const auto& [ib, cb] : b.terms) {
      std::vector<int> idx = ia;
      idx.insert(idx.end(), ib.begin(), ib.end());
      out.add(idx, ca * cb);
    }
  }
  return out;
}

bool same(const NaiveForm& a, const AltForm& b, double tol = 0.0) {
  NaiveForm nb = naive_of(b);
  std::map<std::vector<int>, double> diff = a.terms;
  for (const auto& [k, v] : nb.terms) diff[k] -= v;
  for (const auto& [k, v] : diff) {
    if (std::abs(v) > tol) return false;
  }
  return true;
}

AltForm random_form(int dim, int degree, Rng& rng) {
  AltForm a(dim, degree);
  for (int i = 0; i < a.size(); ++i) a[i] = rng.gaussian();
  return a;
}

}  // namespace

TEST_CASE("binomials and subset enumeration") {
  CHECK(binom(6, 3) == 20);
  CHECK(binom(7, 3) == 35);
  CHECK(binom(6, 2) == 15);
  CHECK(binom(7, 0) == 1);
  for (int n = 1; n <= 7; ++n) {
    for (int k = 0; k <= n; ++k) {
      const auto& masks = subset_masks(n, k);
      REQUIRE(static_cast<int>(masks.size()) == binom(n, k));
      for (size_t i = 0; i < masks.size(); ++i) {
        CHECK(__builtin_popcount(masks[i]) == k);
        CHECK(subset_index(n, k, masks[i]) == static_cast<int>(i));
        if (i > 0) {
          // lexicographic on index tuples = ascending reversed-bit order;
          // adjacent masks must differ
          CHECK(masks[i] != masks[i - 1]);
        }
      }
    }
  }
}

TEST_CASE("monomial and coefficient access") {
  AltForm a = AltForm::monomial(6, {0, 2, 4}, 2.5);
  CHECK(a.coeff({0, 2, 4}) == 2.5);
  CHECK(a.coeff({2, 0, 4}) == -2.5);  // odd permutation of the slot list
  CHECK(a.coeff({4, 2, 0}) == -2.5);
  CHECK(a.coeff({0, 1, 2}) == 0.0);
  CHECK(a.norm_inf() == 2.5);
  CHECK(AltForm::monomial(6, {0, 0, 1}).norm_inf() == 0.0);
}

TEST_CASE("wedge agrees with the naive oracle") {
  Rng rng(12345);
  const std::vector<std::pair<int, int>> degrees = {
      {1, 1}, {1, 2}, {2, 2}, {2, 3}, {3, 3}, {1, 3}};
  for (int dim : {6, 7}) {
    for (auto [p, q] : degrees) {
      for (int rep = 0; rep < 5; ++rep) {
        AltForm a = random_form(dim, p, rng);
        AltForm b = random_form(dim, q, rng);
        AltForm w = wedge(a, b);
        NaiveForm nw = naive_wedge(naive_of(a), naive_of(b));
        CHECK(same(nw, w, 1e-15));
      }
    }
  }
}

TEST_CASE("wedge anticommutativity and associativity") {
  Rng rng(777);
  for (int rep = 0; rep < 10; ++rep) {
    AltForm a = random_form(6, 1, rng);
    AltForm b = random_form(6, 2, rng);
    AltForm c = random_form(6, 3, rng);
    // a ^ b = (-1)^{pq} b ^ a
    AltForm ab = wedge(a, b);
    AltForm ba = wedge(b, a);
    ba *= ((1 * 2) % 2 == 0) ? 1.0 : -1.0;
    AltForm diff = ab;
    diff -= ba;
    CHECK(diff.norm_inf() <= 1e-14 * (1.0 + ab.norm_inf()));

    AltForm bb = random_form(6, 2, rng);
    AltForm s = wedge(b, bb);
    AltForm t = wedge(bb, b);
    AltForm d2 = s;
    d2 -= t;  // even degrees commute
    CHECK(d2.norm_inf() <= 1e-14 * (1.0 + s.norm_inf()));

    AltForm left = wedge(wedge(a, b), c);
    AltForm right = wedge(a, wedge(b, c));
    AltForm d3 = left;
    d3 -= right;
    CHECK(d3.norm_inf() <= 1e-14 * (1.0 + right.norm_inf()));
  }
}

TEST_CASE("standard symplectic power") {
  // (sum_i v^i ^ w^i)^3 = 6 v1 w1 v2 w2 v3 w3
  AltForm omega(6, 2);
  omega += AltForm::monomial(6, {0, 1});
  omega += AltForm::monomial(6, {2, 3});
  omega += AltForm::monomial(6, {4, 5});
  AltForm cube = wedge(wedge(omega, omega), omega);
  CHECK(cube.coeff({0, 1, 2, 3, 4, 5}) == 6.0);
  CHECK(cube.norm_inf() == 6.0);
}

TEST_CASE("interior product is an antiderivation") {
  Rng rng(999);
  for (int rep = 0; rep < 10; ++rep) {
    Eigen::VectorXd comps = rng.gaussian_vector(6);
    TangentVector v(6, {comps[0], comps[1], comps[2], comps[3], comps[4],
                        comps[5]});
    AltForm a = random_form(6, 2, rng);
    AltForm b = random_form(6, 3, rng);
    AltForm lhs = interior(v, wedge(a, b));
    AltForm rhs = wedge(interior(v, a), b);
    AltForm second = wedge(a, interior(v, b));
    second *= 1.0;  // degree of a is even
    rhs += second;
    AltForm diff = lhs;
    diff -= rhs;
    CHECK(diff.norm_inf() <= 1e-13 * (1.0 + lhs.norm_inf()));

    // iota_v twice on anything is zero
    AltForm zz = interior(v, interior(v, wedge(a, b)));
    CHECK(zz.norm_inf() <= 1e-13 * (1.0 + wedge(a, b).norm_inf()));
  }
}

TEST_CASE("interior with odd-degree first factor") {
  Rng rng(1001);
  for (int rep = 0; rep < 10; ++rep) {
    Eigen::VectorXd comps = rng.gaussian_vector(6);
    TangentVector v(6, {comps[0], comps[1], comps[2], comps[3], comps[4],
                        comps[5]});
    AltForm a = random_form(6, 1, rng);
    AltForm b = random_form(6, 3, rng);
    AltForm lhs = interior(v, wedge(a, b));
    AltForm rhs = wedge(interior(v, a), b);
    AltForm second = wedge(a, interior(v, b));
    second *= -1.0;  // (-1)^deg(a)
    rhs += second;
    AltForm diff = lhs;
    diff -= rhs;
    CHECK(diff.norm_inf() <= 1e-13 * (1.0 + lhs.norm_inf()));
  }
}

TEST_CASE("pullback is contravariant and compatible with interior") {
  Rng rng(4242);
  for (int rep = 0; rep < 6; ++rep) {
    Eigen::MatrixXd g = rng.gaussian_matrix(6, 6);
    Eigen::MatrixXd h = rng.gaussian_matrix(6, 6);
    AltForm a = random_form(6, 3, rng);

    AltForm lhs = pullback(a, g * h);
    AltForm rhs = pullback(pullback(a, g), h);
    AltForm diff = lhs;
    diff -= rhs;
    CHECK(diff.norm_inf() <= 1e-10 * (1.0 + lhs.norm_inf()));

    AltForm ident = pullback(a, Eigen::MatrixXd::Identity(6, 6));
    AltForm d2 = ident;
    d2 -= a;
    CHECK(d2.norm_inf() == 0.0);

    Eigen::VectorXd comps = rng.gaussian_vector(6);
    TangentVector v(6, {comps[0], comps[1], comps[2], comps[3], comps[4],
                        comps[5]});
    Eigen::VectorXd vv(6);
    for (int i = 0; i < 6; ++i) vv(i) = comps[static_cast<size_t>(i)];
    Eigen::VectorXd gv = g * vv;
    TangentVector gvt(6, {gv(0), gv(1), gv(2), gv(3), gv(4), gv(5)});
    AltForm left = interior(v, pullback(a, g));
    AltForm right = pullback(interior(gvt, a), g);
    AltForm d3 = left;
    d3 -= right;
    CHECK(d3.norm_inf() <= 1e-10 * (1.0 + left.norm_inf()));
  }
}

TEST_CASE("two-form rank classification") {
  AltForm degenerate = AltForm::monomial(6, {0, 1});
  CHECK(two_form_rank(degenerate) == 2);

  AltForm rank4 = AltForm::monomial(6, {0, 1});
  rank4 += AltForm::monomial(6, {2, 3});
  CHECK(two_form_rank(rank4) == 4);

  AltForm rank6 = rank4;
  rank6 += AltForm::monomial(6, {4, 5});
  CHECK(two_form_rank(rank6) == 6);

  CHECK(two_form_rank(AltForm(6, 2)) == 0);

  // rank is invariant under pullback by invertible maps
  Rng rng(31337);
  for (int rep = 0; rep < 10; ++rep) {
    Eigen::MatrixXd g = rng.well_conditioned(6, 0.5, 2.0);
    CHECK(two_form_rank(pullback(rank4, g)) == 4);
    CHECK(two_form_rank(pullback(rank6, g)) == 6);
  }
}

TEST_CASE("hyperplane restriction and dimension-7 embedding") {
  Rng rng(55);
  AltForm a = random_form(6, 3, rng);
  AltForm lifted = embed_in_dim7(a);
  CHECK(lifted.dim() == 7);
  AltForm back = restrict_hyperplane(lifted, 6);
  AltForm diff = back;
  diff -= a;
  CHECK(diff.norm_inf() == 0.0);

  // a term containing slot 6 dies under restriction
  AltForm dt_term = AltForm::monomial(7, {0, 1, 6});
  CHECK(restrict_hyperplane(dt_term, 6).norm_inf() == 0.0);
}

TEST_CASE("slot labels") {
  CHECK(slot_from_label("s1", 6) == 0);
  CHECK(slot_from_label("s2", 6) == 1);
  CHECK(slot_from_label("s3", 6) == 2);
  CHECK(slot_from_label("m1", 6) == 3);
  CHECK(slot_from_label("m2", 6) == 4);
  CHECK(slot_from_label("m3", 6) == 5);
  CHECK(slot_from_label("v1", 6) == 0);
  CHECK(slot_from_label("w1", 6) == 1);
  CHECK(slot_from_label("v2", 6) == 2);
  CHECK(slot_from_label("w2", 6) == 3);
  CHECK(slot_from_label("v3", 6) == 4);
  CHECK(slot_from_label("w3", 6) == 5);
  CHECK(slot_from_label("dt", 7) == 6);
  CHECK(slot_from_label("v0", 7) == 6);
  CHECK(label_of_slot(0, 6) == std::string("s1"));
  CHECK(label_of_slot(0, 6, true) == std::string("v1"));
  CHECK(label_of_slot(6, 7) == std::string("dt"));
  CHECK_THROWS_AS((void)slot_from_label("dt", 6), std::invalid_argument);
  CHECK_THROWS_AS((void)slot_from_label("zz", 6), std::invalid_argument);

  AltForm m = monomial_from_labels(6, "w1 v2 v3");
  CHECK(m.coeff({1, 2, 4}) == 1.0);
  AltForm n = monomial_from_labels(6, "v2 w1 v3", 2.0);
  CHECK(n.coeff({1, 2, 4}) == -2.0);
}
