#include "g2lab/exterior.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <sstream>

namespace g2lab {

namespace {

constexpr int kMaxDim = 7;

void check_dim(int n) {
  if (n < 1 || n > kMaxDim) {
    throw std::invalid_argument("AltForm: dimension must be in [1,7], got " +
                                std::to_string(n));
  }
}

// Lexicographic k-subset enumeration, cached per (n,k).
struct SubsetTable {
  std::vector<std::uint8_t> masks;
  std::array<int, 256> index_of;  // mask -> lex index, -1 if absent
};

const SubsetTable& table(int n, int k) {
  static std::map<std::pair<int, int>, SubsetTable> cache;
  auto key = std::make_pair(n, k);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;

  SubsetTable t;
  t.index_of.fill(-1);
  std::vector<int> pick(static_cast<std::size_t>(k));
  // Generate sorted k-tuples in lexicographic order.
  std::vector<std::uint8_t> out;
  std::vector<int> stack;
  // Iterative enumeration.
  std::vector<int> idx(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
  if (k == 0) {
    out.push_back(0);
  } else if (k <= n) {
    while (true) {
      std::uint8_t m = 0;
      for (int i = 0; i < k; ++i) m |= static_cast<std::uint8_t>(1u << idx[static_cast<std::size_t>(i)]);
      out.push_back(m);
      int p = k - 1;
      while (p >= 0 && idx[static_cast<std::size_t>(p)] == n - k + p) --p;
      if (p < 0) break;
      ++idx[static_cast<std::size_t>(p)];
      for (int q = p + 1; q < k; ++q) idx[static_cast<std::size_t>(q)] = idx[static_cast<std::size_t>(q - 1)] + 1;
    }
  }
  t.masks = std::move(out);
  for (std::size_t i = 0; i < t.masks.size(); ++i) t.index_of[t.masks[i]] = static_cast<int>(i);
  return cache.emplace(key, std::move(t)).first->second;
}

// Sign of merging sorted disjoint subsets a and b into sorted(a|b):
// (-1)^{#inversions}, inversions counted between elements of a and b.
int merge_sign(std::uint8_t a, std::uint8_t b) {
  int inv = 0;
  for (int bit = 0; bit < kMaxDim + 1; ++bit) {
    if (a & (1u << bit)) {
      inv += std::popcount(static_cast<unsigned>(b & ((1u << bit) - 1u)));
    }
  }
  return (inv % 2 == 0) ? 1 : -1;
}

}  // namespace

int binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  long r = 1;
  for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
  return static_cast<int>(r);
}

const std::vector<std::uint8_t>& subset_masks(int n, int k) {
  check_dim(n);
  return table(n, k).masks;
}

int subset_index(int n, int k, std::uint8_t mask) {
  int r = table(n, k).index_of[mask];
  if (r < 0) throw std::invalid_argument("subset_index: mask/degree mismatch");
  return r;
}

TangentVector::TangentVector(int n, std::initializer_list<double> values) : dim(n) {
  check_dim(n);
  if (static_cast<int>(values.size()) != n) {
    throw std::invalid_argument("TangentVector: component count != dim");
  }
  int i = 0;
  for (double v : values) comp[static_cast<std::size_t>(i++)] = v;
}

TangentVector TangentVector::basis(int n, int slot) {
  check_dim(n);
  if (slot < 0 || slot >= n) throw std::invalid_argument("TangentVector::basis: bad slot");
  TangentVector x;
  x.dim = n;
  x.comp[static_cast<std::size_t>(slot)] = 1.0;
  return x;
}

AltForm::AltForm(int dim, int degree) : dim_(dim), degree_(degree) {
  check_dim(dim);
  if (degree < 0 || degree > dim) {
    throw std::invalid_argument("AltForm: degree out of range");
  }
  c_.assign(static_cast<std::size_t>(binom(dim, degree)), 0.0);
}

AltForm AltForm::monomial(int dim, const std::vector<int>& slots, double coeff) {
  AltForm a(dim, static_cast<int>(slots.size()));
  std::uint8_t mask = 0;
  // Count the sort sign of the given slot order.
  int inv = 0;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    int s = slots[i];
    if (s < 0 || s >= dim) throw std::invalid_argument("monomial: bad slot");
    if (mask & (1u << s)) return a;  // repeated slot -> zero form
    for (std::size_t j = 0; j < i; ++j) {
      if (slots[j] > s) ++inv;
    }
    mask |= static_cast<std::uint8_t>(1u << s);
  }
  double sign = (inv % 2 == 0) ? 1.0 : -1.0;
  a[subset_index(dim, a.degree(), mask)] = sign * coeff;
  return a;
}

double AltForm::coeff(const std::vector<int>& slots) const {
  std::uint8_t mask = 0;
  // Alternating access: an unsorted slot list carries its sort sign.
  int inv = 0;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    const int s = slots[i];
    if (s < 0 || s >= dim_) throw std::invalid_argument("coeff: bad slot");
    for (std::size_t j = 0; j < i; ++j) {
      if (slots[j] > s) ++inv;
    }
    mask |= static_cast<std::uint8_t>(1u << s);
  }
  if (std::popcount(static_cast<unsigned>(mask)) != degree_ ||
      slots.size() != static_cast<std::size_t>(degree_)) {
    throw std::invalid_argument("coeff: slot list does not match degree");
  }
  const double sign = (inv % 2 == 0) ? 1.0 : -1.0;
  return sign * c_[static_cast<std::size_t>(subset_index(dim_, degree_, mask))];
}

AltForm& AltForm::operator+=(const AltForm& rhs) {
  if (!same_shape(rhs)) throw std::invalid_argument("AltForm +: shape mismatch");
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += rhs.c_[i];
  return *this;
}

AltForm& AltForm::operator-=(const AltForm& rhs) {
  if (!same_shape(rhs)) throw std::invalid_argument("AltForm -: shape mismatch");
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= rhs.c_[i];
  return *this;
}

AltForm& AltForm::operator*=(double s) {
  for (double& x : c_) x *= s;
  return *this;
}

double AltForm::norm_inf() const {
  double m = 0.0;
  for (double x : c_) m = std::max(m, std::abs(x));
  return m;
}

AltForm wedge(const AltForm& a, const AltForm& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("wedge: dimension mismatch");
  int n = a.dim();
  int p = a.degree();
  int q = b.degree();
  if (p + q > n) throw std::invalid_argument("wedge: degree overflow");
  AltForm r(n, p + q);
  const auto& ma = subset_masks(n, p);
  const auto& mb = subset_masks(n, q);
  for (int i = 0; i < a.size(); ++i) {
    double ca = a[i];
    if (ca == 0.0) continue;
    std::uint8_t Ia = ma[static_cast<std::size_t>(i)];
    for (int j = 0; j < b.size(); ++j) {
      double cb = b[j];
      if (cb == 0.0) continue;
      std::uint8_t Ib = mb[static_cast<std::size_t>(j)];
      if (Ia & Ib) continue;
      int idx = subset_index(n, p + q, static_cast<std::uint8_t>(Ia | Ib));
      r[idx] += merge_sign(Ia, Ib) * ca * cb;
    }
  }
  return r;
}

AltForm interior(const TangentVector& x, const AltForm& a) {
  if (x.dim != a.dim()) throw std::invalid_argument("interior: dimension mismatch");
  if (a.degree() < 1) throw std::invalid_argument("interior: degree must be >= 1");
  int n = a.dim();
  int k = a.degree();
  AltForm r(n, k - 1);
  const auto& mk = subset_masks(n, k);
  for (int i = 0; i < a.size(); ++i) {
    double ca = a[i];
    if (ca == 0.0) continue;
    std::uint8_t I = mk[static_cast<std::size_t>(i)];
    int pos = 0;
    for (int s = 0; s < n; ++s) {
      if (!(I & (1u << s))) continue;
      double xs = x.comp[static_cast<std::size_t>(s)];
      if (xs != 0.0) {
        std::uint8_t rest = static_cast<std::uint8_t>(I & ~(1u << s));
        double sign = (pos % 2 == 0) ? 1.0 : -1.0;
        r[subset_index(n, k - 1, rest)] += sign * xs * ca;
      }
      ++pos;
    }
  }
  return r;
}

AltForm pullback(const AltForm& a, const Eigen::MatrixXd& g) {
  int n = a.dim();
  if (g.rows() != n || g.cols() != n) {
    throw std::invalid_argument("pullback: matrix must be dim x dim");
  }
  int k = a.degree();
  AltForm r(n, k);
  if (k == 0) {
    r[0] = a[0];
    return r;
  }
  const auto& mk = subset_masks(n, k);
  // (g*theta^i) = sum_j g(i,j) theta^j; expand basis monomials by minors.
  Eigen::MatrixXd minor(k, k);
  for (int i = 0; i < a.size(); ++i) {
    double ca = a[i];
    if (ca == 0.0) continue;
    std::uint8_t I = mk[static_cast<std::size_t>(i)];
    std::array<int, 7> rows{};
    int nr = 0;
    for (int s = 0; s < n; ++s)
      if (I & (1u << s)) rows[static_cast<std::size_t>(nr++)] = s;
    for (int j = 0; j < r.size(); ++j) {
      std::uint8_t J = mk[static_cast<std::size_t>(j)];
      std::array<int, 7> cols{};
      int nc = 0;
      for (int s = 0; s < n; ++s)
        if (J & (1u << s)) cols[static_cast<std::size_t>(nc++)] = s;
      for (int r0 = 0; r0 < k; ++r0)
        for (int c0 = 0; c0 < k; ++c0)
          minor(r0, c0) = g(rows[static_cast<std::size_t>(r0)], cols[static_cast<std::size_t>(c0)]);
      double d = (k == 1) ? minor(0, 0) : minor.determinant();
      if (d != 0.0) r[j] += ca * d;
    }
  }
  return r;
}

AltForm restrict_hyperplane(const AltForm& a, int slot) {
  int n = a.dim();
  if (slot < 0 || slot >= n) throw std::invalid_argument("restrict_hyperplane: bad slot");
  if (n <= 1) throw std::invalid_argument("restrict_hyperplane: dimension too small");
  int k = a.degree();
  if (k > n - 1) throw std::invalid_argument("restrict_hyperplane: degree exceeds subspace dim");
  AltForm r(n - 1, k);
  const auto& mk = subset_masks(n, k);
  for (int i = 0; i < a.size(); ++i) {
    double ca = a[i];
    if (ca == 0.0) continue;
    std::uint8_t I = mk[static_cast<std::size_t>(i)];
    if (I & (1u << slot)) continue;
    std::uint8_t low = static_cast<std::uint8_t>(I & ((1u << slot) - 1u));
    std::uint8_t high = static_cast<std::uint8_t>((I >> (slot + 1)) << slot);
    r[subset_index(n - 1, k, static_cast<std::uint8_t>(low | high))] += ca;
  }
  return r;
}

AltForm embed_in_dim7(const AltForm& a) {
  if (a.dim() != 6) throw std::invalid_argument("embed_in_dim7: expects a slice form");
  AltForm r(7, a.degree());
  const auto& mk = subset_masks(6, a.degree());
  for (int i = 0; i < a.size(); ++i) {
    if (a[i] == 0.0) continue;
    r[subset_index(7, a.degree(), mk[static_cast<std::size_t>(i)])] += a[i];
  }
  return r;
}

int two_form_rank(const AltForm& beta) {
  if (beta.degree() != 2) throw std::invalid_argument("two_form_rank: degree must be 2");
  double base = beta.norm_inf();
  if (base == 0.0) return 0;
  int rank = 0;
  AltForm power = beta;
  double scale = base;
  int r = 1;
  while (true) {
    if (power.norm_inf() <= kRankEps * scale) break;
    rank = 2 * r;
    if (2 * (r + 1) > beta.dim()) break;
    power = wedge(power, beta);
    scale *= base;
    ++r;
  }
  return rank;
}

namespace {
const std::array<const char*, 7> kCanonical6 = {"s1", "s2", "s3", "m1", "m2", "m3", "dt"};
const std::array<const char*, 7> kAlternate = {"v1", "w1", "v2", "w2", "v3", "w3", "v0"};
}  // namespace

int slot_from_label(const std::string& label, int dim) {
  check_dim(dim);
  for (int i = 0; i < dim; ++i) {
    if (label == kCanonical6[static_cast<std::size_t>(i)] ||
        label == kAlternate[static_cast<std::size_t>(i)])
      return i;
  }
  throw std::invalid_argument("slot_from_label: unknown label '" + label + "'");
}

std::string label_of_slot(int slot, int dim, bool alternate) {
  check_dim(dim);
  if (slot < 0 || slot >= dim) throw std::invalid_argument("label_of_slot: bad slot");
  return alternate ? kAlternate[static_cast<std::size_t>(slot)]
                   : kCanonical6[static_cast<std::size_t>(slot)];
}

AltForm monomial_from_labels(int dim, const std::string& labels, double coeff) {
  std::istringstream in(labels);
  std::string tok;
  std::vector<int> slots;
  while (in >> tok) slots.push_back(slot_from_label(tok, dim));
  return AltForm::monomial(dim, slots, coeff);
}

std::string to_string(const AltForm& a) {
  std::ostringstream out;
  const auto& mk = subset_masks(a.dim(), a.degree());
  bool first = true;
  for (int i = 0; i < a.size(); ++i) {
    if (a[i] == 0.0) continue;
    out << (first ? "" : " + ") << a[i] << "*";
    for (int s = 0; s < a.dim(); ++s)
      if (mk[static_cast<std::size_t>(i)] & (1u << s)) out << label_of_slot(s, a.dim());
    first = false;
  }
  if (first) out << "0";
  return out.str();
}

}  // namespace g2lab
