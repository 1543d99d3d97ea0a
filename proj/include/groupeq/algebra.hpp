#pragma once

#include <algorithm>
#include <cctype>
#include <compare>
#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "groupeq/error.hpp"
#include "groupeq/int_matrix.hpp"
#include "groupeq/integer.hpp"

namespace groupeq {

/// Shape of a finitely generated abelian group: C_{n_1} x ... x C_{n_l} x Z^r.
struct AbelianShape {
  std::vector<std::uint64_t> torsion_orders;
  std::size_t free_rank = 0;

  std::size_t torsion_size() const {
    std::size_t n = 1;
    for (auto o : torsion_orders) n *= o;
    return n;
  }
  friend bool operator==(const AbelianShape&, const AbelianShape&) = default;
};

/// P x A with P = C_{p^{k_1}} x ... x C_{p^{k_l}} and A free abelian of rank r.
struct AbelianGroupSpec {
  std::uint64_t p = 2;
  std::vector<unsigned> torsion_exponents;
  std::size_t free_rank = 0;

  AbelianShape shape() const {
    AbelianShape s;
    for (unsigned k : torsion_exponents) {
      if (k == 0) throw PreconditionError("torsion exponents must be at least 1");
      s.torsion_orders.push_back(static_cast<std::uint64_t>(ipow(static_cast<std::int64_t>(p), k)));
    }
    s.free_rank = free_rank;
    return s;
  }
  friend bool operator==(const AbelianGroupSpec&, const AbelianGroupSpec&) = default;
};

/// A group element: torsion exponents reduced mod n_i, then free exponents.
struct Monomial {
  std::vector<std::uint64_t> torsion;
  std::vector<std::int64_t> free;

  static Monomial identity(const AbelianShape& s) {
    return {std::vector<std::uint64_t>(s.torsion_orders.size(), 0), std::vector<std::int64_t>(s.free_rank, 0)};
  }
  bool is_identity() const {
    return std::all_of(torsion.begin(), torsion.end(), [](auto e) { return e == 0; }) &&
           std::all_of(free.begin(), free.end(), [](auto e) { return e == 0; });
  }
  friend auto operator<=>(const Monomial&, const Monomial&) = default;
};

inline Monomial monomial_product(const AbelianShape& s, const Monomial& a, const Monomial& b) {
  Monomial out = a;
  for (std::size_t i = 0; i < out.torsion.size(); ++i) out.torsion[i] = (a.torsion[i] + b.torsion[i]) % s.torsion_orders[i];
  for (std::size_t i = 0; i < out.free.size(); ++i) out.free[i] += b.free[i];
  return out;
}

inline Monomial monomial_inverse(const AbelianShape& s, const Monomial& a) {
  Monomial out = a;
  for (std::size_t i = 0; i < out.torsion.size(); ++i) out.torsion[i] = (s.torsion_orders[i] - a.torsion[i]) % s.torsion_orders[i];
  for (auto& e : out.free) e = -e;
  return out;
}

/// Mixed-radix index of a torsion monomial, first coordinate fastest.
inline std::size_t torsion_index(const AbelianShape& s, const Monomial& m) {
  std::size_t idx = 0, radix = 1;
  for (std::size_t i = 0; i < s.torsion_orders.size(); ++i) {
    idx += m.torsion[i] * radix;
    radix *= s.torsion_orders[i];
  }
  return idx;
}

inline Monomial torsion_monomial(const AbelianShape& s, std::size_t idx) {
  Monomial m = Monomial::identity(s);
  for (std::size_t i = 0; i < s.torsion_orders.size(); ++i) {
    m.torsion[i] = idx % s.torsion_orders[i];
    idx /= s.torsion_orders[i];
  }
  return m;
}

/// Coefficient ring: the p-element field.
struct PrimeField {
  std::uint64_t p = 2;
  using value_type = std::uint64_t;

  PrimeField() = default;
  explicit PrimeField(std::uint64_t prime) : p(prime) {
    require_prime(p);
    if (p >= (1ull << 31)) throw PreconditionError("prime too large for the coefficient field");
  }
  value_type from_integer(const Integer& v) const {
    Integer r = v % p;
    if (r < 0) r += p;
    return static_cast<value_type>(r);
  }
  value_type from_int(long long v) const { return static_cast<value_type>(floor_mod(v, static_cast<std::int64_t>(p))); }
  value_type add(value_type a, value_type b) const { return (a + b) % p; }
  value_type mul(value_type a, value_type b) const { return a * b % p; }
  value_type neg(value_type a) const { return a ? p - a : 0; }
  bool is_zero(value_type a) const { return a == 0; }
  bool is_negative(value_type) const { return false; }
  Integer to_integer(value_type a) const { return Integer(a); }
  friend bool operator==(const PrimeField&, const PrimeField&) = default;
};

/// Coefficient ring: the integers.
struct IntegerRing {
  using value_type = Integer;

  value_type from_integer(const Integer& v) const { return v; }
  value_type from_int(long long v) const { return Integer(v); }
  value_type add(const value_type& a, const value_type& b) const { return a + b; }
  value_type mul(const value_type& a, const value_type& b) const { return a * b; }
  value_type neg(const value_type& a) const { return -a; }
  bool is_zero(const value_type& a) const { return a == 0; }
  bool is_negative(const value_type& a) const { return a < 0; }
  Integer to_integer(const value_type& a) const { return a; }
  friend bool operator==(const IntegerRing&, const IntegerRing&) = default;
};

/// An element of the group ring R[D] for D of the given shape; terms are kept in canonical
/// monomial order with no zero coefficients.
template <class Ring>
class GroupRingElement {
 public:
  using value_type = typename Ring::value_type;
  using Terms = std::map<Monomial, value_type>;

  GroupRingElement() = default;
  GroupRingElement(AbelianShape shape, Ring ring) : shape_(std::move(shape)), ring_(ring) {}

  static GroupRingElement zero(const AbelianShape& s, const Ring& r) { return {s, r}; }
  static GroupRingElement constant(const AbelianShape& s, const Ring& r, long long c) {
    return monomial(s, r, Monomial::identity(s), r.from_int(c));
  }
  static GroupRingElement one(const AbelianShape& s, const Ring& r) { return constant(s, r, 1); }
  static GroupRingElement monomial(const AbelianShape& s, const Ring& r, Monomial m, value_type c) {
    GroupRingElement e(s, r);
    e.add_term(std::move(m), c);
    return e;
  }
  /// x_i^e, i the 0-based torsion generator index.
  static GroupRingElement torsion_generator(const AbelianShape& s, const Ring& r, std::size_t i, long long e = 1) {
    if (i >= s.torsion_orders.size()) throw PreconditionError("no torsion generator x" + std::to_string(i + 1));
    Monomial m = Monomial::identity(s);
    m.torsion[i] = static_cast<std::uint64_t>(floor_mod(e, static_cast<std::int64_t>(s.torsion_orders[i])));
    return monomial(s, r, std::move(m), r.from_int(1));
  }
  /// t_j^e, j the 0-based free generator index.
  static GroupRingElement free_generator(const AbelianShape& s, const Ring& r, std::size_t j, long long e = 1) {
    if (j >= s.free_rank) throw PreconditionError("no free generator t" + std::to_string(j + 1));
    Monomial m = Monomial::identity(s);
    m.free[j] = e;
    return monomial(s, r, std::move(m), r.from_int(1));
  }

  const AbelianShape& shape() const noexcept { return shape_; }
  const Ring& ring() const noexcept { return ring_; }
  const Terms& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }

  value_type coefficient(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? ring_.from_int(0) : it->second;
  }

  void add_term(Monomial m, const value_type& c) {
    if (ring_.is_zero(c)) return;
    auto [it, inserted] = terms_.try_emplace(std::move(m), c);
    if (!inserted) {
      it->second = ring_.add(it->second, c);
      if (ring_.is_zero(it->second)) terms_.erase(it);
    }
  }

  friend GroupRingElement operator+(GroupRingElement a, const GroupRingElement& b) {
    a.check_compatible(b);
    for (const auto& [m, c] : b.terms_) a.add_term(m, c);
    return a;
  }
  friend GroupRingElement operator-(const GroupRingElement& a) {
    GroupRingElement out(a.shape_, a.ring_);
    for (const auto& [m, c] : a.terms_) out.terms_.emplace(m, a.ring_.neg(c));
    return out;
  }
  friend GroupRingElement operator-(const GroupRingElement& a, const GroupRingElement& b) { return a + (-b); }
  friend GroupRingElement operator*(const GroupRingElement& a, const GroupRingElement& b) {
    a.check_compatible(b);
    GroupRingElement out(a.shape_, a.ring_);
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) out.add_term(monomial_product(a.shape_, ma, mb), a.ring_.mul(ca, cb));
    return out;
  }
  GroupRingElement scaled(const value_type& k) const {
    GroupRingElement out(shape_, ring_);
    for (const auto& [m, c] : terms_) out.add_term(m, ring_.mul(k, c));
    return out;
  }
  GroupRingElement pow(unsigned long long e) const {
    GroupRingElement out = one(shape_, ring_), base = *this;
    while (e) {
      if (e & 1) out = out * base;
      base = base * base;
      e >>= 1;
    }
    return out;
  }
  GroupRingElement& operator+=(const GroupRingElement& b) { return *this = *this + b; }
  GroupRingElement& operator*=(const GroupRingElement& b) { return *this = *this * b; }

  friend bool operator==(const GroupRingElement& a, const GroupRingElement& b) {
    return a.shape_ == b.shape_ && a.ring_ == b.ring_ && a.terms_ == b.terms_;
  }

 private:
  void check_compatible(const GroupRingElement& b) const {
    if (!(shape_ == b.shape_) || !(ring_ == b.ring_)) throw PreconditionError("group ring elements of different algebras");
  }

  AbelianShape shape_;
  Ring ring_{};
  Terms terms_;
};

using AlgebraElement = GroupRingElement<PrimeField>;
using IntegralElement = GroupRingElement<IntegerRing>;

/// A dense matrix over a group ring.
template <class Ring>
struct GroupRingMatrix {
  using Element = GroupRingElement<Ring>;
  std::size_t rows = 0, cols = 0;
  std::vector<Element> entries;

  GroupRingMatrix() = default;
  GroupRingMatrix(std::size_t r, std::size_t c, const AbelianShape& s, const Ring& ring)
      : rows(r), cols(c), entries(r * c, Element::zero(s, ring)) {}
  GroupRingMatrix(std::size_t r, std::size_t c, std::vector<Element> e) : rows(r), cols(c), entries(std::move(e)) {
    if (entries.size() != r * c) throw PreconditionError("matrix entry count mismatch");
  }
  Element& operator()(std::size_t i, std::size_t j) { return entries[i * cols + j]; }
  const Element& operator()(std::size_t i, std::size_t j) const { return entries[i * cols + j]; }
};

using AlgebraMatrix = GroupRingMatrix<PrimeField>;

/// Rows of equal length over a group ring.
template <class Ring>
struct RowFamilyOf {
  std::vector<std::vector<GroupRingElement<Ring>>> rows;

  std::size_t length() const { return rows.empty() ? 0 : rows[0].size(); }
  void check() const {
    for (const auto& r : rows)
      if (r.size() != length()) throw PreconditionError("rows of different lengths");
  }
};

using RowFamily = RowFamilyOf<PrimeField>;
using IntegralRowFamily = RowFamilyOf<IntegerRing>;

// ---- augmentation ----

template <class Ring>
typename Ring::value_type augmentation(const GroupRingElement<Ring>& m) {
  auto s = m.ring().from_int(0);
  for (const auto& [_, c] : m.terms()) s = m.ring().add(s, c);
  return s;
}

/// Entrywise augmentation as an integer matrix (residues in [0,p) over a prime field).
template <class Ring>
IntMatrix augmentation_matrix(const std::vector<std::vector<GroupRingElement<Ring>>>& rows, std::size_t cols) {
  IntMatrix out(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols; ++j) out(i, j) = rows[i][j].ring().to_integer(augmentation(rows[i][j]));
  return out;
}

template <class Ring>
IntMatrix augmentation_matrix(const GroupRingMatrix<Ring>& m) {
  IntMatrix out(m.rows, m.cols);
  for (std::size_t i = 0; i < m.rows; ++i)
    for (std::size_t j = 0; j < m.cols; ++j) out(i, j) = m(i, j).ring().to_integer(augmentation(m(i, j)));
  return out;
}

// ---- (x-1)-adic expansion ----

/// Writes m = sum_t M_t (x_i - 1)^t, t < n_i, with every M_t free of x_i.
template <class Ring>
std::vector<GroupRingElement<Ring>> nilpotent_basis_expansion(const GroupRingElement<Ring>& m, std::size_t var) {
  const auto& s = m.shape();
  const auto& r = m.ring();
  if (var >= s.torsion_orders.size()) throw PreconditionError("no torsion generator x" + std::to_string(var + 1));
  const std::size_t n = s.torsion_orders[var];
  // binom[e][t] = C(e, t) in the ring
  std::vector<std::vector<typename Ring::value_type>> binom(n, std::vector<typename Ring::value_type>(n, r.from_int(0)));
  for (std::size_t e = 0; e < n; ++e) {
    binom[e][0] = r.from_int(1);
    for (std::size_t t = 1; t <= e; ++t) binom[e][t] = r.add(binom[e - 1][t - 1], t < e ? binom[e - 1][t] : r.from_int(0));
  }
  std::vector<GroupRingElement<Ring>> out(n, GroupRingElement<Ring>::zero(s, r));
  for (const auto& [mono, c] : m.terms()) {
    Monomial rest = mono;
    const std::size_t e = rest.torsion[var];
    rest.torsion[var] = 0;
    for (std::size_t t = 0; t <= e; ++t) out[t].add_term(rest, r.mul(binom[e][t], c));
  }
  return out;
}

template <class Ring>
GroupRingElement<Ring> reassemble_expansion(const std::vector<GroupRingElement<Ring>>& parts, std::size_t var) {
  if (parts.empty()) throw PreconditionError("empty expansion");
  const auto& s = parts[0].shape();
  const auto& r = parts[0].ring();
  const auto step = GroupRingElement<Ring>::torsion_generator(s, r, var) - GroupRingElement<Ring>::one(s, r);
  auto out = GroupRingElement<Ring>::zero(s, r);
  auto power = GroupRingElement<Ring>::one(s, r);
  for (const auto& part : parts) {
    out += part * power;
    power = power * step;
  }
  return out;
}

// ---- certificates ----

enum class Verdict { Certified, RefutedByOracle, Unknown };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Certified: return "certified";
    case Verdict::RefutedByOracle: return "refuted-by-oracle";
    case Verdict::Unknown: return "unknown";
  }
  return "unknown";
}

/// Certificate that a square matrix over Z_p[D] is not a zero divisor: its augmentation
/// matrix is invertible over Z_p.
struct NonZeroDivisorCertificate {
  bool certified = false;
  IntMatrix augmentation;
  std::int64_t determinant = 0;  // over Z_p
};

inline NonZeroDivisorCertificate certify_non_zero_divisor(const AlgebraMatrix& m) {
  if (m.rows != m.cols) throw PreconditionError("non-zero-divisor certificate needs a square matrix");
  NonZeroDivisorCertificate c;
  c.augmentation = augmentation_matrix(m);
  if (m.rows == 0) {
    c.certified = true;
    c.determinant = 1;
    return c;
  }
  c.determinant = determinant_mod_p(c.augmentation, m(0, 0).ring().p);
  c.certified = c.determinant != 0;
  return c;
}

enum class Side { Left, Right };

/// The Z_p-linear operator of multiplication by M on (Z_p[P])^n, P finite. Left: B -> M B on
/// columns; right: B -> B M on rows. Basis index (i, h) is i*|P| + index(h).
inline IntMatrix regular_representation(const AlgebraMatrix& m, Side side) {
  if (m.rows != m.cols) throw PreconditionError("regular representation needs a square matrix");
  if (m.rows == 0) return IntMatrix(0, 0);
  const AbelianShape& s = m(0, 0).shape();
  if (s.free_rank != 0) throw PreconditionError("regular representation needs a finite group (free rank 0)");
  const std::size_t n = m.rows, sz = s.torsion_size();
  IntMatrix op(n * sz, n * sz);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      // Left: (M B)_i = sum_k M_ik B_k. Right: (B M)_k = sum_i B_i M_ik.
      const std::size_t out_block = side == Side::Left ? i : k;
      const std::size_t in_block = side == Side::Left ? k : i;
      for (const auto& [mono, c] : m(i, k).terms())
        for (std::size_t g = 0; g < sz; ++g) {
          const Monomial h = monomial_product(s, mono, torsion_monomial(s, g));
          op(out_block * sz + torsion_index(s, h), in_block * sz + g) += c;
        }
    }
  const auto p = static_cast<std::int64_t>(m(0, 0).ring().p);
  for (std::size_t i = 0; i < op.rows(); ++i)
    for (std::size_t j = 0; j < op.cols(); ++j) op(i, j) = floor_mod(op(i, j), p);
  return op;
}

/// Certified when the certificate applies; RefutedByOracle when either multiplication operator
/// is singular (finite algebras only); Unknown otherwise.
inline Verdict zero_divisor_verdict(const AlgebraMatrix& m) {
  if (certify_non_zero_divisor(m).certified) return Verdict::Certified;
  if (m.rows == 0 || m(0, 0).shape().free_rank != 0) return Verdict::Unknown;
  const auto p = m(0, 0).ring().p;
  for (Side side : {Side::Left, Side::Right}) {
    auto op = regular_representation(m, side);
    if (rank_mod_p(op, p) < op.rows()) return Verdict::RefutedByOracle;
  }
  // both operators invertible; over a finite p-group algebra the certificate would have fired
  return Verdict::Unknown;
}

/// Certificate that rows over a group ring are independent: the augmented rows are
/// independent, exhibited by a nonsingular maximal minor on `columns`.
struct RowIndependenceCertificate {
  bool certified = false;
  IntMatrix augmentation;
  std::size_t rank = 0;
  std::vector<std::size_t> columns;
  Integer minor_determinant = 0;  // mod p over a prime field, exact over the integers
};

inline RowIndependenceCertificate certify_row_independence(const RowFamily& family) {
  family.check();
  RowIndependenceCertificate c;
  c.augmentation = augmentation_matrix(family.rows, family.length());
  if (family.rows.empty()) {
    c.certified = true;
    c.minor_determinant = 1;
    return c;
  }
  const auto p = family.rows[0].empty() ? 2 : family.rows[0][0].ring().p;
  auto prof = rank_profile_mod_p(c.augmentation, p);
  c.rank = prof.rank;
  if (prof.rank < family.rows.size()) return c;
  c.columns = prof.pivot_columns;
  std::vector<std::size_t> all_rows(family.rows.size());
  for (std::size_t i = 0; i < all_rows.size(); ++i) all_rows[i] = i;
  c.minor_determinant = determinant_mod_p(submatrix(c.augmentation, all_rows, c.columns), p);
  c.certified = c.minor_determinant != 0;
  return c;
}

/// Rational analogue over Z[A], A free abelian.
inline RowIndependenceCertificate certify_row_independence_rational(const IntegralRowFamily& family) {
  family.check();
  for (const auto& row : family.rows)
    for (const auto& e : row)
      if (!e.shape().torsion_orders.empty()) throw PreconditionError("rational certificate needs a torsion-free group");
  RowIndependenceCertificate c;
  c.augmentation = augmentation_matrix(family.rows, family.length());
  if (family.rows.empty()) {
    c.certified = true;
    c.minor_determinant = 1;
    return c;
  }
  auto res = bareiss(c.augmentation);
  c.rank = res.rank;
  if (res.rank < family.rows.size()) return c;
  c.columns = res.pivot_columns;
  std::vector<std::size_t> all_rows(family.rows.size());
  for (std::size_t i = 0; i < all_rows.size(); ++i) all_rows[i] = i;
  c.minor_determinant = determinant(submatrix(c.augmentation, all_rows, c.columns));
  c.certified = c.minor_determinant != 0;
  return c;
}

// ---- text format ----

/// "1 + x1^2*t1^-1"; coefficients other than 1 print as "3*x1"; zero prints as "0".
template <class Ring>
std::string format_element(const GroupRingElement<Ring>& e) {
  if (e.is_zero()) return "0";
  const auto& r = e.ring();
  std::string out;
  for (const auto& [mono, c] : e.terms()) {
    bool neg = r.is_negative(c);
    Integer mag = r.to_integer(neg ? r.neg(c) : c);
    if (out.empty()) out += neg ? "-" : "";
    else out += neg ? " - " : " + ";
    std::string body;
    for (std::size_t i = 0; i < mono.torsion.size(); ++i) {
      if (mono.torsion[i] == 0) continue;
      body += (body.empty() ? "" : "*") + std::string("x") + std::to_string(i + 1);
      if (mono.torsion[i] != 1) body += "^" + std::to_string(mono.torsion[i]);
    }
    for (std::size_t j = 0; j < mono.free.size(); ++j) {
      if (mono.free[j] == 0) continue;
      body += (body.empty() ? "" : "*") + std::string("t") + std::to_string(j + 1);
      if (mono.free[j] != 1) body += "^" + std::to_string(mono.free[j]);
    }
    if (body.empty()) out += mag.str();
    else if (mag == 1) out += body;
    else out += mag.str() + "*" + body;
  }
  return out;
}

namespace detail {

template <class Ring>
class ElementParser {
 public:
  using Elem = GroupRingElement<Ring>;
  ElementParser(std::string_view text, const AbelianShape& s, const Ring& r, std::size_t line)
      : text_(text), shape_(s), ring_(r), line_(line) {}

  Elem parse() {
    Elem e = sum();
    skip();
    if (pos_ < text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, line_, pos_ + 1); }
  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Elem sum() {
    bool neg = accept('-');
    if (!neg) accept('+');
    Elem e = product();
    if (neg) e = -e;
    while (true) {
      if (accept('+')) e += product();
      else if (accept('-')) e = e - product();
      else return e;
    }
  }

  Elem product() {
    Elem e = power();
    while (accept('*')) e = e * power();
    return e;
  }

  Elem power() {
    Elem base = primary();
    if (!accept('^')) return base;
    long long k = integer(true);
    if (k >= 0) return base.pow(static_cast<unsigned long long>(k));
    if (base.terms().size() != 1 || !ring_.is_zero(ring_.add(base.terms().begin()->second, ring_.neg(ring_.from_int(1)))))
      fail("negative powers are only defined for group elements");
    return Elem::monomial(shape_, ring_, monomial_inverse(shape_, base.terms().begin()->first), ring_.from_int(1))
        .pow(static_cast<unsigned long long>(-k));
  }

  long long integer(bool allow_sign) {
    skip();
    bool neg = false;
    if (allow_sign && pos_ < text_.size() && text_[pos_] == '-') {
      neg = true;
      ++pos_;
    }
    if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_]))) fail("expected an integer");
    long long v = 0;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      v = v * 10 + (text_[pos_++] - '0');
      if (v > 1'000'000'000LL) fail("integer too large");
    }
    return neg ? -v : v;
  }

  Elem primary() {
    skip();
    if (pos_ >= text_.size()) fail("unexpected end of element");
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Elem e = sum();
      if (!accept(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) return Elem::constant(shape_, ring_, integer(false));
    if (c == 'x' || c == 't') {
      ++pos_;
      if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_]))) fail("expected a generator index");
      long long idx = integer(false);
      if (c == 'x') {
        if (idx < 1 || static_cast<std::size_t>(idx) > shape_.torsion_orders.size()) fail("no torsion generator x" + std::to_string(idx));
        return Elem::torsion_generator(shape_, ring_, static_cast<std::size_t>(idx - 1));
      }
      if (idx < 1 || static_cast<std::size_t>(idx) > shape_.free_rank) fail("no free generator t" + std::to_string(idx));
      return Elem::free_generator(shape_, ring_, static_cast<std::size_t>(idx - 1));
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string_view text_;
  const AbelianShape& shape_;
  const Ring& ring_;
  std::size_t line_;
  std::size_t pos_ = 0;
};

}  // namespace detail

template <class Ring>
GroupRingElement<Ring> parse_element(std::string_view text, const AbelianShape& s, const Ring& r, std::size_t line = 0) {
  return detail::ElementParser<Ring>(text, s, r, line).parse();
}

/// Contents of an algebra rows file:
///
///     algebra p=<p> torsion=<k1,k2,...> free=<r>
///     row: <elem> ; <elem> ; ...
///
/// p=0 selects integer coefficients (torsion must then be empty).
struct AlgebraRowsFile {
  std::uint64_t p = 2;
  std::vector<unsigned> torsion_exponents;
  std::size_t free_rank = 0;
  std::vector<std::vector<std::string>> rows;  // raw element texts
  std::vector<std::size_t> row_lines;

  AbelianShape shape() const {
    if (p == 0) {
      if (!torsion_exponents.empty()) throw PreconditionError("integer coefficients need torsion-free D");
      return {{}, free_rank};
    }
    return AbelianGroupSpec{p, torsion_exponents, free_rank}.shape();
  }
};

inline AlgebraRowsFile parse_algebra_rows(std::string_view text) {
  AlgebraRowsFile f;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t lineno = 0;
  bool header = false;
  auto number = [&](const std::string& v, std::size_t ln) -> unsigned long long {
    try {
      std::size_t pos = 0;
      long long x = std::stoll(v, &pos);
      if (pos != v.size() || x < 0) throw std::invalid_argument(v);
      return static_cast<unsigned long long>(x);
    } catch (const std::exception&) {
      throw ParseError("bad number '" + v + "'", ln);
    }
  };
  while (std::getline(in, raw)) {
    ++lineno;
    if (auto h = raw.find('#'); h != std::string::npos) raw.erase(h);
    std::istringstream ls(raw);
    std::string first;
    if (!(ls >> first)) continue;
    if (!header) {
      if (first != "algebra") throw ParseError("expected header 'algebra p=.. torsion=.. free=..'", lineno);
      for (std::string kv; ls >> kv;) {
        auto eq = kv.find('=');
        if (eq == std::string::npos) throw ParseError("expected key=value, got '" + kv + "'", lineno);
        std::string key = kv.substr(0, eq), val = kv.substr(eq + 1);
        if (key == "p") {
          f.p = number(val, lineno);
          if (f.p != 0 && !is_prime(f.p)) throw ParseError("p=" + val + " is not prime", lineno);
        } else if (key == "torsion") {
          std::stringstream vs(val);
          for (std::string part; std::getline(vs, part, ',');)
            if (!part.empty()) {
              auto k = number(part, lineno);
              if (k == 0) throw ParseError("torsion exponents must be at least 1", lineno);
              f.torsion_exponents.push_back(static_cast<unsigned>(k));
            }
        } else if (key == "free") {
          f.free_rank = number(val, lineno);
        } else {
          throw ParseError("unknown header key '" + key + "'", lineno);
        }
      }
      header = true;
      continue;
    }
    if (first.rfind("row:", 0) != 0) throw ParseError("expected 'row:'", lineno);
    std::string body = raw.substr(raw.find("row:") + 4);
    std::vector<std::string> elems;
    std::stringstream bs(body);
    for (std::string part; std::getline(bs, part, ';');) elems.push_back(part);
    if (!body.empty() && body.find_last_not_of(" \t\r") != std::string::npos && body[body.find_last_not_of(" \t\r")] == ';')
      throw ParseError("trailing ';'", lineno);
    if (!f.rows.empty() && elems.size() != f.rows[0].size()) throw ParseError("rows of different lengths", lineno);
    f.rows.push_back(std::move(elems));
    f.row_lines.push_back(lineno);
  }
  if (!header) throw ParseError("empty algebra file");
  f.shape();  // validates
  return f;
}

template <class Ring>
RowFamilyOf<Ring> materialize_rows(const AlgebraRowsFile& f, const Ring& r) {
  RowFamilyOf<Ring> out;
  const auto s = f.shape();
  for (std::size_t i = 0; i < f.rows.size(); ++i) {
    std::vector<GroupRingElement<Ring>> row;
    for (const auto& t : f.rows[i]) row.push_back(parse_element(t, s, r, f.row_lines[i]));
    out.rows.push_back(std::move(row));
  }
  return out;
}

template <class Ring>
std::string format_rows(const RowFamilyOf<Ring>& family) {
  std::string out;
  for (const auto& row : family.rows) {
    out += "row:";
    for (std::size_t j = 0; j < row.size(); ++j) out += (j ? " ; " : " ") + format_element(row[j]);
    out += "\n";
  }
  return out;
}

inline std::string algebra_header(std::uint64_t p, const std::vector<unsigned>& torsion, std::size_t free_rank) {
  std::string t;
  for (std::size_t i = 0; i < torsion.size(); ++i) t += (i ? "," : "") + std::to_string(torsion[i]);
  return "algebra p=" + std::to_string(p) + " torsion=" + t + " free=" + std::to_string(free_rank) + "\n";
}

}  // namespace groupeq
