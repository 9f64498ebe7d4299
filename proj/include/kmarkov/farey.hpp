#pragma once

// Farey (Stern-Brocot) tree and the fraction labels it induces on Cohn
// matrices and k-generalized Markov numbers.

#include <compare>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "kmarkov/cohn.hpp"
#include "kmarkov/errors.hpp"
#include "kmarkov/markov_tree.hpp"
#include "kmarkov/numtheory.hpp"
#include "kmarkov/tree_address.hpp"

namespace kmarkov {

/// Nonnegative fraction in lowest terms; 1/0 stands for infinity.
class Fraction {
public:
  Fraction() : num_(0), den_(1) {}

  Fraction(Natural num, Natural den) {
    if (num < 0 || den < 0) throw DomainError("fraction entries must be nonnegative");
    if (num == 0 && den == 0) throw DomainError("0/0 is not a fraction");
    Natural g = gcd(num, den);
    num_ = num / g;
    den_ = den / g;
  }

  /// "n/d" or a bare integer "n".
  static Fraction parse(std::string_view text) {
    const auto slash = text.find('/');
    if (slash == std::string_view::npos) return Fraction(parse_natural(std::string(text)), 1);
    return Fraction(parse_natural(std::string(text.substr(0, slash))),
                    parse_natural(std::string(text.substr(slash + 1))));
  }

  const Natural& num() const { return num_; }
  const Natural& den() const { return den_; }
  bool is_infinite() const { return den_ == 0; }

  std::string str() const { return to_decimal(num_) + "/" + to_decimal(den_); }

  friend bool operator==(const Fraction&, const Fraction&) = default;

  /// a/b < c/d iff ad < cb; also right for 1/0.
  friend std::strong_ordering operator<=>(const Fraction& p, const Fraction& q) {
    const int c = cmp(p.num_ * q.den_, q.num_ * p.den_);
    return c < 0 ? std::strong_ordering::less : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
  }

private:
  Natural num_, den_;
};

/// num(p) den(q) - den(p) num(q)
inline Integer farey_det(const Fraction& p, const Fraction& q) { return p.num() * q.den() - p.den() * q.num(); }

inline Fraction mediant(const Fraction& p, const Fraction& q) {
#ifdef KMARKOV_FAULT_MEDIANT
  // Deliberately wrong, for the negative-path test build.
  return Fraction(p.num() + q.num(), p.den() + q.den() + 1);
#else
  return Fraction(p.num() + q.num(), p.den() + q.den());
#endif
}

struct FareyTriple {
  Fraction left, mid, right;
  std::optional<TreeAddress> address;

  static FareyTriple root() { return {Fraction(0, 1), Fraction(1, 1), Fraction(1, 0), TreeAddress{}}; }

  bool valid() const {
    return abs(farey_det(left, mid)) == 1 && abs(farey_det(mid, right)) == 1 && abs(farey_det(right, left)) == 1 &&
           left < mid && mid < right;
  }
};

/// Left (a/b, (a+c)/(b+d), c/d) and right (c/d, (c+e)/(d+f), e/f), without
/// validation.
inline std::pair<FareyTriple, FareyTriple> farey_children_unchecked(const FareyTriple& t) {
  return {FareyTriple{t.left, mediant(t.left, t.mid), t.mid, detail::child_address(t.address, Side::left)},
          FareyTriple{t.mid, mediant(t.mid, t.right), t.right, detail::child_address(t.address, Side::right)}};
}

inline std::pair<FareyTriple, FareyTriple> farey_children(const FareyTriple& t) {
  auto kids = farey_children_unchecked(t);
  if (!kids.first.valid() || !kids.second.valid()) throw InvariantError("farey_children: child is not a Farey triple");
  return kids;
}

inline FareyTriple farey_at(const TreeAddress& address) {
  FareyTriple t = FareyTriple::root();
  for (Side s : address.word()) {
    auto kids = farey_children(t);
    t = s == Side::left ? std::move(kids.first) : std::move(kids.second);
  }
  return t;
}

inline Fraction address_to_fraction(const TreeAddress& address) { return farey_at(address).mid; }

/// Mediant bisection from the root.
inline TreeAddress fraction_to_address(const Fraction& t) {
  if (t.num() == 0 || t.is_infinite()) throw DomainError("fraction_to_address: " + t.str() + " is never a mid");
  Fraction lo(0, 1), hi(1, 0);
  TreeAddress out;
  for (;;) {
    Fraction mid = mediant(lo, hi);
    if (!(lo < mid && mid < hi) || mid.num() > t.num() || mid.den() > t.den())
      throw InvariantError("fraction_to_address: bisection toward " + t.str() + " went astray at " + mid.str());
    if (mid == t) return out;
    if (t < mid) {
      out = out.child(Side::left);
      hi = std::move(mid);
    } else {
      out = out.child(Side::right);
      lo = std::move(mid);
    }
  }
}

/// C_t(k, l): middle matrix of GCT(k, l) at the address of t.
inline Mat2 label_cohn(const Natural& k, const Integer& l, const Fraction& t) {
  return cohn_at(k, l, fraction_to_address(t), CohnTreeKind::cohn).Q();
}

namespace detail {
inline void require_unit_interval(const Fraction& t, bool open) {
  const bool inside = open ? (t.num() > 0 && t.num() < t.den()) : (!t.is_infinite() && t.num() <= t.den());
  if (!inside) throw DomainError("fraction " + t.str() + (open ? " is not in (0, 1)" : " is not in [0, 1]"));
}

/// LMT triple (m_r, m_t, m_s) for interior t. LMT sits below the Farey
/// vertex (0/1, 1/2, 1/1), so the leading L of the address is dropped.
inline MarkovTriple lmt_triple_for(const Natural& k, const Fraction& t) {
  require_unit_interval(t, true);
  return triple_at(k, fraction_to_address(t).drop_front(1), MarkovTreeKind::lower);
}
}  // namespace detail

/// m_t, with m_{0/1} = 1 and m_{1/1} = k + 2.
inline Natural markov_label(const Natural& k, const Fraction& t) {
  detail::require_unit_interval(t, false);
  if (t.num() == 0) return 1;
  if (t.num() == t.den()) return k + 2;
  return detail::lmt_triple_for(k, t).b;
}

struct Label {
  Natural k;
  Fraction t;
  Natural m_t;
  std::optional<Natural> u_t;
};

/// u_t, computed from C_t(k, -k) and from the LMT triple; the two must agree.
inline Natural characteristic_number(const Natural& k, const Fraction& t) {
  const MarkovTriple tri = detail::lmt_triple_for(k, t);
  const Natural& m_r = tri.a;
  const Natural& m_t = tri.b;
  const Natural& m_s = tri.c;

  const Natural from_matrix = label_cohn(k, -Integer(k), t).m11;

  const Natural x0 = detail::mod_floor(m_s * mod_inverse(m_r, m_t), m_t);
  std::optional<Natural> picked;
  int hits = 0;
  for (const Natural& x : {x0, Natural(m_t - x0)}) {
    if (x > 0 && 2 * x < m_t) {
      if (!picked || *picked != x) ++hits;
      picked = x;
    }
  }
  if (hits != 1)
    throw InvariantError("characteristic_number: " + std::to_string(hits) + " candidates in (0, m_t/2) for t = " +
                         t.str());
  if (*picked != from_matrix)
    throw InvariantError("characteristic_number: routes disagree at t = " + t.str() + " (" + to_decimal(*picked) +
                         " vs " + to_decimal(from_matrix) + ")");
  return from_matrix;
}

/// m_t for any t in [0, 1]; u_t only for interior t.
inline Label label(const Natural& k, const Fraction& t) {
  Label out{k, t, markov_label(k, t), std::nullopt};
  if (t.num() > 0 && t.num() < t.den()) out.u_t = characteristic_number(k, t);
  return out;
}

}  // namespace kmarkov
