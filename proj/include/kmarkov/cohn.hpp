#pragma once

// k-generalized Cohn matrices and triples.
//
// A Cohn matrix is M in SL(2, Z) with tr(M) = (3+3k) m12 - k. A Cohn triple
// (P, Q, R) has Q = PR - S with S = [[k, 0], [3k^2+3k, k]], and its
// (1,2)-entries form a GME(k) solution. Children (P, PQ-S, Q) and
// (Q, QR-S, R) move the (1,2)-entries exactly like the Vieta jumps.

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "kmarkov/errors.hpp"
#include "kmarkov/markov_tree.hpp"
#include "kmarkov/numtheory.hpp"
#include "kmarkov/report.hpp"
#include "kmarkov/tree_address.hpp"

namespace kmarkov {

struct Mat2 {
  Integer m11 = 0, m12 = 0, m21 = 0, m22 = 0;

  static Mat2 identity() { return {1, 0, 0, 1}; }

  Integer det() const { return m11 * m22 - m12 * m21; }
  Integer trace() const { return m11 + m22; }

  friend bool operator==(const Mat2&, const Mat2&) = default;

  friend Mat2 operator*(const Mat2& a, const Mat2& b) {
    return {a.m11 * b.m11 + a.m12 * b.m21, a.m11 * b.m12 + a.m12 * b.m22,
            a.m21 * b.m11 + a.m22 * b.m21, a.m21 * b.m12 + a.m22 * b.m22};
  }
  friend Mat2 operator+(const Mat2& a, const Mat2& b) {
    return {a.m11 + b.m11, a.m12 + b.m12, a.m21 + b.m21, a.m22 + b.m22};
  }
  friend Mat2 operator-(const Mat2& a, const Mat2& b) {
    return {a.m11 - b.m11, a.m12 - b.m12, a.m21 - b.m21, a.m22 - b.m22};
  }
  friend Mat2 operator*(const Integer& s, const Mat2& a) {
    return {s * a.m11, s * a.m12, s * a.m21, s * a.m22};
  }
  Mat2 operator-() const { return {-m11, -m12, -m21, -m22}; }

  std::string str() const {
    return "[[" + to_decimal(m11) + "," + to_decimal(m12) + "],[" + to_decimal(m21) + "," +
           to_decimal(m22) + "]]";
  }
};

inline Mat2 mat_mul(const Mat2& a, const Mat2& b) { return a * b; }
inline Integer trace(const Mat2& a) { return a.trace(); }

/// Inverse through the adjugate; only defined for determinant 1.
inline Mat2 mat_inv(const Mat2& a) {
  if (a.det() != 1) throw DomainError("mat_inv: determinant is " + to_decimal(a.det()) + ", not 1");
  return {a.m22, -a.m12, -a.m21, a.m11};
}

inline Mat2 s_matrix(const Natural& k) { return {k, 0, 3 * k * k + 3 * k, k}; }

/// The decidable part of the definition: det = 1 and the trace condition.
/// Whether m12 is a k-generalized Markov number must be settled separately.
inline bool is_cohn_matrix(const Natural& k, const Mat2& m) {
  return m.det() == 1 && m.trace() == (3 + 3 * k) * m.m12 - k;
}

/// I_M = m11 / m12.
inline Rational index(const Mat2& m) {
  if (m.m12 == 0) throw DomainError("index: (1,2)-entry is zero");
  Rational r(m.m11, m.m12);
  r.canonicalize();
  return r;
}

// ---------------------------------------------------------------------------

enum class CohnTreeKind { wide, cohn, lower };

inline const char* name(CohnTreeKind t) {
  switch (t) {
    case CohnTreeKind::wide: return "wgct";
    case CohnTreeKind::cohn: return "gct";
    case CohnTreeKind::lower: return "lgct";
  }
  return "?";
}

inline TreeAddress root_offset(CohnTreeKind t) {
  switch (t) {
    case CohnTreeKind::wide: return {};
    case CohnTreeKind::cohn: return TreeAddress::parse("L");
    case CohnTreeKind::lower: return TreeAddress::parse("LL");
  }
  return {};
}

class CohnTriple {
public:
  /// Validates every Cohn-triple condition; throws InvariantError otherwise.
  static CohnTriple checked(Natural k, Mat2 p, Mat2 q, Mat2 r, std::optional<Integer> l = {},
                            std::optional<TreeAddress> address = {}) {
    CohnTriple t = unchecked(std::move(k), std::move(p), std::move(q), std::move(r), std::move(l),
                             std::move(address));
    if (auto why = t.violation()) throw InvariantError("invalid Cohn triple: " + *why);
    return t;
  }

  /// No validation. For deliberately broken fixtures.
  static CohnTriple unchecked(Natural k, Mat2 p, Mat2 q, Mat2 r, std::optional<Integer> l = {},
                              std::optional<TreeAddress> address = {}) {
    CohnTriple t;
    t.k_ = std::move(k);
    t.p_ = std::move(p);
    t.q_ = std::move(q);
    t.r_ = std::move(r);
    t.l_ = std::move(l);
    t.address_ = std::move(address);
    return t;
  }

  const Natural& k() const { return k_; }
  const Mat2& P() const { return p_; }
  const Mat2& Q() const { return q_; }
  const Mat2& R() const { return r_; }
  /// Root parameter, when known.
  const std::optional<Integer>& l() const { return l_; }
  const std::optional<TreeAddress>& address() const { return address_; }

  /// The associated Markov triple (p12, q12, r12).
  MarkovTriple markov() const { return {k_, p_.m12, q_.m12, r_.m12, address_}; }

  std::optional<std::string> violation() const {
    if (!is_cohn_matrix(k_, p_)) return "P is not a Cohn matrix";
    if (!is_cohn_matrix(k_, q_)) return "Q is not a Cohn matrix";
    if (!is_cohn_matrix(k_, r_)) return "R is not a Cohn matrix";
    if (q_ != p_ * r_ - s_matrix(k_)) return "Q != PR - S";
    if (!is_gme_solution(k_, p_.m12, q_.m12, r_.m12)) return "(1,2)-entries do not solve GME(k)";
    return std::nullopt;
  }

  bool same_matrices(const CohnTriple& o) const {
    return k_ == o.k_ && p_ == o.p_ && q_ == o.q_ && r_ == o.r_;
  }

private:
  CohnTriple() = default;

  Natural k_;
  Mat2 p_, q_, r_;
  std::optional<Integer> l_;
  std::optional<TreeAddress> address_;
};

/// (P_{1;l}, Q_{1;l}, R_{1;l}): the Cohn triples over (1, 1, 1).
inline CohnTriple root_triple(const Natural& k, const Integer& l) {
  Mat2 p{l, 1, -l * l + 2 * k * l + 3 * l - 1, -l + 2 * k + 3};
  Mat2 q{k + l + 1, 1, k * k - l * l + 3 * k + l + 1, k - l + 2};
  Mat2 r{2 * k + l + 2, 1, -l * l - 2 * k * l + 2 * k - l + 1, -l + 1};
  return CohnTriple::checked(k, std::move(p), std::move(q), std::move(r), l, TreeAddress{});
}

namespace detail {
inline std::optional<TreeAddress> parent_address(const std::optional<TreeAddress>& a) {
  if (!a || a->is_root()) return std::nullopt;
  TreeAddress out;
  for (std::size_t i = 0; i + 1 < a->depth(); ++i) out = out.child(a->word()[i]);
  return out;
}
}  // namespace detail

inline CohnTriple child_left(const CohnTriple& t) {
  return CohnTriple::checked(t.k(), t.P(), t.P() * t.Q() - s_matrix(t.k()), t.Q(), t.l(),
                             detail::child_address(t.address(), Side::left));
}

inline CohnTriple child_right(const CohnTriple& t) {
  return CohnTriple::checked(t.k(), t.Q(), t.Q() * t.R() - s_matrix(t.k()), t.R(), t.l(),
                             detail::child_address(t.address(), Side::right));
}

inline CohnTriple cohn_child(const CohnTriple& t, Side s) {
  return s == Side::left ? child_left(t) : child_right(t);
}

namespace detail {
inline void require_maximal_middle(const CohnTriple& t) {
  if (t.Q().m12 <= t.P().m12 || t.Q().m12 <= t.R().m12)
    throw DomainError("Cohn parent: middle (1,2)-entry is not strictly maximal");
}
}  // namespace detail

/// Undo a left step: (P, Q, R) -> (P, R, P^{-1}(R + S)).
inline CohnTriple parent_from_left(const CohnTriple& t) {
  detail::require_maximal_middle(t);
  return CohnTriple::checked(t.k(), t.P(), t.R(), mat_inv(t.P()) * (t.R() + s_matrix(t.k())), t.l(),
                             detail::parent_address(t.address()));
}

/// Undo a right step: (P, Q, R) -> ((P + S)R^{-1}, P, R).
inline CohnTriple parent_from_right(const CohnTriple& t) {
  detail::require_maximal_middle(t);
  return CohnTriple::checked(t.k(), (t.P() + s_matrix(t.k())) * mat_inv(t.R()), t.P(), t.R(), t.l(),
                             detail::parent_address(t.address()));
}

/// One step toward the root, choosing the side by p12 <= r12.
inline std::pair<CohnTriple, Side> cohn_parent(const CohnTriple& t) {
  if (t.P().m12 <= t.R().m12) return {parent_from_left(t), Side::left};
  return {parent_from_right(t), Side::right};
}

struct CohnDescent {
  CohnTriple root;
  /// Path from the recovered root of the wide tree down to the input.
  TreeAddress address;
  /// The root parameter, read off as p11 of the recovered root.
  Integer l;
};

/// Walk parents until the (1,2)-entries are (1, 1, 1).
inline CohnDescent descend_to_root(const CohnTriple& start) {
  CohnTriple t = start;
  std::vector<Side> path;
  while (!(t.P().m12 == 1 && t.Q().m12 == 1 && t.R().m12 == 1)) {
    auto [up, side] = cohn_parent(t);
    path.push_back(side);
    t = std::move(up);
  }
  Integer l = t.P().m11;
  TreeAddress addr;
  for (auto it = path.rbegin(); it != path.rend(); ++it) addr = addr.child(*it);
  CohnTriple root = root_triple(t.k(), l);
  if (!root.same_matrices(t)) throw InvariantError("descent ended at a (1,1,1) triple outside the root family");
  return {std::move(root), std::move(addr), std::move(l)};
}

inline CohnTriple cohn_root(const Natural& k, const Integer& l, CohnTreeKind tree) {
  CohnTriple t = root_triple(k, l);
  const TreeAddress offset = root_offset(tree);
  for (Side s : offset.word()) t = cohn_child(t, s);
  return CohnTriple::checked(t.k(), t.P(), t.Q(), t.R(), t.l(), TreeAddress{});
}

inline CohnTriple cohn_at(const Natural& k, const Integer& l, const TreeAddress& address,
                          CohnTreeKind tree = CohnTreeKind::wide) {
  CohnTriple t = cohn_root(k, l, tree);
  for (Side s : address.word()) t = cohn_child(t, s);
  return t;
}

/// Breadth-first walk of the subtree below `root` to `depth`.
template <class Visitor>
void enumerate_cohn_from(const CohnTriple& root, std::size_t depth, Visitor&& visit) {
  std::vector<CohnTriple> level{root};
  for (std::size_t d = 0;; ++d) {
    for (const CohnTriple& t : level)
      if constexpr (std::is_same_v<std::invoke_result_t<Visitor&, const CohnTriple&>, bool>) {
        if (!visit(t)) return;
      } else {
        visit(t);
      }
    if (d == depth) return;
    std::vector<CohnTriple> next;
    next.reserve(level.size() * 2);
    for (const CohnTriple& t : level) {
      next.push_back(child_left(t));
      next.push_back(child_right(t));
    }
    level = std::move(next);
  }
}

template <class Visitor>
void enumerate_cohn(const Natural& k, const Integer& l, std::size_t depth, CohnTreeKind tree,
                    Visitor&& visit) {
  enumerate_cohn_from(cohn_root(k, l, tree), depth, std::forward<Visitor>(visit));
}

inline std::vector<CohnTriple> enumerate_cohn(const Natural& k, const Integer& l, std::size_t depth,
                                              CohnTreeKind tree) {
  std::vector<CohnTriple> out;
  enumerate_cohn(k, l, depth, tree, [&](const CohnTriple& t) { out.push_back(t); });
  return out;
}

/// The right-child subtree of WGCT(k, l) coincides with GCT(k, k + l + 1).
inline bool gct_star_check(const Natural& k, const Integer& l, std::size_t depth) {
  CohnTriple star_root = child_right(root_triple(k, l));
  std::vector<CohnTriple> star;
  enumerate_cohn_from(CohnTriple::checked(k, star_root.P(), star_root.Q(), star_root.R(), l, TreeAddress{}),
                      depth, [&](const CohnTriple& t) { star.push_back(t); });
  std::vector<CohnTriple> shifted = enumerate_cohn(k, k + l + 1, depth, CohnTreeKind::cohn);
  if (star.size() != shifted.size()) return false;
  for (std::size_t i = 0; i < star.size(); ++i)
    if (!star[i].same_matrices(shifted[i]) || star[i].address() != shifted[i].address()) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Trace identities

/// With a = -tr A, b = -tr B, c = -tr C, d = -tr(ABC) and
/// x = -tr(BC), y = -tr(CA), z = -tr(AB):
///   x^2 + y^2 + z^2 + (ad+bc)x + (bd+ca)y + (cd+ab)z
///     + a^2 + b^2 + c^2 + d^2 + abcd - 4 = xyz
/// Each of x, y, z is the trace of the product omitting A, B, C in turn;
/// pairing x with -tr(AB) instead makes the identity false in general.
inline bool trace_identity_check(const Mat2& A, const Mat2& B, const Mat2& C) {
  if (A.det() != 1 || B.det() != 1 || C.det() != 1)
    throw DomainError("trace_identity_check: matrices must have determinant 1");
  const Integer a = -A.trace(), b = -B.trace(), c = -C.trace();
  const Integer d = -(A * B * C).trace();
  const Integer x = -(B * C).trace(), y = -(C * A).trace(), z = -(A * B).trace();
  Integer lhs = x * x + y * y + z * z + (a * d + b * c) * x + (b * d + c * a) * y + (c * d + a * b) * z +
                a * a + b * b + c * c + d * d + a * b * c * d - 4;
  return lhs == x * y * z;
}

/// Random element of SL(2, Z): a product of 1..max_length factors drawn from
/// [[1,+-1],[0,1]] and [[1,0],[+-1,1]].
template <class Rng>
Mat2 random_unimodular(Rng& rng, int max_length = 40) {
  static const Mat2 gens[4] = {{1, 1, 0, 1}, {1, -1, 0, 1}, {1, 0, 1, 1}, {1, 0, -1, 1}};
  std::uniform_int_distribution<int> len_dist(1, max_length);
  std::uniform_int_distribution<int> gen_dist(0, 3);
  Mat2 m = Mat2::identity();
  for (int n = len_dist(rng); n > 0; --n) m = m * gens[gen_dist(rng)];
  return m;
}

/// Basic SL(2) trace facts on arbitrary pairs, and the two rank-one
/// identities M E M = (tr M + k) M + E, M^{-1} E M^{-1} = -(tr M^{-1} + k) M^{-1} + E
/// (E = [[0,0],[3+3k,0]]) on Cohn matrices.
inline CheckReport verify_trace_lemmas(std::span<const std::pair<Mat2, Mat2>> pairs, const Natural& k,
                                       std::span<const Mat2> cohn_matrices) {
  CheckReport rep{"trace_lemmas"};
  const Mat2 id = Mat2::identity();
  for (const auto& [A, B] : pairs) {
    const Mat2 Ai = mat_inv(A), Bi = mat_inv(B);
    rep.expect(A.trace() == Ai.trace(), "tr(A) != tr(A^-1) for A = " + A.str());
    rep.expect((A * B).trace() == A.trace() * B.trace() - (A * Bi).trace(),
               "tr(AB) != tr A tr B - tr(AB^-1) for A = " + A.str() + ", B = " + B.str());
    rep.expect(A * A == A.trace() * A - id, "A^2 != tr(A) A - I for A = " + A.str());
  }
  const Mat2 e{0, 0, 3 + 3 * k, 0};
  for (const Mat2& M : cohn_matrices) {
    rep.expect(is_cohn_matrix(k, M), "not a Cohn matrix: " + M.str());
    const Mat2 Mi = mat_inv(M);
    rep.expect(M * e * M == (M.trace() + k) * M + e, "M E M identity fails for " + M.str());
    rep.expect(Mi * e * Mi == -((Mi.trace() + k) * Mi) + e, "M^-1 E M^-1 identity fails for " + M.str());
  }
  return rep;
}

}  // namespace kmarkov
