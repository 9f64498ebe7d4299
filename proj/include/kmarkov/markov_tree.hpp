#pragma once

// Solutions of the k-generalized Markov equation
//
//   a^2 + b^2 + c^2 + k(bc + ca + ab) = (3 + 3k) abc
//
// organized in binary trees generated by Vieta jumping from (1, 1, 1), and
// the companion "second" equation GSME(k) reached by x -> (3 + 3k)x - k.

#include <algorithm>
#include <array>
#include <functional>
#include <optional>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "kmarkov/errors.hpp"
#include "kmarkov/numtheory.hpp"
#include "kmarkov/report.hpp"
#include "kmarkov/tree_address.hpp"

namespace kmarkov {

/// Which tree to walk. WMT is the wide tree rooted at (1,1,1); MT is the
/// subtree at its left child (1,k+2,1); LMT the subtree at MT's left child.
enum class MarkovTreeKind { wide, markov, lower };

inline const char* name(MarkovTreeKind t) {
  switch (t) {
    case MarkovTreeKind::wide: return "wmt";
    case MarkovTreeKind::markov: return "mt";
    case MarkovTreeKind::lower: return "lmt";
  }
  return "?";
}

/// Address of each tree's root inside the wide tree.
inline TreeAddress root_offset(MarkovTreeKind t) {
  switch (t) {
    case MarkovTreeKind::wide: return {};
    case MarkovTreeKind::markov: return TreeAddress::parse("L");
    case MarkovTreeKind::lower: return TreeAddress::parse("LL");
  }
  return {};
}

struct MarkovTriple {
  Natural k;
  Natural a, b, c;
  /// Position relative to the root of the tree it was enumerated from.
  std::optional<TreeAddress> address;

  Natural max() const { return std::max({a, b, c}); }

  /// Order-free form used for de-duplication.
  std::array<Natural, 3> sorted() const {
    std::array<Natural, 3> s{a, b, c};
    std::sort(s.begin(), s.end());
    return s;
  }

  bool same_entries(const MarkovTriple& o) const { return k == o.k && a == o.a && b == o.b && c == o.c; }
};

inline bool is_gme_solution(const Natural& k, const Natural& a, const Natural& b, const Natural& c) {
  if (a < 1 || b < 1 || c < 1) return false;
  return a * a + b * b + c * c + k * (b * c + c * a + a * b) == (3 + 3 * k) * a * b * c;
}

inline bool is_gme_solution(const MarkovTriple& t) { return is_gme_solution(t.k, t.a, t.b, t.c); }

enum class JumpCheck { none, division };

#if defined(KMARKOV_CHECK_JUMPS) || !defined(NDEBUG)
inline constexpr JumpCheck kDefaultJumpCheck = JumpCheck::division;
#else
inline constexpr JumpCheck kDefaultJumpCheck = JumpCheck::none;
#endif

namespace detail {

/// The "other root" of the quadratic in the replaced coordinate, via the
/// linear form (3+3k)xy - z - k(x+y). With `check`, also confirms it equals
/// (x^2 + kxy + y^2) / z exactly.
inline Natural vieta_other_root(const Natural& k, const Natural& x, const Natural& y,
                                const Natural& z, JumpCheck check) {
  Natural r = (3 + 3 * k) * x * y - z - k * (x + y);
  if (check == JumpCheck::division) {
    Natural num = x * x + k * x * y + y * y;
    if (z == 0 || mpz_divisible_p(num.get_mpz_t(), z.get_mpz_t()) == 0 || num / z != r)
      throw InvariantError("Vieta jump: division form disagrees with the linear form; input is not a GME(" +
                           to_decimal(k) + ") solution");
  }
  return r;
}

inline std::optional<TreeAddress> child_address(const std::optional<TreeAddress>& a, Side s) {
  if (!a) return std::nullopt;
  return a->child(s);
}

}  // namespace detail

/// (a, b, c) -> (a, (a^2 + kab + b^2)/c, b)
inline MarkovTriple vieta_left(const MarkovTriple& t, JumpCheck check = kDefaultJumpCheck) {
  return {t.k, t.a, detail::vieta_other_root(t.k, t.a, t.b, t.c, check), t.b,
          detail::child_address(t.address, Side::left)};
}

/// (a, b, c) -> (b, (b^2 + kbc + c^2)/a, c)
inline MarkovTriple vieta_right(const MarkovTriple& t, JumpCheck check = kDefaultJumpCheck) {
  return {t.k, t.b, detail::vieta_other_root(t.k, t.b, t.c, t.a, check), t.c,
          detail::child_address(t.address, Side::right)};
}

inline MarkovTriple vieta_jump(const MarkovTriple& t, Side s, JumpCheck check = kDefaultJumpCheck) {
  return s == Side::left ? vieta_left(t, check) : vieta_right(t, check);
}

/// Inverse of the jumps. The side is L when a <= c; the only tie is
/// (1, k+2, 1), which is both children of the wide root.
inline std::pair<MarkovTriple, Side> parent(const MarkovTriple& t) {
  if (t.b <= t.a || t.b <= t.c)
    throw DomainError("parent: middle entry is not strictly maximal (root or malformed triple)");
  Natural num = t.a * t.a + t.k * t.a * t.c + t.c * t.c;
  if (mpz_divisible_p(num.get_mpz_t(), t.b.get_mpz_t()) == 0)
    throw InvariantError("parent: (a^2 + kac + c^2) is not divisible by b");
  Natural prev = num / t.b;
  std::optional<TreeAddress> addr;
  if (t.address && !t.address->is_root()) {
    TreeAddress a;
    for (std::size_t i = 0; i + 1 < t.address->depth(); ++i) a = a.child(t.address->word()[i]);
    addr = a;
  }
  if (t.a <= t.c) return {MarkovTriple{t.k, t.a, t.c, prev, addr}, Side::left};
  return {MarkovTriple{t.k, prev, t.a, t.c, addr}, Side::right};
}

inline MarkovTriple markov_root(const Natural& k, MarkovTreeKind tree) {
  MarkovTriple t{k, 1, 1, 1, TreeAddress{}};
  const TreeAddress offset = root_offset(tree);
  for (Side s : offset.word()) t = vieta_jump(t, s, JumpCheck::none);
  t.address = TreeAddress{};
  return t;
}

inline MarkovTriple triple_at(const Natural& k, const TreeAddress& address,
                              MarkovTreeKind tree = MarkovTreeKind::wide) {
  MarkovTriple t = markov_root(k, tree);
  for (Side s : address.word()) t = vieta_jump(t, s, JumpCheck::none);
  return t;
}

/// Breadth-first walk to `depth` (root = depth 0), visiting in (depth,
/// address) order. The visitor may return false to stop early.
template <class Visitor>
void enumerate(const Natural& k, std::size_t depth, MarkovTreeKind tree, Visitor&& visit) {
  std::vector<MarkovTriple> level{markov_root(k, tree)};
  for (std::size_t d = 0;; ++d) {
    for (const MarkovTriple& t : level)
      if constexpr (std::is_same_v<std::invoke_result_t<Visitor&, const MarkovTriple&>, bool>) {
        if (!visit(t)) return;
      } else {
        visit(t);
      }
    if (d == depth) return;
    std::vector<MarkovTriple> next;
    next.reserve(level.size() * 2);
    for (const MarkovTriple& t : level) {
      next.push_back(vieta_left(t));
      next.push_back(vieta_right(t));
    }
    level = std::move(next);
  }
}

inline std::vector<MarkovTriple> enumerate(const Natural& k, std::size_t depth, MarkovTreeKind tree) {
  std::vector<MarkovTriple> out;
  enumerate(k, depth, tree, [&](const MarkovTriple& t) { out.push_back(t); });
  return out;
}

// ---------------------------------------------------------------------------
// GSME(k): x^2 + y^2 + z^2 + (k^2+2k)(x+y+z) + 2k^3 + 3k^2 = xyz

struct GsmeTriple {
  Natural k;
  Integer x, y, z;

  friend bool operator==(const GsmeTriple&, const GsmeTriple&) = default;
};

inline bool is_gsme_solution(const Natural& k, const Integer& x, const Integer& y, const Integer& z) {
  return x * x + y * y + z * z + (k * k + 2 * k) * (x + y + z) + 2 * k * k * k + 3 * k * k == x * y * z;
}

inline bool is_gsme_solution(const GsmeTriple& g) { return is_gsme_solution(g.k, g.x, g.y, g.z); }

/// True iff ((x+k)/(3+3k), ...) is a positive integer GME(k) solution.
inline bool is_induced(const Natural& k, const Integer& x, const Integer& y, const Integer& z) {
  const Natural s = 3 + 3 * k;
  std::array<Integer, 3> pre;
  const std::array<const Integer*, 3> in{&x, &y, &z};
  for (std::size_t i = 0; i < 3; ++i) {
    Integer shifted = *in[i] + k;
    if (shifted <= 0 || mpz_divisible_p(shifted.get_mpz_t(), s.get_mpz_t()) == 0) return false;
    pre[i] = shifted / s;
  }
  return is_gme_solution(k, pre[0], pre[1], pre[2]);
}

inline GsmeTriple to_gsme(const MarkovTriple& t) {
  const Natural s = 3 + 3 * t.k;
  GsmeTriple g{t.k, s * t.a - t.k, s * t.b - t.k, s * t.c - t.k};
  if (!is_gsme_solution(g)) throw InvariantError("to_gsme: image is not a GSME solution");
  return g;
}

inline GsmeTriple gsme_vieta_left(const GsmeTriple& g) {
  GsmeTriple out{g.k, g.x, g.x * g.y - g.z - g.k * g.k - 2 * g.k, g.y};
  if (!is_gsme_solution(out)) throw InvariantError("gsme_vieta_left: result is not a GSME solution");
  return out;
}

inline GsmeTriple gsme_vieta_right(const GsmeTriple& g) {
  GsmeTriple out{g.k, g.y, g.y * g.z - g.x - g.k * g.k - 2 * g.k, g.z};
  if (!is_gsme_solution(out)) throw InvariantError("gsme_vieta_right: result is not a GSME solution");
  return out;
}

// ---------------------------------------------------------------------------


/// Squaring every classical (k = 0) triple entrywise gives the GME(2)
/// triple at the same address of WMT(2).
inline CheckReport square_correspondence_check(std::size_t depth) {
  CheckReport rep{"square_correspondence"};
  std::vector<MarkovTriple> classical = enumerate(0, depth, MarkovTreeKind::wide);
  std::vector<MarkovTriple> k2 = enumerate(2, depth, MarkovTreeKind::wide);
  rep.expect(classical.size() == k2.size(), "enumeration sizes differ");
  for (std::size_t i = 0; i < std::min(classical.size(), k2.size()); ++i) {
    const MarkovTriple& t = classical[i];
    Natural a2 = t.a * t.a, b2 = t.b * t.b, c2 = t.c * t.c;
    const std::string at = t.address->str();
    rep.expect(is_gme_solution(2, a2, b2, c2), "squares at '" + at + "' do not solve GME(2)");
    rep.expect(k2[i].address == t.address && k2[i].a == a2 && k2[i].b == b2 && k2[i].c == c2,
               "WMT(2) at '" + at + "' differs from the squared classical triple");
  }
  return rep;
}

}  // namespace kmarkov
