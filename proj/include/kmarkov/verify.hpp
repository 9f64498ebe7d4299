#pragma once

// Invariant sweeps over every module. Each suite returns a CheckReport;
// exceptions escaping a check are recorded as failures rather than thrown.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "kmarkov/cohn.hpp"
#include "kmarkov/criterion.hpp"
#include "kmarkov/farey.hpp"
#include "kmarkov/markov_tree.hpp"
#include "kmarkov/numtheory.hpp"
#include "kmarkov/parallel.hpp"
#include "kmarkov/report.hpp"

namespace kmarkov {

struct VerifyConfig {
  unsigned k_min = 0, k_max = 10;
  std::size_t depth = 10;
  std::size_t samples = 1000;
  std::uint64_t seed = 1;
  unsigned jobs = 1;
  EffortBudget budget{2000, 0};
  /// Farey children under test; swapped out by fault-injection tests.
  std::function<std::pair<FareyTriple, FareyTriple>(const FareyTriple&)> farey_children = farey_children_unchecked;

  std::vector<unsigned> ks() const {
    std::vector<unsigned> out;
    for (unsigned k = k_min; k <= k_max; ++k) out.push_back(k);
    return out;
  }
};

namespace detail {

template <class Fn>
void guarded(CheckReport& rep, const std::string& what, Fn&& fn) {
  try {
    fn();
  } catch (const std::exception& e) {
    rep.expect(false, what + ": " + e.what());
  }
}

/// One report per k, run in parallel and merged in k order.
template <class Fn>
CheckReport per_k(const std::string& name, const VerifyConfig& cfg, Fn&& fn) {
  const std::vector<unsigned> ks = cfg.ks();
  std::vector<CheckReport> parts = parallel_map<CheckReport>(ks.size(), cfg.jobs, [&](std::size_t i) {
    CheckReport r("k=" + std::to_string(ks[i]));
    guarded(r, "k=" + std::to_string(ks[i]), [&] { fn(Natural(ks[i]), r); });
    return r;
  });
  CheckReport out(name);
  for (const CheckReport& r : parts) out.merge(r);
  return out;
}

inline bool pairwise_coprime(const Natural& a, const Natural& b, const Natural& c) {
  return gcd(a, b) == 1 && gcd(b, c) == 1 && gcd(c, a) == 1;
}

inline std::string where(const std::optional<TreeAddress>& a) { return "'" + (a ? a->str() : std::string("?")) + "'"; }

}  // namespace detail

/// GME/GSME exactness, coprimality, jump/parent round trips, parity and
/// mod-4 obstructions, and the k = 0 / k = 2 square correspondence.
inline CheckReport verify_trees(const VerifyConfig& cfg) {
  CheckReport rep = detail::per_k("trees", cfg, [&](const Natural& k, CheckReport& r) {
    const bool odd_k = k % 2 != 0;
    const bool mod4_obstructed = k % 4 != 2;
    enumerate(k, cfg.depth, MarkovTreeKind::wide, [&](const MarkovTriple& t) {
      const std::string at = detail::where(t.address);
      r.expect(is_gme_solution(t), "not a GME solution at " + at);
      r.expect(detail::pairwise_coprime(t.a, t.b, t.c), "entries not pairwise coprime at " + at);
      for (const Natural* e : {&t.a, &t.b, &t.c}) {
        if (odd_k) r.expect(*e % 2 != 0, "even entry for odd k at " + at);
        if (mod4_obstructed) r.expect(*e % 4 != 0, "entry divisible by 4 at " + at);
      }
      const GsmeTriple g = to_gsme(t);
      r.expect(is_gsme_solution(g) && is_induced(k, g.x, g.y, g.z), "GSME image wrong at " + at);
      if (t.address->depth() < cfg.depth) {
        const MarkovTriple l = vieta_left(t, JumpCheck::division);
        const MarkovTriple rr = vieta_right(t, JumpCheck::division);
        r.expect(gsme_vieta_left(g) == to_gsme(l) && gsme_vieta_right(g) == to_gsme(rr),
                 "GSME jumps do not commute with the map at " + at);
        if (!t.address->is_root()) {
          r.expect(parent(l).first.same_entries(t) && parent(l).second == Side::left, "parent(left child) at " + at);
          r.expect(parent(rr).first.same_entries(t) && parent(rr).second == Side::right,
                   "parent(right child) at " + at);
        }
      }
    });
  });
  detail::guarded(rep, "square correspondence",
                  [&] { rep.merge(square_correspondence_check(std::min<std::size_t>(cfg.depth, 8))); });
  return rep;
}

/// Matrix-level invariants of LGCT(k, -k), its match with LMT(k), descent,
/// GCT* = GCT(k, k + l + 1), and the root displays.
inline CheckReport verify_cohn(const VerifyConfig& cfg) {
  return detail::per_k("cohn", cfg, [&](const Natural& k, CheckReport& r) {
    const Integer l = -k;
    const CohnTriple root = cohn_root(k, l, CohnTreeKind::lower);
    r.expect(root.P() == Mat2{-k, 1, -3 * k * k - 3 * k - 1, 3 * k + 3} &&
                 root.Q() == Mat2{k + 2, 2 * k * k + 6 * k + 5, 3 * k * k + 9 * k + 5,
                                  6 * k * k * k + 24 * k * k + 31 * k + 13} &&
                 root.R() == Mat2{1, k + 2, 3 * k + 2, 3 * k * k + 8 * k + 5},
             "LGCT(k,-k) root differs from the displayed matrices");

    std::vector<MarkovTriple> lmt = enumerate(k, cfg.depth, MarkovTreeKind::lower);
    std::size_t i = 0;
    const Integer minus_k2 = -k * k;
    std::vector<Mat2> sample;
    enumerate_cohn(k, l, cfg.depth, CohnTreeKind::lower, [&](const CohnTriple& t) {
      const std::string at = detail::where(t.address());
      r.expect(!t.violation(), "invalid Cohn triple at " + at);
      for (const Mat2* m : {&t.P(), &t.Q(), &t.R()}) {
        r.expect(m->det() == 1 && is_cohn_matrix(k, *m), "det/trace condition fails at " + at);
        r.expect((s_matrix(k) * mat_inv(*m)).trace() == minus_k2, "tr(S M^-1) != -k^2 at " + at);
      }
      r.expect(index(t.P()) < index(t.Q()) && index(t.Q()) < index(t.R()), "index not increasing at " + at);
      const MarkovTriple& m = lmt.at(i++);
      r.expect(m.address == t.address() && t.markov().same_entries(m), "(1,2)-entries differ from LMT at " + at);

      const std::size_t d = t.address()->depth();
      if (d < cfg.depth) {
        r.expect(parent_from_left(child_left(t)).same_matrices(t), "parent_from_left(child_left) at " + at);
        r.expect(parent_from_right(child_right(t)).same_matrices(t), "parent_from_right(child_right) at " + at);
      }
      const CohnDescent desc = descend_to_root(t);
      r.expect(desc.l == l && desc.address == TreeAddress::parse("LL" + t.address()->str()),
               "descent from " + at + " does not return to the root at 'LL'");
      if (sample.size() < 64) sample.push_back(t.Q());
    });
    r.expect(i == lmt.size(), "LGCT and LMT sizes differ");

    const std::size_t star_depth = std::min<std::size_t>(cfg.depth, 6);
    for (const Integer& ll : {Integer(l), Integer(0), Integer(2)})
      r.expect(gct_star_check(k, ll, star_depth), "GCT* != GCT(k, k+l+1) for l = " + to_decimal(ll));

    // A second root parameter, against the whole wide tree.
    std::vector<MarkovTriple> wmt = enumerate(k, std::min<std::size_t>(cfg.depth, 8), MarkovTreeKind::wide);
    std::size_t j = 0;
    enumerate_cohn(k, Integer(1), std::min<std::size_t>(cfg.depth, 8), CohnTreeKind::wide, [&](const CohnTriple& t) {
      r.expect(t.markov().same_entries(wmt.at(j++)), "WGCT(k,1) differs from WMT at " + detail::where(t.address()));
    });

    r.merge(verify_trace_lemmas({}, k, sample));
  });
}

/// Farey tree validity and address round trips; labels, characteristic
/// numbers and their congruences for every interior vertex.
inline CheckReport verify_farey(const VerifyConfig& cfg) {
  CheckReport rep("farey");
  detail::guarded(rep, "farey tree", [&] {
    std::vector<FareyTriple> level{FareyTriple::root()};
    for (std::size_t d = 0;; ++d) {
      for (const FareyTriple& t : level) {
        const std::string at = detail::where(t.address);
        rep.expect(t.valid(), "invalid Farey triple at " + at);
        rep.expect(address_to_fraction(*t.address) == t.mid, "address_to_fraction mismatch at " + at);
        detail::guarded(rep, "fraction_to_address at " + at,
                        [&] { rep.expect(fraction_to_address(t.mid) == *t.address, "round trip fails at " + at); });
      }
      if (d == cfg.depth) break;
      std::vector<FareyTriple> next;
      for (const FareyTriple& t : level) {
        auto [a, b] = cfg.farey_children(t);
        next.push_back(std::move(a));
        next.push_back(std::move(b));
      }
      level = std::move(next);
    }
  });

  rep.merge(detail::per_k("labels", cfg, [&](const Natural& k, CheckReport& r) {
    const std::size_t depth = std::min<std::size_t>(cfg.depth, 10);
    std::vector<MarkovTriple> lmt = enumerate(k, depth, MarkovTreeKind::lower);
    std::vector<std::pair<Fraction, Rational>> by_t;
    std::size_t i = 0;
    enumerate_cohn(k, -k, depth, CohnTreeKind::lower, [&](const CohnTriple& c) {
      const MarkovTriple& m = lmt.at(i++);
      const TreeAddress addr = c.address()->prepend(Side::left);
      const Fraction t = address_to_fraction(addr);
      const std::string at = t.str();
      const Mat2& ct = c.Q();
      const Natural& m_t = m.b;
      r.expect(markov_label(k, t) == m_t, "markov_label mismatch at " + at);
      const Natural u = characteristic_number(k, t);
      r.expect(u == ct.m11 && u > 0, "u_t is not the positive (1,1)-entry of C_t at " + at);
      r.expect(Natural(u * u + k * u + 1) % m_t == 0, "u^2 + ku + 1 != 0 mod m_t at " + at);
      r.expect(2 * (u + k) < m_t, "u_t + k >= m_t/2 at " + at);
      r.expect(Natural(m.a * u - m.c) % m_t == 0, "m_r u_t != m_s mod m_t at " + at);
      r.expect(u * (k + 2) < m_t, "u_t >= m_t/(k+2) at " + at);
      by_t.emplace_back(t, index(ct));
    });
    std::sort(by_t.begin(), by_t.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t j = 1; j < by_t.size(); ++j)
      r.expect(by_t[j - 1].second < by_t[j].second, "index not increasing in t at " + by_t[j].first.str());
  }));
  return rep;
}

/// Verdicts against enumeration, plus the arithmetic side conditions.
inline CheckReport verify_criterion(const VerifyConfig& cfg) {
  CheckReport rep = detail::per_k("criterion", cfg, [&](const Natural& k, CheckReport& r) {
    EmpiricalReport e = uniqueness_empirical(k, std::min<std::size_t>(cfg.depth, 10), cfg.budget);
    r.expect(e.duplicated_maxima.empty(), std::to_string(e.duplicated_maxima.size()) + " duplicated maxima");
    r.expect(e.duplicated_labels.empty(), std::to_string(e.duplicated_labels.size()) + " duplicated labels");
    r.merge(e.checks);

    // Per-p condition on enumerated b = p^m or 2p^m, p odd, m >= 2.
    if (k == 0 || k == 2) return;
    const Natural s1 = k % 2 == 0 ? Natural(k / 2 + 1) : Natural(k + 2);
    const Natural s2 = k % 2 == 0 ? Natural(k / 2 - 1) : Natural(abs(Integer(k - 2)));
    std::vector<Natural> seen;
    enumerate(k, std::min<std::size_t>(cfg.depth, 8), MarkovTreeKind::wide,
              [&](const MarkovTriple& t) { seen.push_back(t.b); });
    detail::sort_unique(seen);
    for (const Natural& b : seen) {
      if (b > Natural("1000000000000")) continue;
      Factorization f = factorize(b, cfg.budget);
      if (!f.complete()) continue;
      const detail::Shape s = detail::shape_of(f);
      if (s.odd.size() != 1 || s.two_exp > 1 || s.odd.front().exponent < 2) continue;
      const Natural& p = s.odd.front().prime;
      const Natural p2 = p * p;
      if (s1 % p2 != 0 && s2 % p2 != 0)
        r.expect(!detail::k2m4_divisible_by(k, p),
                 "per-p condition holds but k^2-4 = 0 mod " + to_decimal(p) + " (b = " + to_decimal(b) + ")");
    }
  });

  // Odd p > k/2 + 1 never divides k^2 - 4, sampled.
  CheckReport large("large_prime");
  for (unsigned k = 4; k <= 40; k += 2)
    for (unsigned long p : detail::small_primes()) {
      if (p > 997) break;
      if (p == 2 || p <= k / 2 + 1) continue;
      large.expect(!detail::k2m4_divisible_by(k, p), "k = " + std::to_string(k) + ", p = " + std::to_string(p));
    }
  rep.merge(large);
  return rep;
}

/// Trace identity on random unimodular triples and on Cohn matrices, and
/// the SL(2) trace lemmas on random pairs.
inline CheckReport verify_identity(const VerifyConfig& cfg) {
  CheckReport rep("identity");
  std::mt19937_64 rng(cfg.seed);
  std::vector<std::pair<Mat2, Mat2>> pairs;
  for (std::size_t i = 0; i < cfg.samples; ++i) {
    const Mat2 a = random_unimodular(rng), b = random_unimodular(rng), c = random_unimodular(rng);
    rep.expect(trace_identity_check(a, b, c), "trace identity fails for sample " + std::to_string(i));
    pairs.emplace_back(a, b);
  }
  rep.merge(verify_trace_lemmas(pairs, 0, {}));
  rep.merge(detail::per_k("cohn_identity", cfg, [&](const Natural& k, CheckReport& r) {
    std::vector<CohnTriple> ts = enumerate_cohn(k, -k, std::min<std::size_t>(cfg.depth, 4), CohnTreeKind::lower);
    for (const CohnTriple& t : ts) {
      r.expect(trace_identity_check(t.P(), t.Q(), t.R()), "identity fails on Cohn triple " + detail::where(t.address()));
      r.expect(trace_identity_check(t.P(), mat_inv(t.R()), t.Q()), "identity fails on (P, R^-1, Q) at " +
                                                                       detail::where(t.address()));
    }
  }));
  return rep;
}

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"trees", "cohn", "farey", "criterion", "identity"};
  return names;
}

inline CheckReport run_suite(const std::string& suite, const VerifyConfig& cfg) {
  if (suite == "trees") return verify_trees(cfg);
  if (suite == "cohn") return verify_cohn(cfg);
  if (suite == "farey") return verify_farey(cfg);
  if (suite == "criterion") return verify_criterion(cfg);
  if (suite == "identity") return verify_identity(cfg);
  throw DomainError("unknown suite '" + suite + "'");
}

}  // namespace kmarkov
