#pragma once

// Uniqueness of the triple with a given maximum b.
//
// Every verdict here presumes b is a k-generalized Markov number; that
// membership has no bounded test and is the caller's business (typically b
// came out of an enumeration).

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kmarkov/errors.hpp"
#include "kmarkov/markov_tree.hpp"
#include "kmarkov/numtheory.hpp"
#include "kmarkov/report.hpp"

namespace kmarkov {

inline constexpr unsigned kMaxListedSolutions = 256;

enum class Verdict {
  TrivialSmall,
  UniqueByCriterion,
  UniqueByPrimeOr2p,
  UniqueByPrimePowerCondition,
  UniqueByK2Square,
  BoundOnly,
  Unknown,
};

inline const char* name(Verdict v) {
  switch (v) {
    case Verdict::TrivialSmall: return "TrivialSmall";
    case Verdict::UniqueByCriterion: return "UniqueByCriterion";
    case Verdict::UniqueByPrimeOr2p: return "UniqueByPrimeOr2p";
    case Verdict::UniqueByPrimePowerCondition: return "UniqueByPrimePowerCondition";
    case Verdict::UniqueByK2Square: return "UniqueByK2Square";
    case Verdict::BoundOnly: return "BoundOnly";
    case Verdict::Unknown: return "Unknown";
  }
  return "?";
}

struct UniquenessVerdict {
  UniquenessVerdict() = default;
  UniquenessVerdict(Natural k_, Natural b_) : k(std::move(k_)), b(std::move(b_)) {}

  Natural k;
  Natural b;
  Verdict verdict = Verdict::Unknown;
  std::optional<Natural> solution_count;
  /// Listed only when there are at most kMaxListedSolutions of them.
  std::optional<ResidueSet> solutions;
  std::optional<Factorization> factorization;
  /// Set for BoundOnly.
  std::optional<Natural> bound;
  std::string note;

  /// Largest number of triples with maximum b the verdict allows, if any.
  std::optional<Natural> guarantee() const {
    if (verdict == Verdict::Unknown) return std::nullopt;
    if (verdict == Verdict::BoundOnly) return bound;
    return Natural(1);
  }
};

namespace detail {
inline bool is_trivial_small(const Natural& k, const Natural& b) { return b == 1 || b == k + 2; }

inline bool k2m4_divisible_by(const Natural& k, const Natural& p) {
  Integer v = k * k - 4;
  return mpz_divisible_p(v.get_mpz_t(), p.get_mpz_t()) != 0;
}

inline bool is_squarefree(const Natural& n, const EffortBudget& budget) {
  if (n <= 1) return true;
  Factorization f = factorize(n, budget);
  if (!f.complete()) throw DomainError("squarefree test: " + to_decimal(n) + " could not be factored within budget");
  return std::all_of(f.factors.begin(), f.factors.end(), [](const PrimePower& pp) { return pp.exponent == 1; });
}

/// Factorization with the 2-adic part split off: b = 2^e * odd.
struct Shape {
  unsigned two_exp = 0;
  std::vector<PrimePower> odd;
};

inline Shape shape_of(const Factorization& f) {
  Shape s;
  for (const PrimePower& pp : f.factors) {
    if (pp.prime == 2)
      s.two_exp = pp.exponent;
    else
      s.odd.push_back(pp);
  }
  return s;
}
}  // namespace detail

/// At most two roots of x^2 + kx + 1 mod b means uniqueness.
inline UniquenessVerdict criterion_applies(const Natural& k, const Natural& b, const EffortBudget& budget = {}) {
  if (b < 1) throw DomainError("criterion_applies: b must be >= 1");
  UniquenessVerdict v{k, b};
  const bool trivial = detail::is_trivial_small(k, b);
  std::optional<Natural> count = quadratic_solution_count(k, b, budget);
  if (!count) {
    v.note = "factorization incomplete; solutions not counted";
    return v;
  }
  v.solution_count = *count;
  if (*count <= kMaxListedSolutions) v.solutions = count_quadratic_solutions(k, b, budget);
  if (*count <= 2) {
    v.verdict = trivial ? Verdict::TrivialSmall : Verdict::UniqueByCriterion;
  } else if (trivial) {
    v.note = "b = k + 2 is the maximum of (1, k+2, 1) only, but the criterion is silent here";
  }
  return v;
}

namespace detail {
inline UniquenessVerdict shape_theorems(const Natural& k, const Natural& b, const EffortBudget& budget) {
  UniquenessVerdict v{k, b};
  // Primality first: the common case never needs a factorization.
  const bool even = b % 2 == 0;
  const Natural odd_part = even ? Natural(b / 2) : b;
  if (b == 2 || b == 4 || (b % 4 != 0 && is_probable_prime(odd_part, budget.extra_mr_rounds) && odd_part > 1)) {
    v.verdict = Verdict::UniqueByPrimeOr2p;
    Factorization f;
    if (b == 4) {
      f.factors.push_back({2, 2});
    } else {
      if (even) f.factors.push_back({2, 1});
      if (odd_part > 1) f.factors.push_back({odd_part, 1});
    }
    v.factorization = std::move(f);
    return v;
  }

  Factorization f = factorize(b, budget);
  if (!f.complete()) {
    v.factorization = std::move(f);
    v.note = "factorization incomplete";
    return v;
  }
  const detail::Shape s = detail::shape_of(f);
  v.factorization = std::move(f);

  if (s.odd.empty()) {
    // b = 2^m with m >= 3.
    if (k == 2) {
      v.verdict = Verdict::UniqueByK2Square;
    } else {
      v.note = "b is a power of 2; no theorem covers k != 2 (such b are not k-Markov numbers under the k-universal conditions)";
    }
    return v;
  }
  if (s.odd.size() != 1 || s.two_exp > 1) return v;

  const PrimePower& pp = s.odd.front();
  if (pp.exponent >= 2 && !detail::k2m4_divisible_by(k, pp.prime)) {
    v.verdict = Verdict::UniqueByPrimePowerCondition;
  } else if (k == 2) {
    v.verdict = Verdict::UniqueByK2Square;
  } else {
    v.note = "k^2 - 4 = 0 mod " + to_decimal(pp.prime);
  }
  return v;
}
}  // namespace detail

/// b = p, 2p, p^m, 2p^m and the theorems that cover each shape. b = k + 2
/// is reported TrivialSmall only where the shape test itself goes through.
inline UniquenessVerdict prime_shape_verdict(const Natural& k, const Natural& b, const EffortBudget& budget = {}) {
  if (b < 1) throw DomainError("prime_shape_verdict: b must be >= 1");
  if (b == 1) {
    UniquenessVerdict v{k, b};
    v.verdict = Verdict::TrivialSmall;
    return v;
  }
  UniquenessVerdict v = detail::shape_theorems(k, b, budget);
  if (b == k + 2) {
    if (v.verdict != Verdict::Unknown) {
      v.verdict = Verdict::TrivialSmall;
    } else if (v.note.empty()) {
      v.note = "b = k + 2; no shape theorem applies";
    }
  }
  return v;
}

/// True iff k = 2, or k >= 4 even with k/2 +- 1 squarefree, or k odd with
/// k + 2 and |k - 2| squarefree.
inline bool k_universal_check(const Natural& k, const EffortBudget& budget = {}) {
  if (k < 0) throw DomainError("k_universal_check: k must be >= 0");
  if (k == 2) return true;
  if (k % 2 == 0) {
    if (k < 4) return false;
    return detail::is_squarefree(k / 2 + 1, budget) && detail::is_squarefree(k / 2 - 1, budget);
  }
  Natural minus = k - 2;
  return detail::is_squarefree(k + 2, budget) && detail::is_squarefree(abs(minus), budget);
}

/// 2^(n-1), n the number of distinct odd primes of b, for b = P or 2P
/// with P odd. Requires either the k-condition of the closing theorem or,
/// prime by prime, k^2 - 4 != 0 mod p wherever p^2 | b.
inline Natural bound_2_pow(const Natural& k, const Natural& b, const EffortBudget& budget = {}) {
  if (b < 1) throw NotApplicableError("bound_2_pow: b must be >= 1");
  if (b % 4 == 0) throw NotApplicableError("bound_2_pow: 4 divides b");
  Factorization f = factorize(b, budget);
  if (!f.complete()) throw NotApplicableError("bound_2_pow: factorization of b incomplete");
  const detail::Shape s = detail::shape_of(f);
  if (s.odd.empty()) throw NotApplicableError("bound_2_pow: b has no odd prime factor");

  bool k_condition = k != 2 && k_universal_check(k, budget);
  if (!k_condition) {
    k_condition = std::all_of(s.odd.begin(), s.odd.end(), [&](const PrimePower& pp) {
      return pp.exponent == 1 || !detail::k2m4_divisible_by(k, pp.prime);
    });
  }
  if (!k_condition) throw NotApplicableError("bound_2_pow: k fails the hypothesis for b = " + to_decimal(b));
  Natural out = 1;
  mpz_mul_2exp(out.get_mpz_t(), out.get_mpz_t(), s.odd.size() - 1);
  return out;
}

/// Strongest available statement: shape theorems, then the criterion (only
/// when b is small enough to count cheaply or factors within budget), then
/// the 2^(n-1) bound.
inline UniquenessVerdict classify(const Natural& k, const Natural& b, const EffortBudget& budget = {}) {
  UniquenessVerdict shape = prime_shape_verdict(k, b, budget);
  if (shape.verdict != Verdict::Unknown) return shape;
  if (shape.factorization && !shape.factorization->complete()) return shape;

  UniquenessVerdict crit = criterion_applies(k, b, budget);
  if (!crit.factorization) crit.factorization = shape.factorization;
  if (crit.verdict != Verdict::Unknown) return crit;
  try {
    crit.bound = bound_2_pow(k, b, budget);
    crit.verdict = Verdict::BoundOnly;
  } catch (const NotApplicableError&) {
  }
  if (crit.note.empty()) crit.note = shape.note;
  return crit;
}

// ---------------------------------------------------------------------------

struct EmpiricalReport {
  Natural k;
  std::size_t depth = 0;
  std::size_t vertices = 0;
  std::size_t distinct_maxima = 0;
  /// Values reached as a maximum by two distinct unordered triples.
  std::vector<Natural> duplicated_maxima;
  /// Values taken by m_t at two distinct fractions.
  std::vector<Natural> duplicated_labels;
  std::map<std::string, std::size_t> verdicts;
  /// Verdict-versus-enumeration contradictions.
  CheckReport checks{"uniqueness"};

  bool ok() const { return duplicated_maxima.empty() && duplicated_labels.empty() && checks.ok(); }
};

/// Enumerates LMT(k), groups by maximum and compares with verdicts.
/// `criterion_cutoff` bounds the b for which the criterion cross-check
/// (shape verdict implies at most two roots) is run.
inline EmpiricalReport uniqueness_empirical(const Natural& k, std::size_t depth, const EffortBudget& budget = {},
                                            const Natural& criterion_cutoff = Natural(kBruteForceModulusLimit)) {
  EmpiricalReport rep;
  rep.k = k;
  rep.depth = depth;

  std::map<Natural, std::vector<std::array<Natural, 3>>> by_max;
  std::map<Natural, std::size_t> label_count;
  enumerate(k, depth, MarkovTreeKind::lower, [&](const MarkovTriple& t) {
    ++rep.vertices;
    ++label_count[t.b];
    auto& bucket = by_max[t.max()];
    auto key = t.sorted();
    if (std::find(bucket.begin(), bucket.end(), key) == bucket.end()) bucket.push_back(std::move(key));
  });
  rep.distinct_maxima = by_max.size();
  for (const auto& [m, n] : label_count)
    if (n > 1) rep.duplicated_labels.push_back(m);

  for (const auto& [b, triples] : by_max) {
    if (triples.size() > 1) rep.duplicated_maxima.push_back(b);
    UniquenessVerdict v = classify(k, b, budget);
    ++rep.verdicts[name(v.verdict)];
    if (auto g = v.guarantee())
      rep.checks.expect(Natural(triples.size()) <= *g, "b = " + to_decimal(b) + ": " + std::to_string(triples.size()) +
                                                           " triples exceed verdict " + name(v.verdict));
    if (is_probable_prime(b, budget.extra_mr_rounds))
      rep.checks.expect(v.verdict == Verdict::UniqueByPrimeOr2p || v.verdict == Verdict::TrivialSmall,
                        "prime b = " + to_decimal(b) + " got verdict " + name(v.verdict));
    const bool shape_unique = v.verdict == Verdict::UniqueByPrimeOr2p ||
                              v.verdict == Verdict::UniqueByPrimePowerCondition;
    if (shape_unique && b <= criterion_cutoff) {
      std::optional<Natural> n = quadratic_solution_count(k, b, budget);
      rep.checks.expect(n && *n <= 2, "b = " + to_decimal(b) + ": shape verdict but " + (n ? to_decimal(*n) : "?") +
                                          " roots");
    }
  }
  return rep;
}

}  // namespace kmarkov
