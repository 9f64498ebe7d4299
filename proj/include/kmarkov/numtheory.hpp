#pragma once

// Arbitrary-precision integer utilities on top of GMP: primality, factoring,
// modular square roots with Hensel lifting, CRT, and the solution sets of
// x^2 + kx + 1 = 0 (mod b).

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kmarkov/errors.hpp"

namespace kmarkov {

// Both are mpz_class; the names document the intended sign.
using Natural = mpz_class;
using Integer = mpz_class;
using Rational = mpq_class;

inline std::string to_decimal(const mpz_class& n) { return n.get_str(10); }

inline Natural parse_natural(const std::string& s) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
    throw DomainError("not a decimal natural: '" + s + "'");
  return Natural(s, 10);
}

inline Integer parse_integer(const std::string& s) {
  std::string digits = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? s.substr(1) : s;
  Natural mag = parse_natural(digits);
  return (!s.empty() && s[0] == '-') ? Integer(-mag) : Integer(mag);
}

/// Effort limits for the probabilistic / exponential parts.
struct EffortBudget {
  /// Total Pollard-rho iterations allowed for one factorization.
  std::uint64_t rho_iterations = 200000;
  /// Extra random-base Miller-Rabin rounds run after BPSW.
  int extra_mr_rounds = 0;

  /// Defaults, overridable through KMARKOV_RHO_BUDGET.
  static EffortBudget from_env() {
    EffortBudget b;
    if (const char* v = std::getenv("KMARKOV_RHO_BUDGET")) {
      char* end = nullptr;
      unsigned long long n = std::strtoull(v, &end, 10);
      if (end != v && *end == '\0' && n > 0) b.rho_iterations = n;
    }
    return b;
  }
};

struct PrimePower {
  Natural prime;
  unsigned exponent = 0;

  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// n = prod(prime^exponent) * cofactor; cofactor > 1 means factoring ran out
/// of budget on that part.
struct Factorization {
  std::vector<PrimePower> factors;
  Natural cofactor = 1;

  bool complete() const { return cofactor == 1; }

  Natural product() const {
    Natural r = cofactor;
    for (const auto& f : factors) {
      Natural pe;
      mpz_pow_ui(pe.get_mpz_t(), f.prime.get_mpz_t(), f.exponent);
      r *= pe;
    }
    return r;
  }
};

/// Sorted, duplicate-free residues in [0, modulus).
struct ResidueSet {
  Natural modulus = 1;
  std::vector<Natural> residues;
  bool complete = true;

  std::size_t size() const { return residues.size(); }
  bool contains(const Natural& x) const {
    return std::binary_search(residues.begin(), residues.end(), x);
  }
};

namespace detail {

inline Natural mod_floor(const Integer& a, const Natural& m) {
  Natural r;
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return r;
}

inline Natural pow_ui(const Natural& base, unsigned long e) {
  Natural r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

inline Natural powm(const Natural& base, const Natural& e, const Natural& m) {
  Natural r;
  mpz_powm(r.get_mpz_t(), base.get_mpz_t(), e.get_mpz_t(), m.get_mpz_t());
  return r;
}

inline void sort_unique(std::vector<Natural>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

inline const std::vector<unsigned long>& small_primes() {
  static const std::vector<unsigned long> primes = [] {
    constexpr unsigned long kBound = 10000;
    std::vector<bool> composite(kBound + 1, false);
    std::vector<unsigned long> out;
    for (unsigned long i = 2; i <= kBound; ++i) {
      if (composite[i]) continue;
      out.push_back(i);
      for (unsigned long j = i * i; j <= kBound; j += i) composite[j] = true;
    }
    return out;
  }();
  return primes;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Basic arithmetic

inline Natural gcd(const Natural& a, const Natural& b) {
  if (a == 0 && b == 0) throw DomainError("gcd(0, 0) is undefined");
  Natural g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

/// r in [1, m) with a*r = 1 (mod m).
inline Natural mod_inverse(const Integer& a, const Natural& m) {
  if (m < 2) throw DomainError("mod_inverse: modulus must be >= 2");
  Natural r;
  if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0)
    throw NotInvertibleError("mod_inverse: " + to_decimal(a) + " is not invertible mod " +
                             to_decimal(m));
  return r;
}

/// Baillie-PSW (strong base-2 + strong Lucas) via GMP; exact below 2^64.
inline bool is_probable_prime(const Natural& n, int extra_mr_rounds = 0) {
  if (n < 2) return false;
  return mpz_probab_prime_p(n.get_mpz_t(), 24 + std::max(0, extra_mr_rounds)) != 0;
}

// ---------------------------------------------------------------------------
// Factorization

namespace detail {

/// Brent's variant of Pollard rho. Consumes iterations from `budget`;
/// returns a nontrivial factor of n (composite, odd, not a perfect power)
/// or nothing when the budget runs out.
inline std::optional<Natural> pollard_brent(const Natural& n, std::uint64_t& budget) {
  constexpr std::uint64_t kBatch = 128;
  for (unsigned long c = 1; budget > 0; ++c) {
    Natural y = 2, x, ys, q = 1, g = 1, t;
    std::uint64_t r = 1;
    auto step = [&](Natural& v) {
      v = v * v + c;
      mpz_mod(v.get_mpz_t(), v.get_mpz_t(), n.get_mpz_t());
    };
    do {
      x = y;
      for (std::uint64_t i = 0; i < r; ++i) step(y);
      budget = budget > r ? budget - r : 0;
      std::uint64_t done = 0;
      do {
        ys = y;
        std::uint64_t lim = std::min(kBatch, r - done);
        for (std::uint64_t i = 0; i < lim; ++i) {
          step(y);
          t = x - y;
          mpz_abs(t.get_mpz_t(), t.get_mpz_t());
          q *= t;
          mpz_mod(q.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
        }
        done += lim;
        budget = budget > lim ? budget - lim : 0;
        mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
      } while (done < r && g == 1 && budget > 0);
      r *= 2;
    } while (g == 1 && budget > 0);

    if (g == n) {
      // Batch overshot; redo one step at a time from the saved point.
      do {
        step(ys);
        t = x - ys;
        mpz_abs(t.get_mpz_t(), t.get_mpz_t());
        mpz_gcd(g.get_mpz_t(), t.get_mpz_t(), n.get_mpz_t());
      } while (g == 1);
    }
    if (g != 1 && g != n) return g;
    // g == n: cycle without split; retry with the next constant.
  }
  return std::nullopt;
}

/// If n = r^e with e >= 2, returns (r, e) for the largest such e.
inline std::optional<std::pair<Natural, unsigned>> perfect_power(const Natural& n) {
  if (n < 4 || mpz_perfect_power_p(n.get_mpz_t()) == 0) return std::nullopt;
  std::size_t bits = mpz_sizeinbase(n.get_mpz_t(), 2);
  for (unsigned e = static_cast<unsigned>(bits); e >= 2; --e) {
    Natural r;
    if (mpz_root(r.get_mpz_t(), n.get_mpz_t(), e) != 0) return std::make_pair(r, e);
  }
  return std::nullopt;
}

}  // namespace detail

/// Trial division below 10^4, then Pollard-Brent rho within the budget.
/// Parts that could not be split end up in the cofactor.
inline Factorization factorize(const Natural& n, const EffortBudget& budget = {}) {
  if (n < 1) throw DomainError("factorize: n must be >= 1");
  std::map<Natural, unsigned> found;
  Natural rest = n;
  for (unsigned long p : detail::small_primes()) {
    if (rest == 1) break;
    if (Natural(p) * p > rest) break;
    while (mpz_divisible_ui_p(rest.get_mpz_t(), p) != 0) {
      mpz_divexact_ui(rest.get_mpz_t(), rest.get_mpz_t(), p);
      ++found[Natural(p)];
    }
  }

  Factorization out;
  std::uint64_t iterations = budget.rho_iterations;
  std::vector<std::pair<Natural, unsigned>> work;
  if (rest > 1) work.emplace_back(rest, 1);
  while (!work.empty()) {
    auto [m, mult] = work.back();
    work.pop_back();
    if (m == 1) continue;
    if (is_probable_prime(m)) {
      found[m] += mult;
      continue;
    }
    if (auto pp = detail::perfect_power(m)) {
      work.emplace_back(pp->first, mult * pp->second);
      continue;
    }
    if (auto d = detail::pollard_brent(m, iterations)) {
      Natural other = m / *d;
      work.emplace_back(*d, mult);
      work.emplace_back(other, mult);
      continue;
    }
    out.cofactor *= detail::pow_ui(m, mult);
  }
  for (auto& [p, e] : found) out.factors.push_back({p, e});
  return out;
}

// ---------------------------------------------------------------------------
// Modular square roots

namespace detail {

/// Tonelli-Shanks: a square root of a unit quadratic residue a mod odd p.
inline Natural tonelli_shanks(const Natural& a, const Natural& p) {
  if (p % 4 == 3) return powm(a, (p + 1) / 4, p);
  Natural q = p - 1;
  unsigned long s = mpz_scan1(q.get_mpz_t(), 0);
  mpz_fdiv_q_2exp(q.get_mpz_t(), q.get_mpz_t(), s);
  Natural z = 2;
  while (mpz_legendre(z.get_mpz_t(), p.get_mpz_t()) != -1) ++z;

  Natural c = powm(z, q, p);
  Natural x = powm(a, (q + 1) / 2, p);
  Natural t = powm(a, q, p);
  unsigned long m = s;
  while (t != 1) {
    unsigned long i = 0;
    Natural t2 = t;
    while (t2 != 1) {
      t2 = t2 * t2 % p;
      ++i;
    }
    Natural b = c;
    for (unsigned long j = 0; j + i + 1 < m; ++j) b = b * b % p;
    x = x * b % p;
    c = b * b % p;
    t = t * c % p;
    m = i;
  }
  return x;
}

/// Roots of x^2 = a (mod p^e) for a unit a (gcd(a, p) = 1); e >= 1.
inline std::vector<Natural> sqrt_unit_mod_prime_power(const Natural& a, const Natural& p,
                                                      unsigned e) {
  Natural pe = pow_ui(p, e);
  std::vector<Natural> roots;
  if (p == 2) {
    if (e <= 3) {
      for (unsigned long x = 0; x < (1ul << e); ++x)
        if (Natural(x * x) % pe == a % pe) roots.emplace_back(x);
      return roots;
    }
    if (a % 8 != 1) return roots;
    // Lift x^2 = a from 2^i to 2^(i+1); the fix-up step is x += 2^(i-1).
    Natural x = 1;
    for (unsigned i = 3; i < e; ++i) {
      Natural mod_next = pow_ui(2, i + 1);
      if ((x * x - a) % mod_next != 0) x += pow_ui(2, i - 1);
    }
    Natural half = pow_ui(2, e - 1);
    for (const Natural& r : {Natural(x), Natural(pe - x), Natural(x + half), Natural(pe - x + half)})
      roots.push_back(mod_floor(r, pe));
    sort_unique(roots);
    return roots;
  }

  Natural a_mod_p = a % p;
  if (mpz_legendre(a_mod_p.get_mpz_t(), p.get_mpz_t()) != 1) return roots;
  Natural x = tonelli_shanks(a_mod_p, p);
  // Hensel: x <- x - f(x) / f'(x), one power of p at a time.
  Natural mod = p;
  for (unsigned i = 2; i <= e; ++i) {
    mod *= p;
    Natural fx = mod_floor(x * x - a, mod);
    Natural inv = mod_inverse(2 * x, mod);
    x = mod_floor(x - fx * inv, mod);
  }
  roots.push_back(x);
  roots.push_back(mod_floor(pe - x, pe));
  sort_unique(roots);
  return roots;
}

}  // namespace detail

/// All x in [0, p^m) with x^2 = a (mod p^m). Handles a divisible by p.
inline ResidueSet sqrt_mod_prime_power(const Integer& a, const Natural& p, unsigned m) {
  if (m == 0) throw DomainError("sqrt_mod_prime_power: exponent must be >= 1");
  if (!is_probable_prime(p))
    throw DomainError("sqrt_mod_prime_power: " + to_decimal(p) + " is not prime");
  const Natural pm = detail::pow_ui(p, m);
  ResidueSet out;
  out.modulus = pm;
  Natural r = detail::mod_floor(a, pm);

  if (r == 0) {
    // x^2 = 0 mod p^m  <=>  p^ceil(m/2) | x
    Natural step = detail::pow_ui(p, (m + 1) / 2);
    for (Natural x = 0; x < pm; x += step) out.residues.push_back(x);
    return out;
  }

  unsigned long v = mpz_remove(r.get_mpz_t(), r.get_mpz_t(), p.get_mpz_t());
  if (v % 2 == 1) return out;
  const unsigned w = static_cast<unsigned>(v / 2);
  // x = p^w * y with y^2 = r (mod p^(m-2w)); y ranges mod p^(m-w).
  const unsigned reduced_exp = m - 2 * w;
  const Natural reduced_mod = detail::pow_ui(p, reduced_exp);
  const Natural pw = detail::pow_ui(p, w);
  const Natural y_range = detail::pow_ui(p, m - w);
  for (const Natural& y0 : detail::sqrt_unit_mod_prime_power(r, p, reduced_exp)) {
    for (Natural y = y0; y < y_range; y += reduced_mod) out.residues.push_back(pw * y % pm);
  }
  detail::sort_unique(out.residues);
  return out;
}

/// |{x in [0, p^m) : x^2 = a (mod p^m)}| without listing them.
inline Natural sqrt_count_mod_prime_power(const Integer& a, const Natural& p, unsigned m) {
  if (m == 0) throw DomainError("sqrt_count_mod_prime_power: exponent must be >= 1");
  const Natural pm = detail::pow_ui(p, m);
  Natural r = detail::mod_floor(a, pm);
  if (r == 0) return detail::pow_ui(p, m / 2);
  unsigned long v = mpz_remove(r.get_mpz_t(), r.get_mpz_t(), p.get_mpz_t());
  if (v % 2 == 1) return 0;
  const unsigned w = static_cast<unsigned>(v / 2);
  return Natural(detail::sqrt_unit_mod_prime_power(r, p, m - 2 * w).size()) * detail::pow_ui(p, w);
}

// ---------------------------------------------------------------------------
// Chinese remainder theorem

/// Combines (residue, modulus) pairs with pairwise coprime moduli into
/// (R, M), M = product of the moduli.
inline std::pair<Natural, Natural> crt(const std::vector<std::pair<Natural, Natural>>& parts) {
  Natural R = 0, M = 1;
  for (const auto& [residue, modulus] : parts) {
    if (modulus < 1) throw DomainError("crt: moduli must be >= 1");
    if (gcd(M, modulus) != 1)
      throw DomainError("crt: modulus " + to_decimal(modulus) + " is not coprime to the others");
    Natural r = detail::mod_floor(residue, modulus);
    if (modulus > 1) {
      Natural t = detail::mod_floor((r - R) * mod_inverse(M % modulus, modulus), modulus);
      R += M * t;
    }
    M *= modulus;
    R = detail::mod_floor(R, M);
  }
  return {R, M};
}

// ---------------------------------------------------------------------------
// x^2 + kx + 1 = 0 (mod b)

/// Moduli up to this size are solved by direct enumeration.
inline constexpr unsigned long kBruteForceModulusLimit = 1000000;

inline ResidueSet solve_quadratic_brute(const Natural& k, const Natural& b) {
  if (b < 1) throw DomainError("modulus must be >= 1");
  if (!b.fits_ulong_p() || b.get_ui() > kBruteForceModulusLimit)
    throw DomainError("solve_quadratic_brute: modulus too large for enumeration");
  const std::uint64_t m = b.get_ui();
  const std::uint64_t kk = Natural(k % b).get_ui();
  ResidueSet out;
  out.modulus = b;
  for (std::uint64_t x = 0; x < m; ++x)
    if ((x * x + kk * x + 1) % m == 0) out.residues.emplace_back(static_cast<unsigned long>(x));
  return out;
}

/// Roots modulo one prime power p^m.
inline std::vector<Natural> quadratic_roots_mod_prime_power(const Natural& k, const Natural& p,
                                                            unsigned m) {
  const Natural pm = detail::pow_ui(p, m);
  std::vector<Natural> roots;
  if (p == 2) {
    // x^2 + kx + 1 is odd for odd k; for even k it is (x + k/2)^2 - (k^2/4 - 1).
    if (k % 2 != 0) return roots;
    Natural j = k / 2;
    for (const Natural& r : sqrt_mod_prime_power(j * j - 1, p, m).residues)
      roots.push_back(detail::mod_floor(r - j, pm));
  } else {
    // (2x + k)^2 = k^2 - 4
    Natural inv2 = (pm + 1) / 2;
    for (const Natural& r : sqrt_mod_prime_power(k * k - 4, p, m).residues)
      roots.push_back(detail::mod_floor((r - k) * inv2, pm));
  }
  detail::sort_unique(roots);
  return roots;
}

/// Number of roots modulo p^m; same reductions as above.
inline Natural quadratic_root_count_mod_prime_power(const Natural& k, const Natural& p, unsigned m) {
  if (p == 2) {
    if (k % 2 != 0) return 0;
    Natural j = k / 2;
    return sqrt_count_mod_prime_power(j * j - 1, p, m);
  }
  return sqrt_count_mod_prime_power(k * k - 4, p, m);
}

/// Factor b, solve per prime power, recombine by CRT.
inline ResidueSet solve_quadratic_by_factorization(const Natural& k, const Natural& b,
                                                   const EffortBudget& budget = {}) {
  if (b < 1) throw DomainError("modulus must be >= 1");
  ResidueSet out;
  out.modulus = b;
  Factorization f = factorize(b, budget);
  if (!f.complete()) {
    out.complete = false;
    return out;
  }
  // Partial CRT combinations: (residue, modulus so far).
  std::vector<Natural> acc{0};
  Natural acc_mod = 1;
  for (const auto& pp : f.factors) {
    std::vector<Natural> local = quadratic_roots_mod_prime_power(k, pp.prime, pp.exponent);
    if (local.empty()) return out;
    Natural pm = detail::pow_ui(pp.prime, pp.exponent);
    // x = r0 + M * ((r1 - r0) * M^{-1} mod pm)
    Natural inv = pm == 1 ? Natural(0) : mod_inverse(acc_mod % pm, pm);
    std::vector<Natural> next;
    next.reserve(acc.size() * local.size());
    for (const Natural& r0 : acc)
      for (const Natural& r1 : local) next.push_back(r0 + acc_mod * detail::mod_floor((r1 - r0) * inv, pm));
    acc = std::move(next);
    acc_mod *= pm;
  }
  out.residues = std::move(acc);
  detail::sort_unique(out.residues);
  return out;
}

/// Number of roots of x^2 + kx + 1 mod b, the product of the local counts;
/// nothing when b cannot be factored within the budget.
inline std::optional<Natural> quadratic_solution_count(const Natural& k, const Natural& b,
                                                       const EffortBudget& budget = {}) {
  if (b < 1) throw DomainError("modulus must be >= 1");
  if (b <= kBruteForceModulusLimit) return Natural(solve_quadratic_brute(k, b).size());
  Factorization f = factorize(b, budget);
  if (!f.complete()) return std::nullopt;
  Natural count = 1;
  for (const auto& pp : f.factors) count *= quadratic_root_count_mod_prime_power(k, pp.prime, pp.exponent);
  return count;
}

/// All x in [0, b) with x^2 + kx + 1 = 0 (mod b). `complete` is false only
/// when b could not be factored within the budget.
inline ResidueSet count_quadratic_solutions(const Natural& k, const Natural& b,
                                            const EffortBudget& budget = {}) {
  if (b < 1) throw DomainError("count_quadratic_solutions: modulus must be >= 1");
  if (b <= kBruteForceModulusLimit) return solve_quadratic_brute(k, b);
  return solve_quadratic_by_factorization(k, b, budget);
}

}  // namespace kmarkov
