#pragma once

// Independent reference implementations for the tests. Deliberately naive:
// machine integers, exhaustive scans, no shared code with the library.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace oracle {

using u64 = std::uint64_t;
using i64 = std::int64_t;

inline std::vector<bool> sieve(u64 n) {
  std::vector<bool> p(n + 1, true);
  p[0] = false;
  if (n >= 1) p[1] = false;
  for (u64 i = 2; i * i <= n; ++i)
    if (p[i])
      for (u64 j = i * i; j <= n; j += i) p[j] = false;
  return p;
}

inline bool is_prime_trial(u64 n) {
  if (n < 2) return false;
  for (u64 d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline u64 gcd(u64 a, u64 b) {
  while (b != 0) {
    u64 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

/// (prime, exponent) by trial division.
inline std::vector<std::pair<u64, unsigned>> factor_trial(u64 n) {
  std::vector<std::pair<u64, unsigned>> out;
  for (u64 d = 2; d * d <= n; ++d) {
    unsigned e = 0;
    while (n % d == 0) {
      n /= d;
      ++e;
    }
    if (e) out.emplace_back(d, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

inline std::vector<u64> sqrt_mod_scan(u64 a, u64 n) {
  std::vector<u64> out;
  for (u64 x = 0; x < n; ++x)
    if ((x * x) % n == a % n) out.push_back(x);
  return out;
}

/// Roots of x^2 + kx + 1 mod b by a direct scan; x up to ~4e9 keeps x*x in range.
inline std::vector<u64> quadratic_scan(u64 k, u64 b) {
  std::vector<u64> out;
  for (u64 x = 0; x < b; ++x) {
    unsigned __int128 v = static_cast<unsigned __int128>(x) * x + static_cast<unsigned __int128>(k) * x + 1;
    if (v % b == 0) out.push_back(x);
  }
  return out;
}

/// Same roots, by finite differences: f(x+1) - f(x) = 2x + 1 + k. Four
/// independent segments per modulus so the loop is not latency bound.
inline void quadratic_roots_fast(u64 k, u64 b, std::vector<u64>& out) {
  out.clear();
  if (b == 1) {
    out.push_back(0);
    return;
  }
  constexpr int kLanes = 4;
  const u64 seg = (b + kLanes - 1) / kLanes;
  u64 v[kLanes], d[kLanes], x0[kLanes];
  for (int j = 0; j < kLanes; ++j) {
    x0[j] = std::min<u64>(b, j * seg);
    v[j] = (x0[j] % b * (x0[j] % b) + (k % b) * (x0[j] % b) + 1) % b;
    d[j] = (2 * x0[j] + 1 + k) % b;
  }
  for (u64 i = 0; i < seg; ++i) {
    for (int j = 0; j < kLanes; ++j) {
      if (v[j] == 0 && x0[j] + i < b && (j + 1 == kLanes || x0[j] + i < x0[j + 1])) out.push_back(x0[j] + i);
      v[j] += d[j];
      v[j] -= (v[j] >= b) ? b : 0;
      d[j] += 2;
      d[j] -= (d[j] >= b) ? b : 0;
    }
  }
  std::sort(out.begin(), out.end());
}

/// For every 1 <= b <= n, the roots of x^2 + kx + 1 mod b, read off the
/// other way round: sieve f(x) = x^2 + kx + 1 for x < n by the primes up to
/// n, then hand x to each divisor b of f(x) with x < b <= n.
inline std::vector<std::vector<u64>> quadratic_roots_table(u64 k, u64 n) {
  std::vector<std::vector<u64>> out(n + 1);
  std::vector<std::vector<std::pair<u64, unsigned>>> fac(n);
  std::vector<u64> rest(n);
  for (u64 x = 0; x < n; ++x) rest[x] = x * x + k * x + 1;
  const std::vector<bool> prime = sieve(n);
  for (u64 p = 2; p <= n; ++p) {
    if (!prime[p]) continue;
    u64 v = 1 % p, d = (1 + k) % p;  // f(0) and f(1) - f(0) mod p
    for (u64 r = 0; r < p; ++r) {
      if (v == 0)
        for (u64 x = r; x < n; x += p) {
          unsigned e = 0;
          while (rest[x] % p == 0) {
            rest[x] /= p;
            ++e;
          }
          fac[x].emplace_back(p, e);
        }
      v += d;
      v -= (v >= p) ? p : 0;
      d += 2;
      d -= (d >= p) ? p : 0;
    }
  }
  std::vector<u64> divs;
  for (u64 x = 0; x < n; ++x) {
    divs.assign(1, 1);
    for (auto [p, e] : fac[x]) {
      const std::size_t base = divs.size();
      u64 pe = 1;
      for (unsigned i = 0; i < e; ++i) {
        pe *= p;
        if (pe > n) break;
        for (std::size_t j = 0; j < base; ++j)
          if (divs[j] * pe <= n) divs.push_back(divs[j] * pe);
      }
    }
    for (u64 b : divs)
      if (b > x) out[b].push_back(x);
  }
  return out;
}

/// Smallest x >= 0 with x = r_i (mod m_i) for all i, by scanning.
inline i64 crt_scan(const std::vector<std::pair<u64, u64>>& parts) {
  u64 M = 1;
  for (auto& [r, m] : parts) M *= m;
  for (u64 x = 0; x < M; ++x) {
    bool ok = true;
    for (auto& [r, m] : parts) ok = ok && x % m == r % m;
    if (ok) return static_cast<i64>(x);
  }
  return -1;
}

/// Unordered GME(k) solutions with every entry <= limit, by solving for c.
inline std::set<std::array<u64, 3>> gme_solutions_upto(u64 k, u64 limit) {
  std::set<std::array<u64, 3>> out;
  for (u64 a = 1; a <= limit; ++a)
    for (u64 b = a; b <= limit; ++b) {
      // c^2 - ((3+3k)ab - k(a+b)) c + (a^2 + kab + b^2) = 0
      const __int128 B = static_cast<__int128>(3 + 3 * k) * a * b - static_cast<__int128>(k) * (a + b);
      const __int128 C = static_cast<__int128>(a) * a + static_cast<__int128>(k) * a * b + static_cast<__int128>(b) * b;
      const __int128 disc = B * B - 4 * C;
      if (disc < 0) continue;
      __int128 s = static_cast<__int128>(std::sqrt(static_cast<long double>(disc)));
      while (s * s > disc) --s;
      while ((s + 1) * (s + 1) <= disc) ++s;
      if (s * s != disc) continue;
      for (__int128 num : {B - s, B + s}) {
        if (num <= 0 || num % 2 != 0) continue;
        const __int128 c = num / 2;
        if (c < static_cast<__int128>(b) || c > static_cast<__int128>(limit)) continue;
        out.insert({a, b, static_cast<u64>(c)});
      }
    }
  return out;
}

/// Stern-Brocot address of p/q from its continued fraction
/// [a0; a1, ..., an]: R^a0 L^a1 R^a2 ... with the last exponent reduced by one.
inline std::string sb_address_cf(u64 p, u64 q) {
  std::vector<u64> cf;
  while (q != 0) {
    cf.push_back(p / q);
    u64 r = p % q;
    p = q;
    q = r;
  }
  cf.back() -= 1;
  std::string out;
  for (std::size_t i = 0; i < cf.size(); ++i) out.append(cf[i], i % 2 == 0 ? 'R' : 'L');
  return out;
}

/// Every fraction reachable to `depth` in the Farey tree, keyed by address,
/// built by a plain BFS on integer pairs.
inline std::map<std::string, std::pair<u64, u64>> farey_bfs(std::size_t depth) {
  struct Node {
    std::string addr;
    u64 ln, ld, mn, md, rn, rd;
  };
  std::map<std::string, std::pair<u64, u64>> out;
  std::vector<Node> level{{"", 0, 1, 1, 1, 1, 0}};
  for (std::size_t d = 0; d <= depth; ++d) {
    std::vector<Node> next;
    for (const Node& n : level) {
      out[n.addr] = {n.mn, n.md};
      next.push_back({n.addr + "L", n.ln, n.ld, n.ln + n.mn, n.ld + n.md, n.mn, n.md});
      next.push_back({n.addr + "R", n.mn, n.md, n.mn + n.rn, n.md + n.rd, n.rn, n.rd});
    }
    level = std::move(next);
  }
  return out;
}

struct M2 {
  i64 a, b, c, d;
};

inline M2 mul(const M2& x, const M2& y) {
  return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
}

}  // namespace oracle
