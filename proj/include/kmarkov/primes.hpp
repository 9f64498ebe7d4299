#pragma once

// Probable primes among the entries of a tree: every position of every
// vertex from the root (depth 0) through `depth` inclusive.

#include <cstdint>
#include <vector>

#include "kmarkov/markov_tree.hpp"
#include "kmarkov/numtheory.hpp"
#include "kmarkov/parallel.hpp"

namespace kmarkov {

inline std::vector<Natural> tree_entries(const Natural& k, std::size_t depth,
                                         MarkovTreeKind tree = MarkovTreeKind::lower) {
  std::vector<Natural> all;
  enumerate(k, depth, tree, [&](const MarkovTriple& t) {
    all.push_back(t.a);
    all.push_back(t.b);
    all.push_back(t.c);
  });
  detail::sort_unique(all);
  return all;
}

/// Sorted ascending, no duplicates.
inline std::vector<Natural> primes_list(const Natural& k, std::size_t depth,
                                        MarkovTreeKind tree = MarkovTreeKind::lower, unsigned jobs = 1,
                                        int extra_mr_rounds = 0) {
  const std::vector<Natural> entries = tree_entries(k, depth, tree);
  const std::vector<char> prime = parallel_map<char>(entries.size(), jobs, [&](std::size_t i) {
    return static_cast<char>(is_probable_prime(entries[i], extra_mr_rounds));
  });
  std::vector<Natural> out;
  for (std::size_t i = 0; i < entries.size(); ++i)
    if (prime[i]) out.push_back(entries[i]);
  return out;
}

}  // namespace kmarkov
