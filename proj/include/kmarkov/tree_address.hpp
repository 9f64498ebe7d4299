#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "kmarkov/errors.hpp"

namespace kmarkov {

enum class Side : std::uint8_t { left, right };

inline char to_char(Side s) { return s == Side::left ? 'L' : 'R'; }

/// A word over {L, R} naming a vertex of a binary tree; the empty word is
/// the root. Shared by every tree in the library, so the same address picks
/// out corresponding vertices under the canonical isomorphisms.
class TreeAddress {
public:
  TreeAddress() = default;

  static TreeAddress parse(std::string_view word) {
    TreeAddress a;
    for (char ch : word) {
      if (ch == 'L' || ch == 'l')
        a.word_.push_back(Side::left);
      else if (ch == 'R' || ch == 'r')
        a.word_.push_back(Side::right);
      else
        throw DomainError("tree address may only contain L and R: '" + std::string(word) + "'");
    }
    return a;
  }

  std::size_t depth() const { return word_.size(); }
  bool is_root() const { return word_.empty(); }
  const std::vector<Side>& word() const { return word_; }

  TreeAddress child(Side s) const {
    TreeAddress c = *this;
    c.word_.push_back(s);
    return c;
  }

  /// Drops the first `n` letters (re-rooting at a descendant).
  TreeAddress drop_front(std::size_t n) const {
    TreeAddress a;
    if (n < word_.size()) a.word_.assign(word_.begin() + static_cast<std::ptrdiff_t>(n), word_.end());
    return a;
  }

  TreeAddress prepend(Side s) const {
    TreeAddress a;
    a.word_.reserve(word_.size() + 1);
    a.word_.push_back(s);
    a.word_.insert(a.word_.end(), word_.begin(), word_.end());
    return a;
  }

  std::string str() const {
    std::string s;
    s.reserve(word_.size());
    for (Side side : word_) s.push_back(to_char(side));
    return s;
  }

  friend bool operator==(const TreeAddress&, const TreeAddress&) = default;

  /// Breadth-first order: shorter words first, then L < R lexicographically.
  friend std::strong_ordering operator<=>(const TreeAddress& a, const TreeAddress& b) {
    if (auto c = a.word_.size() <=> b.word_.size(); c != 0) return c;
    return a.word_ <=> b.word_;
  }

private:
  std::vector<Side> word_;
};

}  // namespace kmarkov
