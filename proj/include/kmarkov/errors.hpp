#pragma once

#include <stdexcept>
#include <string>

namespace kmarkov {

/// Input violates an operation's precondition (bad modulus, non-maximal
/// middle entry, endpoint fraction, ...).
class DomainError : public std::domain_error {
public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// a has no inverse modulo m.
class NotInvertibleError : public DomainError {
public:
  explicit NotInvertibleError(const std::string& what) : DomainError(what) {}
};

/// The hypotheses of a theorem-backed computation do not hold.
class NotApplicableError : public DomainError {
public:
  explicit NotApplicableError(const std::string& what) : DomainError(what) {}
};

/// An internal consistency check failed. Seeing this means either a bug or
/// corrupted input that slipped past validation.
class InvariantError : public std::logic_error {
public:
  explicit InvariantError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace kmarkov
