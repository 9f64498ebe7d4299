#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace kmarkov {

/// Outcome of an invariant sweep: how many checks ran and which failed
/// (first 50 kept).
struct CheckReport {
  CheckReport() = default;
  explicit CheckReport(std::string n) : name(std::move(n)) {}

  std::string name;
  std::size_t checks = 0;
  std::vector<std::string> failures;

  bool ok() const { return failures.empty(); }

  void expect(bool cond, const std::string& what) {
    ++checks;
    if (!cond && failures.size() < 50) failures.push_back(what);
  }
  void merge(const CheckReport& other) {
    checks += other.checks;
    for (const auto& f : other.failures)
      if (failures.size() < 50) failures.push_back(other.name + ": " + f);
  }
};

}  // namespace kmarkov
