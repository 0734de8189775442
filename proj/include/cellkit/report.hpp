#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

namespace cellkit {

struct Failure {
  std::string where;
  std::string lhs;
  std::string rhs;
};

struct PropertyResult {
  std::string name;
  std::size_t instances = 0;
  std::vector<Failure> failures;
};

/// Outcome of a property sweep: one entry per checked identity.
struct Report {
  std::string title;
  std::vector<PropertyResult> properties;

  bool ok() const {
    return std::all_of(properties.begin(), properties.end(), [](const PropertyResult& p) { return p.failures.empty(); });
  }
  /// Adds the property on first use. References are invalidated by later additions.
  PropertyResult& property(const std::string& name) {
    for (auto& p : properties)
      if (p.name == name) return p;
    properties.push_back(PropertyResult{name, 0, {}});
    return properties.back();
  }
};

}  // namespace cellkit
