#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace qvac {

// A numerical routine failed to reach its requested accuracy.
struct convergence_error : std::runtime_error {
  explicit convergence_error(const std::string& what) : std::runtime_error(what) {}
};

// Invalid sweep/CLI configuration; `field` names the offending key.
struct config_error : std::runtime_error {
  std::string field;
  config_error(std::string field_name, const std::string& what)
      : std::runtime_error(what), field(std::move(field_name)) {}
};

}  // namespace qvac
