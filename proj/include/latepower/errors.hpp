#pragma once

#include <stdexcept>
#include <string>

namespace latepower {

// Inputs are valid but the requested quantity cannot be produced
// (unattainable effect-size target, inconsistent observed table, ...).
class infeasible_error : public std::runtime_error {
 public:
  explicit infeasible_error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed or incomplete JSON document.
class parse_error : public std::runtime_error {
 public:
  explicit parse_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace latepower
