#pragma once

#include <string>

#include "badapprox/cantor_engine.hpp"

namespace badapprox {

/// Raised when a tree file cannot be parsed or fails validation.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr const char* kTreeSchema = "badapprox.tree/1";

/// Compact JSON, one trailing newline. Rationals are "num/den" strings.
std::string tree_to_json(const CantorTree& tree);
CantorTree tree_from_json(const std::string& text);


}  // namespace badapprox
