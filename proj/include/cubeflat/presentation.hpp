#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

#include "cubeflat/lattice.hpp"

namespace cubeflat {

class PresentationError : public std::runtime_error {
 public:
  enum class Kind { Syntax, NonPrimitive, Dimension, MissingRank };

  PresentationError(Kind kind, std::size_t line, std::size_t column, const std::string& message);

  Kind kind() const { return kind_; }
  // 1-based; column 0 when the error is not tied to a position.
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  Kind kind_;
  std::size_t line_;
  std::size_t column_;
};

std::string to_string(PresentationError::Kind k);

// Text format:
//   rank 3
//   edge t1: (2,1,0) -> (0,0,1)
// '#' starts a comment. Vectors must be primitive; their length must match
// the rank, which must be given exactly once.
TubularPresentation parse_presentation(std::string_view text);

}  // namespace cubeflat
