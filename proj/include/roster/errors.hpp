#pragma once

#include <stdexcept>
#include <string>

namespace roster {

class RosterError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input whose dimensions or fields do not fit together.
class InvalidInputError : public RosterError {
 public:
  using RosterError::RosterError;
};

// A model or instance for which no feasible roster exists (or none was found
// where one is required).
class InfeasibleError : public RosterError {
 public:
  using RosterError::RosterError;
};

// Solver-level inconsistency such as an unbounded relaxation of a roster
// model or a lower bound above the incumbent.
class ModelError : public RosterError {
 public:
  using RosterError::RosterError;
};

}  // namespace roster
