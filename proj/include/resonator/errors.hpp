#pragma once

#include <stdexcept>
#include <string>

namespace resonator {

// Base class for every failure the library raises on purpose. name() carries
// the stable machine-readable identifier; what() the human diagnostic. The
// CLI maps any Error to exit code 1 and prints "error: <name>: <what>".
class Error : public std::runtime_error {
 public:
  explicit Error(std::string msg) : std::runtime_error(std::move(msg)) {}
  virtual const char* name() const noexcept { return "Error"; }
};

#define RESONATOR_DEFINE_ERROR(type)                                \
  class type : public Error {                                       \
   public:                                                          \
    using Error::Error;                                             \
    const char* name() const noexcept override { return #type; }    \
  }

// Malformed input file (CSV grammar, JSON grammar, bad numbers). The message
// includes a line number for CSV sources.
RESONATOR_DEFINE_ERROR(ParseError);

// Coefficient table has a gap: indices must be contiguous starting at 1.
RESONATOR_DEFINE_ERROR(MissingIndex);

// First coefficient is not 1 within the normalization tolerance.
RESONATOR_DEFINE_ERROR(NotNormalized);

// Request for data beyond what the table holds (X chosen too large).
RESONATOR_DEFINE_ERROR(OutOfRange);

// Panel doubling hit the panel budget before the error estimate met tol.
RESONATOR_DEFINE_ERROR(QuadratureNoConvergence);

// Phase-slope floor is zero (resonant point): the |P| bound is undefined.
RESONATOR_DEFINE_ERROR(DegenerateQ);

// lambda(D) = 0 makes the 1/lambda(D) normalization of the dual expansion
// meaningless for that level.
RESONATOR_DEFINE_ERROR(ZeroLevelCoefficient);

// The dual sum needs coefficients past the end of the table (4 b* > n_max).
RESONATOR_DEFINE_ERROR(CutoffExceedsData);

#undef RESONATOR_DEFINE_ERROR

}  // namespace resonator
