#ifndef DIRWALK_ERRORS_HPP
#define DIRWALK_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace dirwalk {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// modulus is not an odd prime
struct NotPrime : Error {
  using Error::Error;
};

// operation undefined for the principal character
struct PrincipalNotSupported : Error {
  using Error::Error;
};

// argument outside the advertised region
struct DomainError : Error {
  using Error::Error;
};

// requested computation exceeds the configured memory or sieve budget
struct BudgetExceeded : Error {
  using Error::Error;
};

// ensemble layout is contradictory (overlapping blocks, zero-length, ...)
struct SpecInvalid : Error {
  using Error::Error;
};

// scaling fit requested on fewer than the minimum number of grid points
struct InsufficientGrid : Error {
  using Error::Error;
};

// evaluation at (or too close to) the s = 1 pole
struct PoleAt1 : Error {
  using Error::Error;
};

// log-branch continuation could not be resolved
struct BranchAmbiguity : Error {
  using Error::Error;
};

// gamma evaluated at a non-positive integer
struct GammaPole : Error {
  using Error::Error;
};

}  // namespace dirwalk

#endif
