/* Error types shared across the library. */
#pragma once

#include <stdexcept>
#include <string>

namespace multising {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Two generators share a common factor in some coordinate.
struct CoprimalityViolation : Error {
  int coordinate;
  int generator_a;
  int generator_b;
  CoprimalityViolation(int coord, int a, int b)
      : Error("generators " + std::to_string(a) + " and " + std::to_string(b) +
              " are not coprime in coordinate " + std::to_string(coord)),
        coordinate(coord), generator_a(a), generator_b(b) {}
};

struct DegenerateGenerator : Error {
  using Error::Error;
};

struct BiasOutOfRange : Error {
  using Error::Error;
};

// The semigroup order along the requested direction is not a well-defined
// enumeration (some generator has coordinate 1 there, so rank classes are
// infinite).
struct OrderAmbiguity : Error {
  using Error::Error;
};

struct TooLargeForEnumeration : Error {
  using Error::Error;
};

struct BracketFailure : Error {
  using Error::Error;
};

struct EmptyBlock : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

}  // namespace multising
