#pragma once

#include <stdexcept>
#include <string>

namespace nbde {

/// Invalid arguments (out-of-range indices, bad probabilities, malformed ensembles).
class ArgumentError : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

/// A request beyond the documented scale caps (brute-force enumeration, polynomial expansion).
class UnsupportedScaleError : public std::domain_error {
   public:
    using std::domain_error::domain_error;
};

/// Failure to build a derived object (e.g. no admissible coupling matrix for the potential).
/// The message carries diagnostic data such as a nullspace basis.
class ConstructionError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// A quantity whose defining denominator is nonpositive (e.g. a bound at delta_E <= 0).
class UndefinedBoundError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Cooperative deadline expired inside an iterative solve.
class TimeoutError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

}  // namespace nbde
