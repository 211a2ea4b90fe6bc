#pragma once

#include <stdexcept>
#include <string>

namespace mfl {

/// A flow, chart or transform was evaluated outside the set where it is defined.
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// A momentum-space integrand has not decayed at the cutoff.
class QuadratureError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A sampled test function is too coarse for the requested derivative.
class ResolutionError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// An output file could not be written or an input file could not be read.
class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace mfl
