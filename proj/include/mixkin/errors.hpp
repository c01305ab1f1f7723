#pragma once

#include <stdexcept>
#include <string>

namespace mixkin {

// Base class for everything this library throws on its own behalf.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// A symmetric tensor that cannot be inverted (or is too ill-conditioned to
// trust) was passed where a positive-definite one is required.
class SingularTensor : public Error {
public:
  using Error::Error;
};

// Velocity-grid parameters outside the supported range (even point count,
// too few points, non-positive extent).
class BadResolution : public Error {
public:
  using Error::Error;
};

// A field's length does not match the grid it is paired with.
class LengthMismatch : public Error {
public:
  using Error::Error;
};

// Density below the vacuum threshold; moments are not meaningful.
class VacuumState : public Error {
public:
  using Error::Error;
};

// A mixture temperature came out non-positive, typically because the
// parameters sit outside their admissible window.
class NonpositiveTemperature : public Error {
public:
  using Error::Error;
};

// The quadratic fixing the second interspecies tensor coefficient has no
// real root in [0, 1].
class NoAdmissibleMu21 : public Error {
public:
  using Error::Error;
};

// A scenario file could not be parsed (distinct from a parameter that
// parses but violates a bound).
class ConfigParseError : public Error {
public:
  using Error::Error;
};

// A time step produced an unacceptably negative distribution and was
// rejected; carries the simulation time at which it happened.
class StepRejected : public Error {
public:
  StepRejected(double time, const std::string& what) : Error(what), time_(time) {}
  double time() const { return time_; }

private:
  double time_;
};

} // namespace mixkin
