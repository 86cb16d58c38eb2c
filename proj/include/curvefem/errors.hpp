#pragma once

#include <stdexcept>
#include <string>

namespace cfem {

/// Base class for all recoverable numerical failures in the library.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct NonConvergence : Error {
  using Error::Error;
};
struct OutsideTubularNeighborhood : Error {
  using Error::Error;
};
struct UnsupportedDegree : Error {
  using Error::Error;
};
struct UnsupportedOrder : Error {
  using Error::Error;
};
struct NewtonDivergence : Error {
  using Error::Error;
};
struct OutsideElement : Error {
  using Error::Error;
};
struct DegenerateElement : Error {
  using Error::Error;
};
struct DegenerateLift : Error {
  using Error::Error;
};
struct DegenerateFace : Error {
  using Error::Error;
};
struct QuadratureOrderTooLow : Error {
  using Error::Error;
};
struct MaxIterations : Error {
  using Error::Error;
};
struct IndefiniteBreakdown : Error {
  using Error::Error;
};
struct ZeroError : Error {
  using Error::Error;
};
struct MeshError : Error {
  using Error::Error;
};
struct IoError : Error {
  using Error::Error;
};

/// Invalid CLI flags or config file contents (exit code 2 in the CLI).
struct ConfigError : Error {
  using Error::Error;
};

} // namespace cfem
