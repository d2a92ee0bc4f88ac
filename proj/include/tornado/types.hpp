#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <array>
#include <stdexcept>
#include <string>

namespace tornado {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Geometric tolerance used for containment and clamping.
inline constexpr double kGeomEps = 1e-10;

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Bad user input: invalid parameters, config or CLI arguments.
class InvalidArgument : public Error {
public:
  using Error::Error;
};

class GeometryError : public Error {
public:
  using Error::Error;
};

/// Point location failed even after exhaustive search.
class NotFound : public Error {
public:
  using Error::Error;
};

class SolverError : public Error {
public:
  using Error::Error;
};

class IoError : public Error {
public:
  using Error::Error;
};

} // namespace tornado
