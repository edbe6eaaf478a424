#pragma once

#include <functional>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace cutdg {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

using ScalarField = std::function<double(const Vec2&)>;
using VectorField = std::function<Vec2(const Vec2&)>;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid user input: bad sizes, inverted boxes, empty active meshes.
class ConfigurationError : public Error {
 public:
  using Error::Error;
};

/// Broken mesh or cut topology (non-manifold faces, degenerate segments).
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// Evaluation outside the region where a map is defined.
class DomainError : public Error {
 public:
  using Error::Error;
};

class SolverError : public Error {
 public:
  using Error::Error;
};

}  // namespace cutdg
