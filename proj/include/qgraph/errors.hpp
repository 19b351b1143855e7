#pragma once

#include <stdexcept>
#include <string>

namespace qgraph {

// Error categories map one-to-one onto CLI exit codes (1, 2, 3).

/// Malformed problem description: bad file, schema violation, inconsistent graph.
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

/// Boundary conditions do not define a self-adjoint operator.
class NotSelfAdjointError : public std::runtime_error {
 public:
  explicit NotSelfAdjointError(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical failure: root-count mismatch, factorization breakdown, tolerance pathology.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace qgraph
