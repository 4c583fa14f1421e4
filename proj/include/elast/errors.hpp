#pragma once

#include <stdexcept>
#include <string>

namespace elast {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class MeshError : public Error {
 public:
  using Error::Error;
};

/// Nonconforming input to build_edge_topology.
class TopologyError : public MeshError {
 public:
  using MeshError::MeshError;
};

/// Invalid macroelement grouping (root parents, boundary edges in Gamma_M).
class PartitionError : public MeshError {
 public:
  using MeshError::MeshError;
};

class AssemblyError : public Error {
 public:
  using Error::Error;
};

class SolverError : public Error {
 public:
  using Error::Error;
};

class EstimatorError : public Error {
 public:
  using Error::Error;
};

/// Raised for problems without a closed-form solution (test 2).
class NoExactSolutionError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace elast
