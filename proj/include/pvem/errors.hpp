#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pvem {

/// Invalid mesh topology or geometry.
class MeshError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Cell with zero (or negative) signed area.
class DegenerateCellError : public MeshError {
 public:
  DegenerateCellError(std::size_t cell_id, const std::string& what)
      : MeshError("cell " + std::to_string(cell_id) + ": " + what), cell_id_(cell_id) {}
  std::size_t cell_id() const { return cell_id_; }

 private:
  std::size_t cell_id_;
};

/// Malformed mesh file. Carries the 1-based line where parsing stopped.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// The vertex-value matrix of an element does not have full column rank.
class SingularElementError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidInitialDataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Iterative complementarity solver hit its iteration cap.
class NonConvergenceError : public std::runtime_error {
 public:
  NonConvergenceError(const std::string& what, double residual, int iterations)
      : std::runtime_error(what), residual_(residual), iterations_(iterations) {}
  double residual() const { return residual_; }
  int iterations() const { return iterations_; }

 private:
  double residual_;
  int iterations_;
};

/// Solver failure during a time step; wraps the step index.
class StepFailure : public std::runtime_error {
 public:
  StepFailure(std::size_t step, const std::string& what)
      : std::runtime_error("step " + std::to_string(step) + ": " + what), step_(step) {}
  std::size_t step() const { return step_; }

 private:
  std::size_t step_;
};

}  // namespace pvem
