#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace pcurv {

// Base class for every failure raised by the library. `numerical()` separates
// failures of the computation (exit code 3 in the CLI) from bad input (2).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual bool numerical() const { return false; }
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Non-immersed sample point: det g <= kDegenerateDetG.
class DegenerateJet : public Error {
 public:
  explicit DegenerateJet(double detg, std::optional<std::size_t> node = std::nullopt)
      : Error(message(detg, node)), detg_(detg), node_(node) {}

  double detg() const { return detg_; }
  const std::optional<std::size_t>& node() const { return node_; }
  bool numerical() const override { return true; }

  DegenerateJet at_node(std::size_t node) const { return DegenerateJet(detg_, node); }

 private:
  static std::string message(double detg, std::optional<std::size_t> node) {
    std::string msg = "degenerate jet (det g = " + std::to_string(detg) + ")";
    if (node) msg += " at node " + std::to_string(*node);
    return msg;
  }
  double detg_;
  std::optional<std::size_t> node_;
};

class StencilOutOfDomain : public Error {
 public:
  using Error::Error;
};

class MatchingFailed : public Error {
 public:
  using Error::Error;
  bool numerical() const override { return true; }
};

class PerturbationDegenerate : public Error {
 public:
  using Error::Error;
  bool numerical() const override { return true; }
};

class NotClosed : public Error {
 public:
  using Error::Error;
};

class ShapeMismatch : public Error {
 public:
  using Error::Error;
};

}  // namespace pcurv
