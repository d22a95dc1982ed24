#pragma once

#include <Eigen/Core>

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace cbpa {

using Scalar = double;
using Index = Eigen::Index;
using Point = Eigen::Matrix<Scalar, 2, 1>;
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
using BoolMatrix = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>;
using BoolVector = Eigen::Matrix<bool, Eigen::Dynamic, 1>;
using StampVector = Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>;

using RobotId = int;
using TaskId = int;
using Round = std::int64_t;
using TaskList = std::vector<TaskId>;

/// Start time of a task whose coalition does not cover its demand.
inline constexpr Scalar kInfinity = std::numeric_limits<Scalar>::infinity();

/// Sentinel stored in a time matrix for "robot does not execute the task".
inline constexpr Scalar kNoArrival = -1.0;

/// Absolute tolerance for comparing real-valued times and payloads.
inline constexpr Scalar kTolerance = 1e-9;

enum class PayloadKind { A, B };

inline bool approx_equal(Scalar lhs, Scalar rhs, Scalar tol = kTolerance)
{
  if (std::isinf(lhs) || std::isinf(rhs)) return lhs == rhs;
  return std::abs(lhs - rhs) <= tol;
}

/// A machine-readable invariant violation.
struct Violation
{
  std::string code;
  std::string message;

  bool operator==(const Violation&) const = default;
};

} // namespace cbpa
