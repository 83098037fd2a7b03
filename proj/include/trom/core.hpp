// SPDX-License-Identifier: MIT
#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace trom {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Base class of all errors raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A caller broke a documented precondition (bad dims, out-of-range option).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// A numerical procedure could not produce a result (singular system,
/// rank collapse, NaN in a trajectory).
class NumericalError : public Error {
public:
    using Error::Error;
};

/// Malformed or unreadable file.
class FormatError : public Error {
public:
    using Error::Error;
};

inline void require(bool condition, const std::string& message) {
    if (!condition) throw InvalidArgument(message);
}

}  // namespace trom
