// Copyright 2026 The photonsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace photonsim {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using RMatrix = Eigen::MatrixXd;
using CVector = Eigen::VectorXcd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Base of every error raised by the library. `kind()` is a stable
/// machine-readable tag used by the CLI when reporting failures.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string &what, std::string field = {})
        : std::runtime_error(what), kind_(std::move(kind)), field_(std::move(field)) {}
    const std::string &kind() const noexcept { return kind_; }
    /// Offending input field or column, empty when not applicable.
    const std::string &field() const noexcept { return field_; }

private:
    std::string kind_;
    std::string field_;
};

class InvalidArgument : public Error {
public:
    explicit InvalidArgument(const std::string &what, std::string field = {})
        : Error("invalid_argument", what, std::move(field)) {}
};

/// Output pattern with a multiply-occupied mode; threshold detectors
/// cannot register these.
class UnsupportedOutcome : public Error {
public:
    explicit UnsupportedOutcome(const std::string &what) : Error("unsupported_outcome", what) {}
};

class PrecisionError : public Error {
public:
    explicit PrecisionError(const std::string &what) : Error("precision", what) {}
};

class UndefinedVisibility : public Error {
public:
    explicit UndefinedVisibility(const std::string &what) : Error("undefined_visibility", what) {}
};

class UnderDetermined : public Error {
public:
    explicit UnderDetermined(const std::string &what) : Error("under_determined", what) {}
};

/// Malformed or unreadable input file.
class FormatError : public Error {
public:
    explicit FormatError(const std::string &what, std::string field = {})
        : Error("format", what, std::move(field)) {}
};

/// Wraps an angle into [0, 2π).
inline double wrap_phase(double phi) {
    double r = std::fmod(phi, kTwoPi);
    if (r < 0) {
        r += kTwoPi;
    }
    if (r >= kTwoPi) {
        r = 0.0;
    }
    return r;
}

/// Largest entrywise modulus of a complex matrix.
inline double max_abs(const CMatrix &m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

}  // namespace photonsim
