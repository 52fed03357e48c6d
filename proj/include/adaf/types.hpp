// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>

#include <complex>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

namespace adaf {

using cd = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;
using Rng = std::mt19937_64;

inline constexpr double kPi = std::numbers::pi;

inline constexpr double deg2rad(double deg) { return deg * kPi / 180.0; }
inline constexpr double rad2deg(double rad) { return rad * 180.0 / kPi; }

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Caller supplied something outside an operation's contract (bad shape,
// out-of-domain angle, malformed configuration).
class InvalidInput : public Error {
public:
    using Error::Error;
};

class ConfigError : public InvalidInput {
public:
    using InvalidInput::InvalidInput;
};

// A linear-algebra step could not be completed reliably.
class NumericalError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

inline void require(bool condition, const std::string& message) {
    if (!condition) throw InvalidInput(message);
}

// Zero-mean circularly-symmetric complex Gaussian with the given variance.
inline cd complex_normal(Rng& rng, double variance = 1.0) {
    std::normal_distribution<double> dist(0.0, 1.0);
    const double scale = std::sqrt(variance / 2.0);
    const double re = dist(rng);
    const double im = dist(rng);
    return {scale * re, scale * im};
}

}  // namespace adaf
