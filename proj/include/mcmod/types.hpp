#pragma once

#include <complex>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace mcmod {

using Index = Eigen::Index;

template <typename Real>
using Complex = std::complex<Real>;

template <typename Real>
using CMatrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Real>
using CVector = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;

using cd = std::complex<double>;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

/// Exact rate multiplier relative to the input symbol rate.
struct Rational {
    std::int64_t num = 1;
    std::int64_t den = 1;

    Rational() = default;
    Rational(std::int64_t n, std::int64_t d = 1) : num(n), den(d) { normalize(); }

    void normalize() {
        if (den < 0) {
            num = -num;
            den = -den;
        }
        const auto g = std::gcd(num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
    }

    friend Rational operator*(Rational a, Rational b) { return {a.num * b.num, a.den * b.den}; }
    friend bool operator==(const Rational&, const Rational&) = default;

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

/// Raised by operator builders and engine stages on malformed arguments.
class InvalidArgument : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when a modulator configuration violates one or more constraints.
/// Carries one diagnostic line per violated constraint.
class ValidationError : public std::runtime_error {
  public:
    explicit ValidationError(std::vector<std::string> diagnostics);

    const std::vector<std::string>& diagnostics() const noexcept { return diagnostics_; }

  private:
    std::vector<std::string> diagnostics_;
};

inline ValidationError::ValidationError(std::vector<std::string> diagnostics)
    : std::runtime_error([&] {
          std::string msg = "invalid modulator configuration:";
          for (const auto& d : diagnostics) {
              msg += "\n  ";
              msg += d;
          }
          return msg;
      }()),
      diagnostics_(std::move(diagnostics)) {}

/// Non-negative remainder.
constexpr Index mod(Index a, Index n) {
    const Index r = a % n;
    return r < 0 ? r + n : r;
}

}  // namespace mcmod
