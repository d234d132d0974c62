#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <optional>
#include <string>

#include "sptkit/error.hpp"

namespace sptkit {

using cplx = std::complex<double>;

/// A value in U(1), stored either exactly as a rational number of turns p/q
/// (meaning exp(2*pi*i*p/q)) or approximately as an angle in [0, 2*pi).
class Phase {
 public:
  Phase() = default;

  static Phase one() { return Phase(); }

  static Phase exact(std::int64_t num, std::int64_t den) {
    require(den > 0, "phase denominator must be positive");
    Phase p;
    p.exact_ = true;
    std::int64_t n = num % den;
    if (n < 0) n += den;
    if (n == 0) {
      p.num_ = 0;
      p.den_ = 1;
      return p;
    }
    std::int64_t g = std::gcd(n, den);
    p.num_ = n / g;
    p.den_ = den / g;
    return p;
  }

  static Phase from_angle(double radians) {
    Phase p;
    p.exact_ = false;
    double a = std::fmod(radians, 2.0 * std::numbers::pi);
    if (a < 0) a += 2.0 * std::numbers::pi;
    if (a >= 2.0 * std::numbers::pi) a = 0.0;
    p.angle_ = a;
    return p;
  }

  static Phase from_complex(cplx z) { return from_angle(std::arg(z)); }

  bool is_exact() const { return exact_; }
  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  /// Fraction of a full turn, in [0, 1).
  double turns() const {
    if (exact_) return static_cast<double>(num_) / static_cast<double>(den_);
    return angle_ / (2.0 * std::numbers::pi);
  }
  double angle() const { return exact_ ? 2.0 * std::numbers::pi * turns() : angle_; }
  cplx value() const { return std::polar(1.0, angle()); }
  bool is_one() const { return exact_ ? num_ == 0 : distance(*this, one()) < 1e-12; }

  Phase operator*(const Phase& o) const {
    if (exact_ && o.exact_) {
      std::int64_t l = std::lcm(den_, o.den_);
      return exact(num_ * (l / den_) + o.num_ * (l / o.den_), l);
    }
    return from_angle(angle() + o.angle());
  }
  Phase inverse() const { return exact_ ? exact(-num_, den_) : from_angle(-angle_); }
  Phase operator/(const Phase& o) const { return *this * o.inverse(); }
  Phase& operator*=(const Phase& o) { return *this = *this * o; }

  /// Integer power.
  Phase pow(std::int64_t k) const {
    if (exact_) {
      // (num * k) mod den without overflow for moderate k.
      __int128 n = static_cast<__int128>(num_) * k;
      n %= den_;
      return exact(static_cast<std::int64_t>(n), den_);
    }
    return from_angle(angle_ * static_cast<double>(k));
  }

  /// Angular distance on the circle, in radians.
  static double distance(const Phase& a, const Phase& b) {
    double d = std::fabs(a.turns() - b.turns());
    d = std::fmod(d, 1.0);
    return 2.0 * std::numbers::pi * std::min(d, 1.0 - d);
  }

  /// Nearest multiple of 1/den, if within tol radians.
  std::optional<Phase> snapped(std::int64_t den, double tol) const {
    if (exact_ && den % den_ == 0) return *this;
    double t = turns();
    auto p = static_cast<std::int64_t>(std::llround(t * static_cast<double>(den)));
    Phase s = exact(p, den);
    if (distance(s, *this) < tol) return s;
    return std::nullopt;
  }

  /// Structural equality for exact phases; angular equality within 1e-12 otherwise.
  friend bool operator==(const Phase& a, const Phase& b) {
    if (a.exact_ && b.exact_) return a.num_ == b.num_ && a.den_ == b.den_;
    return distance(a, b) < 1e-12;
  }

  std::string to_string() const {
    if (exact_) return std::to_string(num_) + "/" + std::to_string(den_);
    return "angle:" + std::to_string(angle_);
  }

 private:
  bool exact_ = true;
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
  double angle_ = 0.0;
};

}  // namespace sptkit
