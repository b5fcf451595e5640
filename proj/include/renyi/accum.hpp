#pragma once

#include <cmath>
#include <limits>

namespace renyi {

// Streaming log-sum-exp with signs. Terms are supplied as (log magnitude,
// sign) and the running total is kept as sign * exp(shift) * scaled so that
// sums whose terms overflow double range individually still come out right.
class SignedLogSum {
 public:
  void add(double log_mag, double sign = 1.0) {
    if (sign == 0.0 || log_mag == -std::numeric_limits<double>::infinity()) return;
    if (std::isnan(log_mag)) {
      nan_ = true;
      return;
    }
    if (scaled_ == 0.0) {
      shift_ = log_mag;
      scaled_ = sign;
      return;
    }
    if (log_mag > shift_) {
      scaled_ *= std::exp(shift_ - log_mag);
      shift_ = log_mag;
      scaled_ += sign;
    } else {
      scaled_ += sign * std::exp(log_mag - shift_);
    }
  }

  void add_value(double v) {
    if (v == 0.0) return;
    add(std::log(std::fabs(v)), v > 0 ? 1.0 : -1.0);
  }

  bool nan() const { return nan_; }
  bool zero() const { return !nan_ && (scaled_ == 0.0); }
  double sign() const { return scaled_ > 0 ? 1.0 : (scaled_ < 0 ? -1.0 : 0.0); }

  // log of |sum|; -inf when the accumulated total is exactly zero.
  double log_abs() const {
    if (nan_) return std::numeric_limits<double>::quiet_NaN();
    if (scaled_ == 0.0) return -std::numeric_limits<double>::infinity();
    return shift_ + std::log(std::fabs(scaled_));
  }

  // Signed value in linear scale; overflows to +-inf if out of range.
  double value() const {
    if (nan_) return std::numeric_limits<double>::quiet_NaN();
    if (scaled_ == 0.0) return 0.0;
    return sign() * std::exp(log_abs());
  }

  // Magnitude of the current total relative to exp(shift), used by series
  // loops for termination tests without leaving log scale.
  double log_abs_of(double term_log) const { return term_log - log_abs(); }

 private:
  double shift_ = 0.0;
  double scaled_ = 0.0;  // sum of sign * exp(log_mag - shift_)
  bool nan_ = false;
};

// Compensated accumulator for plain linear sums.
class KahanSum {
 public:
  void add(double x) {
    double y = x - c_;
    double t = s_ + y;
    c_ = (t - s_) - y;
    s_ = t;
  }
  double value() const { return s_; }

 private:
  double s_ = 0.0;
  double c_ = 0.0;
};

inline double log1p_exp(double x) {
  // log(1 + e^x) without overflow.
  if (x > 0) return x + std::log1p(std::exp(-x));
  return std::log1p(std::exp(x));
}

}  // namespace renyi
