#pragma once

#include <string>
#include <vector>

#include "chw/scalar.hpp"

namespace chw {

// Truncated power series in one variable; coefficients 0..trunc()-1 are
// stored, everything above is unknown. Binary operations keep the shorter
// truncation.
class PowerSeries {
 public:
  PowerSeries() : c_(1, Scalar(0)) {}
  explicit PowerSeries(int trunc);
  static PowerSeries constant(int trunc, const Scalar& c);
  static PowerSeries var(int trunc);
  static PowerSeries from_coeffs(std::vector<Scalar> c);

  int trunc() const { return static_cast<int>(c_.size()); }
  Scalar at(int k) const;
  void set(int k, const Scalar& v);
  bool is_zero() const;
  PowerSeries truncated(int t) const;

  PowerSeries operator-() const;
  PowerSeries& operator+=(const PowerSeries& o);
  PowerSeries& operator-=(const PowerSeries& o);
  friend PowerSeries operator+(PowerSeries a, const PowerSeries& b) { return a += b; }
  friend PowerSeries operator-(PowerSeries a, const PowerSeries& b) { return a -= b; }
  friend PowerSeries operator*(const PowerSeries& a, const PowerSeries& b);
  PowerSeries& operator*=(const PowerSeries& o) { return *this = *this * o; }
  PowerSeries& operator*=(const Scalar& s);
  friend PowerSeries operator*(PowerSeries a, const Scalar& s) { return a *= s; }
  bool operator==(const PowerSeries& o) const { return c_ == o.c_; }
  bool operator!=(const PowerSeries& o) const { return !(*this == o); }

  PowerSeries derivative() const;
  PowerSeries inverse() const;              // constant term nonzero
  PowerSeries compose(const PowerSeries& g) const;  // g has no constant term
  PowerSeries compositional_inverse() const;        // f(0)=0, f'(0) nonzero

  std::string str(const std::string& var = "z") const;

 private:
  std::vector<Scalar> c_;
};

PowerSeries series_pow(const PowerSeries& f, const Rational& e);  // f(0) nonzero
PowerSeries series_log1(const PowerSeries& f);                    // f(0) = 1
PowerSeries series_exp0(const PowerSeries& f);                    // f(0) = 0

// b^e with rational exponent; exact regime requires the root to exist in Q.
Scalar scalar_pow(const Scalar& b, const Rational& e);

}  // namespace chw
