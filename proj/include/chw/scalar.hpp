#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <variant>

#include <gmpxx.h>

namespace chw {

using Rational = mpq_class;
using Complex = std::complex<double>;

struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Regime { exact, numeric };

inline const char* regime_name(Regime r) {
  return r == Regime::exact ? "exact" : "numeric";
}

std::string rat_str(const Rational& q);
Rational rat_pow(const Rational& q, long e);
// q^(1/k) if it exists in Q, else throws.
Rational rat_root(const Rational& q, unsigned long k);
Rational binomial(long n, long k);  // n may be negative
Rational factorial(long n);

// Coefficient of every algebraic object in the engine: an exact rational or a
// complex double, tagged by regime. Regimes never mix silently.
class Scalar {
 public:
  Scalar() : v_(Rational(0)) {}
  Scalar(int n) : v_(Rational(n)) {}
  Scalar(long n) : v_(Rational(static_cast<signed long>(n))) {}
  Scalar(const Rational& q) : v_(q) {}
  Scalar(const Complex& c) : v_(c) {}
  Scalar(double) = delete;  // force an explicit choice of regime

  static Scalar zero(Regime r) {
    return r == Regime::exact ? Scalar(0) : Scalar(Complex(0.0, 0.0));
  }

  Regime regime() const {
    return std::holds_alternative<Rational>(v_) ? Regime::exact : Regime::numeric;
  }
  bool exact() const { return regime() == Regime::exact; }

  const Rational& rat() const {
    if (!exact()) throw error("Scalar: numeric value used where an exact rational is required");
    return std::get<Rational>(v_);
  }
  // Exact values convert; this is the one deliberate bridge between regimes.
  Complex cx() const {
    if (exact()) return Complex(std::get<Rational>(v_).get_d(), 0.0);
    return std::get<Complex>(v_);
  }

  bool is_zero() const {
    if (exact()) return sgn(std::get<Rational>(v_)) == 0;
    return std::get<Complex>(v_) == Complex(0.0, 0.0);
  }

  Scalar operator-() const;
  Scalar& operator+=(const Scalar& o);
  Scalar& operator-=(const Scalar& o);
  Scalar& operator*=(const Scalar& o);
  Scalar& operator/=(const Scalar& o);
  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }

  bool operator==(const Scalar& o) const;
  bool operator!=(const Scalar& o) const { return !(*this == o); }

  std::string str() const;

 private:
  void check_regime(const Scalar& o, const char* op) const;
  std::variant<Rational, Complex> v_;
};

inline Scalar rat(long num, long den) { return Scalar(Rational(num, den)); }

}  // namespace chw
