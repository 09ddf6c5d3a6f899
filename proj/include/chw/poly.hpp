#pragma once

#include <map>
#include <vector>

#include "chw/scalar.hpp"

namespace chw {

// Exponent vector, one slot per variable.
using Mono = std::vector<int>;

// Multivariate polynomial over Scalar, canonical as a sorted exponent->coeff
// map with no zero coefficients. All coefficients share one regime.
class Poly {
 public:
  Poly() : nv_(0) {}
  explicit Poly(int nvars) : nv_(nvars) {}
  static Poly constant(int nvars, const Scalar& c);
  static Poly var(int nvars, int i, int exp = 1);

  int nvars() const { return nv_; }
  bool is_zero() const { return t_.empty(); }
  bool is_constant() const;
  Scalar constant_term() const;
  const std::map<Mono, Scalar>& terms() const { return t_; }
  Regime regime() const;  // exact when empty

  void add_term(const Mono& m, const Scalar& c);

  Poly operator-() const;
  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(const Poly& a, const Poly& b);
  Poly& operator*=(const Poly& o) { return *this = *this * o; }
  Poly& operator*=(const Scalar& c);
  friend Poly operator*(Poly a, const Scalar& c) { return a *= c; }
  Poly pow(int e) const;

  bool operator==(const Poly& o) const { return nv_ == o.nv_ && t_ == o.t_; }
  bool operator!=(const Poly& o) const { return !(*this == o); }

  int degree(int var) const;  // -1 for the zero polynomial
  Poly derivative(int var) const;
  std::map<int, Poly> coeffs_in(int var) const;  // values have exponent 0 in var

  // z_var := value
  Poly substitute(int var, const Poly& value) const;
  // identify z_i with z_j
  Poly identify(int i, int j) const { return substitute(i, Poly::var(nv_, j)); }

  bool divisible_by_diff(int i, int j) const;
  Poly divide_by_diff(int i, int j) const;   // exact division by (z_i - z_j)
  Poly divide_by_var(int i) const;           // exact division by z_i
  bool uses_var(int i) const { return degree(i) > 0; }

  // Rebuild on new_nvars variables sending old var v to var_map[v]; every used
  // variable must be mapped (-1 marks unused slots).
  Poly relabel(int new_nvars, const std::vector<int>& var_map) const;

  std::string str(const std::vector<std::string>& names = {}) const;

 private:
  int nv_;
  std::map<Mono, Scalar> t_;
};

}  // namespace chw
