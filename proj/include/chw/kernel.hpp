#pragma once

#include <map>
#include <utility>
#include <vector>

#include "chw/poly.hpp"

namespace chw {

// Rational function on n points: polynomial numerator over a denominator that
// is a product of diagonal factors (z_i - z_j) and, for sections trivialized
// over an affine chart, plain powers of z_i. Canonical form: the numerator
// shares no factor with the denominator, so equality is structural.
class DiagKernel {
 public:
  DiagKernel() : n_(0), num_(0) {}
  explicit DiagKernel(int npoints) : n_(npoints), num_(npoints) {}

  static DiagKernel zero(int n) { return DiagKernel(n); }
  static DiagKernel constant(int n, const Scalar& c);
  static DiagKernel one(int n) { return constant(n, Scalar(1)); }
  static DiagKernel monomial(int n, const Poly& num);
  // (z_i - z_j)^e as a kernel; e may be negative.
  static DiagKernel diff_power(int n, int i, int j, int e);
  static DiagKernel var_power(int n, int i, int e);

  int npoints() const { return n_; }
  const Poly& num() const { return num_; }
  const std::map<std::pair<int, int>, int>& diag_poles() const { return dp_; }
  const std::map<int, int>& var_poles() const { return vp_; }
  bool is_zero() const { return num_.is_zero(); }
  Regime regime() const { return num_.regime(); }

  // order of the (z_i - z_j) pole, 0 if absent; i != j, order ignores sign
  int pole_order(int i, int j) const;
  int var_pole_order(int i) const;
  bool uses_point(int i) const;

  DiagKernel operator-() const;
  friend DiagKernel operator*(const DiagKernel& a, const DiagKernel& b);
  friend DiagKernel operator+(const DiagKernel& a, const DiagKernel& b);
  friend DiagKernel operator-(const DiagKernel& a, const DiagKernel& b);
  DiagKernel& operator*=(const DiagKernel& o) { return *this = *this * o; }
  DiagKernel& operator+=(const DiagKernel& o) { return *this = *this + o; }
  DiagKernel& operator-=(const DiagKernel& o) { return *this = *this - o; }
  DiagKernel& operator*=(const Scalar& c);
  friend DiagKernel operator*(DiagKernel a, const Scalar& c) { return a *= c; }

  // multiply by (z_i - z_j)^k, k of any sign
  DiagKernel shift_diff(int i, int j, int k) const;
  DiagKernel shift_var(int i, int k) const;

  bool operator==(const DiagKernel& o) const;
  bool operator!=(const DiagKernel& o) const { return !(*this == o); }

  // Laurent data of the expansion z_i = z_j + t: coeff[m] multiplies
  // t^(lead + m); coefficients are kernels in the remaining variables
  // (variable i unused, z_i identified with z_j).
  struct Laurent {
    int lead;
    std::vector<DiagKernel> coeff;
    DiagKernel at(int power) const;  // coefficient of t^power
  };
  Laurent taylor_diag(int i, int j, int upto) const;
  DiagKernel residue_diag(int i, int j) const { return taylor_diag(i, j, -1).at(-1); }
  DiagKernel residue_at_zero(int i) const;

  DiagKernel deriv(int var) const;  // d/dz_var

  DiagKernel drop_point(int i) const;     // requires point i unused
  DiagKernel permute_points(const std::vector<int>& perm) const;
  DiagKernel extend_points(int new_n) const;  // append unused points

  std::string str() const;

 private:
  void canonicalize();
  int n_;
  Poly num_;
  std::map<std::pair<int, int>, int> dp_;  // {i<j} -> order of (z_i - z_j)
  std::map<int, int> vp_;                  // i -> order of z_i
};

}  // namespace chw
