#pragma once

#include <map>
#include <string>
#include <vector>

#include "chw/wick.hpp"

namespace chw {

// One polynomial symbol: a basis element of the degree-0 (even) or degree-1
// (odd) harmonic space.
struct BVSym {
  int kind;  // harmonic degree, 0 or 1
  int idx;
  auto operator<=>(const BVSym&) const = default;
};

// canonical monomial: symbols sorted, odd ones without repeats
using BVMono = std::vector<BVSym>;

int bv_mono_degree(const BVMono& m);  // count of odd symbols

// Polynomial in the harmonic symbols with Scalar coefficients. Odd symbols
// square to zero; reordering into canonical form folds Koszul signs into the
// coefficient.
class BVPolynomial {
 public:
  BVPolynomial() = default;

  static BVPolynomial unit(const Scalar& c = Scalar(1));
  static BVPolynomial symbol(int kind, int idx);

  bool is_zero() const { return t_.empty(); }
  const std::map<BVMono, Scalar>& terms() const { return t_; }
  void add_term(const BVMono& m, const Scalar& c);

  BVPolynomial operator-() const;
  BVPolynomial& operator+=(const BVPolynomial& o);
  BVPolynomial& operator-=(const BVPolynomial& o);
  friend BVPolynomial operator+(BVPolynomial a, const BVPolynomial& b) { return a += b; }
  friend BVPolynomial operator-(BVPolynomial a, const BVPolynomial& b) { return a -= b; }
  friend BVPolynomial operator*(const BVPolynomial& a, const BVPolynomial& b);
  BVPolynomial& operator*=(const BVPolynomial& o) { return *this = *this * o; }
  BVPolynomial& operator*=(const Scalar& c);
  friend BVPolynomial operator*(BVPolynomial a, const Scalar& c) { return a *= c; }
  bool operator==(const BVPolynomial& o) const = default;

  // terms whose odd-symbol count has the given parity
  BVPolynomial parity_part(int parity) const;

  std::string str() const;

 private:
  std::map<BVMono, Scalar> t_;
};

// second-order zero-mode operator: sum of I1^{ij} d/d(e0_i) d/d(e1_j) with
// I1 the transposed inverse of the background pairing matrix
BVPolynomial bv_laplacian(const BVPolynomial& p, const HarmonicBackground& bg);

// bracket measuring the second-order defect of the laplacian:
// {a,b} = L(ab) - L(a) b - (-1)^{|a|} a L(b)
BVPolynomial bv_bracket(const BVPolynomial& a, const BVPolynomial& b,
                        const HarmonicBackground& bg);

// Both formulations of the master equation on a nilpotent interaction:
// the laplacian of exp(I), and the defect L(I) + (1/2){I,I}.
struct QmeReport {
  bool exp_zero;
  bool defect_zero;
  BVPolynomial defect;
  bool agree() const { return exp_zero == defect_zero; }
};
QmeReport check_qme(const BVPolynomial& I, const HarmonicBackground& bg);

}  // namespace chw
