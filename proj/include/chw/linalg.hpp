#pragma once

#include <vector>

#include "chw/scalar.hpp"

namespace chw {

using RatMat = std::vector<std::vector<Rational>>;
using CxMat = std::vector<std::vector<Complex>>;

RatMat rat_identity(int n);
RatMat rat_mat_mul(const RatMat& a, const RatMat& b);
// Gaussian elimination; throws on singular input
RatMat rat_mat_inverse(const RatMat& a);
Rational rat_mat_det(const RatMat& a);

CxMat cx_mat_mul(const CxMat& a, const CxMat& b);
// partial pivoting; throws on (numerically) singular input
CxMat cx_mat_inverse(const CxMat& a);
// max-norm condition estimate ||A|| ||A^-1||
double cx_mat_cond(const CxMat& a);

}  // namespace chw
