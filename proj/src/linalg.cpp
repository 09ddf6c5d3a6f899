#include "chw/linalg.hpp"

#include <cmath>

namespace chw {

RatMat rat_identity(int n) {
  RatMat m(n, std::vector<Rational>(n, 0));
  for (int i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

RatMat rat_mat_mul(const RatMat& a, const RatMat& b) {
  int n = static_cast<int>(a.size()), k = static_cast<int>(b.size());
  int p = k ? static_cast<int>(b[0].size()) : 0;
  RatMat c(n, std::vector<Rational>(p, 0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < p; ++j)
      for (int s = 0; s < k; ++s) c[i][j] += a[i][s] * b[s][j];
  return c;
}

RatMat rat_mat_inverse(const RatMat& a) {
  int n = static_cast<int>(a.size());
  RatMat m = a, inv = rat_identity(n);
  for (int col = 0; col < n; ++col) {
    int piv = -1;
    for (int r = col; r < n; ++r)
      if (m[r][col] != 0) {
        piv = r;
        break;
      }
    if (piv < 0) throw error("rat_mat_inverse: singular matrix");
    std::swap(m[piv], m[col]);
    std::swap(inv[piv], inv[col]);
    Rational d = m[col][col];
    for (int j = 0; j < n; ++j) {
      m[col][j] /= d;
      inv[col][j] /= d;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col || m[r][col] == 0) continue;
      Rational f = m[r][col];
      for (int j = 0; j < n; ++j) {
        m[r][j] -= f * m[col][j];
        inv[r][j] -= f * inv[col][j];
      }
    }
  }
  return inv;
}

Rational rat_mat_det(const RatMat& a) {
  int n = static_cast<int>(a.size());
  RatMat m = a;
  Rational det = 1;
  for (int col = 0; col < n; ++col) {
    int piv = -1;
    for (int r = col; r < n; ++r)
      if (m[r][col] != 0) {
        piv = r;
        break;
      }
    if (piv < 0) return Rational(0);
    if (piv != col) {
      std::swap(m[piv], m[col]);
      det = -det;
    }
    det *= m[col][col];
    Rational d = m[col][col];
    for (int r = col + 1; r < n; ++r) {
      if (m[r][col] == 0) continue;
      Rational f = m[r][col] / d;
      for (int j = col; j < n; ++j) m[r][j] -= f * m[col][j];
    }
  }
  return det;
}

CxMat cx_mat_mul(const CxMat& a, const CxMat& b) {
  int n = static_cast<int>(a.size()), k = static_cast<int>(b.size());
  int p = k ? static_cast<int>(b[0].size()) : 0;
  CxMat c(n, std::vector<Complex>(p, 0.0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < p; ++j)
      for (int s = 0; s < k; ++s) c[i][j] += a[i][s] * b[s][j];
  return c;
}

CxMat cx_mat_inverse(const CxMat& a) {
  int n = static_cast<int>(a.size());
  CxMat m = a;
  CxMat inv(n, std::vector<Complex>(n, 0.0));
  for (int i = 0; i < n; ++i) inv[i][i] = 1.0;
  for (int col = 0; col < n; ++col) {
    int piv = col;
    double best = std::abs(m[col][col]);
    for (int r = col + 1; r < n; ++r)
      if (std::abs(m[r][col]) > best) {
        best = std::abs(m[r][col]);
        piv = r;
      }
    if (best == 0.0) throw error("cx_mat_inverse: singular matrix");
    std::swap(m[piv], m[col]);
    std::swap(inv[piv], inv[col]);
    Complex d = m[col][col];
    for (int j = 0; j < n; ++j) {
      m[col][j] /= d;
      inv[col][j] /= d;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col || m[r][col] == Complex(0.0)) continue;
      Complex f = m[r][col];
      for (int j = 0; j < n; ++j) {
        m[r][j] -= f * m[col][j];
        inv[r][j] -= f * inv[col][j];
      }
    }
  }
  return inv;
}

static double cx_max_norm(const CxMat& a) {
  double best = 0.0;
  for (const auto& row : a) {
    double s = 0.0;
    for (const auto& v : row) s += std::abs(v);
    best = std::max(best, s);
  }
  return best;
}

double cx_mat_cond(const CxMat& a) { return cx_max_norm(a) * cx_max_norm(cx_mat_inverse(a)); }

}  // namespace chw
