#include "chw/series.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace chw {

PowerSeries::PowerSeries(int trunc) {
  if (trunc < 1) throw error("PowerSeries: truncation must be at least 1");
  c_.assign(trunc, Scalar(0));
}

PowerSeries PowerSeries::constant(int trunc, const Scalar& c) {
  PowerSeries f(trunc);
  f.c_[0] = c;
  return f;
}

PowerSeries PowerSeries::var(int trunc) {
  PowerSeries f(trunc);
  if (trunc < 2) throw error("PowerSeries: truncation too small for the variable");
  f.c_[1] = Scalar(1);
  return f;
}

PowerSeries PowerSeries::from_coeffs(std::vector<Scalar> c) {
  if (c.empty()) throw error("PowerSeries: empty coefficient list");
  PowerSeries f;
  f.c_ = std::move(c);
  return f;
}

Scalar PowerSeries::at(int k) const {
  if (k < 0 || k >= trunc()) throw error("PowerSeries: coefficient index out of range");
  return c_[k];
}

void PowerSeries::set(int k, const Scalar& v) {
  if (k < 0 || k >= trunc()) throw error("PowerSeries: coefficient index out of range");
  c_[k] = v;
}

bool PowerSeries::is_zero() const {
  return std::all_of(c_.begin(), c_.end(), [](const Scalar& s) { return s.is_zero(); });
}

PowerSeries PowerSeries::truncated(int t) const {
  if (t < 1 || t > trunc()) throw error("PowerSeries: bad truncation");
  PowerSeries f;
  f.c_.assign(c_.begin(), c_.begin() + t);
  return f;
}

PowerSeries PowerSeries::operator-() const {
  PowerSeries f = *this;
  for (auto& s : f.c_) s = -s;
  return f;
}

PowerSeries& PowerSeries::operator+=(const PowerSeries& o) {
  c_.resize(std::min(trunc(), o.trunc()));
  for (int k = 0; k < trunc(); ++k) c_[k] += o.c_[k];
  return *this;
}

PowerSeries& PowerSeries::operator-=(const PowerSeries& o) {
  c_.resize(std::min(trunc(), o.trunc()));
  for (int k = 0; k < trunc(); ++k) c_[k] -= o.c_[k];
  return *this;
}

PowerSeries operator*(const PowerSeries& a, const PowerSeries& b) {
  int n = std::min(a.trunc(), b.trunc());
  PowerSeries f(n);
  for (int i = 0; i < n; ++i) {
    if (a.c_[i].is_zero()) continue;
    for (int j = 0; i + j < n; ++j) f.c_[i + j] += a.c_[i] * b.c_[j];
  }
  return f;
}

PowerSeries& PowerSeries::operator*=(const Scalar& s) {
  for (auto& v : c_) v *= s;
  return *this;
}

PowerSeries PowerSeries::derivative() const {
  if (trunc() == 1) return PowerSeries(1);
  PowerSeries f(trunc() - 1);
  for (int k = 1; k < trunc(); ++k) f.c_[k - 1] = c_[k] * Scalar(k);
  return f;
}

PowerSeries PowerSeries::inverse() const {
  if (c_[0].is_zero()) throw error("PowerSeries: inverse needs a nonzero constant term");
  PowerSeries f(trunc());
  f.c_[0] = Scalar(1) / c_[0];
  for (int n = 1; n < trunc(); ++n) {
    Scalar acc(0);
    for (int k = 1; k <= n; ++k) acc += c_[k] * f.c_[n - k];
    f.c_[n] = -acc / c_[0];
  }
  return f;
}

PowerSeries PowerSeries::compose(const PowerSeries& g) const {
  if (!g.c_[0].is_zero()) throw error("PowerSeries: composition needs g(0) = 0");
  int n = std::min(trunc(), g.trunc());
  PowerSeries acc = PowerSeries::constant(n, c_[n - 1]);
  for (int k = n - 2; k >= 0; --k) {
    acc = acc * g.truncated(n);
    acc.c_[0] += c_[k];
  }
  return acc;
}

PowerSeries PowerSeries::compositional_inverse() const {
  if (!c_[0].is_zero()) throw error("PowerSeries: compositional inverse needs f(0) = 0");
  if (trunc() < 2 || c_[1].is_zero())
    throw error("PowerSeries: compositional inverse needs f'(0) nonzero");
  int n = trunc();
  PowerSeries g(n);
  g.c_[1] = Scalar(1) / c_[1];
  for (int m = 2; m < n; ++m) {
    // coefficient m of f(g) is linear in g_m with factor f'(0)
    PowerSeries fg = compose(g);
    g.c_[m] = -fg.c_[m] / c_[1];
  }
  return g;
}

std::string PowerSeries::str(const std::string& var) const {
  std::ostringstream os;
  bool first = true;
  for (int k = 0; k < trunc(); ++k) {
    if (c_[k].is_zero()) continue;
    if (!first) os << " + ";
    os << c_[k].str();
    if (k >= 1) os << "*" << var;
    if (k >= 2) os << "^" << k;
    first = false;
  }
  if (first) os << "0";
  os << " + O(" << var << "^" << trunc() << ")";
  return os.str();
}

PowerSeries series_pow(const PowerSeries& f, const Rational& e) {
  Scalar c0 = f.at(0);
  if (c0.is_zero()) throw error("series_pow: base has vanishing constant term");
  PowerSeries u = f * (Scalar(1) / c0);
  u.set(0, Scalar(0));
  PowerSeries out = PowerSeries::constant(f.trunc(), Scalar(1));
  PowerSeries upow = out;
  Rational coef(1);
  for (int k = 1; k < f.trunc(); ++k) {
    upow = upow * u;
    coef *= (e - Rational(k - 1)) / Rational(k);
    out += upow * Scalar(coef);
  }
  return out * scalar_pow(c0, e);
}

PowerSeries series_log1(const PowerSeries& f) {
  if (f.at(0) != Scalar(1)) throw error("series_log1: constant term must be 1");
  PowerSeries u = f;
  u.set(0, Scalar(0));
  PowerSeries out(f.trunc());
  PowerSeries upow = PowerSeries::constant(f.trunc(), Scalar(1));
  for (int k = 1; k < f.trunc(); ++k) {
    upow = upow * u;
    out += upow * Scalar(Rational(k % 2 ? 1 : -1, k));
  }
  return out;
}

PowerSeries series_exp0(const PowerSeries& f) {
  if (!f.at(0).is_zero()) throw error("series_exp0: constant term must vanish");
  PowerSeries out = PowerSeries::constant(f.trunc(), Scalar(1));
  PowerSeries fpow = out;
  Rational fac(1);
  for (int k = 1; k < f.trunc(); ++k) {
    fpow = fpow * f;
    fac *= k;
    out += fpow * Scalar(1 / fac);
  }
  return out;
}

Scalar scalar_pow(const Scalar& b, const Rational& e) {
  Rational ec = e;
  ec.canonicalize();
  if (b.exact()) {
    if (!ec.get_den().fits_slong_p() || !ec.get_num().fits_slong_p())
      throw error("scalar_pow: exponent out of range");
    Rational root = rat_root(b.rat(), ec.get_den().get_si());
    return Scalar(rat_pow(root, ec.get_num().get_si()));
  }
  return Scalar(std::pow(b.cx(), ec.get_d()));
}

}  // namespace chw
