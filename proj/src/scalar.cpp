#include "chw/scalar.hpp"

#include <sstream>

namespace chw {

std::string rat_str(const Rational& q) { return q.get_str(); }

Rational rat_pow(const Rational& q, long e) {
  if (e == 0) return Rational(1);
  Rational base = e > 0 ? q : Rational(1) / q;
  unsigned long n = e > 0 ? e : -e;
  Rational acc(1);
  while (n > 0) {
    if (n & 1) acc *= base;
    base *= base;
    n >>= 1;
  }
  return acc;
}

Rational rat_root(const Rational& q, unsigned long k) {
  if (k == 0) throw error("rat_root: zeroth root");
  if (k == 1) return q;
  if (sgn(q) < 0) throw error("rat_root: negative radicand " + q.get_str());
  mpz_class num = q.get_num(), den = q.get_den();
  mpz_class rn, rd;
  if (!mpz_root(rn.get_mpz_t(), num.get_mpz_t(), k))
    throw error("rat_root: " + q.get_str() + " has no exact rational root of index " + std::to_string(k));
  if (!mpz_root(rd.get_mpz_t(), den.get_mpz_t(), k))
    throw error("rat_root: " + q.get_str() + " has no exact rational root of index " + std::to_string(k));
  return Rational(rn, rd);
}

Rational binomial(long n, long k) {
  if (k < 0) return Rational(0);
  Rational acc(1);
  for (long s = 0; s < k; ++s) {
    acc *= Rational(n - s);
    acc /= Rational(s + 1);
  }
  return acc;
}

Rational factorial(long n) {
  if (n < 0) throw error("factorial of negative argument");
  mpz_class f;
  mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(n));
  return Rational(f);
}

void Scalar::check_regime(const Scalar& o, const char* op) const {
  if (regime() != o.regime())
    throw error(std::string("Scalar: regime mismatch in '") + op + "': " +
                regime_name(regime()) + " vs " + regime_name(o.regime()));
}

Scalar Scalar::operator-() const {
  if (exact()) return Scalar(Rational(-std::get<Rational>(v_)));
  return Scalar(-std::get<Complex>(v_));
}

Scalar& Scalar::operator+=(const Scalar& o) {
  check_regime(o, "+");
  if (exact())
    std::get<Rational>(v_) += std::get<Rational>(o.v_);
  else
    std::get<Complex>(v_) += std::get<Complex>(o.v_);
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) {
  check_regime(o, "-");
  if (exact())
    std::get<Rational>(v_) -= std::get<Rational>(o.v_);
  else
    std::get<Complex>(v_) -= std::get<Complex>(o.v_);
  return *this;
}

Scalar& Scalar::operator*=(const Scalar& o) {
  check_regime(o, "*");
  if (exact())
    std::get<Rational>(v_) *= std::get<Rational>(o.v_);
  else
    std::get<Complex>(v_) *= std::get<Complex>(o.v_);
  return *this;
}

Scalar& Scalar::operator/=(const Scalar& o) {
  check_regime(o, "/");
  if (o.is_zero()) throw error("Scalar: division by zero");
  if (exact())
    std::get<Rational>(v_) /= std::get<Rational>(o.v_);
  else
    std::get<Complex>(v_) /= std::get<Complex>(o.v_);
  return *this;
}

bool Scalar::operator==(const Scalar& o) const {
  if (regime() != o.regime()) return false;
  if (exact()) return cmp(std::get<Rational>(v_), std::get<Rational>(o.v_)) == 0;
  return std::get<Complex>(v_) == std::get<Complex>(o.v_);
}

std::string Scalar::str() const {
  if (exact()) return std::get<Rational>(v_).get_str();
  const Complex& c = std::get<Complex>(v_);
  std::ostringstream os;
  os.precision(17);
  if (c.imag() == 0.0) {
    os << c.real();
  } else {
    os << "(" << c.real() << (c.imag() < 0 ? "" : "+") << c.imag() << "i)";
  }
  return os.str();
}

}  // namespace chw
