#include "chw/bv.hpp"

#include <algorithm>
#include <sstream>

namespace chw {

namespace {

// sorts into canonical order; returns the Koszul sign, 0 when an odd symbol
// repeats
int canonical_bv(BVMono& m) {
  int sign = 1;
  for (size_t i = 1; i < m.size(); ++i)
    for (size_t j = i; j > 0 && m[j] < m[j - 1]; --j) {
      if (m[j].kind == 1 && m[j - 1].kind == 1) sign = -sign;
      std::swap(m[j], m[j - 1]);
    }
  for (size_t i = 1; i < m.size(); ++i)
    if (m[i].kind == 1 && m[i] == m[i - 1]) return 0;
  return sign;
}

// left derivative by the odd symbol (1, j); zero when absent
std::pair<int, BVMono> diff_odd(const BVMono& m, int j) {
  int before = 0;
  for (size_t p = 0; p < m.size(); ++p) {
    if (m[p].kind == 1 && m[p].idx == j) {
      BVMono out = m;
      out.erase(out.begin() + p);
      return {before & 1 ? -1 : 1, out};
    }
    if (m[p].kind == 1) ++before;
  }
  return {0, {}};
}

// derivative by the even symbol (0, i); multiplicity becomes the coefficient
std::pair<int, BVMono> diff_even(const BVMono& m, int i) {
  int count = 0;
  size_t pos = 0;
  for (size_t p = 0; p < m.size(); ++p)
    if (m[p].kind == 0 && m[p].idx == i) {
      ++count;
      pos = p;
    }
  if (count == 0) return {0, {}};
  BVMono out = m;
  out.erase(out.begin() + pos);
  return {count, out};
}

}  // namespace

int bv_mono_degree(const BVMono& m) {
  int d = 0;
  for (const auto& s : m) d += s.kind == 1;
  return d;
}

BVPolynomial BVPolynomial::unit(const Scalar& c) {
  BVPolynomial p;
  p.add_term({}, c);
  return p;
}

BVPolynomial BVPolynomial::symbol(int kind, int idx) {
  if (kind != 0 && kind != 1) throw error("bv: symbol kind must be 0 or 1");
  if (idx < 0) throw error("bv: negative symbol index");
  BVPolynomial p;
  p.add_term({{kind, idx}}, Scalar(1));
  return p;
}

void BVPolynomial::add_term(const BVMono& m, const Scalar& c) {
  if (c.is_zero()) return;
  BVMono k = m;
  int sign = canonical_bv(k);
  if (sign == 0) return;
  Scalar v = sign < 0 ? Scalar(-c) : c;
  auto it = t_.find(k);
  if (it == t_.end()) {
    t_.emplace(std::move(k), v);
    return;
  }
  it->second = it->second + v;
  if (it->second.is_zero()) t_.erase(it);
}

BVPolynomial BVPolynomial::operator-() const {
  BVPolynomial out;
  for (const auto& [m, c] : t_) out.t_.emplace(m, Scalar(-c));
  return out;
}

BVPolynomial& BVPolynomial::operator+=(const BVPolynomial& o) {
  for (const auto& [m, c] : o.t_) add_term(m, c);
  return *this;
}

BVPolynomial& BVPolynomial::operator-=(const BVPolynomial& o) {
  for (const auto& [m, c] : o.t_) add_term(m, Scalar(-c));
  return *this;
}

BVPolynomial operator*(const BVPolynomial& a, const BVPolynomial& b) {
  BVPolynomial out;
  for (const auto& [ma, ca] : a.terms())
    for (const auto& [mb, cb] : b.terms()) {
      BVMono m = ma;
      m.insert(m.end(), mb.begin(), mb.end());
      out.add_term(m, ca * cb);
    }
  return out;
}

BVPolynomial& BVPolynomial::operator*=(const Scalar& c) {
  if (c.is_zero()) {
    t_.clear();
    return *this;
  }
  for (auto& [m, v] : t_) v = v * c;
  return *this;
}

BVPolynomial BVPolynomial::parity_part(int parity) const {
  BVPolynomial out;
  for (const auto& [m, c] : t_)
    if ((bv_mono_degree(m) & 1) == (parity & 1)) out.t_.emplace(m, c);
  return out;
}

std::string BVPolynomial::str() const {
  if (t_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : t_) {
    if (!first) os << " + ";
    first = false;
    os << c.str();
    for (const auto& s : m) os << " e" << s.kind << "_" << s.idx;
  }
  return os.str();
}

BVPolynomial bv_laplacian(const BVPolynomial& p, const HarmonicBackground& bg) {
  const auto& i2 = bg.i2();
  const int n = bg.dim0();
  BVPolynomial out;
  for (const auto& [m, c] : p.terms())
    for (int j = 0; j < n; ++j) {
      auto [s1, m1] = diff_odd(m, j);
      if (s1 == 0) continue;
      for (int i = 0; i < n; ++i) {
        const Scalar& w = i2[j][i];
        if (w.is_zero()) continue;
        auto [s0, m0] = diff_even(m1, i);
        if (s0 == 0) continue;
        out.add_term(m0, c * w * Scalar(Rational(s1 * s0)));
      }
    }
  return out;
}

BVPolynomial bv_bracket(const BVPolynomial& a, const BVPolynomial& b,
                        const HarmonicBackground& bg) {
  BVPolynomial out;
  for (int pa = 0; pa < 2; ++pa) {
    BVPolynomial ap = a.parity_part(pa);
    if (ap.is_zero()) continue;
    BVPolynomial def = bv_laplacian(ap * b, bg) - bv_laplacian(ap, bg) * b;
    BVPolynomial cross = ap * bv_laplacian(b, bg);
    out += pa ? def + cross : def - cross;
  }
  return out;
}

QmeReport check_qme(const BVPolynomial& I, const HarmonicBackground& bg) {
  for (const auto& [m, c] : I.terms())
    if (bv_mono_degree(m) == 0)
      throw error("check_qme: interaction has a degree-zero term, exp does not truncate");
  BVPolynomial e = BVPolynomial::unit();
  BVPolynomial pw = BVPolynomial::unit();
  Rational fac(1);
  for (long k = 1; !pw.is_zero(); ++k) {
    pw = pw * I;
    fac *= k;
    e += pw * Scalar(1 / fac);
  }
  QmeReport r;
  r.defect = bv_laplacian(I, bg) + bv_bracket(I, I, bg) * Scalar(rat(1, 2));
  r.exp_zero = bv_laplacian(e, bg).is_zero();
  r.defect_zero = r.defect.is_zero();
  return r;
}

}  // namespace chw
