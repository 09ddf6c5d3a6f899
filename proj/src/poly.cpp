#include "chw/poly.hpp"

#include <sstream>

namespace chw {

Poly Poly::constant(int nvars, const Scalar& c) {
  Poly p(nvars);
  p.add_term(Mono(nvars, 0), c);
  return p;
}

Poly Poly::var(int nvars, int i, int exp) {
  if (i < 0 || i >= nvars) throw error("Poly::var: index out of range");
  Poly p(nvars);
  Mono m(nvars, 0);
  m[i] = exp;
  p.add_term(m, Scalar(1));
  return p;
}

bool Poly::is_constant() const {
  if (t_.empty()) return true;
  return t_.size() == 1 && t_.begin()->first == Mono(nv_, 0);
}

Scalar Poly::constant_term() const {
  auto it = t_.find(Mono(nv_, 0));
  return it == t_.end() ? Scalar::zero(regime()) : it->second;
}

Regime Poly::regime() const {
  return t_.empty() ? Regime::exact : t_.begin()->second.regime();
}

void Poly::add_term(const Mono& m, const Scalar& c) {
  if (static_cast<int>(m.size()) != nv_) throw error("Poly::add_term: arity mismatch");
  if (c.is_zero()) return;
  auto [it, fresh] = t_.emplace(m, c);
  if (!fresh) {
    it->second += c;
    if (it->second.is_zero()) t_.erase(it);
  }
}

Poly Poly::operator-() const {
  Poly r(nv_);
  for (auto& [m, c] : t_) r.t_.emplace(m, -c);
  return r;
}

Poly& Poly::operator+=(const Poly& o) {
  if (nv_ != o.nv_) throw error("Poly: arity mismatch in +");
  for (auto& [m, c] : o.t_) add_term(m, c);
  return *this;
}

Poly& Poly::operator-=(const Poly& o) {
  if (nv_ != o.nv_) throw error("Poly: arity mismatch in -");
  for (auto& [m, c] : o.t_) add_term(m, -c);
  return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
  if (a.nv_ != b.nv_) throw error("Poly: arity mismatch in *");
  Poly r(a.nv_);
  for (auto& [ma, ca] : a.t_)
    for (auto& [mb, cb] : b.t_) {
      Mono m(ma);
      for (int i = 0; i < a.nv_; ++i) m[i] += mb[i];
      r.add_term(m, ca * cb);
    }
  return r;
}

Poly& Poly::operator*=(const Scalar& c) {
  if (c.is_zero()) {
    t_.clear();
    return *this;
  }
  for (auto& [m, v] : t_) v *= c;
  return *this;
}

Poly Poly::pow(int e) const {
  if (e < 0) throw error("Poly::pow: negative exponent");
  Poly acc = Poly::constant(nv_, Scalar(1));
  for (int i = 0; i < e; ++i) acc = acc * *this;
  return acc;
}

int Poly::degree(int var) const {
  int d = -1;
  for (auto& [m, c] : t_) d = std::max(d, m[var]);
  return d;
}

Poly Poly::derivative(int var) const {
  Poly r(nv_);
  for (auto& [m, c] : t_) {
    if (m[var] == 0) continue;
    Mono mm(m);
    mm[var] -= 1;
    r.add_term(mm, c * Scalar(static_cast<long>(m[var])));
  }
  return r;
}

std::map<int, Poly> Poly::coeffs_in(int var) const {
  std::map<int, Poly> out;
  for (auto& [m, c] : t_) {
    Mono mm(m);
    int e = mm[var];
    mm[var] = 0;
    auto [it, fresh] = out.emplace(e, Poly(nv_));
    it->second.add_term(mm, c);
  }
  return out;
}

Poly Poly::substitute(int var, const Poly& value) const {
  if (value.nvars() != nv_) throw error("Poly::substitute: arity mismatch");
  Poly r(nv_);
  auto by_deg = coeffs_in(var);
  // Horner from the top degree down.
  Poly acc(nv_);
  int top = -1;
  for (auto& [e, p] : by_deg) top = std::max(top, e);
  for (int e = top; e >= 0; --e) {
    acc = acc * value;
    auto it = by_deg.find(e);
    if (it != by_deg.end()) acc += it->second;
  }
  return acc;
}

bool Poly::divisible_by_diff(int i, int j) const { return identify(i, j).is_zero(); }

Poly Poly::divide_by_diff(int i, int j) const {
  // Synthetic division in z_i at the point z_j.
  auto by_deg = coeffs_in(i);
  int top = -1;
  for (auto& [e, p] : by_deg) top = std::max(top, e);
  if (top < 0) {
    if (!is_zero()) throw error("Poly::divide_by_diff: not divisible");
    return Poly(nv_);
  }
  Poly zj = Poly::var(nv_, j);
  Poly q(nv_);
  Poly carry(nv_);
  for (int e = top; e >= 1; --e) {
    Poly qe = carry;
    auto it = by_deg.find(e);
    if (it != by_deg.end()) qe += it->second;
    q += qe * Poly::var(nv_, i, e - 1);
    carry = qe * zj;
  }
  Poly rem = carry;
  auto it0 = by_deg.find(0);
  if (it0 != by_deg.end()) rem += it0->second;
  if (!rem.is_zero()) throw error("Poly::divide_by_diff: not divisible");
  return q;
}

Poly Poly::divide_by_var(int i) const {
  Poly r(nv_);
  for (auto& [m, c] : t_) {
    if (m[i] == 0) throw error("Poly::divide_by_var: not divisible");
    Mono mm(m);
    mm[i] -= 1;
    r.add_term(mm, c);
  }
  return r;
}

Poly Poly::relabel(int new_nvars, const std::vector<int>& var_map) const {
  if (static_cast<int>(var_map.size()) != nv_) throw error("Poly::relabel: map size mismatch");
  Poly r(new_nvars);
  for (auto& [m, c] : t_) {
    Mono mm(new_nvars, 0);
    for (int v = 0; v < nv_; ++v) {
      if (m[v] == 0) continue;
      if (var_map[v] < 0 || var_map[v] >= new_nvars)
        throw error("Poly::relabel: used variable has no image");
      mm[var_map[v]] += m[v];
    }
    r.add_term(mm, c);
  }
  return r;
}

std::string Poly::str(const std::vector<std::string>& names) const {
  if (t_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto& [m, c] : t_) {
    if (!first) os << " + ";
    first = false;
    os << c.str();
    for (int i = 0; i < nv_; ++i) {
      if (m[i] == 0) continue;
      os << "*";
      if (static_cast<int>(names.size()) > i)
        os << names[i];
      else
        os << "z" << (i + 1);
      if (m[i] != 1) os << "^" << m[i];
    }
  }
  return os.str();
}

}  // namespace chw
