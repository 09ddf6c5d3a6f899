#include "chw/dolbeault.hpp"

#include <sstream>

namespace chw {

namespace {

// sorts into canonical order; returns the Koszul sign, 0 when an odd symbol
// repeats
int canonical_model(ModelMono& m) {
  int sign = 1;
  for (size_t i = 1; i < m.size(); ++i)
    for (size_t j = i; j > 0 && m[j] < m[j - 1]; --j) {
      if (m[j].odd() && m[j - 1].odd()) sign = -sign;
      std::swap(m[j], m[j - 1]);
    }
  for (size_t i = 1; i < m.size(); ++i)
    if (m[i].odd() && m[i] == m[i - 1]) return 0;
  return sign;
}

void sym_str(std::ostream& os, const ModelSym& s) {
  switch (s.kind) {
    case ModelSym::eta: os << "eta(" << s.i << ")"; break;
    case ModelSym::harm0: os << "h0_" << s.j << "(" << s.i << ")"; break;
    case ModelSym::harm1: os << "h1_" << s.j << "(" << s.i << ")"; break;
    default: os << "P(" << s.i << "," << s.j << ")"; break;
  }
}

}  // namespace

int model_mono_degree(const ModelMono& m) {
  int d = 0;
  for (const auto& s : m) d += s.odd();
  return d;
}

ModelElement ModelElement::unit(const Scalar& c) {
  ModelElement e;
  e.add_term({}, c);
  return e;
}

ModelElement ModelElement::symbol(ModelSym s) {
  ModelElement e;
  e.add_term({s}, Scalar(1));
  return e;
}

void ModelElement::add_term(ModelMono m, const Scalar& c) {
  if (c.is_zero()) return;
  int sign = canonical_model(m);
  if (sign == 0) return;
  Scalar v = sign < 0 ? Scalar(-c) : c;
  auto it = t_.find(m);
  if (it == t_.end()) {
    t_.emplace(std::move(m), v);
    return;
  }
  it->second = it->second + v;
  if (it->second.is_zero()) t_.erase(it);
}

ModelElement ModelElement::operator-() const {
  ModelElement out;
  for (const auto& [m, c] : t_) out.t_.emplace(m, Scalar(-c));
  return out;
}

ModelElement& ModelElement::operator+=(const ModelElement& o) {
  for (const auto& [m, c] : o.t_) add_term(m, c);
  return *this;
}

ModelElement& ModelElement::operator-=(const ModelElement& o) {
  for (const auto& [m, c] : o.t_) add_term(m, Scalar(-c));
  return *this;
}

ModelElement operator*(const ModelElement& a, const ModelElement& b) {
  ModelElement out;
  for (const auto& [ma, ca] : a.terms())
    for (const auto& [mb, cb] : b.terms()) {
      ModelMono m = ma;
      m.insert(m.end(), mb.begin(), mb.end());
      out.add_term(std::move(m), ca * cb);
    }
  return out;
}

ModelElement& ModelElement::operator*=(const Scalar& c) {
  if (c.is_zero()) {
    t_.clear();
    return *this;
  }
  for (auto& [m, v] : t_) v = v * c;
  return *this;
}

std::string ModelElement::str() const {
  if (t_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : t_) {
    if (!first) os << " + ";
    first = false;
    os << c.str();
    for (const auto& s : m) {
      os << " ";
      sym_str(os, s);
    }
  }
  return os.str();
}

DolbeaultModel::DolbeaultModel(const HarmonicBackground& bg, int npoints)
    : bg_(&bg), npts_(npoints) {
  if (npoints < 1) throw error("dolbeault model: needs at least one point");
}

void DolbeaultModel::check_sym(const ModelSym& s) const {
  switch (s.kind) {
    case ModelSym::eta:
      if (s.i < 0 || s.i >= npts_ || s.j != 0) break;
      return;
    case ModelSym::harm0:
      if (s.i < 0 || s.i >= npts_ || s.j < 0 || s.j >= bg_->dim0()) break;
      return;
    case ModelSym::harm1:
      if (s.i < 0 || s.i >= npts_ || s.j < 0 || s.j >= bg_->dim1()) break;
      return;
    case ModelSym::prop:
      if (s.i < 0 || s.i >= npts_ || s.j < 0 || s.j >= npts_ || s.i == s.j) break;
      return;
    default:
      break;
  }
  throw error("dolbeault model: unregistered symbol");
}

ModelElement DolbeaultModel::prop_rewrite(int p, int q) const {
  check_sym({ModelSym::prop, p, q});
  const auto& i2 = bg_->i2();
  const int n = bg_->dim0();
  ModelElement out;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const Scalar& w = i2[j][i];
      if (w.is_zero()) continue;
      out.add_term({{ModelSym::harm1, p, j}, {ModelSym::harm0, q, i}}, w);
      out.add_term({{ModelSym::harm0, p, i}, {ModelSym::harm1, q, j}}, w);
    }
  return out;
}

ModelElement DolbeaultModel::dbar(const ModelElement& x) const {
  ModelElement out;
  for (const auto& [m, c] : x.terms()) {
    int odd_before = 0;
    for (size_t t = 0; t < m.size(); ++t) {
      check_sym(m[t]);
      if (m[t].kind == ModelSym::prop) {
        Scalar pre = (odd_before & 1) ? Scalar(-c) : c;
        ModelElement pr = prop_rewrite(m[t].i, m[t].j);
        for (const auto& [im, ic] : pr.terms()) {
          ModelMono k(m.begin(), m.begin() + t);
          k.insert(k.end(), im.begin(), im.end());
          k.insert(k.end(), m.begin() + t + 1, m.end());
          out.add_term(std::move(k), pre * ic);
        }
      }
      odd_before += m[t].odd();
    }
  }
  return out;
}

Scalar DolbeaultModel::integral(const ModelElement& x) const {
  Scalar total(0);
  for (const auto& [m, c] : x.terms()) {
    for (const auto& s : m) {
      check_sym(s);
      if (s.kind == ModelSym::prop)
        throw error("dolbeault model: integral of a propagator term");
    }
    if (m.size() != 2) continue;
    if (m[0].kind != ModelSym::harm0 || m[1].kind != ModelSym::harm1) continue;
    const ModelSym& h0 = m[0];
    const ModelSym& h1 = m[1];
    if (h0.i == h1.i) continue;
    Scalar v = bg_->pairing(h0.j, h1.j);
    total = total + (h1.i < h0.i ? c * v : -(c * v));
  }
  return total;
}

}  // namespace chw
