#pragma once

#include <map>
#include <string>
#include <vector>

#include "chw/wick.hpp"

namespace chw {

// Generator of the formal antiholomorphic model at marked points: a point
// symbol of form degree one, a harmonic symbol of either kind at a point, or
// the propagator symbol between two points.
struct ModelSym {
  enum Kind { eta = 0, harm0 = 1, harm1 = 2, prop = 3 };
  int kind;
  int i;  // point index (first point for prop)
  int j;  // basis index for harm, second point for prop, unused for eta
  auto operator<=>(const ModelSym&) const = default;
  bool odd() const { return kind == eta || kind == harm1; }
};

using ModelMono = std::vector<ModelSym>;
int model_mono_degree(const ModelMono& m);  // number of odd symbols

class ModelElement {
 public:
  static ModelElement unit(const Scalar& c = Scalar(1));
  static ModelElement symbol(ModelSym s);

  bool is_zero() const { return t_.empty(); }
  const std::map<ModelMono, Scalar>& terms() const { return t_; }
  void add_term(ModelMono m, const Scalar& c);  // sorts with Koszul sign

  ModelElement operator-() const;
  ModelElement& operator+=(const ModelElement& o);
  ModelElement& operator-=(const ModelElement& o);
  friend ModelElement operator+(ModelElement a, const ModelElement& b) { return a += b; }
  friend ModelElement operator-(ModelElement a, const ModelElement& b) { return a -= b; }
  friend ModelElement operator*(const ModelElement& a, const ModelElement& b);
  ModelElement& operator*=(const Scalar& c);
  friend ModelElement operator*(ModelElement a, const Scalar& c) { return a *= c; }
  bool operator==(const ModelElement& o) const = default;

  std::string str() const;

 private:
  std::map<ModelMono, Scalar> t_;
};

// Finite rewrite model: the differential annihilates point and harmonic
// symbols and sends the propagator to the harmonic double sum weighted by the
// inverse pairing; the integral is a declared functional on propagator-free
// elements that kills every exact one.
class DolbeaultModel {
 public:
  DolbeaultModel(const HarmonicBackground& bg, int npoints);

  ModelElement dbar(const ModelElement& x) const;
  Scalar integral(const ModelElement& x) const;

  ModelElement prop_rewrite(int p, int q) const;  // image of prop(p,q)
  const HarmonicBackground& background() const { return *bg_; }
  int npoints() const { return npts_; }

 private:
  void check_sym(const ModelSym& s) const;
  const HarmonicBackground* bg_;
  int npts_;
};

}  // namespace chw
