#include "chw/coord.hpp"

#include <algorithm>

namespace chw {
namespace {

// Derivative at unchanged truncation; the top coefficient is unknown and set
// to zero, callers must multiply by a series without constant or linear term.
PowerSeries der_padded(const PowerSeries& h) {
  PowerSeries d(h.trunc());
  for (int k = 1; k < h.trunc(); ++k) d.set(k - 1, h.at(k) * Scalar(k));
  return d;
}

}  // namespace

Scalar CoordChange::v(int i) const {
  if (i < 1 || i > static_cast<int>(vtail.size()))
    throw error("CoordChange: vector field coefficient out of range");
  return vtail[i - 1];
}

PowerSeries reconstruct_coord(const CoordChange& c, int trunc) {
  PowerSeries field(trunc);
  for (int i = 1; i < c.order() && i + 1 < trunc; ++i) field.set(i + 1, c.v(i));
  PowerSeries g = PowerSeries::var(trunc) * c.v0;
  PowerSeries acc = g, term = g;
  Rational fac(1);
  for (long k = 1; !term.is_zero(); ++k) {
    term = field * der_padded(term);
    fac *= k;
    acc += term * Scalar(1 / fac);
  }
  return acc;
}

CoordChange decompose_coord(const PowerSeries& f) {
  if (f.trunc() < 2) throw error("decompose_coord: series too short");
  if (!f.at(0).is_zero()) throw error("decompose_coord: constant term must vanish");
  if (f.at(1).is_zero()) throw error("decompose_coord: linear coefficient must be nonzero");
  int D = f.trunc() - 1;
  CoordChange c{f.at(1), std::vector<Scalar>(D > 1 ? D - 1 : 0, Scalar::zero(f.at(1).regime()))};
  Scalar inv = Scalar(1) / c.v0;
  for (int i = 1; i <= D - 1; ++i) {
    PowerSeries g = reconstruct_coord(c, i + 2);
    c.vtail[i - 1] = (f.at(i + 1) - g.at(i + 1)) * inv;
  }
  return c;
}

FockState r_apply(const CoordChange& c, const FockState& s) {
  if (s.is_zero()) return s;
  const GeneratorSet& gs = s.gens();
  FockState base(gs);
  for (const auto& [m, coef] : s.terms())
    base.add_term(m, coef * scalar_pow(c.v0, -mono_weight(m, gs)));
  FockState out = base, cur = base;
  Rational fac(1);
  for (long k = 1;; ++k) {
    long lev = cur.max_level();
    if (cur.is_zero() || lev < 1) break;
    if (lev >= c.order())
      throw error("r_apply: coordinate data truncated below the state level");
    FockState w(gs);
    for (long i = 1; i <= lev; ++i) {
      if (c.v(static_cast<int>(i)).is_zero()) continue;
      FockState t = virasoro(gs, i, cur);
      w += t * c.v(static_cast<int>(i));
    }
    cur = -w;
    fac *= k;
    out += cur * Scalar(1 / fac);
  }
  return out;
}

FockState r_apply_inv(const CoordChange& c, const FockState& s) {
  if (s.is_zero()) return s;
  const GeneratorSet& gs = s.gens();
  FockState out = s, cur = s;
  Rational fac(1);
  for (long k = 1;; ++k) {
    long lev = cur.max_level();
    if (cur.is_zero() || lev < 1) break;
    if (lev >= c.order())
      throw error("r_apply_inv: coordinate data truncated below the state level");
    FockState w(gs);
    for (long i = 1; i <= lev; ++i) {
      if (c.v(static_cast<int>(i)).is_zero()) continue;
      FockState t = virasoro(gs, i, cur);
      w += t * c.v(static_cast<int>(i));
    }
    cur = w;
    fac *= k;
    out += cur * Scalar(1 / fac);
  }
  FockState scaled(gs);
  for (const auto& [m, coef] : out.terms())
    scaled.add_term(m, coef * scalar_pow(c.v0, mono_weight(m, gs)));
  return scaled;
}

PowerSeries schwarzian_correction(const PowerSeries& f) {
  if (f.trunc() < 4) throw error("schwarzian_correction: series too short");
  PowerSeries t = f.derivative();
  PowerSeries ti = t.inverse();
  PowerSeries a = t.derivative() * ti;
  PowerSeries b = t.derivative().derivative() * ti;
  return b * Scalar(Rational(1, 6)) - a * a * Scalar(Rational(1, 4));
}

PowerSeries stress_correction(const PowerSeries& rho) {
  if (rho.trunc() < 3) throw error("stress_correction: series too short");
  return rho.derivative().derivative() * rho.inverse() * Scalar(Rational(1, 3));
}

PowerSeries metric_in_coord(const PowerSeries& m, const PowerSeries& f, const Rational& weight) {
  PowerSeries pull = m.compose(f);
  return pull * series_pow(f.derivative(), weight);
}

PowerSeries current_correction(const PowerSeries& nu, const PowerSeries& h,
                               const PowerSeries& rho) {
  PowerSeries q = h * rho.inverse();
  return nu * q.derivative() * q.inverse();
}

PowerSeries frame_defect(const PowerSeries& nu, const PowerSeries& sigma) {
  return nu * sigma.derivative() * sigma.inverse();
}

PowerSeries coord_defect(const PowerSeries& nu, const PowerSeries& f) {
  PowerSeries t = f.derivative();
  return nu * t.derivative() * t.inverse() * Scalar(Rational(1, 2));
}

namespace {

using Jet = std::vector<PowerSeries>;

Jet jet_mul(const Jet& a, const Jet& b, int torder) {
  Jet out;
  for (int n = 0; n <= torder; ++n) {
    PowerSeries acc = PowerSeries::constant(1, Scalar(0));
    bool any = false;
    for (int i = 0; i <= n; ++i) {
      if (i >= static_cast<int>(a.size()) || n - i >= static_cast<int>(b.size())) continue;
      PowerSeries p = a[i] * b[n - i];
      acc = any ? acc.truncated(std::min(acc.trunc(), p.trunc())) + p.truncated(std::min(acc.trunc(), p.trunc()))
                : p;
      any = true;
    }
    out.push_back(any ? acc : PowerSeries(1));
  }
  return out;
}

Jet jet_scale(Jet a, const Scalar& s) {
  for (auto& p : a) p *= s;
  return a;
}

Jet jet_add(const Jet& a, const Jet& b) {
  Jet out;
  size_t n = std::max(a.size(), b.size());
  for (size_t k = 0; k < n; ++k) {
    if (k >= a.size()) out.push_back(b[k]);
    else if (k >= b.size()) out.push_back(a[k]);
    else {
      int t = std::min(a[k].trunc(), b[k].trunc());
      out.push_back(a[k].truncated(t) + b[k].truncated(t));
    }
  }
  return out;
}

}  // namespace

std::vector<PowerSeries> gauge_shift_jet(const PowerSeries& s, int torder) {
  if (torder >= s.trunc() - 1) throw error("gauge_shift_jet: shift order exceeds the truncation");
  Jet out;
  PowerSeries d = s;
  Rational fac(1);
  for (int n = 0; n <= torder; ++n) {
    out.push_back(d * Scalar(1 / fac));
    d = d.derivative();
    fac *= n + 1;
  }
  return out;
}

GaugeChange decompose_gauge(std::vector<PowerSeries> sigma, int torder) {
  GaugeChange g;
  for (const auto& s : sigma) {
    if (s.at(0) != Scalar(1))
      throw error("decompose_gauge: diagonal entries must have unit constant term");
    Jet shift = gauge_shift_jet(s, torder);
    PowerSeries sinv = s.inverse();
    Jet u;
    u.push_back(PowerSeries::constant(s.trunc(), Scalar(0)));
    for (int n = 1; n <= torder; ++n) u.push_back(shift[n] * sinv);
    // log(1 + u) in the shift variable
    Jet acc(static_cast<size_t>(torder) + 1, PowerSeries::constant(s.trunc(), Scalar(0)));
    Jet upow;
    upow.push_back(PowerSeries::constant(s.trunc(), Scalar(1)));
    for (int k = 1; k <= torder; ++k) {
      upow = jet_mul(upow, u, torder);
      acc = jet_add(acc, jet_scale(upow, Scalar(Rational(k % 2 ? 1 : -1, k))));
    }
    std::vector<PowerSeries> jets;
    for (int n = 1; n <= torder; ++n) jets.push_back(acc[n]);
    g.jets.push_back(std::move(jets));
  }
  g.sigma = std::move(sigma);
  return g;
}

std::vector<PowerSeries> gauge_reconstruct(const GaugeChange& g, int entry) {
  const auto& jets = g.jets.at(entry);
  const PowerSeries& s = g.sigma.at(entry);
  int torder = static_cast<int>(jets.size());
  Jet f;
  f.push_back(PowerSeries::constant(s.trunc(), Scalar(0)));
  for (const auto& j : jets) f.push_back(j);
  Jet acc(static_cast<size_t>(torder) + 1, PowerSeries::constant(s.trunc(), Scalar(0)));
  acc[0] = PowerSeries::constant(s.trunc(), Scalar(1));
  Jet fpow = acc;
  Rational fac(1);
  for (int k = 1; k <= torder; ++k) {
    fpow = jet_mul(fpow, f, torder);
    fac *= k;
    acc = jet_add(acc, jet_scale(fpow, Scalar(1 / fac)));
  }
  Jet sig;
  sig.push_back(s);
  return jet_mul(sig, acc, torder);
}

}  // namespace chw
