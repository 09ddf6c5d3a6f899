#pragma once

#include <vector>

#include "chw/fock.hpp"
#include "chw/series.hpp"

namespace chw {

// Exponential coordinates of a formal coordinate change f = a1 z + a2 z^2 + ...
// with a1 != 0: the scale v0 together with the vector field coefficients v_i of
// exp(sum_i v_i z^{i+1} d/dz) v0^{z d/dz} acting on z.
struct CoordChange {
  Scalar v0;
  std::vector<Scalar> vtail;  // vtail[i-1] = v_i, i >= 1

  int order() const { return static_cast<int>(vtail.size()) + 1; }
  Scalar v(int i) const;
};

CoordChange decompose_coord(const PowerSeries& f);
PowerSeries reconstruct_coord(const CoordChange& c, int trunc);

// R(f) = exp(-sum v_i L_i) v0^{-L0} on a state, and its exact inverse.
// Throws when the stored v_i do not reach the level of the state.
FockState r_apply(const CoordChange& c, const FockState& s);
FockState r_apply_inv(const CoordChange& c, const FockState& s);

// (1/6) t''/t - (1/4) (t'/t)^2 with t = f'.
PowerSeries schwarzian_correction(const PowerSeries& f);

// (1/3) rho^{-1} rho'', the counterterm of the dressed stress insertion.
PowerSeries stress_correction(const PowerSeries& rho);

// Pullback of a metric factor along z = f(w) carrying (f')^weight.
PowerSeries metric_in_coord(const PowerSeries& m, const PowerSeries& f, const Rational& weight);

// Trace term nu d log(h / rho) of the corrected current, scalar bundle data.
PowerSeries current_correction(const PowerSeries& nu, const PowerSeries& h,
                               const PowerSeries& rho);
// Reordering defect of the bare current under the frame change sigma.
PowerSeries frame_defect(const PowerSeries& nu, const PowerSeries& sigma);
// Reordering defect under a coordinate change; nu is given in the new variable.
PowerSeries coord_defect(const PowerSeries& nu, const PowerSeries& f);

// Diagonal gauge transformation sigma(y) with unit constant term in each
// entry, stored with the jets f_n(y) of log sigma(y+t) in the shift variable.
struct GaugeChange {
  std::vector<PowerSeries> sigma;
  std::vector<std::vector<PowerSeries>> jets;  // jets[e][n-1] = f_n, n >= 1
};

// Coefficients of t^0..t^torder of s(y+t); truncation in y shrinks with n.
std::vector<PowerSeries> gauge_shift_jet(const PowerSeries& s, int torder);
GaugeChange decompose_gauge(std::vector<PowerSeries> sigma, int torder);
// sigma(y) exp(sum_n f_n t^n) expanded in t for one diagonal entry.
std::vector<PowerSeries> gauge_reconstruct(const GaugeChange& g, int entry);

}  // namespace chw
