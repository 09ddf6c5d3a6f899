#pragma once

#include <array>
#include <vector>

#include "chw/chiral.hpp"

namespace chw {

// Truncated regular part of a propagator between two points, stored as
// contraction weights: a term (a,m|b,n) -> c contributes c z1^m z2^n to the
// contraction of an a-factor on the first leg with a b-factor on the second.
// Graded-symmetric under exchanging the legs, matching a symmetric bisection.
class RegularKernel {
 public:
  RegularKernel() : gs_(nullptr), deg_(0) {}
  RegularKernel(const GeneratorSet& gs, int degree) : gs_(&gs), deg_(degree) {}

  const GeneratorSet& gens() const;
  int degree() const { return deg_; }
  bool is_zero() const { return t_.empty(); }

  // adds c to the (a,m|b,n) weight and its graded mirror (b,n|a,m)
  void add_sym(int a, int m, int b, int n, const Scalar& c);
  Scalar coef(int a, int m, int b, int n) const;

  // Kernel factor of one contraction: a-leg factor of pole depth k at slot
  // i, b-leg factor of depth l at slot j, in an npts-variable kernel. The
  // depth-k mode stands for (1/k!) times the k-th derivative of the field,
  // so the weight of the z^m term is binom(m,k) z^(m-k). i == j allowed.
  DiagKernel contraction(int a, long k, int i, int b, long l, int j, int npts) const;

 private:
  const GeneratorSet* gs_;
  int deg_;
  std::map<std::array<int, 4>, Scalar> t_;
};

// Harmonic section: a polynomial wavefunction per generator component, with
// a separate state parity (of the bundle) and form degree (0 or 1).
struct HarmonicElement {
  int parity = 0;
  int degree = 0;
  std::vector<std::pair<int, Poly>> comps;  // (generator, wavefunction in one variable)

  static HarmonicElement constant(const GeneratorSet& gs, int gen, int degree = 0);
};

// Zero-mode background: bases of the degree-0 and degree-1 harmonic spaces
// and the matrix of their integral pairings, with the cached inverse that
// weights the second-order zero-mode operator. Numeric matrices are rejected
// when the condition estimate exceeds 1e12.
class HarmonicBackground {
 public:
  HarmonicBackground() = default;
  HarmonicBackground(const GeneratorSet& gs, std::vector<HarmonicElement> h0,
                     std::vector<HarmonicElement> h1,
                     std::vector<std::vector<Scalar>> pairing);

  const GeneratorSet& gens() const;
  int dim0() const { return static_cast<int>(h0_.size()); }
  int dim1() const { return static_cast<int>(h1_.size()); }
  const HarmonicElement& h0(int i) const { return h0_.at(i); }
  const HarmonicElement& h1(int j) const { return h1_.at(j); }
  // entry (i,j): integral pairing of h1_j against h0_i
  const Scalar& pairing(int i, int j) const;
  // inverse of the pairing matrix
  const std::vector<std::vector<Scalar>>& i2() const { return i2_; }

 private:
  const GeneratorSet* gs_ = nullptr;
  std::vector<HarmonicElement> h0_, h1_;
  std::vector<std::vector<Scalar>> pair_, i2_;
};

// Sum over single contractions of one linear factor anywhere in the section
// against e: the factor of pole depth k at point i becomes the pairing times
// (1/k!) times the k-th derivative of e's wavefunction at z_i.
ChiralSection contract_field(const ChiralSection& v, const HarmonicElement& e);

// Single contraction between a factor at point i (against f(z_i,z_j), left
// leg c) and one at point j (right leg d); c = d = -1 contracts with f times
// the identity pairing. f is a two-point kernel.
ChiralSection contract_pair(const ChiralSection& v, const DiagKernel& f, int c, int d, int i,
                            int j);
ChiralSection contract_pair(const ChiralSection& v, const RegularKernel& q, int i, int j);

// Exponential of pairwise contractions with f(z,w) times the identity
// pairing, across distinct points only. f = 1/(z-w) recovers the flat-chart
// propagator.
ChiralSection wick_exp_singular(const ChiralSection& v, const DiagKernel& f);
// Same sum restricted to distinct points, with a regular kernel.
ChiralSection wick_exp_cross(const ChiralSection& v, const RegularKernel& q);
// Exponential over all factor pairs, same-point loops included.
ChiralSection wick_exp_regular(const ChiralSection& v, const RegularKernel& q);

// Iterated product folding every point into the last one, left to right.
ChiralSection mu_iter_chiral(ChiralSection v);
ChiralSection mu_iter_sym(ChiralSection v);

// flat-chart singular propagator 1/(z1-z2)
DiagKernel propagator_sing();

// Normal-ordering map: checks that the presentation (at most one field
// factor per point) reproduces v under the iterated chiral product, then
// contracts the presentation with the propagator and multiplies
// commutatively. q adds the regular part of the propagator split.
ChiralSection normal_ordering_map(const ChiralSection& v, const ChiralSection& pres,
                                  const RegularKernel* q = nullptr);

// Chain-level normal ordering: the all-pairs contraction exponential with
// the singular propagator across points and the regular part everywhere.
ChiralSection wick_chain_map(const ChiralSection& chain, const RegularKernel* q = nullptr);

}  // namespace chw
