#pragma once

#include <map>
#include <string>
#include <vector>

#include "chw/fock.hpp"
#include "chw/kernel.hpp"

namespace chw {

// Number of odd generator factors mod 2.
int mono_parity(const FockMono& m, const GeneratorSet& gs);

// One term of a multi-point section: a creation monomial per marked point,
// the accumulated transfer-derivative order per point, and a bit per point
// for an attached antiholomorphic one-form symbol. Symbols are kept factored
// to the left of the state word, each block ordered by point index.
struct ChiralKey {
  std::vector<FockMono> states;
  std::vector<int> dpow;
  unsigned abar = 0;

  bool operator<(const ChiralKey& o) const;
  bool operator==(const ChiralKey& o) const = default;
};

// Finite sum of terms with DiagKernel coefficients, linear over Scalar.
// Canonical form: monomials sorted per point (Koszul signs folded into the
// kernel), identical keys merged, zero kernels dropped.
class ChiralSection {
 public:
  ChiralSection() : gs_(nullptr), n_(0) {}
  ChiralSection(const GeneratorSet& gs, int npoints) : gs_(&gs), n_(npoints) {}

  // vacuum at every point, kernel 1
  static ChiralSection unit(const GeneratorSet& gs, int npoints);

  int npoints() const { return n_; }
  const GeneratorSet& gens() const;
  bool is_zero() const { return t_.empty(); }
  const std::map<ChiralKey, DiagKernel>& terms() const { return t_; }

  void add_term(ChiralKey k, const DiagKernel& c);
  // expands a tensor of states into monomial terms
  void add_states(const std::vector<FockState>& st, const DiagKernel& c,
                  std::vector<int> dpow = {}, unsigned abar = 0);

  ChiralSection operator-() const;
  ChiralSection& operator+=(const ChiralSection& o);
  ChiralSection& operator-=(const ChiralSection& o);
  friend ChiralSection operator+(ChiralSection a, const ChiralSection& b) { return a += b; }
  friend ChiralSection operator-(ChiralSection a, const ChiralSection& b) { return a -= b; }
  ChiralSection& operator*=(const Scalar& c);
  friend ChiralSection operator*(ChiralSection a, const Scalar& c) { return a *= c; }
  ChiralSection& operator*=(const DiagKernel& k);
  bool operator==(const ChiralSection& o) const { return n_ == o.n_ && t_ == o.t_; }
  bool operator!=(const ChiralSection& o) const { return !(*this == o); }

  // graded reorder of the marked points; perm maps old index to new index
  ChiralSection permuted(const std::vector<int>& perm) const;

  std::string str() const;

 private:
  const GeneratorSet* gs_;
  int n_;
  std::map<ChiralKey, DiagKernel> t_;
};

// Kernel-only part of the product: coeff[d] is the coefficient carried by
// the d-th transfer derivative at the merged point.
struct TransferElement {
  int npts = 0;
  std::vector<DiagKernel> coeff;
  DiagKernel at(int d) const;  // zero beyond the stored range
};

// Residue extraction merging point i into point j on a bare kernel. The
// surviving variable keeps the anchor's position, slot j-1 after the drop.
TransferElement mu_omega(const DiagKernel& k, int i, int j);

// exterior-product section from one creation word per point
ChiralSection map_c(const GeneratorSet& gs, const DiagKernel& k, const FockMono& at0,
                    const FockMono& at1);

// Splitting of a two-point product into exterior components: every subset of
// the first word is transported to the second point and evaluated there
// through annihilation modes.
ChiralSection iota(const GeneratorSet& gs, const DiagKernel& k, const FockMono& at0,
                   const FockMono& at1);

// Pair-contraction exponential on the (i,j) slots of every term; dir = +1
// contracts, dir = -1 inserts the inverse (splitting) corrections.
ChiralSection wick_sing(const ChiralSection& v, int i, int j, int dir);

// Multiplies by (z_i-z_j)^N, applies the contraction exponential, and checks
// that no (z_i-z_j) pole survives. The result corresponds to (z_i-z_j)^N
// times the input, expressed in exterior coordinates.
ChiralSection iota_inverse_c(const ChiralSection& v, int N);
ChiralSection iota_inverse_c(const ChiralSection& v, int i, int j, int N);

// Chiral product merging point i (left factor) into point j, i < j. The
// merged word keeps the anchor's position (slot j-1 once the removed slot
// closes up), so iterated products nest like iterated residues. Transfer
// derivatives already present at the two merging points add onto the order
// created by the residue extraction.
ChiralSection mu_chiral(const ChiralSection& v, int i, int j);
// explicit truncation order, for the stability test; N >= the default
ChiralSection mu_chiral_n(const ChiralSection& v, int i, int j, long N);

// commutative variant: same residue extraction, no contractions
ChiralSection mu_sym(const ChiralSection& v, int i, int j);
ChiralSection mu_sym_n(const ChiralSection& v, int i, int j, long N);

// Rewrites the transfer derivatives at one point of a merged section from
// the removed-slot basis to the surviving-slot basis. Involutive; used to
// compare products performed in opposite orders.
ChiralSection ghost_flip(const ChiralSection& v, int pt);

// One piece of the differential: the merge of point i into point j, signed
// by the i suspension symbols the odd operation crosses to reach the pair.
// At two points this is mu_chiral itself.
ChiralSection d_mu(const ChiralSection& v, int i, int j);
// total differential: signed sum over all pairs
ChiralSection d_mu(const ChiralSection& v);

// terms carrying no transfer derivatives at any point
ChiralSection dpow_zero_part(const ChiralSection& v);

}  // namespace chw
