#pragma once

#include <map>
#include <string>
#include <vector>

#include "chw/scalar.hpp"

namespace chw {

struct Generator {
  std::string name;
  bool odd = false;
  Rational alpha;  // conformal weight of the field
};

class FockState;

// Basis of the linear fields together with the two-point pairing <a,b>,
// graded antisymmetric and coupling weight alpha with weight 1-alpha.
class GeneratorSet {
 public:
  // weight-alpha generator `lo` paired with weight-(1-alpha) generator `hi`;
  // <hi,lo> = 1 and <lo,hi> = -(-1)^{|lo||hi|}
  void add_pair(const std::string& lo, const std::string& hi, const Rational& alpha,
                bool odd = false);
  // mutually paired block at weight 1/2; omega = [<e_i,e_j>] antisymmetric invertible
  void add_symplectic(const std::vector<std::string>& names,
                      const std::vector<std::vector<Rational>>& omega);

  static GeneratorSet beta_gamma(const Rational& alpha_lo, bool odd = false,
                                 const std::string& lo = "a", const std::string& hi = "b");
  static GeneratorSet symplectic_pair(const std::string& g1 = "g1", const std::string& g2 = "g2");

  int size() const { return static_cast<int>(g_.size()); }
  const Generator& gen(int i) const { return g_.at(i); }
  int index(const std::string& name) const;  // -1 if absent
  const Rational& pairing(int a, int b) const { return pair_.at(a).at(b); }
  bool odd(int i) const { return g_.at(i).odd; }
  const Rational& alpha(int i) const { return g_.at(i).alpha; }

  void validate() const;

  // distinguished conformal vector assembled per sector
  FockState stress() const;

 private:
  int add_gen(const std::string& name, bool odd, const Rational& alpha);
  std::vector<Generator> g_;
  std::vector<std::vector<Rational>> pair_;
  struct PairSector {
    int lo, hi;
  };
  struct SympSector {
    std::vector<int> idx;
    std::vector<std::vector<Rational>> w;  // -omega^{-1}
  };
  std::vector<PairSector> psec_;
  std::vector<SympSector> ssec_;
};

// One mode factor a_(n) in the expansion a(z) = sum_n a_(n) z^(-n-1).
struct ModeFactor {
  int gen;
  int n;
  std::pair<int, int> key() const { return {gen, -n}; }
  bool operator<(const ModeFactor& o) const { return key() < o.key(); }
  bool operator==(const ModeFactor& o) const = default;
};
using FockMono = std::vector<ModeFactor>;

// Sorts into canonical order (generator ascending, mode descending) and
// returns the Koszul sign; 0 when an odd factor repeats.
int canonical_sort(FockMono& m, const GeneratorSet& gs);
long mono_level(const FockMono& m);
Rational mono_weight(const FockMono& m, const GeneratorSet& gs);

class FockState {
 public:
  FockState() : gs_(nullptr) {}
  explicit FockState(const GeneratorSet& gs) : gs_(&gs) {}
  static FockState vacuum(const GeneratorSet& gs);
  static FockState monomial(const GeneratorSet& gs, FockMono m, const Scalar& c = Scalar(1));

  const GeneratorSet& gens() const;
  bool is_zero() const { return t_.empty(); }
  const std::map<FockMono, Scalar>& terms() const { return t_; }
  void add_term(FockMono m, const Scalar& c);  // canonicalizes

  FockState operator-() const;
  FockState& operator+=(const FockState& o);
  FockState& operator-=(const FockState& o);
  friend FockState operator+(FockState a, const FockState& b) { return a += b; }
  friend FockState operator-(FockState a, const FockState& b) { return a -= b; }
  FockState& operator*=(const Scalar& c);
  friend FockState operator*(FockState a, const Scalar& c) { return a *= c; }
  bool operator==(const FockState& o) const { return t_ == o.t_; }

  // left action of a_(n); creation modes prepend, nonnegative modes contract
  FockState apply_mode(int gen, int n) const;
  // derivation sending a_(-k) to k a_(-k-1)
  FockState translated() const;
  long max_level() const;
  // zero state when inhomogeneous, used for weight-graded operators
  bool homogeneous_weight(Rational& out) const;

  std::string debug_str() const;

 private:
  const GeneratorSet* gs_;
  std::map<FockMono, Scalar> t_;
};

// concatenation product of normally ordered monomials (all modes creation)
FockState normal_product(const FockState& a, const FockState& b);

// u_(n) v for an arbitrary state u, via the normally ordered field of u
FockState state_mode(const FockState& u, long n, const FockState& v);

FockState virasoro(const GeneratorSet& gs, long n, const FockState& v);

// mode n of the current :gen_i gen_j: (both modes at -1)
FockState km_mode(const GeneratorSet& gs, int i, int j, long n, const FockState& v);

// 12 lambda_m / (m^3 - m) where [L_m, L_-m]|0> = lambda_m |0>, m >= 2
Rational central_term_ratio(const GeneratorSet& gs, int m);

}  // namespace chw
