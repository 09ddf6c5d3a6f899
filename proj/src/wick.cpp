#include "chw/wick.hpp"

#include <algorithm>
#include <functional>

#include "chw/linalg.hpp"

namespace chw {

namespace {

int bit(unsigned mask, int p) { return (mask >> p) & 1; }

// Creation factor tagged with its point; mode -(k+1) has pole depth k.
struct Fac {
  int pt;
  int gen;
  long depth;
  int parity;
};

std::vector<Fac> flatten(const ChiralKey& key, const GeneratorSet& gs) {
  std::vector<Fac> w;
  for (int i = 0; i < static_cast<int>(key.states.size()); ++i)
    for (const auto& f : key.states[i]) {
      if (f.n >= 0) throw error("wick: annihilation mode in a stored word");
      w.push_back({i, f.gen, -f.n - 1, gs.odd(f.gen) ? 1 : 0});
    }
  return w;
}

ChiralKey strip(const ChiralKey& key, const std::vector<Fac>& W, const std::vector<char>& alive) {
  ChiralKey out{std::vector<FockMono>(key.states.size()), key.dpow, key.abar};
  for (size_t r = 0; r < W.size(); ++r)
    if (alive[r]) out.states[W[r].pt].push_back({W[r].gen, static_cast<int>(-(W[r].depth + 1))});
  return out;
}

// Exponential of single contractions: sums over all partial matchings of the
// flattened factor list, leftmost factor first. Each pair picks up the Koszul
// sign of carrying the left factor across the surviving factors between the
// two, and the kernel supplied for the pair (zero skips it). The weights only
// couple factors of equal parity, so the removed block is even and the sign
// is complete.
ChiralSection wick_core(const ChiralSection& v, bool same_point,
                        const std::function<DiagKernel(const Fac&, const Fac&)>& pair_k) {
  const GeneratorSet& gs = v.gens();
  ChiralSection out(gs, v.npoints());
  for (const auto& [key, kern] : v.terms()) {
    auto W = flatten(key, gs);
    const int total = static_cast<int>(W.size());
    std::vector<char> alive(total, 1);
    std::function<void(int, const DiagKernel&)> rec = [&](int p, const DiagKernel& acc) {
      if (p == total) {
        out.add_term(strip(key, W, alive), acc);
        return;
      }
      if (!alive[p]) {
        rec(p + 1, acc);
        return;
      }
      rec(p + 1, acc);
      for (int q = p + 1; q < total; ++q) {
        if (!alive[q]) continue;
        if (!same_point && W[q].pt == W[p].pt) continue;
        DiagKernel pk = pair_k(W[p], W[q]);
        if (pk.is_zero()) continue;
        int between = 0;
        for (int r = p + 1; r < q; ++r)
          if (alive[r]) between ^= W[r].parity;
        if (W[p].parity & between) pk = -pk;
        alive[p] = alive[q] = 0;
        rec(p + 1, acc * pk);
        alive[p] = alive[q] = 1;
      }
    };
    rec(0, kern);
  }
  return out;
}

// (1/k!)(1/l!) d_z1^k d_z2^l f, memoized per order
class DerivTable {
 public:
  explicit DerivTable(const DiagKernel& f) : f_(f) {}
  const DiagKernel& at(long k, long l) {
    auto key = std::make_pair(k, l);
    auto it = t_.find(key);
    if (it != t_.end()) return it->second;
    DiagKernel g = f_;
    for (long r = 0; r < k; ++r) g = g.deriv(0);
    for (long r = 0; r < l; ++r) g = g.deriv(1);
    g *= Scalar(Rational(1) / (factorial(k) * factorial(l)));
    return t_.emplace(key, std::move(g)).first->second;
  }

 private:
  DiagKernel f_;
  std::map<std::pair<long, long>, DiagKernel> t_;
};

// embed a two-point kernel at slots (i, j) of an n-point kernel; i != j
DiagKernel embed2(const DiagKernel& g, int i, int j, int n) {
  std::vector<int> perm(n);
  perm[0] = i;
  perm[1] = j;
  int next = 0;
  for (int o = 2; o < n; ++o) {
    while (next == i || next == j) ++next;
    perm[o] = next++;
  }
  return g.extend_points(n).permute_points(perm);
}

// same, on the diagonal: both slots of g land at point i
DiagKernel embed_diag(const DiagKernel& g, int i, int n) {
  if (g.pole_order(0, 1) > 0) throw error("wick: singular kernel on the diagonal");
  DiagKernel h = g.taylor_diag(0, 1, 0).at(0).drop_point(0);
  std::vector<int> perm(n);
  perm[0] = i;
  int next = 0;
  for (int o = 1; o < n; ++o) {
    while (next == i) ++next;
    perm[o] = next++;
  }
  return h.extend_points(n).permute_points(perm);
}

int suffix_parity(const std::vector<Fac>& W, size_t p) {
  int s = 0;
  for (size_t r = p + 1; r < W.size(); ++r) s ^= W[r].parity;
  return s;
}

}  // namespace

const GeneratorSet& RegularKernel::gens() const {
  if (!gs_) throw error("regular kernel: no generator set");
  return *gs_;
}

void RegularKernel::add_sym(int a, int m, int b, int n, const Scalar& c) {
  const GeneratorSet& gs = gens();
  if (m < 0 || n < 0 || m > deg_ || n > deg_) throw error("regular kernel: degree out of range");
  if (gs.odd(a) != gs.odd(b)) throw error("regular kernel: weight couples opposite parities");
  auto addw = [&](const std::array<int, 4>& k, const Scalar& w) {
    auto it = t_.find(k);
    Scalar s = (it == t_.end()) ? w : Scalar(it->second + w);
    if (s.is_zero()) {
      if (it != t_.end()) t_.erase(it);
    } else {
      t_[k] = s;
    }
  };
  std::array<int, 4> k1{a, m, b, n}, k2{b, n, a, m};
  if (k1 == k2) {
    // the graded mirror of an odd diagonal weight cancels it
    if (!gs.odd(a)) addw(k1, c);
    return;
  }
  addw(k1, c);
  addw(k2, gs.odd(a) ? Scalar(-c) : c);
}

Scalar RegularKernel::coef(int a, int m, int b, int n) const {
  auto it = t_.find({a, m, b, n});
  return it == t_.end() ? Scalar(0) : it->second;
}

DiagKernel RegularKernel::contraction(int a, long k, int i, int b, long l, int j,
                                      int npts) const {
  DiagKernel out = DiagKernel::zero(npts);
  for (const auto& [w, c] : t_) {
    if (w[0] != a || w[2] != b) continue;
    long m = w[1], n = w[3];
    if (k > m || l > n) continue;
    Poly p(npts);
    Mono mono(npts, 0);
    mono[i] += static_cast<int>(m - k);
    mono[j] += static_cast<int>(n - l);
    p.add_term(mono, c * Scalar(binomial(m, k) * binomial(n, l)));
    out += DiagKernel::monomial(npts, p);
  }
  return out;
}

HarmonicElement HarmonicElement::constant(const GeneratorSet& gs, int gen, int degree) {
  HarmonicElement e;
  e.parity = gs.odd(gen) ? 1 : 0;
  e.degree = degree;
  e.comps.push_back({gen, Poly::constant(1, Scalar(1))});
  return e;
}

HarmonicBackground::HarmonicBackground(const GeneratorSet& gs, std::vector<HarmonicElement> h0,
                                       std::vector<HarmonicElement> h1,
                                       std::vector<std::vector<Scalar>> pairing)
    : gs_(&gs), h0_(std::move(h0)), h1_(std::move(h1)), pair_(std::move(pairing)) {
  for (const auto& e : h0_)
    if (e.degree != 0) throw error("harmonic background: degree-0 basis element of wrong degree");
  for (const auto& e : h1_)
    if (e.degree != 1) throw error("harmonic background: degree-1 basis element of wrong degree");
  const int n = dim0();
  if (n != dim1()) throw error("harmonic background: pairing matrix is not square");
  if (static_cast<int>(pair_.size()) != n)
    throw error("harmonic background: pairing matrix has wrong shape");
  for (const auto& row : pair_)
    if (static_cast<int>(row.size()) != n)
      throw error("harmonic background: pairing matrix has wrong shape");
  if (n == 0) return;
  bool exact = true;
  for (const auto& row : pair_)
    for (const auto& s : row) exact = exact && s.exact();
  i2_.assign(n, std::vector<Scalar>(n, Scalar(0)));
  if (exact) {
    RatMat m(n, std::vector<Rational>(n));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m[i][j] = pair_[i][j].rat();
    RatMat inv = rat_mat_inverse(m);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) i2_[i][j] = Scalar(inv[i][j]);
  } else {
    CxMat m(n, std::vector<Complex>(n));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m[i][j] = pair_[i][j].cx();
    if (cx_mat_cond(m) > 1e12) throw error("harmonic background: pairing matrix ill-conditioned");
    CxMat inv = cx_mat_inverse(m);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) i2_[i][j] = Scalar(inv[i][j]);
  }
}

const GeneratorSet& HarmonicBackground::gens() const {
  if (!gs_) throw error("harmonic background: no generator set");
  return *gs_;
}

const Scalar& HarmonicBackground::pairing(int i, int j) const {
  return pair_.at(i).at(j);
}

ChiralSection contract_field(const ChiralSection& v, const HarmonicElement& e) {
  const GeneratorSet& gs = v.gens();
  const int n = v.npoints();
  ChiralSection out(gs, n);
  for (const auto& [key, kern] : v.terms()) {
    auto W = flatten(key, gs);
    for (size_t p = 0; p < W.size(); ++p) {
      int i = W[p].pt;
      unsigned abar = key.abar;
      int sgn = W[p].parity & suffix_parity(W, p);
      if (e.degree) {
        // the contraction leaves a one-form symbol at the point; two at the
        // same point square to zero
        if (bit(key.abar, i)) continue;
        abar |= 1u << i;
        for (int r = i + 1; r < n; ++r) sgn ^= bit(key.abar, r);
      }
      for (const auto& [b, wav] : e.comps) {
        Rational pr = gs.pairing(W[p].gen, b);
        if (pr == 0) continue;
        Poly w = wav;
        for (long r = 0; r < W[p].depth; ++r) w = w.derivative(0);
        if (w.is_zero()) continue;
        DiagKernel fac = DiagKernel::monomial(n, w.relabel(n, {i}));
        fac *= Scalar(pr / factorial(W[p].depth));
        if (sgn) fac = -fac;
        std::vector<char> alive(W.size(), 1);
        alive[p] = 0;
        ChiralKey k2 = strip(key, W, alive);
        k2.abar = abar;
        out.add_term(k2, kern * fac);
      }
    }
  }
  return out;
}

ChiralSection contract_pair(const ChiralSection& v, const DiagKernel& f, int c, int d, int i,
                            int j) {
  const GeneratorSet& gs = v.gens();
  const int n = v.npoints();
  if (f.npoints() != 2) throw error("contract_pair: kernel must be two-point");
  if (i < 0 || j < 0 || i >= n || j >= n) throw error("contract_pair: point out of range");
  DerivTable tab(f);
  ChiralSection out(gs, n);
  for (const auto& [key, kern] : v.terms()) {
    auto W = flatten(key, gs);
    for (size_t p = 0; p < W.size(); ++p) {
      if (W[p].pt != i) continue;
      for (size_t q = 0; q < W.size(); ++q) {
        if (q == p || W[q].pt != j) continue;
        if (i == j && q < p) continue;
        Rational pr = (c < 0) ? gs.pairing(W[p].gen, W[q].gen)
                              : gs.pairing(W[p].gen, c) * gs.pairing(W[q].gen, d);
        if (pr == 0) continue;
        const DiagKernel& base = tab.at(W[p].depth, W[q].depth);
        DiagKernel pk = (i == j) ? embed_diag(base, i, n) : embed2(base, i, j, n);
        pk *= Scalar(pr);
        size_t lo = std::min(p, q), hi = std::max(p, q);
        int between = 0;
        for (size_t r = lo + 1; r < hi; ++r) between ^= W[r].parity;
        if (W[lo].parity & between) pk = -pk;
        std::vector<char> alive(W.size(), 1);
        alive[p] = alive[q] = 0;
        out.add_term(strip(key, W, alive), kern * pk);
      }
    }
  }
  return out;
}

ChiralSection contract_pair(const ChiralSection& v, const RegularKernel& q, int i, int j) {
  const GeneratorSet& gs = v.gens();
  const int n = v.npoints();
  if (i < 0 || j < 0 || i >= n || j >= n) throw error("contract_pair: point out of range");
  ChiralSection out(gs, n);
  for (const auto& [key, kern] : v.terms()) {
    auto W = flatten(key, gs);
    for (size_t p = 0; p < W.size(); ++p) {
      if (W[p].pt != i) continue;
      for (size_t r = 0; r < W.size(); ++r) {
        if (r == p || W[r].pt != j) continue;
        if (i == j && r < p) continue;
        DiagKernel pk = q.contraction(W[p].gen, W[p].depth, i, W[r].gen, W[r].depth, j, n);
        if (pk.is_zero()) continue;
        size_t lo = std::min(p, r), hi = std::max(p, r);
        int between = 0;
        for (size_t s = lo + 1; s < hi; ++s) between ^= W[s].parity;
        if (W[lo].parity & between) pk = -pk;
        std::vector<char> alive(W.size(), 1);
        alive[p] = alive[r] = 0;
        out.add_term(strip(key, W, alive), kern * pk);
      }
    }
  }
  return out;
}

ChiralSection wick_exp_singular(const ChiralSection& v, const DiagKernel& f) {
  if (f.npoints() != 2) throw error("wick_exp_singular: kernel must be two-point");
  const int n = v.npoints();
  if (n <= 1) return v;
  const GeneratorSet& gs = v.gens();
  DerivTable tab(f);
  std::map<std::array<long, 4>, DiagKernel> emb;
  auto pair_k = [&](const Fac& P, const Fac& Q) -> DiagKernel {
    Rational pr = gs.pairing(P.gen, Q.gen);
    if (pr == 0) return DiagKernel::zero(n);
    std::array<long, 4> key{P.depth, Q.depth, P.pt, Q.pt};
    auto it = emb.find(key);
    if (it == emb.end())
      it = emb.emplace(key, embed2(tab.at(P.depth, Q.depth), P.pt, Q.pt, n)).first;
    return it->second * Scalar(pr);
  };
  return wick_core(v, false, pair_k);
}

ChiralSection wick_exp_cross(const ChiralSection& v, const RegularKernel& q) {
  const int n = v.npoints();
  auto pair_k = [&](const Fac& P, const Fac& Q) {
    return q.contraction(P.gen, P.depth, P.pt, Q.gen, Q.depth, Q.pt, n);
  };
  return wick_core(v, false, pair_k);
}

ChiralSection wick_exp_regular(const ChiralSection& v, const RegularKernel& q) {
  const int n = v.npoints();
  auto pair_k = [&](const Fac& P, const Fac& Q) {
    return q.contraction(P.gen, P.depth, P.pt, Q.gen, Q.depth, Q.pt, n);
  };
  return wick_core(v, true, pair_k);
}

ChiralSection mu_iter_chiral(ChiralSection v) {
  while (v.npoints() > 1) v = mu_chiral(v, 0, 1);
  return v;
}

ChiralSection mu_iter_sym(ChiralSection v) {
  while (v.npoints() > 1) v = mu_sym(v, 0, 1);
  return v;
}

DiagKernel propagator_sing() { return DiagKernel::diff_power(2, 0, 1, -1); }

ChiralSection normal_ordering_map(const ChiralSection& v, const ChiralSection& pres,
                                  const RegularKernel* q) {
  if (v.npoints() != 1) throw error("normal_ordering_map: target must be one-point");
  for (const auto& [key, kern] : pres.terms())
    for (const auto& w : key.states)
      if (w.size() > 1) throw error("normal_ordering_map: presentation word is not linear");
  if (mu_iter_chiral(pres) != v)
    throw error("normal_ordering_map: presentation does not reproduce the section");
  ChiralSection w = wick_exp_singular(pres, propagator_sing());
  if (q) w = wick_exp_cross(w, *q);
  return mu_iter_sym(w);
}

ChiralSection wick_chain_map(const ChiralSection& chain, const RegularKernel* q) {
  ChiralSection w = wick_exp_singular(chain, propagator_sing());
  if (q) w = wick_exp_regular(w, *q);
  return w;
}

}  // namespace chw
