#include "chw/chiral.hpp"

#include <algorithm>
#include <functional>
#include <sstream>
#include <utility>

namespace chw {

namespace {

int bit(unsigned mask, int p) { return (mask >> p) & 1; }

// Creation factor viewed as (generator, pole depth): mode -(k+1) has depth k.
struct WFac {
  int gen;
  long depth;
  int parity;
};

std::vector<WFac> word_of(const FockMono& m, const GeneratorSet& gs) {
  std::vector<WFac> w;
  w.reserve(m.size());
  for (const auto& f : m) {
    if (f.n >= 0) throw error("chiral: annihilation mode in a stored word");
    w.push_back({f.gen, -f.n - 1, gs.odd(f.gen) ? 1 : 0});
  }
  return w;
}

// Drops the removed slot of a merge of i into j; the surviving variable keeps
// the anchor's position, so nested merges compose like nested contours.
// k must not use variable i.
DiagKernel reslot(const DiagKernel& k, int i, int j) { return k.drop_point(i); }

// Enumerates partial contraction matchings between the words at slots i and j
// of an n-point term. Pairs are removed left to right from the combined word;
// each pair picks up the Koszul sign of pulling the two factors together, the
// sign of carrying the right factor across the state spectators parked
// between the slots, and the kernel
//   <a,b> (-1)^k binom(k+l,k) (z_i-z_j)^{-(k+l+1)}.
// dir = -1 flips the sign of every pair (inverse exponential).
void wick_matchings(
    const GeneratorSet& gs, int npts, int i, int j, const FockMono& ma, const FockMono& mb,
    int dir, int spec,
    const std::function<void(const FockMono&, const FockMono&, const DiagKernel&)>& emit) {
  auto A = word_of(ma, gs);
  auto B = word_of(mb, gs);
  const int na = static_cast<int>(A.size());
  const int nb = static_cast<int>(B.size());
  std::vector<WFac> W = A;
  W.insert(W.end(), B.begin(), B.end());
  std::vector<char> alive(W.size(), 1);

  std::function<void(int, const DiagKernel&)> rec = [&](int p, const DiagKernel& acc) {
    if (p == na) {
      FockMono ra, rb;
      for (int r = 0; r < na; ++r)
        if (alive[r]) ra.push_back(ma[r]);
      for (int r = 0; r < nb; ++r)
        if (alive[na + r]) rb.push_back(mb[r]);
      emit(ra, rb, acc);
      return;
    }
    rec(p + 1, acc);
    for (int q = na; q < na + nb; ++q) {
      if (!alive[q]) continue;
      Rational pr = gs.pairing(W[p].gen, W[q].gen);
      if (pr == 0) continue;
      int between = 0;
      for (int r = p + 1; r < q; ++r)
        if (alive[r]) between ^= W[r].parity;
      int sg = (W[p].parity & between) ^ (W[q].parity & spec);
      long k = W[p].depth, l = W[q].depth;
      Rational coef = pr * binomial(k + l, k);
      if (k % 2 != 0) coef = -coef;
      if (dir < 0) coef = -coef;
      if (sg) coef = -coef;
      DiagKernel acc2 =
          acc * DiagKernel::diff_power(npts, i, j, static_cast<int>(-(k + l + 1))) * Scalar(coef);
      alive[p] = alive[q] = 0;
      rec(p + 1, acc2);
      alive[p] = alive[q] = 1;
    }
  };
  rec(0, DiagKernel::one(npts));
}

}  // namespace

int mono_parity(const FockMono& m, const GeneratorSet& gs) {
  int p = 0;
  for (const auto& f : m) p ^= gs.odd(f.gen) ? 1 : 0;
  return p;
}

bool ChiralKey::operator<(const ChiralKey& o) const {
  if (states != o.states) return states < o.states;
  if (dpow != o.dpow) return dpow < o.dpow;
  return abar < o.abar;
}

ChiralSection ChiralSection::unit(const GeneratorSet& gs, int npoints) {
  ChiralSection s(gs, npoints);
  s.add_term(ChiralKey{std::vector<FockMono>(npoints), std::vector<int>(npoints, 0), 0},
             DiagKernel::one(npoints));
  return s;
}

const GeneratorSet& ChiralSection::gens() const {
  if (!gs_) throw error("ChiralSection: no generator set");
  return *gs_;
}

void ChiralSection::add_term(ChiralKey k, const DiagKernel& c) {
  if (!gs_) throw error("ChiralSection: no generator set");
  if (c.npoints() != n_) throw error("ChiralSection::add_term: kernel arity mismatch");
  if (static_cast<int>(k.states.size()) != n_)
    throw error("ChiralSection::add_term: state arity mismatch");
  if (k.dpow.empty()) k.dpow.assign(n_, 0);
  if (static_cast<int>(k.dpow.size()) != n_)
    throw error("ChiralSection::add_term: dpow arity mismatch");
  for (int d : k.dpow)
    if (d < 0) throw error("ChiralSection::add_term: negative transfer order");
  if (c.is_zero()) return;
  int sgn = 1;
  for (auto& m : k.states) {
    int s = canonical_sort(m, *gs_);
    if (s == 0) return;
    sgn *= s;
  }
  DiagKernel add = sgn < 0 ? -c : c;
  auto it = t_.find(k);
  if (it == t_.end()) {
    t_.emplace(std::move(k), std::move(add));
    return;
  }
  it->second += add;
  if (it->second.is_zero()) t_.erase(it);
}

void ChiralSection::add_states(const std::vector<FockState>& st, const DiagKernel& c,
                               std::vector<int> dpow, unsigned abar) {
  if (static_cast<int>(st.size()) != n_) throw error("ChiralSection::add_states: arity mismatch");
  if (dpow.empty()) dpow.assign(n_, 0);
  std::vector<FockMono> cur(n_);
  std::function<void(int, const Scalar&)> rec = [&](int p, const Scalar& sc) {
    if (p == n_) {
      add_term(ChiralKey{cur, dpow, abar}, c * sc);
      return;
    }
    for (const auto& [m, co] : st[p].terms()) {
      cur[p] = m;
      rec(p + 1, sc * co);
    }
  };
  rec(0, Scalar(1));
}

ChiralSection ChiralSection::operator-() const {
  ChiralSection out(*this);
  for (auto& [k, c] : out.t_) c = -c;
  return out;
}

ChiralSection& ChiralSection::operator+=(const ChiralSection& o) {
  if (!gs_) *this = ChiralSection(o.gens(), o.n_);
  if (o.n_ != n_) throw error("ChiralSection: arity mismatch in +=");
  for (const auto& [k, c] : o.t_) {
    auto it = t_.find(k);
    if (it == t_.end()) {
      t_.emplace(k, c);
      continue;
    }
    it->second += c;
    if (it->second.is_zero()) t_.erase(it);
  }
  return *this;
}

ChiralSection& ChiralSection::operator-=(const ChiralSection& o) { return *this += -o; }

ChiralSection& ChiralSection::operator*=(const Scalar& c) {
  if (c.is_zero()) {
    t_.clear();
    return *this;
  }
  for (auto& [k, kc] : t_) kc *= c;
  return *this;
}

ChiralSection& ChiralSection::operator*=(const DiagKernel& k) {
  if (k.npoints() != n_) throw error("ChiralSection: kernel arity mismatch in *=");
  std::map<ChiralKey, DiagKernel> old;
  old.swap(t_);
  for (auto& [key, c] : old) {
    DiagKernel p = c * k;
    if (!p.is_zero()) t_.emplace(std::move(key), std::move(p));
  }
  return *this;
}

ChiralSection ChiralSection::permuted(const std::vector<int>& perm) const {
  if (static_cast<int>(perm.size()) != n_) throw error("ChiralSection::permuted: bad permutation");
  ChiralSection out(gens(), n_);
  for (const auto& [k, c] : t_) {
    int sgn = 0;
    for (int a = 0; a < n_; ++a)
      for (int b = a + 1; b < n_; ++b)
        if (perm[a] > perm[b]) {
          sgn ^= mono_parity(k.states[a], *gs_) & mono_parity(k.states[b], *gs_);
          sgn ^= bit(k.abar, a) & bit(k.abar, b);
        }
    ChiralKey nk;
    nk.states.resize(n_);
    nk.dpow.resize(n_);
    for (int a = 0; a < n_; ++a) {
      nk.states[perm[a]] = k.states[a];
      nk.dpow[perm[a]] = k.dpow[a];
      if (bit(k.abar, a)) nk.abar |= 1u << perm[a];
    }
    DiagKernel c2 = c.permute_points(perm);
    if (sgn) c2 = -c2;
    out.add_term(std::move(nk), c2);
  }
  return out;
}

std::string ChiralSection::str() const {
  if (t_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, c] : t_) {
    if (!first) os << "\n+ ";
    first = false;
    os << "(" << c.str() << ") * [";
    for (int p = 0; p < n_; ++p) {
      if (p) os << " | ";
      if (bit(k.abar, p)) os << "~ ";
      if (k.states[p].empty()) os << "1";
      for (const auto& f : k.states[p]) os << gens().gen(f.gen).name << "(" << f.n << ")";
      if (k.dpow[p]) os << " D^" << k.dpow[p];
    }
    os << "]";
  }
  return os.str();
}

DiagKernel TransferElement::at(int d) const {
  if (d >= 0 && d < static_cast<int>(coeff.size())) return coeff[d];
  return DiagKernel::zero(npts);
}

TransferElement mu_omega(const DiagKernel& k, int i, int j) {
  int n = k.npoints();
  if (i == j || i < 0 || j < 0 || i >= n || j >= n) throw error("mu_omega: bad point pair");
  TransferElement out;
  out.npts = n - 1;
  int p = k.pole_order(i, j);
  if (p <= 0) return out;
  auto L = k.taylor_diag(i, j, -1);
  out.coeff.reserve(p);
  for (int d = 0; d < p; ++d)
    out.coeff.push_back(reslot(L.at(-d - 1), i, j) * Scalar(Rational(1) / factorial(d)));
  while (!out.coeff.empty() && out.coeff.back().is_zero()) out.coeff.pop_back();
  return out;
}

ChiralSection map_c(const GeneratorSet& gs, const DiagKernel& k, const FockMono& at0,
                    const FockMono& at1) {
  if (k.npoints() != 2) throw error("map_c: two points expected");
  ChiralSection out(gs, 2);
  out.add_term(ChiralKey{{at0, at1}, {0, 0}, 0}, k);
  return out;
}

ChiralSection iota(const GeneratorSet& gs, const DiagKernel& k, const FockMono& at0,
                   const FockMono& at1) {
  if (k.npoints() != 2) throw error("iota: two points expected");
  ChiralSection out(gs, 2);
  auto W = word_of(at0, gs);
  const int n = static_cast<int>(W.size());
  if (n >= 30) throw error("iota: word too long");
  for (unsigned I = 0; I < (1u << n); ++I) {
    // each transported factor crosses the kept factors to its right
    int sgn = 0;
    for (int p = 0; p < n; ++p) {
      if (!((I >> p) & 1)) continue;
      for (int r = p + 1; r < n; ++r)
        if (!((I >> r) & 1)) sgn ^= W[p].parity & W[r].parity;
    }
    FockMono keep;
    for (int p = 0; p < n; ++p)
      if (!((I >> p) & 1)) keep.push_back(at0[p]);
    // transported factors act at the second point through annihilation
    // modes; powers of (z_0-z_1) collect the expansion of each pole factor
    std::map<long, FockState> acc;
    acc.emplace(0, FockState::monomial(gs, at1));
    for (int p = n - 1; p >= 0; --p) {
      if (!((I >> p) & 1)) continue;
      long kd = W[p].depth;
      std::map<long, FockState> nxt;
      for (const auto& [pw, st] : acc) {
        long top = st.max_level();
        for (long m = 0; m < top; ++m) {
          FockState hit = st.apply_mode(W[p].gen, m);
          if (hit.is_zero()) continue;
          Rational c = binomial(-kd - 1, m);
          if ((kd + 1 + m) % 2 != 0) c = -c;
          FockState add = hit * Scalar(c);
          auto [it, fresh] = nxt.try_emplace(pw - kd - 1 - m, add);
          if (!fresh) it->second += add;
        }
      }
      acc = std::move(nxt);
    }
    for (const auto& [pw, st] : acc) {
      if (st.is_zero()) continue;
      if (pw < -1000000 || pw > 1000000) throw error("iota: kernel power out of range");
      DiagKernel base = k * DiagKernel::diff_power(2, 0, 1, static_cast<int>(pw));
      if (sgn) base = -base;
      for (const auto& [m2, c2] : st.terms())
        out.add_term(ChiralKey{{keep, m2}, {0, 0}, 0}, base * c2);
    }
  }
  return out;
}

ChiralSection wick_sing(const ChiralSection& v, int i, int j, int dir) {
  const auto& gs = v.gens();
  int n = v.npoints();
  if (!(0 <= i && i < j && j < n)) throw error("wick_sing: need ordered distinct points");
  ChiralSection out(gs, n);
  for (const auto& [key, kern] : v.terms()) {
    int spec = 0;
    for (int r = i + 1; r < j; ++r) spec ^= mono_parity(key.states[r], gs);
    wick_matchings(gs, n, i, j, key.states[i], key.states[j], dir, spec,
                   [&](const FockMono& ra, const FockMono& rb, const DiagKernel& kc) {
                     ChiralKey nk = key;
                     nk.states[i] = ra;
                     nk.states[j] = rb;
                     out.add_term(std::move(nk), kern * kc);
                   });
  }
  return out;
}

ChiralSection iota_inverse_c(const ChiralSection& v, int i, int j, int N) {
  ChiralSection shifted(v.gens(), v.npoints());
  for (const auto& [k, c] : v.terms()) shifted.add_term(k, c.shift_diff(i, j, N));
  ChiralSection out = wick_sing(shifted, i, j, +1);
  for (const auto& [k, c] : out.terms())
    if (c.pole_order(i, j) > 0) throw error("iota_inverse_c: residual pole, truncation too small");
  return out;
}

ChiralSection iota_inverse_c(const ChiralSection& v, int N) {
  if (v.npoints() != 2) throw error("iota_inverse_c: two points expected");
  return iota_inverse_c(v, 0, 1, N);
}

namespace {

// One term of the product merging slot i into slot j, i < j. The left state
// moves right across the spectators parked between the slots and the merged
// word lands at the anchor's position (slot j-1 after the drop), so iterated
// merges nest the way iterated residues do. Ghost derivatives already sitting
// at the two merging slots add onto the created ghost power.
ChiralSection mu_term(const GeneratorSet& gs, int n, const ChiralKey& key, const DiagKernel& kern,
                      int i, int j, long Nopt, bool contract) {
  ChiralSection out(gs, n - 1);
  if (bit(key.abar, i) && bit(key.abar, j)) return out;
  int spec = 0, specbar = 0;
  for (int r = i + 1; r < j; ++r) {
    spec ^= mono_parity(key.states[r], gs);
    specbar ^= bit(key.abar, r);
  }
  // the left symbol crosses the symbol spectators between the slots
  int sgn_bar = bit(key.abar, i) & specbar;
  long N = Nopt;
  if (N < 0)
    N = std::max(0, kern.pole_order(i, j)) + mono_level(key.states[i]) +
        mono_level(key.states[j]);

  auto emit_one = [&](const FockMono& ra, const FockMono& rb, const DiagKernel& kc) {
    DiagKernel kk = (kern * kc).shift_diff(i, j, static_cast<int>(N));
    if (kk.is_zero()) return;
    if (kk.pole_order(i, j) > 0) throw error("mu: residual pole, truncation too small");
    int sgn = (mono_parity(ra, gs) & spec) ^ sgn_bar;
    auto L = kk.taylor_diag(i, j, static_cast<int>(N) - 1);
    std::vector<FockState> tr;  // (1/m!) times the m-th translate of the left remainder
    tr.push_back(FockState::monomial(gs, ra));
    for (long m = 1; m <= N - 1; ++m)
      tr.push_back(tr.back().translated() * Scalar(Rational(1, m)));
    FockState b = FockState::monomial(gs, rb);
    for (long q = 0; q <= N - 1; ++q) {
      long d = N - 1 - q;
      Scalar fd = Scalar(Rational(1) / factorial(d));
      for (long m = 0; m <= q; ++m) {
        DiagKernel c = L.at(static_cast<int>(q - m));
        if (c.is_zero() || tr[m].is_zero()) continue;
        FockState w = normal_product(tr[m], b);
        if (w.is_zero()) continue;
        DiagKernel cres = reslot(c, i, j) * fd;
        if (sgn) cres = -cres;
        for (const auto& [wm, wc] : w.terms()) {
          ChiralKey nk;
          nk.states.reserve(n - 1);
          nk.dpow.reserve(n - 1);
          nk.abar = 0;
          int slot = 0;
          for (int p = 0; p < n; ++p) {
            if (p == i) continue;
            if (p == j) {
              nk.states.push_back(wm);
              nk.dpow.push_back(key.dpow[i] + key.dpow[j] + static_cast<int>(d));
              if (bit(key.abar, i) | bit(key.abar, j)) nk.abar |= 1u << slot;
            } else {
              nk.states.push_back(key.states[p]);
              nk.dpow.push_back(key.dpow[p]);
              if (bit(key.abar, p)) nk.abar |= 1u << slot;
            }
            ++slot;
          }
          out.add_term(std::move(nk), cres * wc);
        }
      }
    }
  };

  if (contract)
    wick_matchings(gs, n, i, j, key.states[i], key.states[j], +1, spec, emit_one);
  else
    emit_one(key.states[i], key.states[j], DiagKernel::one(n));
  return out;
}

ChiralSection mu_impl(const ChiralSection& v, int i, int j, long N, bool contract) {
  const auto& gs = v.gens();
  int n = v.npoints();
  if (n < 2) throw error("mu: need at least two points");
  if (!(0 <= i && i < j && j < n)) throw error("mu: need ordered distinct points");
  ChiralSection out(gs, n - 1);
  for (const auto& [k, c] : v.terms()) out += mu_term(gs, n, k, c, i, j, N, contract);
  return out;
}

}  // namespace

ChiralSection mu_chiral(const ChiralSection& v, int i, int j) {
  return mu_impl(v, i, j, -1, true);
}

ChiralSection mu_chiral_n(const ChiralSection& v, int i, int j, long N) {
  return mu_impl(v, i, j, N, true);
}

ChiralSection mu_sym(const ChiralSection& v, int i, int j) { return mu_impl(v, i, j, -1, false); }

ChiralSection mu_sym_n(const ChiralSection& v, int i, int j, long N) {
  return mu_impl(v, i, j, N, false);
}

ChiralSection ghost_flip(const ChiralSection& v, int pt) {
  const auto& gs = v.gens();
  int n = v.npoints();
  if (pt < 0 || pt >= n) throw error("ghost_flip: bad point");
  ChiralSection out(gs, n);
  for (const auto& [key, c] : v.terms()) {
    int d = key.dpow[pt];
    // cur holds the r-th right derivative of (kernel, state at pt)
    std::vector<std::pair<FockState, DiagKernel>> cur;
    cur.emplace_back(FockState::monomial(gs, key.states[pt]), c);
    for (int r = 0; r <= d; ++r) {
      Rational bc = binomial(d, r);
      if ((d - r) % 2 != 0) bc = -bc;
      for (const auto& [st, kc] : cur)
        for (const auto& [m2, c2] : st.terms()) {
          ChiralKey nk = key;
          nk.states[pt] = m2;
          nk.dpow[pt] = d - r;
          out.add_term(std::move(nk), kc * (c2 * Scalar(bc)));
        }
      if (r == d) break;
      std::vector<std::pair<FockState, DiagKernel>> nxt;
      nxt.reserve(2 * cur.size());
      for (const auto& [st, kc] : cur) {
        nxt.emplace_back(st.translated() * Scalar(-1), kc);
        nxt.emplace_back(st * Scalar(-1), kc.deriv(pt));
      }
      cur = std::move(nxt);
    }
  }
  return out;
}

ChiralSection d_mu(const ChiralSection& v, int i, int j) {
  int n = v.npoints();
  if (n < 2) throw error("d_mu: need at least two points");
  if (i < 0 || i >= j || j >= n) throw error("d_mu: bad pair");
  // Every slot carries one suspension symbol; the odd operation crosses the
  // i of them parked in front of the pair. State parities stay out of it,
  // the product handles those internally.
  ChiralSection piece = mu_chiral(v, i, j);
  return (i & 1) ? -piece : piece;
}

ChiralSection d_mu(const ChiralSection& v) {
  int n = v.npoints();
  if (n < 2) throw error("d_mu: need at least two points");
  ChiralSection out(v.gens(), n - 1);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) out += d_mu(v, i, j);
  return out;
}

ChiralSection dpow_zero_part(const ChiralSection& v) {
  ChiralSection out(v.gens(), v.npoints());
  for (const auto& [key, c] : v.terms())
    if (std::all_of(key.dpow.begin(), key.dpow.end(), [](int d) { return d == 0; }))
      out.add_term(key, c);
  return out;
}

}  // namespace chw
