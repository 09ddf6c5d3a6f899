#include "chw/fock.hpp"

#include <algorithm>
#include <functional>

#include "chw/linalg.hpp"

namespace chw {

int GeneratorSet::add_gen(const std::string& name, bool odd, const Rational& alpha) {
  if (index(name) >= 0) throw error("GeneratorSet: duplicate generator name '" + name + "'");
  g_.push_back({name, odd, alpha});
  int n = size();
  for (auto& row : pair_) row.resize(n, Rational(0));
  pair_.emplace_back(n, Rational(0));
  return n - 1;
}

void GeneratorSet::add_pair(const std::string& lo, const std::string& hi, const Rational& alpha,
                            bool odd) {
  int a = add_gen(lo, odd, alpha);
  int b = add_gen(hi, odd, Rational(1) - alpha);
  pair_[b][a] = 1;
  pair_[a][b] = odd ? Rational(1) : Rational(-1);
  psec_.push_back({a, b});
}

void GeneratorSet::add_symplectic(const std::vector<std::string>& names,
                                  const std::vector<std::vector<Rational>>& omega) {
  int k = static_cast<int>(names.size());
  if (static_cast<int>(omega.size()) != k)
    throw error("GeneratorSet: pairing matrix size does not match generator count");
  SympSector sec;
  for (const auto& nm : names) sec.idx.push_back(add_gen(nm, false, Rational(1, 2)));
  for (int i = 0; i < k; ++i) {
    if (static_cast<int>(omega[i].size()) != k)
      throw error("GeneratorSet: pairing matrix is not square");
    for (int j = 0; j < k; ++j) {
      if (omega[i][j] != -omega[j][i])
        throw error("GeneratorSet: symplectic pairing must be antisymmetric");
      pair_[sec.idx[i]][sec.idx[j]] = omega[i][j];
    }
  }
  RatMat winv = rat_mat_inverse(omega);
  sec.w.assign(k, std::vector<Rational>(k));
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) sec.w[i][j] = -winv[i][j];
  ssec_.push_back(std::move(sec));
}

GeneratorSet GeneratorSet::beta_gamma(const Rational& alpha_lo, bool odd, const std::string& lo,
                                      const std::string& hi) {
  GeneratorSet gs;
  gs.add_pair(lo, hi, alpha_lo, odd);
  return gs;
}

GeneratorSet GeneratorSet::symplectic_pair(const std::string& g1, const std::string& g2) {
  GeneratorSet gs;
  gs.add_symplectic({g1, g2}, {{Rational(0), Rational(1)}, {Rational(-1), Rational(0)}});
  return gs;
}

int GeneratorSet::index(const std::string& name) const {
  for (int i = 0; i < size(); ++i)
    if (g_[i].name == name) return i;
  return -1;
}

void GeneratorSet::validate() const {
  int n = size();
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const Rational& p = pair_[a][b];
      int koszul = (g_[a].odd && g_[b].odd) ? 1 : -1;
      if (p != koszul * pair_[b][a])
        throw error("GeneratorSet: pairing is not graded antisymmetric at (" + g_[a].name + "," +
                    g_[b].name + ")");
      if (p != 0 && g_[a].alpha + g_[b].alpha != 1)
        throw error("GeneratorSet: paired generators " + g_[a].name + "," + g_[b].name +
                    " have weights not summing to 1");
    }
  if (rat_mat_det(pair_) == 0) throw error("GeneratorSet: pairing is degenerate");
}

FockState GeneratorSet::stress() const {
  FockState t(*this);
  for (const auto& s : psec_) {
    Rational al = g_[s.lo].alpha;
    t.add_term({{s.lo, -2}, {s.hi, -1}}, Scalar(Rational(1) - al));
    t.add_term({{s.lo, -1}, {s.hi, -2}}, Scalar(-al));
  }
  for (const auto& s : ssec_) {
    int k = static_cast<int>(s.idx.size());
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j)
        if (s.w[i][j] != 0)
          t.add_term({{s.idx[i], -1}, {s.idx[j], -2}}, Scalar(s.w[i][j] / 2));
  }
  return t;
}

int canonical_sort(FockMono& m, const GeneratorSet& gs) {
  int sign = 1;
  for (size_t i = 1; i < m.size(); ++i) {
    ModeFactor x = m[i];
    size_t j = i;
    while (j > 0 && x < m[j - 1]) {
      if (gs.odd(x.gen) && gs.odd(m[j - 1].gen)) sign = -sign;
      m[j] = m[j - 1];
      --j;
    }
    m[j] = x;
  }
  for (size_t i = 1; i < m.size(); ++i)
    if (m[i] == m[i - 1] && gs.odd(m[i].gen)) return 0;
  return sign;
}

long mono_level(const FockMono& m) {
  long l = 0;
  for (const auto& f : m) l += -f.n;
  return l;
}

Rational mono_weight(const FockMono& m, const GeneratorSet& gs) {
  Rational w = 0;
  for (const auto& f : m) w += Rational(-f.n - 1) + gs.alpha(f.gen);
  return w;
}

FockState FockState::vacuum(const GeneratorSet& gs) {
  FockState s(gs);
  s.t_.emplace(FockMono{}, Scalar(1));
  return s;
}

FockState FockState::monomial(const GeneratorSet& gs, FockMono m, const Scalar& c) {
  FockState s(gs);
  s.add_term(std::move(m), c);
  return s;
}

const GeneratorSet& FockState::gens() const {
  if (!gs_) throw error("FockState: no generator set attached");
  return *gs_;
}

void FockState::add_term(FockMono m, const Scalar& c) {
  if (c.is_zero()) return;
  for (const auto& f : m)
    if (f.n >= 0) throw error("FockState: stored monomials admit creation modes only");
  int sg = canonical_sort(m, gens());
  if (sg == 0) return;
  auto it = t_.find(m);
  if (it == t_.end()) {
    t_.emplace(std::move(m), c * Scalar(sg));
  } else {
    it->second += c * Scalar(sg);
    if (it->second.is_zero()) t_.erase(it);
  }
}

FockState FockState::operator-() const {
  FockState out = *this;
  for (auto& [m, c] : out.t_) c = -c;
  return out;
}

static const GeneratorSet* merge_gs(const GeneratorSet* a, const GeneratorSet* b) {
  if (a && b && a != b) throw error("FockState: mixing states over different generator sets");
  return a ? a : b;
}

FockState& FockState::operator+=(const FockState& o) {
  gs_ = merge_gs(gs_, o.gs_);
  for (const auto& [m, c] : o.t_) {
    auto it = t_.find(m);
    if (it == t_.end()) {
      t_.emplace(m, c);
    } else {
      it->second += c;
      if (it->second.is_zero()) t_.erase(it);
    }
  }
  return *this;
}

FockState& FockState::operator-=(const FockState& o) { return *this += -o; }

FockState& FockState::operator*=(const Scalar& c) {
  if (c.is_zero()) {
    t_.clear();
    return *this;
  }
  for (auto& [m, v] : t_) v *= c;
  return *this;
}

FockState FockState::apply_mode(int gen, int n) const {
  FockState out(gens());
  if (n <= -1) {
    for (const auto& [m, c] : t_) {
      FockMono nm;
      nm.reserve(m.size() + 1);
      nm.push_back({gen, n});
      nm.insert(nm.end(), m.begin(), m.end());
      out.add_term(std::move(nm), c);
    }
    return out;
  }
  for (const auto& [m, c] : t_) {
    int sign = 1;
    for (size_t s = 0; s < m.size(); ++s) {
      if (m[s].n == -n - 1) {
        const Rational& p = gs_->pairing(gen, m[s].gen);
        if (p != 0) {
          FockMono nm = m;
          nm.erase(nm.begin() + static_cast<long>(s));
          out.add_term(std::move(nm), c * Scalar(sign) * Scalar(p));
        }
      }
      if (gs_->odd(gen) && gs_->odd(m[s].gen)) sign = -sign;
    }
  }
  return out;
}

FockState FockState::translated() const {
  FockState out(gens());
  for (const auto& [m, c] : t_)
    for (size_t s = 0; s < m.size(); ++s) {
      FockMono nm = m;
      nm[s].n -= 1;
      out.add_term(std::move(nm), c * Scalar(static_cast<long>(-m[s].n)));
    }
  return out;
}

long FockState::max_level() const {
  long l = 0;
  for (const auto& [m, c] : t_) l = std::max(l, mono_level(m));
  return l;
}

bool FockState::homogeneous_weight(Rational& out) const {
  bool first = true;
  for (const auto& [m, c] : t_) {
    Rational w = mono_weight(m, gens());
    if (first) {
      out = w;
      first = false;
    } else if (w != out) {
      return false;
    }
  }
  return !first;
}

std::string FockState::debug_str() const {
  if (t_.empty()) return "0";
  std::string s;
  for (const auto& [m, c] : t_) {
    if (!s.empty()) s += " + ";
    s += c.str();
    for (const auto& f : m) s += " " + gs_->gen(f.gen).name + "(" + std::to_string(f.n) + ")";
    s += " |0>";
  }
  return s;
}

FockState normal_product(const FockState& a, const FockState& b) {
  FockState out(a.gens());
  for (const auto& [ma, ca] : a.terms())
    for (const auto& [mb, cb] : b.terms()) {
      FockMono m = ma;
      m.insert(m.end(), mb.begin(), mb.end());
      out.add_term(std::move(m), ca * cb);
    }
  return out;
}

namespace {

struct ModeOp {
  int gen;
  long j;
};

// all integer tuples (j_1..j_p) with sum S and each j_s <= jmax
void enum_modes(int p, long S, long jmax, std::vector<long>& cur,
                const std::function<void(const std::vector<long>&)>& emit) {
  if (p == 0) {
    if (S == 0) emit(cur);
    return;
  }
  long lo = S - (p - 1) * jmax;
  for (long j = lo; j <= jmax; ++j) {
    cur.push_back(j);
    enum_modes(p - 1, S - j, jmax, cur, emit);
    cur.pop_back();
  }
}

}  // namespace

FockState state_mode(const FockState& u, long n, const FockState& v) {
  const GeneratorSet& gs = u.gens();
  FockState out(gs);
  long L = v.max_level();
  long jmax = L - 1;
  for (const auto& [um, uc] : u.terms()) {
    int p = static_cast<int>(um.size());
    if (p == 0) {
      if (n == -1) out += v * uc;
      continue;
    }
    long ksum = mono_level(um);
    long S = n + 1 - ksum;
    std::vector<long> cur;
    enum_modes(
        p, S, jmax, cur, [&](const std::vector<long>& js) {
          Scalar coeff = uc;
          for (int s = 0; s < p; ++s) {
            long k = -um[s].n;
            Rational b = binomial(js[s] + k - 1, k - 1);
            if ((k - 1) % 2) b = -b;
            coeff *= Scalar(b);
            if (coeff.is_zero()) return;
          }
          // unshuffle sign: annihilation ops cross the creation ops behind them
          int sign = 1;
          for (int s = 0; s < p; ++s) {
            if (js[s] < 0 || !gs.odd(um[s].gen)) continue;
            for (int t = s + 1; t < p; ++t)
              if (js[t] < 0 && gs.odd(um[t].gen)) sign = -sign;
          }
          std::vector<ModeOp> ops;
          for (int s = 0; s < p; ++s)
            if (js[s] < 0) ops.push_back({um[s].gen, js[s]});
          for (int s = 0; s < p; ++s)
            if (js[s] >= 0) ops.push_back({um[s].gen, js[s]});
          FockState w = v * (coeff * Scalar(sign));
          for (auto it = ops.rbegin(); it != ops.rend() && !w.is_zero(); ++it)
            w = w.apply_mode(it->gen, static_cast<int>(it->j));
          out += w;
        });
  }
  return out;
}

FockState virasoro(const GeneratorSet& gs, long n, const FockState& v) {
  return state_mode(gs.stress(), n + 1, v);
}

FockState km_mode(const GeneratorSet& gs, int i, int j, long n, const FockState& v) {
  FockState u = FockState::monomial(gs, {{i, -1}, {j, -1}});
  return state_mode(u, n, v);
}

Rational central_term_ratio(const GeneratorSet& gs, int m) {
  if (m < 2) throw error("central_term_ratio: need m >= 2");
  FockState vac = FockState::vacuum(gs);
  FockState w = virasoro(gs, m, virasoro(gs, -m, vac));
  w -= virasoro(gs, -m, virasoro(gs, m, vac));
  w -= virasoro(gs, 0, vac) * Scalar(2L * m);
  for (const auto& [mono, c] : w.terms())
    if (!mono.empty()) throw error("central_term_ratio: commutator is not a multiple of vacuum");
  Scalar lam = Scalar(0);
  auto it = w.terms().find(FockMono{});
  if (it != w.terms().end()) lam = it->second;
  long denom = static_cast<long>(m) * m * m - m;
  return lam.rat() * 12 / denom;
}

}  // namespace chw
