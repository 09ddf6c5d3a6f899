#include "chw/kernel.hpp"

#include <algorithm>
#include <sstream>

namespace chw {

namespace {

using KSeries = std::vector<DiagKernel>;  // index = power of the expansion variable

KSeries kseries_mul(const KSeries& a, const KSeries& b, int trunc, int n) {
  KSeries r(trunc + 1, DiagKernel::zero(n));
  for (int i = 0; i <= trunc && i < static_cast<int>(a.size()); ++i) {
    if (a[i].is_zero()) continue;
    for (int j = 0; i + j <= trunc && j < static_cast<int>(b.size()); ++j) {
      if (b[j].is_zero()) continue;
      r[i + j] += a[i] * b[j];
    }
  }
  return r;
}

bool poly_divisible_by_var(const Poly& p, int i) {
  for (auto& [m, c] : p.terms())
    if (m[i] == 0) return false;
  return true;
}

}  // namespace

DiagKernel DiagKernel::constant(int n, const Scalar& c) {
  DiagKernel k(n);
  k.num_ = Poly::constant(n, c);
  return k;
}

DiagKernel DiagKernel::monomial(int n, const Poly& num) {
  if (num.nvars() != n) throw error("DiagKernel: numerator arity mismatch");
  DiagKernel k(n);
  k.num_ = num;
  return k;
}

DiagKernel DiagKernel::diff_power(int n, int i, int j, int e) {
  if (i == j || i < 0 || j < 0 || i >= n || j >= n)
    throw error("DiagKernel::diff_power: bad point pair");
  if (i > j) {
    DiagKernel k = diff_power(n, j, i, e);
    if (e % 2 != 0) k.num_ *= Scalar(-1);
    return k;
  }
  DiagKernel k(n);
  if (e >= 0) {
    k.num_ = (Poly::var(n, i) - Poly::var(n, j)).pow(e);
  } else {
    k.num_ = Poly::constant(n, Scalar(1));
    k.dp_[{i, j}] = -e;
  }
  return k;
}

DiagKernel DiagKernel::var_power(int n, int i, int e) {
  DiagKernel k(n);
  if (e >= 0) {
    k.num_ = Poly::var(n, i, e);
    if (e == 0) k.num_ = Poly::constant(n, Scalar(1));
  } else {
    k.num_ = Poly::constant(n, Scalar(1));
    k.vp_[i] = -e;
  }
  return k;
}

int DiagKernel::pole_order(int i, int j) const {
  auto it = dp_.find({std::min(i, j), std::max(i, j)});
  return it == dp_.end() ? 0 : it->second;
}

int DiagKernel::var_pole_order(int i) const {
  auto it = vp_.find(i);
  return it == vp_.end() ? 0 : it->second;
}

bool DiagKernel::uses_point(int i) const {
  if (num_.uses_var(i)) return true;
  if (vp_.count(i)) return true;
  for (auto& [pr, q] : dp_)
    if (pr.first == i || pr.second == i) return true;
  return false;
}

void DiagKernel::canonicalize() {
  if (num_.is_zero()) {
    dp_.clear();
    vp_.clear();
    return;
  }
  for (auto it = dp_.begin(); it != dp_.end();) {
    auto [i, j] = it->first;
    while (it->second > 0 && num_.divisible_by_diff(i, j)) {
      num_ = num_.divide_by_diff(i, j);
      --it->second;
    }
    it = it->second == 0 ? dp_.erase(it) : std::next(it);
  }
  for (auto it = vp_.begin(); it != vp_.end();) {
    while (it->second > 0 && poly_divisible_by_var(num_, it->first)) {
      num_ = num_.divide_by_var(it->first);
      --it->second;
    }
    it = it->second == 0 ? vp_.erase(it) : std::next(it);
  }
}

DiagKernel DiagKernel::operator-() const {
  DiagKernel k(*this);
  k.num_ = -k.num_;
  return k;
}

DiagKernel operator*(const DiagKernel& a, const DiagKernel& b) {
  if (a.n_ != b.n_) throw error("DiagKernel: point count mismatch in *");
  if (a.regime() != b.regime() && !a.is_zero() && !b.is_zero())
    throw error(std::string("DiagKernel: regime mismatch in '*': ") +
                regime_name(a.regime()) + " vs " + regime_name(b.regime()));
  DiagKernel r(a.n_);
  r.num_ = a.num_ * b.num_;
  r.dp_ = a.dp_;
  for (auto& [pr, q] : b.dp_) r.dp_[pr] += q;
  r.vp_ = a.vp_;
  for (auto& [i, q] : b.vp_) r.vp_[i] += q;
  r.canonicalize();
  return r;
}

DiagKernel operator+(const DiagKernel& a, const DiagKernel& b) {
  if (a.n_ != b.n_) throw error("DiagKernel: point count mismatch in +");
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.regime() != b.regime())
    throw error(std::string("DiagKernel: regime mismatch in '+': ") +
                regime_name(a.regime()) + " vs " + regime_name(b.regime()));
  DiagKernel r(a.n_);
  Poly na = a.num_, nb = b.num_;
  for (auto& [pr, q] : a.dp_) r.dp_[pr] = q;
  for (auto& [pr, q] : b.dp_) r.dp_[pr] = std::max(r.dp_[pr], q);
  for (auto& [i, q] : a.vp_) r.vp_[i] = q;
  for (auto& [i, q] : b.vp_) r.vp_[i] = std::max(r.vp_[i], q);
  for (auto& [pr, q] : r.dp_) {
    Poly f = Poly::var(a.n_, pr.first) - Poly::var(a.n_, pr.second);
    int qa = q - (a.dp_.count(pr) ? a.dp_.at(pr) : 0);
    int qb = q - (b.dp_.count(pr) ? b.dp_.at(pr) : 0);
    if (qa) na *= f.pow(qa);
    if (qb) nb *= f.pow(qb);
  }
  for (auto& [i, q] : r.vp_) {
    int qa = q - (a.vp_.count(i) ? a.vp_.at(i) : 0);
    int qb = q - (b.vp_.count(i) ? b.vp_.at(i) : 0);
    if (qa) na *= Poly::var(a.n_, i, qa);
    if (qb) nb *= Poly::var(a.n_, i, qb);
  }
  r.num_ = na + nb;
  r.canonicalize();
  return r;
}

DiagKernel operator-(const DiagKernel& a, const DiagKernel& b) { return a + (-b); }

DiagKernel& DiagKernel::operator*=(const Scalar& c) {
  num_ *= c;
  canonicalize();
  return *this;
}

DiagKernel DiagKernel::shift_diff(int i, int j, int k) const {
  return *this * diff_power(n_, i, j, k);
}

DiagKernel DiagKernel::shift_var(int i, int k) const { return *this * var_power(n_, i, k); }

bool DiagKernel::operator==(const DiagKernel& o) const {
  return n_ == o.n_ && num_ == o.num_ && dp_ == o.dp_ && vp_ == o.vp_;
}

DiagKernel DiagKernel::Laurent::at(int power) const {
  int idx = power - lead;
  if (idx < 0 || idx >= static_cast<int>(coeff.size()))
    return coeff.empty() ? DiagKernel() : DiagKernel::zero(coeff.front().npoints());
  return coeff[idx];
}

DiagKernel::Laurent DiagKernel::taylor_diag(int i, int j, int upto) const {
  if (i == j) throw error("taylor_diag: equal points");
  int p = pole_order(i, j);
  Laurent out;
  out.lead = -p;
  int trunc = upto + p;
  if (trunc < 0 || is_zero()) {
    out.coeff.assign(std::max(trunc + 1, 1), DiagKernel::zero(n_));
    return out;
  }
  Scalar overall(1);
  if (i > j && p % 2 != 0) overall = Scalar(-1);

  // numerator under z_i = z_j + t, collected by powers of t
  int nv = n_ + 1;
  std::vector<int> lift(n_);
  for (int v = 0; v < n_; ++v) lift[v] = v;
  Poly numl = num_.relabel(nv, lift);
  numl = numl.substitute(i, Poly::var(nv, j) + Poly::var(nv, n_));
  KSeries series;
  {
    auto by_t = numl.coeffs_in(n_);
    int top = 0;
    for (auto& [d, c] : by_t) top = std::max(top, d);
    series.assign(std::min(top, trunc) + 1, DiagKernel::zero(n_));
    std::vector<int> down(nv, -1);
    for (int v = 0; v < n_; ++v) down[v] = v;
    for (auto& [d, c] : by_t) {
      if (d > trunc) continue;
      series[d] = DiagKernel::monomial(n_, c.relabel(n_, down));
    }
  }

  DiagKernel rest = DiagKernel::one(n_);
  for (auto& [pr, q] : dp_) {
    auto [a, b] = pr;
    if (a != i && b != i) {
      rest.dp_[pr] += q;
      continue;
    }
    if ((a == i && b == j) || (a == j && b == i)) continue;  // the expansion factor itself
    int m = (a == i) ? b : a;
    Scalar sgn(1);
    if (b == i && q % 2 != 0) sgn = Scalar(-1);  // (z_m - z_i)^(-q) = (-1)^q (z_i - z_m)^(-q)
    KSeries f(trunc + 1, DiagKernel::zero(n_));
    for (int s = 0; s <= trunc; ++s)
      f[s] = diff_power(n_, j, m, -(q + s)) * (Scalar(binomial(-q, s)) * sgn);
    series = kseries_mul(series, f, trunc, n_);
  }
  for (auto& [v, q] : vp_) {
    if (v != i) {
      rest.vp_[v] += q;
      continue;
    }
    KSeries f(trunc + 1, DiagKernel::zero(n_));
    for (int s = 0; s <= trunc; ++s)
      f[s] = var_power(n_, j, -(q + s)) * Scalar(binomial(-q, s));
    series = kseries_mul(series, f, trunc, n_);
  }

  out.coeff.assign(trunc + 1, DiagKernel::zero(n_));
  for (int d = 0; d <= trunc && d < static_cast<int>(series.size()); ++d)
    out.coeff[d] = series[d] * rest * overall;
  return out;
}

DiagKernel DiagKernel::residue_at_zero(int i) const {
  int q = var_pole_order(i);
  if (q == 0 || is_zero()) return DiagKernel::zero(n_);
  int trunc = q - 1;
  KSeries series;
  {
    auto by_i = num_.coeffs_in(i);
    series.assign(trunc + 1, DiagKernel::zero(n_));
    for (auto& [d, c] : by_i) {
      if (d > trunc) continue;
      series[d] = DiagKernel::monomial(n_, c);
    }
  }
  DiagKernel rest = DiagKernel::one(n_);
  for (auto& [pr, r] : dp_) {
    auto [a, b] = pr;
    if (a != i && b != i) {
      rest.dp_[pr] += r;
      continue;
    }
    int m = (a == i) ? b : a;
    Scalar sgn(1);
    if (a == i && r % 2 != 0) sgn = Scalar(-1);  // (z_i - z_m)^(-r) about z_i = 0
    KSeries f(trunc + 1, DiagKernel::zero(n_));
    for (int s = 0; s <= trunc; ++s)
      f[s] = var_power(n_, m, -(r + s)) * (Scalar(binomial(r - 1 + s, s)) * sgn);
    series = kseries_mul(series, f, trunc, n_);
  }
  for (auto& [v, r] : vp_) {
    if (v == i) continue;  // the expansion pole itself
    rest.vp_[v] += r;
  }
  return series[trunc] * rest;
}

DiagKernel DiagKernel::deriv(int var) const {
  if (var < 0 || var >= n_) throw error("DiagKernel::deriv: bad variable");
  DiagKernel out = zero(n_);
  {
    DiagKernel t(*this);
    t.num_ = num_.derivative(var);
    t.canonicalize();
    out += t;
  }
  for (auto& [pr, q] : dp_) {
    if (pr.first != var && pr.second != var) continue;
    DiagKernel t(*this);
    ++t.dp_[pr];
    t.num_ *= Scalar(Rational(pr.first == var ? -q : q));
    t.canonicalize();
    out += t;
  }
  for (auto& [v, q] : vp_) {
    if (v != var) continue;
    DiagKernel t(*this);
    ++t.vp_[v];
    t.num_ *= Scalar(Rational(-q));
    t.canonicalize();
    out += t;
  }
  return out;
}

DiagKernel DiagKernel::drop_point(int i) const {
  if (uses_point(i)) throw error("DiagKernel::drop_point: point still in use");
  std::vector<int> map(n_, -1);
  for (int v = 0; v < n_; ++v) {
    if (v < i) map[v] = v;
    if (v > i) map[v] = v - 1;
  }
  DiagKernel r(n_ - 1);
  r.num_ = num_.relabel(n_ - 1, map);
  for (auto& [pr, q] : dp_) r.dp_[{map[pr.first], map[pr.second]}] = q;
  for (auto& [v, q] : vp_) r.vp_[map[v]] = q;
  return r;
}

DiagKernel DiagKernel::permute_points(const std::vector<int>& perm) const {
  if (static_cast<int>(perm.size()) != n_) throw error("permute_points: size mismatch");
  DiagKernel r(n_);
  r.num_ = num_.relabel(n_, perm);
  int flips = 0;
  for (auto& [pr, q] : dp_) {
    int a = perm[pr.first], b = perm[pr.second];
    if (a > b) {
      std::swap(a, b);
      flips += q;
    }
    r.dp_[{a, b}] += q;
  }
  for (auto& [v, q] : vp_) r.vp_[perm[v]] += q;
  if (flips % 2 != 0) r.num_ *= Scalar(-1);
  return r;
}

DiagKernel DiagKernel::extend_points(int new_n) const {
  if (new_n < n_) throw error("extend_points: shrinking");
  std::vector<int> map(n_);
  for (int v = 0; v < n_; ++v) map[v] = v;
  DiagKernel r(new_n);
  r.num_ = num_.relabel(new_n, map);
  r.dp_ = dp_;
  r.vp_ = vp_;
  return r;
}

std::string DiagKernel::str() const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool denom = !dp_.empty() || !vp_.empty();
  if (denom) os << "(";
  os << num_.str();
  if (denom) {
    os << ") / (";
    bool first = true;
    for (auto& [pr, q] : dp_) {
      if (!first) os << " ";
      first = false;
      os << "(z" << (pr.first + 1) << "-z" << (pr.second + 1) << ")";
      if (q != 1) os << "^" << q;
    }
    for (auto& [v, q] : vp_) {
      if (!first) os << " ";
      first = false;
      os << "z" << (v + 1);
      if (q != 1) os << "^" << q;
    }
    os << ")";
  }
  return os.str();
}

}  // namespace chw
