#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <functional>
#include <random>
#include <vector>

#include "chw/chiral.hpp"

using namespace chw;

namespace {

DiagKernel K1(int n, int i, int j, int e) { return DiagKernel::diff_power(n, i, j, e); }

GeneratorSet make_sp() { return GeneratorSet::symplectic_pair(); }
GeneratorSet make_bc() { return GeneratorSet::beta_gamma(Rational(2), true, "b", "c"); }
GeneratorSet make_bg() { return GeneratorSet::beta_gamma(Rational(1)); }

// all canonical creation monomials of level <= maxlev
std::vector<FockMono> level_monos(const GeneratorSet& gs, long maxlev) {
  std::vector<FockMono> out;
  FockMono cur;
  std::function<void(int, long, long)> rec = [&](int g, long k0, long rem) {
    out.push_back(cur);
    for (int g2 = g; g2 < gs.size(); ++g2) {
      long start = (g2 == g) ? k0 : 0;
      for (long k = start; k + 1 <= rem; ++k) {
        cur.push_back({g2, static_cast<int>(-k - 1)});
        rec(g2, gs.odd(g2) ? k + 1 : k, rem - k - 1);
        cur.pop_back();
      }
    }
  };
  rec(0, 0, maxlev);
  return out;
}

FockMono rand_mono(const GeneratorSet& gs, std::mt19937& rng, long maxlev) {
  std::uniform_int_distribution<long> lev(0, maxlev);
  for (;;) {
    long budget = lev(rng);
    FockMono m;
    while (budget > 0) {
      std::uniform_int_distribution<int> gd(0, gs.size() - 1);
      std::uniform_int_distribution<long> kd(0, budget - 1);
      int g = gd(rng);
      long k = kd(rng);
      m.push_back({g, static_cast<int>(-k - 1)});
      budget -= k + 1;
    }
    FockMono c = m;
    if (canonical_sort(c, gs) != 0) return m;
  }
}

DiagKernel rand_kern(int n, std::mt19937& rng, int maxpole) {
  DiagKernel k = DiagKernel::one(n);
  std::uniform_int_distribution<int> e(-1, maxpole);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) k *= DiagKernel::diff_power(n, i, j, -e(rng));
  return k;
}

ChiralSection rand_section(const GeneratorSet& gs, int n, std::mt19937& rng, long maxlev,
                           int maxpole, bool with_extras = false, int nterms = 1) {
  ChiralSection v(gs, n);
  for (int t = 0; t < nterms; ++t) {
    ChiralKey k;
    for (int p = 0; p < n; ++p) k.states.push_back(rand_mono(gs, rng, maxlev));
    k.dpow.assign(n, 0);
    k.abar = 0;
    if (with_extras) {
      std::uniform_int_distribution<int> d(0, 1);
      for (int p = 0; p < n; ++p) k.dpow[p] = d(rng);
      std::uniform_int_distribution<unsigned> ab(0, (1u << n) - 1);
      k.abar = ab(rng);
    }
    v.add_term(k, rand_kern(n, rng, maxpole));
  }
  return v;
}

// splitting applied term by term; defined on sections with no transfer
// derivatives and no symbols
ChiralSection iota_sum(const ChiralSection& w) {
  ChiralSection out(w.gens(), 2);
  for (const auto& [k, c] : w.terms()) {
    REQUIRE(k.dpow == std::vector<int>({0, 0}));
    REQUIRE(k.abar == 0u);
    out += iota(w.gens(), c, k.states[0], k.states[1]);
  }
  return out;
}

ChiralSection filter_count(const ChiralSection& w, size_t cnt, int pt) {
  ChiralSection out(w.gens(), w.npoints());
  for (const auto& [k, c] : w.terms())
    if (k.states[pt].size() == cnt) out.add_term(k, c);
  return out;
}

// radial expansion of the product of two states against a pure diagonal pole
ChiralSection ope_oracle(const GeneratorSet& gs, const FockMono& mu_, const FockMono& mv,
                         int p) {
  ChiralSection rhs(gs, 1);
  FockState us = FockState::monomial(gs, mu_);
  FockState vs = FockState::monomial(gs, mv);
  long top = p + mono_level(mu_) + mono_level(mv) + 2;
  if (top < 2) top = 2;
  for (long d = 0; d <= top; ++d) {
    FockState t = state_mode(us, d - p, vs);
    if (t.is_zero()) continue;
    rhs.add_states({t}, DiagKernel::constant(1, Scalar(Rational(1) / factorial(d))),
                   {static_cast<int>(d)}, 0);
  }
  return rhs;
}

#define CHECK_SEC_EQ(a, b)              \
  do {                                  \
    const ChiralSection& A_ = (a);      \
    const ChiralSection& B_ = (b);      \
    INFO("lhs = " << A_.str());         \
    INFO("rhs = " << B_.str());         \
    CHECK(A_ == B_);                    \
  } while (0)

}  // namespace

TEST_CASE("single-pair splitting coefficients") {
  for (auto gs : {make_sp(), make_bc(), make_bg()}) {
    for (int a = 0; a < gs.size(); ++a)
      for (int b = 0; b < gs.size(); ++b) {
        if (gs.pairing(a, b) == 0) continue;
        for (long k = 0; k <= 4; ++k)
          for (long l = 0; l <= 4; ++l) {
            FockMono at0{{a, static_cast<int>(-k - 1)}};
            FockMono at1{{b, static_cast<int>(-l - 1)}};
            ChiralSection got = iota(gs, DiagKernel::one(2), at0, at1);
            ChiralSection want(gs, 2);
            want.add_term(ChiralKey{{at0, at1}, {0, 0}, 0}, DiagKernel::one(2));
            Rational coef = gs.pairing(a, b) * binomial(k + l, k);
            if (k % 2 == 0) coef = -coef;  // (-1)^{k+1}
            want.add_term(ChiralKey{{{}, {}}, {0, 0}, 0},
                          K1(2, 0, 1, static_cast<int>(-(k + l + 1))) * Scalar(coef));
            CHECK_SEC_EQ(got, want);
            CHECK_SEC_EQ(got, wick_sing(map_c(gs, DiagKernel::one(2), at0, at1), 0, 1, -1));
          }
      }
  }
}

TEST_CASE("splitting equals the inverse contraction exponential") {
  for (auto gs : {make_sp(), make_bc(), make_bg()}) {
    auto monos = level_monos(gs, 4);
    for (const auto& m0 : monos)
      for (const auto& m1 : monos) {
        ChiralSection lhs = iota(gs, DiagKernel::one(2), m0, m1);
        ChiralSection rhs = wick_sing(map_c(gs, DiagKernel::one(2), m0, m1), 0, 1, -1);
        if (lhs != rhs) {
          CHECK_SEC_EQ(lhs, rhs);
          return;
        }
      }
    CHECK(true);
  }
}

TEST_CASE("mode transport inverts the splitting") {
  std::mt19937 rng(2024);
  for (auto gs : {make_sp(), make_bc(), make_bg()}) {
    for (int trial = 0; trial < 20; ++trial) {
      ChiralSection v = rand_section(gs, 2, rng, 3, 3);
      long N = 0;
      for (const auto& [k, c] : v.terms()) {
        long n = std::max(0, c.pole_order(0, 1)) + mono_level(k.states[0]) +
                 mono_level(k.states[1]);
        N = std::max(N, n);
      }
      ChiralSection w = iota_inverse_c(v, static_cast<int>(N));
      ChiralSection shifted(gs, 2);
      for (const auto& [k, c] : v.terms())
        shifted.add_term(k, c.shift_diff(0, 1, static_cast<int>(N)));
      CHECK_SEC_EQ(iota_sum(w), shifted);
    }
  }
  // truncation too small leaves a pole behind
  auto gs = make_sp();
  ChiralSection v = map_c(gs, DiagKernel::one(2), {{0, -1}}, {{1, -1}});
  CHECK_THROWS_WITH_AS(iota_inverse_c(v, 0), doctest::Contains("truncation"), error);
}

TEST_CASE("radially ordered expansion of a two-point product") {
  for (auto gs : {make_sp(), make_bc(), make_bg()}) {
    auto monos = level_monos(gs, 2);
    for (const auto& m0 : monos)
      for (const auto& m1 : monos)
        for (int p = -2; p <= 3; ++p) {
          ChiralSection v(gs, 2);
          v.add_term(ChiralKey{{m0, m1}, {0, 0}, 0}, K1(2, 0, 1, -p));
          ChiralSection lhs = mu_chiral(v, 0, 1);
          ChiralSection rhs = ope_oracle(gs, m0, m1, p);
          if (lhs != rhs) {
            INFO("m0 = " << FockState::monomial(gs, m0).debug_str());
            INFO("m1 = " << FockState::monomial(gs, m1).debug_str());
            INFO("p  = " << p);
            CHECK_SEC_EQ(lhs, rhs);
            return;
          }
        }
    CHECK(true);
  }
}

TEST_CASE("first-order pole of two symplectic fields") {
  auto gs = make_sp();
  FockMono e1{{0, -1}}, e2{{1, -1}};
  ChiralSection v = map_c(gs, K1(2, 0, 1, -1), e1, e2);
  ChiralSection want(gs, 1);
  FockMono both{{0, -1}, {1, -1}};
  want.add_term(ChiralKey{{both}, {0}, 0}, DiagKernel::one(1));
  want.add_term(ChiralKey{{{}}, {1}, 0}, DiagKernel::constant(1, Scalar(gs.pairing(0, 1))));
  CHECK_SEC_EQ(mu_chiral(v, 0, 1), want);
  // no pole: the product degenerates to the pairing of the two fields
  ChiralSection flat = map_c(gs, DiagKernel::one(2), e1, e2);
  ChiralSection pair_only(gs, 1);
  pair_only.add_term(ChiralKey{{{}}, {0}, 0}, DiagKernel::constant(1, Scalar(gs.pairing(0, 1))));
  CHECK_SEC_EQ(mu_chiral(flat, 0, 1), pair_only);
  CHECK(mu_chiral(ChiralSection::unit(gs, 2), 0, 1).is_zero());
}

TEST_CASE("vacuum with a simple pole reproduces the unit") {
  for (auto gs : {make_sp(), make_bc()}) {
    ChiralSection v(gs, 2);
    v.add_term(ChiralKey{{{}, {}}, {0, 0}, 0}, K1(2, 0, 1, -1));
    CHECK_SEC_EQ(mu_chiral(v, 0, 1), ChiralSection::unit(gs, 1));
    CHECK_SEC_EQ(mu_sym(v, 0, 1), ChiralSection::unit(gs, 1));
  }
}

TEST_CASE("contract-then-merge agrees with the full product") {
  std::mt19937 rng(77);
  for (auto gs : {make_sp(), make_bc()}) {
    for (int trial = 0; trial < 15; ++trial) {
      ChiralSection v2 = rand_section(gs, 2, rng, 2, 2);
      CHECK_SEC_EQ(mu_chiral(v2, 0, 1), mu_sym(wick_sing(v2, 0, 1, +1), 0, 1));
      ChiralSection v3 = rand_section(gs, 3, rng, 2, 2);
      for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
          CHECK_SEC_EQ(mu_chiral(v3, i, j), mu_sym(wick_sing(v3, i, j, +1), i, j));
    }
  }
}

TEST_CASE("product is stable under larger truncation") {
  std::mt19937 rng(5150);
  for (auto gs : {make_sp(), make_bc()}) {
    for (int trial = 0; trial < 15; ++trial) {
      ChiralSection v = rand_section(gs, 2, rng, 2, 3);
      const auto& [k, c] = *v.terms().begin();
      long N = std::max(0, c.pole_order(0, 1)) + mono_level(k.states[0]) +
               mono_level(k.states[1]);
      ChiralSection base = mu_chiral(v, 0, 1);
      for (long e = 0; e <= 3; ++e) {
        CHECK_SEC_EQ(mu_chiral_n(v, 0, 1, N + e), base);
        CHECK_SEC_EQ(mu_sym_n(v, 0, 1, N + e), mu_sym(v, 0, 1));
      }
    }
  }
}

TEST_CASE("factor-count piece of the product is the commutative one") {
  std::mt19937 rng(31415);
  for (auto gs : {make_sp(), make_bc()}) {
    for (int trial = 0; trial < 15; ++trial) {
      ChiralSection v = rand_section(gs, 2, rng, 2, 2);
      const auto& key = v.terms().begin()->first;
      size_t cnt = key.states[0].size() + key.states[1].size();
      CHECK_SEC_EQ(filter_count(mu_chiral(v, 0, 1), cnt, 0), mu_sym(v, 0, 1));
    }
  }
}

TEST_CASE("product is graded antisymmetric") {
  std::mt19937 rng(9001);
  for (auto gs : {make_sp(), make_bc(), make_bg()}) {
    for (int trial = 0; trial < 40; ++trial) {
      ChiralSection v = rand_section(gs, 2, rng, 2, 3);
      ChiralSection lhs = ghost_flip(mu_chiral(v.permuted({1, 0}), 0, 1), 0);
      ChiralSection rhs = -mu_chiral(v, 0, 1);
      if (lhs != rhs) {
        INFO("v = " << v.str());
        CHECK_SEC_EQ(lhs, rhs);
        return;
      }
    }
    CHECK(true);
  }
}

TEST_CASE("ghost basis flip is involutive") {
  std::mt19937 rng(424242);
  for (auto gs : {make_sp(), make_bc()}) {
    for (int trial = 0; trial < 10; ++trial) {
      ChiralSection w = mu_chiral(rand_section(gs, 2, rng, 2, 3), 0, 1);
      CHECK_SEC_EQ(ghost_flip(ghost_flip(w, 0), 0), w);
      ChiralSection w3 = mu_chiral(rand_section(gs, 3, rng, 2, 2), 0, 2);
      for (int pt = 0; pt < 2; ++pt)
        CHECK_SEC_EQ(ghost_flip(ghost_flip(w3, pt), pt), w3);
    }
  }
}

TEST_CASE("point reordering is a graded involution") {
  std::mt19937 rng(86);
  for (auto gs : {make_sp(), make_bc()}) {
    for (int trial = 0; trial < 10; ++trial) {
      ChiralSection v = rand_section(gs, 3, rng, 2, 2, true, 2);
      CHECK_SEC_EQ(v.permuted({1, 0, 2}).permuted({1, 0, 2}), v);
      CHECK_SEC_EQ(v.permuted({1, 2, 0}).permuted({2, 0, 1}), v);
    }
  }
}

TEST_CASE("differential squares to zero") {
  std::mt19937 rng(650000);
  auto gs_bc = make_bc();
  // at two points the differential is the product itself
  for (int trial = 0; trial < 5; ++trial) {
    ChiralSection v = rand_section(gs_bc, 2, rng, 2, 2, true, 2);
    CHECK_SEC_EQ(d_mu(v, 0, 1), mu_chiral(v, 0, 1));
    CHECK_SEC_EQ(d_mu(v), mu_chiral(v, 0, 1));
  }
  // A point hit by both merges accumulates transfer derivatives along two
  // collapse directions in a single counter, so only the counter-free part
  // of the square is independent of the merge order; it cancels exactly.
  auto dd_flat_zero = [](const ChiralSection& v) {
    ChiralSection dd = dpow_zero_part(d_mu(d_mu(v)));
    if (!dd.is_zero()) {
      INFO("v   = " << v.str());
      INFO("ddv = " << dd.str());
      CHECK(dd.is_zero());
      return false;
    }
    return true;
  };
  // exhaustive over level <= 1 words and pole orders <= 2
  {
    const auto& gs = gs_bc;
    auto mons = level_monos(gs, 1);
    bool ok = true;
    for (const auto& a : mons)
      for (const auto& b : mons)
        for (const auto& c : mons)
          for (int p01 = 0; ok && p01 <= 2; ++p01)
            for (int p02 = 0; ok && p02 <= 2; ++p02)
              for (int p12 = 0; ok && p12 <= 2; ++p12) {
                ChiralSection v(gs, 3);
                v.add_term(ChiralKey{{a, b, c}, {0, 0, 0}, 0},
                           K1(3, 0, 1, -p01) * K1(3, 0, 2, -p02) * K1(3, 1, 2, -p12));
                ok = dd_flat_zero(v);
              }
    if (ok) CHECK(true);
  }
  // random sections, all generator sets, derivative counters and symbols on
  for (auto gs : {make_sp(), make_bc(), make_bg()}) {
    for (int trial = 0; trial < 40; ++trial)
      if (!dd_flat_zero(rand_section(gs, 3, rng, 2, 3, true, 2))) return;
    CHECK(true);
  }
}

TEST_CASE("kernel-only residue extraction") {
  auto t1 = mu_omega(K1(2, 0, 1, -1), 0, 1);
  REQUIRE(t1.coeff.size() == 1);
  CHECK(t1.at(0) == DiagKernel::one(1));
  CHECK(mu_omega(DiagKernel::one(2), 0, 1).coeff.empty());
  CHECK(mu_omega(DiagKernel::one(2), 0, 1).at(0) == DiagKernel::zero(1));
  auto t2 = mu_omega(K1(2, 0, 1, -2), 0, 1);
  REQUIRE(t2.coeff.size() == 2);
  CHECK(t2.at(0) == DiagKernel::zero(1));
  CHECK(t2.at(1) == DiagKernel::one(1));
  // numerator carried through: z2/(z1-z2)^3 -> (1/2) z at the merged slot
  auto k3 = DiagKernel::monomial(2, Poly::var(2, 1)) * K1(2, 0, 1, -3);
  auto t3 = mu_omega(k3, 0, 1);
  REQUIRE(t3.coeff.size() == 3);
  CHECK(t3.at(2) == DiagKernel::monomial(1, Poly::var(1, 0)) * rat(1, 2));
  // spectator pole reslotted after the merge of 0 into 2: the anchor keeps
  // its position, so the merged point is the higher slot of the output
  auto k4 = K1(3, 0, 2, -2) * K1(3, 1, 2, -1);
  auto t4 = mu_omega(k4, 0, 2);
  REQUIRE(t4.coeff.size() == 2);
  CHECK(t4.at(1) == K1(2, 0, 1, -1));
  // merging the higher slot into the lower one keeps the survivor in place
  auto t5 = mu_omega(K1(2, 0, 1, -1), 1, 0);
  CHECK(t5.at(0) == -DiagKernel::one(1));
}

TEST_CASE("section container bookkeeping") {
  auto gs = make_bc();
  ChiralSection v(gs, 2);
  // odd square dies, reordering folds the sign into the kernel
  v.add_term(ChiralKey{{{{0, -1}, {0, -1}}, {}}, {0, 0}, 0}, DiagKernel::one(2));
  CHECK(v.is_zero());
  FockMono ba{{1, -1}, {0, -1}};  // stored reversed, canonicalizes with one swap
  v.add_term(ChiralKey{{ba, {}}, {0, 0}, 0}, DiagKernel::one(2));
  FockMono ab{{0, -1}, {1, -1}};
  ChiralSection w(gs, 2);
  w.add_term(ChiralKey{{ab, {}}, {0, 0}, 0}, -DiagKernel::one(2));
  CHECK_SEC_EQ(v, w);
  CHECK((v + w.permuted({0, 1})) != v);
  CHECK((v - v).is_zero());
  CHECK_THROWS_AS(wick_sing(v, 1, 0, +1), error);
  CHECK_THROWS_AS(mu_chiral(v, 1, 1), error);
}
