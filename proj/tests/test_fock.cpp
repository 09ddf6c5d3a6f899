#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "chw/fock.hpp"
#include "doctest.h"

using namespace chw;

namespace {

FockState random_state(const GeneratorSet& gs, std::mt19937& rng, int max_terms = 3,
                       int max_factors = 3, int max_depth = 3) {
  std::uniform_int_distribution<int> nt(1, max_terms), nf(0, max_factors);
  std::uniform_int_distribution<int> gen(0, gs.size() - 1), dep(1, max_depth), cf(-4, 4);
  FockState s(gs);
  int terms = nt(rng);
  for (int t = 0; t < terms; ++t) {
    FockMono m;
    int fac = nf(rng);
    for (int f = 0; f < fac; ++f) m.push_back({gen(rng), -dep(rng)});
    int c = cf(rng);
    if (c) s.add_term(std::move(m), Scalar(c));
  }
  return s;
}

Rational free_pair_central_charge(const Rational& alpha, bool odd) {
  Rational c = 2 * (6 * alpha * alpha - 6 * alpha + 1);
  return odd ? -c : c;
}

}  // namespace

TEST_CASE("generator sets validate") {
  GeneratorSet bg = GeneratorSet::beta_gamma(Rational(1, 3));
  CHECK_NOTHROW(bg.validate());
  CHECK(bg.pairing(1, 0) == 1);
  CHECK(bg.pairing(0, 1) == -1);

  GeneratorSet bc = GeneratorSet::beta_gamma(Rational(2), true, "b", "c");
  CHECK_NOTHROW(bc.validate());
  CHECK(bc.pairing(0, 1) == 1);

  GeneratorSet sp = GeneratorSet::symplectic_pair();
  CHECK_NOTHROW(sp.validate());
  CHECK(sp.alpha(0) == Rational(1, 2));

  GeneratorSet bad;
  CHECK_THROWS_WITH_AS(
      bad.add_symplectic({"x", "y"}, {{Rational(0), Rational(1)}, {Rational(1), Rational(0)}}),
      doctest::Contains("antisymmetric"), error);
}

TEST_CASE("monomial canonicalization and parity") {
  GeneratorSet bc = GeneratorSet::beta_gamma(Rational(1, 2), true, "b", "c");
  FockState s(bc);
  s.add_term({{1, -1}, {0, -1}}, Scalar(1));
  FockState t(bc);
  t.add_term({{0, -1}, {1, -1}}, Scalar(-1));
  CHECK(s == t);

  FockState sq(bc);
  sq.add_term({{0, -1}, {0, -1}}, Scalar(1));
  CHECK(sq.is_zero());

  GeneratorSet bg = GeneratorSet::beta_gamma(Rational(1, 2));
  FockState ev(bg);
  ev.add_term({{1, -1}, {0, -1}}, Scalar(1));
  FockState ev2(bg);
  ev2.add_term({{0, -1}, {1, -1}}, Scalar(1));
  CHECK(ev == ev2);
}

TEST_CASE("mode commutation relations") {
  std::mt19937 rng(7);
  for (bool odd : {false, true}) {
    GeneratorSet gs = GeneratorSet::beta_gamma(Rational(1, 3), odd);
    for (int trial = 0; trial < 20; ++trial) {
      FockState v = random_state(gs, rng);
      std::uniform_int_distribution<int> md(-3, 2), gen(0, 1);
      int a = gen(rng), b = gen(rng), m = md(rng), n = md(rng);
      FockState lhs = v.apply_mode(b, n).apply_mode(a, m);
      FockState rhs = v.apply_mode(a, m).apply_mode(b, n);
      if (odd)
        lhs += rhs;
      else
        lhs -= rhs;
      FockState expect(gs);
      if (m + n + 1 == 0) expect = v * Scalar(gs.pairing(a, b));
      CHECK(lhs == expect);
    }
  }
}

TEST_CASE("vacuum and single modes through state_mode") {
  GeneratorSet gs = GeneratorSet::beta_gamma(Rational(1, 3));
  std::mt19937 rng(11);
  FockState v = random_state(gs, rng);
  FockState vac = FockState::vacuum(gs);
  CHECK(state_mode(vac, -1, v) == v);
  CHECK(state_mode(vac, 0, v).is_zero());
  CHECK(state_mode(vac, -2, v).is_zero());

  FockState a = FockState::monomial(gs, {{0, -1}});
  for (int n = -3; n <= 2; ++n) CHECK(state_mode(a, n, v) == v.apply_mode(0, n));
}

TEST_CASE("translation covariance of state modes") {
  std::mt19937 rng(13);
  for (bool odd : {false, true}) {
    GeneratorSet gs = GeneratorSet::beta_gamma(Rational(2, 5), odd);
    for (int trial = 0; trial < 10; ++trial) {
      FockState u = random_state(gs, rng, 2, 2, 2);
      FockState v = random_state(gs, rng);
      for (int n = -2; n <= 2; ++n) {
        FockState lhs = state_mode(u.translated(), n, v);
        FockState rhs = state_mode(u, n - 1, v) * Scalar(-n);
        CHECK(lhs == rhs);
      }
    }
  }
}

TEST_CASE("stress modes grade by conformal weight") {
  std::mt19937 rng(17);
  std::vector<GeneratorSet> algs;
  algs.push_back(GeneratorSet::beta_gamma(Rational(1, 3)));
  algs.push_back(GeneratorSet::beta_gamma(Rational(2), true, "b", "c"));
  algs.push_back(GeneratorSet::symplectic_pair());
  for (const auto& gs : algs) {
    for (int g = 0; g < gs.size(); ++g)
      for (int d = 1; d <= 3; ++d) {
        FockState v = FockState::monomial(gs, {{g, -d}});
        Rational w;
        REQUIRE(v.homogeneous_weight(w));
        CHECK(virasoro(gs, 0, v) == v * Scalar(w));
      }
    for (int trial = 0; trial < 5; ++trial) {
      FockMono m;
      std::uniform_int_distribution<int> gen(0, gs.size() - 1), dep(1, 3);
      for (int f = 0; f < 3; ++f) m.push_back({gen(rng), -dep(rng)});
      FockState v = FockState::monomial(gs, m);
      if (v.is_zero()) continue;
      Rational w;
      REQUIRE(v.homogeneous_weight(w));
      CHECK(virasoro(gs, 0, v) == v * Scalar(w));
    }
  }
}

TEST_CASE("stress implements translation at mode -1") {
  std::mt19937 rng(19);
  std::vector<GeneratorSet> algs;
  algs.push_back(GeneratorSet::beta_gamma(Rational(1, 3)));
  algs.push_back(GeneratorSet::beta_gamma(Rational(1, 2), true, "b", "c"));
  algs.push_back(GeneratorSet::symplectic_pair());
  for (const auto& gs : algs)
    for (int trial = 0; trial < 8; ++trial) {
      FockState v = random_state(gs, rng);
      CHECK(virasoro(gs, -1, v) == v.translated());
    }
}

TEST_CASE("stress vacuum annihilation and state") {
  GeneratorSet gs = GeneratorSet::beta_gamma(Rational(1, 3));
  FockState vac = FockState::vacuum(gs);
  for (int n = -1; n <= 3; ++n) CHECK(virasoro(gs, n, vac).is_zero());
  CHECK(virasoro(gs, -2, vac) == gs.stress());
}

TEST_CASE("virasoro closure with central term") {
  std::mt19937 rng(23);
  std::vector<GeneratorSet> algs;
  algs.push_back(GeneratorSet::beta_gamma(Rational(1, 3)));
  algs.push_back(GeneratorSet::beta_gamma(Rational(2), true, "b", "c"));
  algs.push_back(GeneratorSet::symplectic_pair());
  for (const auto& gs : algs) {
    Rational c = central_term_ratio(gs, 2);
    std::vector<std::pair<int, int>> mns = {{2, -2}, {3, -3}, {1, 1}, {2, -1}, {-2, 1}, {0, 2}};
    for (auto [m, n] : mns)
      for (int trial = 0; trial < 3; ++trial) {
        FockState v = random_state(gs, rng, 2, 2, 2);
        FockState lhs = virasoro(gs, m, virasoro(gs, n, v));
        lhs -= virasoro(gs, n, virasoro(gs, m, v));
        FockState rhs = virasoro(gs, m + n, v) * Scalar(m - n);
        if (m + n == 0) {
          long mm = m;
          rhs += v * Scalar(c * (mm * mm * mm - mm) / 12);
        }
        CHECK(lhs == rhs);
      }
  }
}

TEST_CASE("central charges of the free sectors") {
  for (int mnum = 2; mnum <= 4; ++mnum) {
    CHECK(central_term_ratio(GeneratorSet::beta_gamma(Rational(1, 3)), mnum) ==
          free_pair_central_charge(Rational(1, 3), false));
    CHECK(central_term_ratio(GeneratorSet::beta_gamma(Rational(2), true, "b", "c"), mnum) ==
          free_pair_central_charge(Rational(2), true));
    CHECK(central_term_ratio(GeneratorSet::symplectic_pair(), mnum) == Rational(-1));
  }
  CHECK(free_pair_central_charge(Rational(2), true) == Rational(-26));
  CHECK(free_pair_central_charge(Rational(1, 2), true) == Rational(1));
  CHECK(free_pair_central_charge(Rational(1), false) == Rational(2));
}

TEST_CASE("weight-one currents close on a Heisenberg algebra") {
  for (bool odd : {false, true}) {
    GeneratorSet gs = GeneratorSet::beta_gamma(Rational(1, 3), odd);
    FockState lo = FockState::monomial(gs, {{0, -1}});
    FockState hi = FockState::monomial(gs, {{1, -1}});
    Scalar qlo(odd ? -1 : 1);
    CHECK(km_mode(gs, 1, 0, 0, lo) == lo * qlo);
    CHECK(km_mode(gs, 1, 0, 0, hi) == hi * -qlo);

    std::mt19937 rng(29);
    FockState vac = FockState::vacuum(gs);
    Scalar kappa(odd ? 1 : -1);  // level of the charge current
    for (int m = 1; m <= 3; ++m) {
      FockState cvac = km_mode(gs, 1, 0, m, km_mode(gs, 1, 0, -m, vac));
      cvac -= km_mode(gs, 1, 0, -m, km_mode(gs, 1, 0, m, vac));
      CHECK(cvac == vac * (kappa * Scalar(static_cast<long>(m))));

      FockState v = random_state(gs, rng, 2, 2, 2);
      FockState comm = km_mode(gs, 1, 0, m, km_mode(gs, 1, 0, -m, v));
      comm -= km_mode(gs, 1, 0, -m, km_mode(gs, 1, 0, m, v));
      CHECK(comm == v * (kappa * Scalar(static_cast<long>(m))));
      FockState comm2 = km_mode(gs, 1, 0, m, km_mode(gs, 1, 0, m + 1, v));
      comm2 -= km_mode(gs, 1, 0, m + 1, km_mode(gs, 1, 0, m, v));
      CHECK(comm2.is_zero());
    }
  }
}

TEST_CASE("normal product concatenates with Koszul sign") {
  GeneratorSet bc = GeneratorSet::beta_gamma(Rational(1, 2), true, "b", "c");
  FockState x = FockState::monomial(bc, {{0, -1}});
  FockState y = FockState::monomial(bc, {{1, -2}});
  CHECK(normal_product(x, y) == -normal_product(y, x));
  GeneratorSet bg = GeneratorSet::beta_gamma(Rational(1, 2));
  FockState u = FockState::monomial(bg, {{0, -1}});
  FockState w = FockState::monomial(bg, {{1, -2}});
  CHECK(normal_product(u, w) == normal_product(w, u));
}
