#include <random>

#include "doctest.h"
#include "mltt/reduction.hpp"
#include "oracle.hpp"
#include "random_terms.hpp"

using namespace mltt;

namespace {
const Term N = Term::nat();
const Term Z = Term::zero();
Term V(std::size_t i) { return Term::var(i); }
Term omega() {
  const Term delta = Term::lam(N, Term::app(V(0), V(0)));
  return Term::app(delta, delta);
}
}  // namespace

TEST_CASE("step examples") {
  CHECK(step(Term::app(Term::lam(N, V(0)), Z)) == Z);
  CHECK(step(Term::nat_elim(N, Z, Term::succ(V(1)), Z)) == Z);
  CHECK_FALSE(step(V(3)).has_value());
  const Term p = Term::pair(N, N, Z, Term::succ(Z));
  CHECK(step(Term::fst(p)) == Z);
  CHECK(step(Term::snd(p)) == Term::succ(Z));
  CHECK(step(Term::id_elim(N, Z, N, Term::succ(Z), Term::refl(N, Z))) == Term::succ(Z));
  // Head congruence.
  CHECK(step(Term::app(Term::app(Term::lam(N, Term::lam(N, V(1))), Z), V(4))) ==
        Term::app(Term::lam(N, Z), V(4)));
}

TEST_CASE("whnf examples") {
  CHECK(whnf(Z, 0).value() == Z);
  // Hand-run chain: betaSucc gives (succ x)[x := zero, y := rec] = succ zero.
  const Term plus = Term::nat_elim(N, Z, Term::succ(V(1)), Term::succ(Z));
  const Term after_succ = oracle::subst1(oracle::subst1(Term::succ(V(1)), Term::nat_elim(N, Z, Term::succ(V(1)), Z)), Z);
  CHECK(after_succ == Term::succ(Z));
  CHECK(whnf(plus, 100).value() == after_succ);
  CHECK(whnf(omega(), 10).out_of_fuel());
  CHECK(machine_whnf(omega(), 10).out_of_fuel());
}

TEST_CASE("machine_whnf examples") {
  CHECK(machine_whnf(Term::fst(Term::pair(N, N, Z, Term::succ(Z))), 10).value() == Z);
  CHECK(machine_whnf(V(0), 1).value() == V(0));
}

TEST_CASE("decompose and plug round-trip") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 1000; ++i) {
    const Term t = testgen::raw_term(rng, 3, 5);
    const Decomposed d = decompose(t);
    REQUIRE(plug(d.head, d.stack) == t);
    const Decomposed again = decompose(plug(d.head, d.stack));
    REQUIRE(again.head == d.head);
    REQUIRE(again.stack == d.stack);
  }
}

TEST_CASE("whnf properties on random terms") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 1000; ++i) {
    const Term t = testgen::raw_term(rng, 3, 5);
    REQUIRE(step(t) == step(t));
    if (classify(t) != Class::NotWhnf) REQUIRE_FALSE(step(t).has_value());
    if (step(t)) REQUIRE(classify(t) == Class::NotWhnf);
    Session a(200);
    auto w = whnf(a, t);
    Session b(200);
    auto m = machine_whnf(b, t);
    REQUIRE(w.verdict() == m.verdict());
    if (!w.accepted()) continue;
    REQUIRE(m.value() == w.value());
    REQUIRE(a.used() == b.used());
    REQUIRE(whnf(w.value(), 0).value() == w.value());
    REQUIRE(whnf(t, a.used()).value() == w.value());
    REQUIRE(whnf(t, a.used() + 17).value() == w.value());
    if (a.used() > 0) REQUIRE(whnf(t, a.used() - 1).out_of_fuel());
  }
}
