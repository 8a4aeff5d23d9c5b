#include <random>

#include "doctest.h"
#include "mltt/term.hpp"
#include "oracle.hpp"
#include "random_terms.hpp"

using namespace mltt;

namespace {
const Term N = Term::nat();
const Term Z = Term::zero();
const Term U = Term::univ();
Term V(std::size_t i) { return Term::var(i); }
}  // namespace

TEST_CASE("apply_subst examples") {
  CHECK(apply_subst(V(0), Substitution::identity()) == V(0));
  CHECK(apply_subst(Term::app(V(0), V(1)), Substitution::single(Z)) == Term::app(Z, V(0)));
  CHECK(apply_subst(Term::lam(N, V(1)), Substitution::single(Z)) == Term::lam(N, Z));
  // Same values from the reference substitution.
  CHECK(oracle::subst1(Term::app(V(0), V(1)), Z) == Term::app(Z, V(0)));
  CHECK(oracle::subst1(Term::lam(N, V(1)), Z) == Term::lam(N, Z));
}

TEST_CASE("subst1 examples") {
  CHECK(subst1(V(0), Z) == Z);
  CHECK(subst1(V(1), Z) == V(0));
  CHECK(subst1(Term::succ(V(0)), Term::succ(Z)) == Term::succ(Term::succ(Z)));
}

TEST_CASE("shift examples") {
  CHECK(shift(V(0)) == V(1));
  CHECK(shift(Term::lam(N, V(0))) == Term::lam(N, V(0)));
  CHECK(shift(Term::lam(N, V(1))) == Term::lam(N, V(2)));
  CHECK(shift(V(0)) == apply_subst(V(0), Substitution::shift_by(1)));
}

TEST_CASE("strengthen examples") {
  CHECK(strengthen(V(1)) == V(0));
  CHECK_FALSE(strengthen(V(0)).has_value());
  CHECK(strengthen(Term::app(V(2), Term::lam(N, V(0)))) == Term::app(V(1), Term::lam(N, V(0))));
}

TEST_CASE("classification examples") {
  CHECK(classify(Term::app(V(0), Z)) == Class::NeutralForm);
  CHECK(classify(Term::app(Term::lam(N, V(0)), Z)) == Class::NotWhnf);
  CHECK_FALSE(is_pos(Term::pi(N, N)));
  CHECK(is_pos(N));
  CHECK(is_pos(U));
  CHECK(is_pos(Term::empty()));
  CHECK(is_pos(Term::id(N, Z, Z)));
  CHECK(is_pos(V(0)));
  CHECK(is_canonical(Term::lam(N, V(0))));
  CHECK(is_neutral(Term::nat_elim(N, Z, V(0), V(3))));
  CHECK_FALSE(is_neutral(Term::nat_elim(N, Z, V(0), Z)));
  CHECK(is_nat_form(Term::succ(V(9))));
  CHECK(is_fun_form(V(0)));
  CHECK(is_pair_form(Term::pair(N, N, Z, Z)));
  CHECK(is_id_form(Term::refl(N, Z)));
  CHECK_FALSE(is_id_form(Z));
}

TEST_CASE("context lookup examples") {
  CHECK(Context{N}.lookup(0) == N);
  CHECK(Context{N, Term::pi(N, N)}.lookup(1) == N);
  CHECK(Context{Term::pi(V(5), N)}.lookup(0) == Term::pi(V(6), N));
  CHECK(Context{Term::pi(V(5), N)}.lookup(0) == oracle::shift(Term::pi(V(5), N), 1));
  CHECK_FALSE(Context{N}.lookup(1).has_value());
}

TEST_CASE("substitution laws on random terms") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 2000; ++i) {
    const Term t = testgen::raw_term(rng, 4, 4);
    const Substitution s = testgen::raw_subst(rng, 5, 2);
    const Substitution r = testgen::raw_subst(rng, 5, 2);
    const Substitution q = testgen::raw_subst(rng, 5, 2);
    REQUIRE(apply_subst(t, Substitution::identity()) == t);
    REQUIRE(apply_subst(apply_subst(t, s), r) == apply_subst(t, compose(s, r)));
    REQUIRE(compose(compose(s, r), q).canonical() == compose(s, compose(r, q)).canonical());
    REQUIRE(compose(Substitution::identity(), s).canonical() == s.canonical());
    REQUIRE(compose(s, Substitution::identity()).canonical() == s.canonical());
    REQUIRE(apply_subst(t, s) == oracle::apply(t, s.images, s.tail_shift));
    REQUIRE(subst1(t, s.images.empty() ? Z : s.images[0]) == oracle::subst1(t, s.images.empty() ? Z : s.images[0]));
    REQUIRE(strengthen(shift(t)) == t);
    REQUIRE(shift(t) == oracle::shift(t, 1));
  }
}

TEST_CASE("classification partitions random terms") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 2000; ++i) {
    const Term t = testgen::raw_term(rng, 3, 4);
    const int count = int(is_canonical(t)) + int(is_neutral(t)) + int(classify(t) == Class::NotWhnf);
    REQUIRE(count == 1);
    REQUIRE(is_whnf(t) == (classify(t) != Class::NotWhnf));
    if (is_pos(t)) REQUIRE(is_ty(t));
  }
}
