#include "doctest.h"
#include "mltt/normalize.hpp"
#include "mltt/reduction.hpp"
#include "oracle.hpp"

using namespace mltt;

namespace {
const Term N = Term::nat();
const Term Z = Term::zero();
const Term U = Term::univ();
Term V(std::size_t i) { return Term::var(i); }
Term arrow(Term a, Term b) { return Term::pi(std::move(a), shift(b)); }

// natrec (x. Nat) m (x y. succ y) n
Term plus(const Term& m, const Term& n) { return Term::nat_elim(N, m, Term::succ(V(0)), n); }

// Hand-run evaluation of closed natrec additions on numerals, with the
// reference substitution.
Term oracle_eval(const Term& t) {
  if (t.is(Tag::Succ)) return Term::succ(oracle_eval(t.pred()));
  if (!t.is(Tag::NatElim)) return t;
  const Term n = oracle_eval(t.scrut());
  if (n.is(Tag::Zero)) return oracle_eval(t.base());
  const Term rec = Term::nat_elim(t.motive(), t.base(), t.step(), n.pred());
  // step[x := pred, y := rec]
  return oracle_eval(oracle::subst1(oracle::subst1(t.step(), oracle::shift(rec, 1)), n.pred()));
}
}  // namespace

TEST_CASE("deep_nf_tm examples") {
  const Term nn = arrow(N, N);
  CHECK(deep_nf_tm({nn}, nn, V(0), 50).value() == Term::lam(N, Term::app(V(1), V(0))));
  const Term two = Term::numeral(2);
  const Term four = oracle_eval(plus(two, two));
  CHECK(four == Term::numeral(4));
  CHECK(deep_nf_tm({}, N, plus(two, two), 500).value() == four);
  CHECK(deep_nf_tm({}, N, Z, 1).value() == Z);
}

TEST_CASE("deep_nf_ty examples") {
  const Term dom = Term::app(Term::lam(U, N), Z);
  CHECK(whnf(dom, 5).value() == N);
  CHECK(deep_nf_ty({}, Term::pi(dom, N), 50).value() == arrow(N, N));
  CHECK(deep_nf_ty({}, U, 1).value() == U);
  CHECK(deep_nf_ty({U}, V(0), 5).value() == V(0));
}

TEST_CASE("deep_nf_ne examples") {
  const Term nn = arrow(N, N);
  auto a = deep_nf_ne({nn, N}, Term::app(V(1), V(0)), 20).value();
  CHECK(a.term == Term::app(V(1), V(0)));
  CHECK(a.type == N);
  auto b = deep_nf_ne({N}, V(0), 2).value();
  CHECK(b.term == V(0));
  CHECK(b.type == N);
  auto c = deep_nf_ne({nn}, Term::app(V(0), Term::app(Term::lam(N, V(0)), Z)), 50).value();
  CHECK(c.term == Term::app(V(0), Z));
  CHECK(c.type == N);
}

TEST_CASE("deep normal forms of pairs and identity proofs") {
  const Term sig = Term::sig(N, N);
  CHECK(deep_nf_tm({sig}, sig, V(0), 50).value() == Term::pair(N, N, Term::fst(V(0)), Term::snd(V(0))));
  const Term r = Term::refl(Term::app(Term::lam(U, V(0)), N), Z);
  CHECK(deep_nf_tm({}, Term::id(N, Z, Z), r, 50).value() == r);
  CHECK(deep_nf_ty({}, Term::id(Term::app(Term::lam(U, V(0)), N), Z, Z), 50).value() == Term::id(N, Z, Z));
}

TEST_CASE("erase_annotations") {
  CHECK(erase_annotations(Term::lam(N, V(0))) == Term::lam(U, V(0)));
  CHECK(erase_annotations(Term::refl(N, Z)) == Term::refl(U, U));
}
