#include "doctest.h"
#include "mltt/bidir.hpp"
#include "mltt/conv_typed.hpp"
#include "mltt/reduction.hpp"

using namespace mltt;

namespace {
const Term N = Term::nat();
const Term Z = Term::zero();
const Term U = Term::univ();
Term V(std::size_t i) { return Term::var(i); }
Term arrow(Term a, Term b) { return Term::pi(std::move(a), shift(b)); }
}  // namespace

TEST_CASE_TEMPLATE_DEFINE("bidir examples", B, bidir_examples) {
  const B conv;
  CHECK(infer({N}, V(0), conv, 5).value() == N);
  CHECK(infer({}, Term::lam(N, Term::succ(V(0))), conv, 20).value() == arrow(N, N));
  CHECK(infer({}, Term::app(Z, Z), conv, 10).rejected());

  CHECK(infer_red({Term::app(Term::lam(U, V(0)), N)}, V(0), conv, 10).value() == N);
  CHECK(infer_red({}, Z, conv, 2).value() == N);
  CHECK(infer_red({}, Term::succ(Term::lam(N, V(0))), conv, 10).rejected());

  CHECK(check({}, Z, N, conv, 5).accepted());
  CHECK(check({}, Z, arrow(N, N), conv, 10).rejected());
  // The codomain (\A:U. Nat) zero reduces to Nat.
  const Term cod = Term::app(Term::lam(U, N), Z);
  CHECK(whnf(cod, 10).value() == N);
  CHECK(check({}, Term::lam(N, V(0)), Term::pi(N, shift(cod)), conv, 50).accepted());

  CHECK(check_ty({}, arrow(N, U), conv, 10).accepted());
  CHECK(check_ty({}, Z, conv, 10).rejected());
  CHECK(check_ty({arrow(N, U)}, Term::app(V(0), Z), conv, 10).accepted());

  CHECK(check_ctx({}, conv, 1).accepted());
  CHECK(check_ctx({U, V(0)}, conv, 10).accepted());
  const auto bad = check_ctx({Z}, conv, 5);
  REQUIRE(bad.rejected());
  CHECK(bad.reason().message.rfind("context entry 0", 0) == 0);
}

TEST_CASE_TEMPLATE_INVOKE(bidir_examples, TypedBackend, UntypedBackend);

TEST_CASE("check rejections name the failing stage") {
  const auto inf = check({}, Term::app(Z, Z), N, typed_backend(), 10);
  REQUIRE(inf.rejected());
  CHECK(inf.reason().message.rfind("inference: ", 0) == 0);
  const auto cnv = check({}, Z, arrow(N, N), typed_backend(), 10);
  REQUIRE(cnv.rejected());
  CHECK(cnv.reason().message.rfind("conversion: ", 0) == 0);
}

TEST_CASE("eliminator typing") {
  const auto& conv = typed_backend();
  // natrec (x. Nat) zero (x y. succ y) : Nat -> Nat applied to a variable.
  const Term add = Term::nat_elim(N, Z, Term::succ(V(0)), V(0));
  CHECK(infer({N}, add, conv, 100).value() == N);
  // Dependent motive: natrec (x. Id Nat x x) (refl Nat zero) (x y. refl Nat (succ x)) n.
  const Term motive = Term::id(N, V(0), V(0));
  const Term rec = Term::nat_elim(motive, Term::refl(N, Z), Term::refl(N, Term::succ(V(1))), V(0));
  CHECK(infer({N}, rec, conv, 200).value() == Term::id(N, V(0), V(0)));
  // idrec Nat zero (x e. Nat) zero (refl Nat zero) : Nat.
  const Term j = Term::id_elim(N, Z, N, Z, Term::refl(N, Z));
  CHECK(infer({}, j, conv, 200).value() == N);
  // The scrutinee must start at the annotated point.
  const Term wrong = Term::id_elim(N, Term::succ(Z), N, Z, Term::refl(N, Z));
  CHECK(infer({}, wrong, conv, 200).rejected());
  // emptyrec (x. Nat) e : Nat.
  CHECK(infer({Term::empty()}, Term::empty_elim(N, V(0)), conv, 50).value() == N);
  // Projections.
  const Term sig = Term::sig(N, Term::id(N, V(0), V(0)));
  CHECK(infer({sig}, Term::snd(V(0)), conv, 50).value() == Term::id(N, Term::fst(V(0)), Term::fst(V(0))));
  const Term pair = Term::pair(N, Term::id(N, V(0), V(0)), Z, Term::refl(N, Z));
  CHECK(infer({}, pair, conv, 100).value() == sig);
  CHECK(infer({}, U, conv, 10).rejected());
}

TEST_CASE("preconditions") {
  CHECK(precondition_conv_tm({N}, N, V(0), Z, 100).accepted());
  const auto r = precondition_conv_tm({}, N, Z, Term::lam(N, V(0)), 100);
  REQUIRE(r.rejected());
  CHECK(r.reason().message.rfind("precondition", 0) == 0);
  CHECK(precondition_conv_ty({}, N, Z, 100).rejected());
}
