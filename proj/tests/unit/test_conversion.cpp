#include <string>
#include <vector>

#include "doctest.h"
#include "mltt/conv_typed.hpp"
#include "mltt/conv_untyped.hpp"

using namespace mltt;

namespace {
const Term N = Term::nat();
const Term Z = Term::zero();
const Term U = Term::univ();
Term V(std::size_t i) { return Term::var(i); }
Term arrow(Term a, Term b) { return Term::pi(std::move(a), shift(b)); }

std::vector<std::string> traced(std::uint64_t fuel, const std::function<void(Session&)>& run) {
  std::vector<std::string> out;
  Session s(fuel, [&](std::string_view rule, std::size_t) { out.emplace_back(rule); });
  run(s);
  return out;
}

std::vector<std::string> without(std::vector<std::string> v, const std::string& drop) {
  std::erase(v, drop);
  return v;
}
}  // namespace

TEST_CASE("conv_ty examples") {
  CHECK(conv_ty({}, N, N, 10).accepted());
  const auto r = conv_ty({}, Term::pi(N, N), N, 10);
  REQUIRE(r.rejected());
  CHECK_FALSE(r.reason().path.empty());
  CHECK(conv_ty({}, Term::app(Term::lam(U, V(0)), N), N, 10).accepted());
}

TEST_CASE("conv_ty_red examples") {
  CHECK(conv_ty_red({}, U, U, 1).accepted());
  CHECK(conv_ty_red({}, Term::sig(N, N), Term::pi(N, N), 1).rejected());
  const auto trace = traced(5, [](Session& s) { REQUIRE(conv_ty_red(s, {U}, V(0), V(0)).accepted()); });
  CHECK(trace == std::vector<std::string>{"NeuTy", "NVar"});
}

TEST_CASE("conv_tm examples") {
  CHECK(conv_tm({N}, N, V(0), V(0), 10).accepted());
  CHECK(conv_tm({}, N, Z, Term::succ(Z), 10).rejected());
  CHECK(conv_tm({}, arrow(N, N), Term::lam(N, V(0)), Term::lam(N, Term::succ(V(0))), 50).rejected());
}

TEST_CASE("conv_tm_red examples") {
  const Term nn = arrow(N, N);
  const auto trace = traced(20, [&](Session& s) { REQUIRE(conv_tm_red(s, {nn}, nn, V(0), V(0)).accepted()); });
  // NRed is the reduction wrapper around the head comparison of NApp.
  CHECK(without(trace, "NRed") ==
        std::vector<std::string>{"FunExp", "TTmRed", "NePos", "NApp", "NVar", "TTmRed", "NePos", "NVar"});
  CHECK(conv_tm_red({}, Term::id(N, Z, Z), Term::refl(N, Z), Term::refl(N, Term::succ(Z)), 5).accepted());
  CHECK(conv_tm_red({}, N, Z, Z, 1).accepted());
}

TEST_CASE("conv_neu examples") {
  CHECK(conv_neu({N}, V(0), V(0), 1).value() == N);
  CHECK(conv_neu({N, N}, V(0), V(1), 1).rejected());
  CHECK(conv_neu({arrow(N, N), N}, Term::app(V(1), V(0)), Term::app(V(1), V(0)), 10).value() == N);
  CHECK(conv_neu_red({arrow(N, N)}, V(0), V(0), 5).value() == arrow(N, N));
  CHECK(conv_neu_red({Term::app(Term::lam(U, V(0)), N)}, V(0), V(0), 5).value() == N);
  CHECK(conv_neu_red({N, N}, V(0), V(1), 5).rejected());
}

TEST_CASE("uconv examples") {
  CHECK(uconv(Z, Z, 1).accepted());
  CHECK(uconv(Term::app(Term::lam(N, V(0)), Z), Z, 10).accepted());
  CHECK(uconv(Z, Term::succ(Z), 5).rejected());
  CHECK(uconv_red(Term::lam(N, V(0)), Term::lam(U, V(0)), 5).accepted());
  const auto trace =
      traced(20, [](Session& s) { REQUIRE(uconv_red(s, Term::lam(N, Term::app(V(1), V(0))), V(0)).accepted()); });
  CHECK(trace.front() == "CLamNe");
  CHECK(std::find(trace.begin(), trace.end(), "NeuNeu") != trace.end());
  const auto vv = traced(2, [](Session& s) { REQUIRE(uconv_red(s, V(0), V(0)).accepted()); });
  CHECK(vv == std::vector<std::string>{"NeuNeu", "UVar"});
  CHECK(uconv_neu(V(3), V(3), 1).accepted());
  CHECK(uconv_neu(V(0), V(1), 1).rejected());
  CHECK(uconv_neu(Term::fst(V(0)), Term::snd(V(0)), 2).rejected());
}

TEST_CASE("no eta between two distinct neutrals") {
  const Term nn = arrow(N, N);
  CHECK(uconv(V(0), V(1), 100).rejected());
  CHECK(conv_tm({nn, nn}, nn, V(0), V(1), 100).rejected());
  const auto trace = traced(100, [](Session& s) { REQUIRE(uconv(s, V(0), V(0)).accepted()); });
  CHECK(std::find(trace.begin(), trace.end(), "CLamNe") == trace.end());
  CHECK(std::find(trace.begin(), trace.end(), "CNeLam") == trace.end());
}

TEST_CASE("eta at pairs") {
  const Term sig = Term::sig(N, N);
  const Term p = V(0);
  const Term expanded = Term::pair(N, N, Term::fst(p), Term::snd(p));
  CHECK(conv_tm({sig}, sig, p, expanded, 100).accepted());
  CHECK(uconv(p, expanded, 100).accepted());
  CHECK(uconv(expanded, p, 100).accepted());
}
