#include <set>
#include <string>

#include "doctest.h"
#include "mltt/bidir.hpp"
#include "mltt/harness.hpp"
#include "mltt/surface.hpp"

using namespace mltt;

namespace {
const Term N = Term::nat();
const Term Z = Term::zero();
Term V(std::size_t i) { return Term::var(i); }

bool checks_both(const Context& ctx, const Term& t, const Term& ty) {
  return check(ctx, t, ty, typed_backend(), 1'000'000).accepted() &&
         check(ctx, t, ty, untyped_backend(), 1'000'000).accepted();
}
}  // namespace

TEST_CASE("config validation") {
  GenConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.max_depth = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = GenConfig{};
  cfg.weights[static_cast<std::size_t>(Tag::Nat)] = -1;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = GenConfig{};
  for (Tag t : {Tag::Univ, Tag::Pi, Tag::Sig, Tag::Nat, Tag::Empty, Tag::Id}) {
    cfg.weights[static_cast<std::size_t>(t)] = 0;
  }
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("generator base cases") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Generator g(GenConfig{}, seed);
    CHECK(g.gen_term(Context{}, N, 0) == Z);
    const Term ty = g.gen_type(Context{}, 0, false);
    CHECK((ty == N || ty == Term::univ() || ty == Term::empty()));
  }
}

TEST_CASE("generated terms check") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    GenConfig cfg;
    cfg.seed = seed;
    const Context ctx{N};
    CHECK(checks_both(ctx, gen_term(ctx, N, cfg), N));
    Generator g(cfg, seed);
    const Instance q = g.instance();
    REQUIRE(check_ctx(q.ctx, typed_backend(), 1'000'000).accepted());
    REQUIRE(check_ty(q.ctx, q.ty, typed_backend(), 1'000'000).accepted());
    CHECK(checks_both(q.ctx, q.terms[0], q.ty));
    CHECK(checks_both(q.ctx, g.variant(q.ctx, q.ty, q.terms[0], 2), q.ty));
    CHECK(checks_both(q.ctx, g.near(q.ctx, q.ty, q.terms[0], 2), q.ty));
  }
}

TEST_CASE("generation is deterministic and varied") {
  GenConfig cfg;
  std::set<std::string> shapes;
  for (std::size_t i = 0; i < 100; ++i) {
    Generator a(cfg, query_seed(cfg.seed, i));
    Generator b(cfg, query_seed(cfg.seed, i));
    const Instance qa = a.instance();
    const Instance qb = b.instance();
    CHECK(describe(qa) == describe(qb));
    shapes.insert(describe(qa));
  }
  CHECK(shapes.size() > 80);
  CHECK(serialize(diff_run(50, cfg)) == serialize(diff_run(50, cfg)));
}

TEST_CASE("differential queries") {
  const Context ctx{Term::pi(N, N)};
  const DiffRecord same = diff_query(0, ctx, Term::pi(N, N), V(0), V(0));
  CHECK(same.typed == Verdict::Accept);
  CHECK(same.untyped == Verdict::Accept);
  const DiffRecord differ = diff_query(1, Context{}, N, Z, Term::succ(Z));
  CHECK(differ.typed == Verdict::Reject);
  CHECK(differ.untyped == Verdict::Reject);

  DiffReport report;
  tally(report, same, 0, {ctx, Term::pi(N, N), {V(0), V(0)}});
  tally(report, differ, 0, {Context{}, N, {Z, Term::succ(Z)}});
  tally(report, {2, Verdict::Accept, Verdict::OutOfFuel, 3, 10}, 0, {Context{}, N, {Z, Z}});
  tally(report, {3, Verdict::Accept, Verdict::Reject, 3, 3}, 7, {Context{}, N, {Z, Z}});
  CHECK(report.total == 4);
  CHECK(report.agreements == 2);
  CHECK(report.accepted == 1);
  CHECK(report.fuel_exhausted == 1);
  REQUIRE(report.disagreements.size() == 1);
  CHECK(report.disagreements[0].seed == 7);
  CHECK(report.total == report.agreements + report.disagreements.size() + report.fuel_exhausted);
}

TEST_CASE("diff report serialization") {
  DiffReport report;
  tally(report, diff_query(0, Context{}, N, Z, Z), 0, {Context{}, N, {Z, Z}});
  tally(report, diff_query(1, Context{}, N, Z, Term::succ(Z)), 0, {Context{}, N, {Z, Term::succ(Z)}});
  const std::string text = serialize(report);
  CHECK(text.rfind("0, Accept, Accept, ", 0) == 0);
  CHECK(text.find("\n1, Reject, Reject, ") != std::string::npos);
  CHECK(text.find("# summary {") != std::string::npos);
  CHECK(text.find("\"fuelExhausted\":0") != std::string::npos);
}

TEST_CASE("differential run mixes verdicts") {
  const DiffReport r = diff_run(300, GenConfig{});
  CHECK(r.total == 300);
  CHECK(r.disagreements.empty());
  CHECK(r.total == r.agreements + r.disagreements.size() + r.fuel_exhausted);
  CHECK(r.accepted > 100);
  CHECK(r.agreements - r.accepted > 30);
}

TEST_CASE("property suites") {
  const auto& suites = property_suites();
  for (const char* name : {"subject-reduction", "classification", "canonicity", "strengthening", "symmetry",
                           "transitivity", "weakening", "reflexivity", "fuel-monotonicity", "generator-soundness"}) {
    CHECK(std::find(suites.begin(), suites.end(), name) != suites.end());
  }
  CHECK_THROWS_AS(property_run("no-such-suite", 1, GenConfig{}), std::invalid_argument);
  for (const auto& name : suites) {
    const PropReport r = property_run(name, 60, GenConfig{});
    CHECK(r.total == 60);
    CHECK_MESSAGE(r.failures.empty(), name);
  }
}

TEST_CASE("shrinking keeps types and the failure") {
  // A property failing whenever a succ occurs; shrinks to the smallest such term.
  const Term big = Term::app(Term::lam(N, Term::succ(Term::succ(V(0)))), Term::succ(Z));
  const Instance q{Context{}, N, {big}};
  auto has_succ = [](const Instance& i) { return print(i.terms[0]).find("succ") != std::string::npos; };
  const Instance small = shrink(q, has_succ);
  CHECK(has_succ(small));
  CHECK(check(Context{}, small.terms[0], N, typed_backend(), 1000).accepted());
  CHECK(small.terms[0] == Term::succ(Z));
  CHECK(describe(small) == "|- succ zero : Nat");
}
