#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "doctest.h"
#include "mltt/bidir.hpp"
#include "mltt/conv_typed.hpp"
#include "mltt/conv_untyped.hpp"
#include "mltt/declarative.hpp"
#include "mltt/derive.hpp"

using namespace mltt;

namespace {

const Term N = Term::nat();
const Term U = Term::univ();
Term V(std::size_t i) { return Term::var(i); }

Judgment judgment(JudgmentKind k, Context g, std::vector<Term> terms) {
  Judgment j;
  j.kind = k;
  j.ctx = std::move(g);
  j.terms = std::move(terms);
  return j;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<FixtureRoot> roots() {
  auto r = parse_fixture_roots(slurp(std::filesystem::path(MLTT_FIXTURE_DIR) / "roots.txt"));
  if (auto* e = std::get_if<ParseError>(&r)) FAIL(std::string(e->what()));
  return std::get<0>(r);
}

std::vector<Derivation> corpus() {
  std::vector<Derivation> out;
  for (const auto& entry : std::filesystem::directory_iterator(std::filesystem::path(MLTT_FIXTURE_DIR) / "derivations")) {
    auto r = parse_derivations(slurp(entry.path()));
    if (auto* e = std::get_if<ParseError>(&r)) FAIL(entry.path().string() << ": " << e->what());
    for (auto& d : std::get<0>(r)) out.push_back(std::move(d));
  }
  return out;
}

void each_node(const Derivation& d, const std::function<void(const Derivation&)>& f) {
  f(d);
  for (const auto& p : d.premises) each_node(p, f);
}

// The Var example: [Nat] |- Var 0 : Nat from |- [Nat].
Derivation var_example() {
  const Context g{N};
  Derivation nat{"NatTy", judgment(JudgmentKind::TyWf, {}, {N}), {{"CtxEmpty", judgment(JudgmentKind::CtxWf, {}, {}), {}}}};
  Derivation ctx{"CtxExt", judgment(JudgmentKind::CtxWf, g, {}), {{"CtxEmpty", judgment(JudgmentKind::CtxWf, {}, {}), {}}, nat}};
  return {"Var", judgment(JudgmentKind::Typed, g, {V(0), N}), {ctx}};
}

Derivation eta_example() {
  const Term nn = Term::pi(N, N);
  const Context g{nn};
  Derivation typed = derive_check(g, V(0), nn);
  return {"EtaFun", judgment(JudgmentKind::ConvTm, g, {nn, V(0), Term::lam(N, Term::app(V(1), V(0)))}), {typed}};
}

}  // namespace

TEST_CASE("validate: examples") {
  CHECK(validate(var_example()).accepted());

  Derivation wrong = var_example();
  wrong.conclusion.terms[1] = U;
  auto r = validate(wrong);
  REQUIRE(r.rejected());
  CHECK(r.reason().path == std::vector<std::string>{"Var"});

  CHECK(validate(eta_example()).accepted());

  // Changing B in the eta node.
  Derivation eta = eta_example();
  eta.conclusion.terms[0] = Term::pi(N, U);
  CHECK(validate(eta).rejected());

  // The index bump of the Var example.
  Derivation bumped = var_example();
  bumped.conclusion.terms[0] = V(1);
  CHECK(validate(bumped).rejected());
}

TEST_CASE("validate: rejects bad shapes with a path") {
  Derivation d = var_example();
  d.premises.clear();
  CHECK(validate(d).rejected());

  d = var_example();
  d.rule = "NoSuchRule";
  CHECK(validate(d).rejected());

  // A bad node below the root is located by the path.
  d = var_example();
  d.premises[0].premises[1].conclusion.terms[0] = Term::empty();
  auto r = validate(d);
  REQUIRE(r.rejected());
  CHECK(r.reason().path == std::vector<std::string>{"Var", "0:CtxExt"});

  // Terms must be scoped in their context.
  d = var_example();
  d.conclusion.terms[0] = V(3);
  CHECK(validate(d).rejected());
}

TEST_CASE("validate: reduction side conditions") {
  const Term id_app = Term::app(Term::lam(N, V(0)), Term::zero());
  CHECK(validate({"Red", judgment(JudgmentKind::Red, {}, {id_app, Term::zero()}), {}}).accepted());
  CHECK(validate({"Red", judgment(JudgmentKind::Red, {}, {id_app, id_app}), {}}).accepted());
  CHECK(validate({"Red", judgment(JudgmentKind::Red, {}, {Term::zero(), id_app}), {}}).rejected());
  // Reduction is weak-head: no reduction under succ.
  CHECK(validate({"Red", judgment(JudgmentKind::Red, {}, {Term::succ(id_app), Term::numeral(1)}), {}}).rejected());
}

TEST_CASE("rule catalog") {
  std::set<std::string> names;
  for (const auto& r : rule_catalog()) {
    CHECK(names.insert(r.name).second);
    CHECK(find_rule(r.name) == &r);
  }
  CHECK(find_rule("Var")->premises == 1);
  CHECK(find_rule("SigCong")->reconstructed);
  CHECK_FALSE(find_rule("FunCong")->reconstructed);
}

TEST_CASE("derivation text round-trip") {
  for (const Derivation& d : {var_example(), eta_example()}) {
    const std::string text = print_derivation(d);
    auto r = parse_derivations(text);
    REQUIRE(std::holds_alternative<std::vector<Derivation>>(r));
    const auto& ds = std::get<0>(r);
    REQUIRE(ds.size() == 1);
    CHECK(print_derivation(ds[0]) == text);
    CHECK(validate(ds[0]).accepted());
  }
  auto bad = parse_derivations("(Var (typed (x : Nat) |- x : Nat)");
  CHECK(std::holds_alternative<ParseError>(bad));
}

TEST_CASE("fixture roots derive to valid trees") {
  const auto rs = roots();
  for (const auto& r : rs) {
    CAPTURE(r.rule);
    Derivation d;
    try {
      d = derive_by_rule(r.rule, r.conclusion, r.extra);
    } catch (const DeriveError& e) {
      FAIL_CHECK(std::string(e.what()));
      continue;
    }
    auto v = validate(d);
    if (v.rejected()) {
      std::string path;
      for (const auto& p : v.reason().path) path += p + " / ";
      FAIL_CHECK(path << v.reason().message);
    }
  }
}

TEST_CASE("fixture corpus: regenerated files match") {
  const auto groups = derive_roots(roots());
  for (const auto& [rule, ds] : groups) {
    std::string text;
    for (const auto& d : ds) text += print_derivation(d) + "\n\n";
    CAPTURE(rule);
    CHECK(slurp(std::filesystem::path(MLTT_FIXTURE_DIR) / "derivations" / (rule + ".drv")) == text);
  }
}

TEST_CASE("fixture corpus: every rule, validated") {
  const auto ds = corpus();
  std::map<std::string, std::size_t> roots_per_rule, trees_per_rule;
  for (const auto& d : ds) {
    auto v = validate(d);
    CAPTURE(d.rule);
    CHECK(v.accepted());
    ++roots_per_rule[d.rule];
    std::set<std::string> used;
    each_node(d, [&](const Derivation& n) { used.insert(n.rule); });
    for (const auto& r : used) ++trees_per_rule[r];
  }
  for (const auto& r : rule_catalog()) {
    CAPTURE(r.name);
    CHECK(roots_per_rule[r.name] >= 1);
    CHECK(trees_per_rule[r.name] >= 2);
  }
}

TEST_CASE("fixture corpus: mutations are rejected") {
  const auto ds = corpus();
  std::size_t total = 0, rejected = 0;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const Derivation m = mutate(ds[i], seed * 7919 + i);
      ++total;
      if (!validate(m).accepted()) ++rejected;
    }
  }
  MESSAGE("mutations rejected: " << rejected << " / " << total);
  CHECK(rejected * 100 >= total * 95);
}

TEST_CASE("fixture corpus: algorithms agree with the derivations") {
  constexpr std::uint64_t fuel = 1'000'000;
  std::size_t typed_nodes = 0, conv_nodes = 0;
  for (const auto& d : corpus()) {
    each_node(d, [&](const Derivation& n) {
      const Judgment& j = n.conclusion;
      if (j.kind == JudgmentKind::Typed) {
        ++typed_nodes;
        CAPTURE(print_judgment(j));
        CHECK(check(j.ctx, j.terms[0], j.terms[1], typed_backend(), fuel).accepted());
        CHECK(check(j.ctx, j.terms[0], j.terms[1], untyped_backend(), fuel).accepted());
      } else if (j.kind == JudgmentKind::ConvTm) {
        ++conv_nodes;
        CAPTURE(print_judgment(j));
        CHECK(conv_tm(j.ctx, j.terms[0], j.terms[1], j.terms[2], fuel).accepted());
        CHECK(uconv(j.terms[1], j.terms[2], fuel).accepted());
      }
    });
  }
  CHECK(typed_nodes > 100);
  CHECK(conv_nodes > 50);
}
