#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <string_view>

#include "mltt/declarative.hpp"

namespace mltt {

struct DeriveError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Builders of declarative derivations, used to produce the fixture corpus.
// Each follows the shape of its input and throws DeriveError when the
// judgment is not derivable that way. Conversions are assembled from explicit
// one-step reductions chained with Trans and Sym, eta steps and congruences.

Derivation derive(const Judgment& j);

Derivation derive_ctx(const Context& g);
Derivation derive_ty(const Context& g, const Term& ty);
// Concludes g |- t : T for the type T that the typing rules produce.
Derivation derive_infer(const Context& g, const Term& t);
Derivation derive_check(const Context& g, const Term& t, const Term& ty);
Derivation derive_convty(const Context& g, const Term& a, const Term& b);
Derivation derive_convtm(const Context& g, const Term& ty, const Term& t, const Term& u);

// A node of `rule` concluding `conclusion`, its premises derived by the
// builders. `extra` binds the metavariables occurring only in premises.
Derivation derive_by_rule(std::string_view rule, const Judgment& conclusion,
                          const std::map<std::string, Term>& extra = {});

// A hand-chosen fixture root: the rule and conclusion of the root node and
// the premise-only metavariables. Text format, one or more of
//   Rule (conclusion) [Name x* := expr]*
// where the binders x* extend the conclusion's context for that expression.
struct FixtureRoot {
  std::string rule;
  Judgment conclusion;
  std::map<std::string, Term> extra;
};

ParseResult<std::vector<FixtureRoot>> parse_fixture_roots(std::string_view text);

// Derives every root, grouped by root rule in input order. A failure is
// reported as a DeriveError naming the root.
std::map<std::string, std::vector<Derivation>> derive_roots(const std::vector<FixtureRoot>& roots);

}  // namespace mltt
