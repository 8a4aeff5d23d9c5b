#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "mltt/outcome.hpp"
#include "mltt/surface.hpp"
#include "mltt/term.hpp"

namespace mltt {

// The judgment forms of the declarative system. The starred deep
// normalisation judgments (weak-head normal inputs) have their own kinds.
enum class JudgmentKind : std::uint8_t {
  CtxWf,     // |- G
  SubstWf,   // G |- sigma : D
  TyWf,      // G |- T
  Typed,     // G |- t : T
  ConvTy,    // G |- T == T'
  ConvTm,    // G |- t == t' : A
  NeuCmp,    // G |- n ~ n' : T
  DnfTy,     // T deeply normalising
  DnfTyRed,  // T a deeply normalising whnf
  DnfTm,     // t deeply normalising at A
  DnfTmRed,  // t a deeply normalising whnf at A
  DneTm,     // n a deeply normalising neutral at T
  DneTmRed,  // the same, at the whnf S of T
  Red,       // t reduces to u in zero or more steps
};

// Surface keyword of a judgment kind: ctx, subst, type, typed, convty, conv,
// neu, dnfty, dnfty*, dnf, dnf*, dne, dne*, red.
std::string_view judgment_keyword(JudgmentKind k);

/// A judgment instance. `terms` holds, per kind:
///   TyWf, DnfTy, DnfTyRed: [T]          Typed: [t, T]
///   ConvTy: [T, T']                     ConvTm: [A, t, t']
///   NeuCmp: [n, n', T]                  DnfTm, DnfTmRed: [A, t]
///   DneTm, DneTmRed: [n, T]             Red: [t, u]
/// SubstWf uses `subst` (images, outermost variable of `delta` first) and
/// `delta`; the other kinds leave them empty.
struct Judgment {
  JudgmentKind kind = JudgmentKind::CtxWf;
  Context ctx;
  std::vector<Term> terms;
  std::vector<Term> subst;
  Context delta;

  friend bool operator==(const Judgment&, const Judgment&) = default;
};

std::size_t judgment_arity(JudgmentKind k);

struct Derivation {
  std::string rule;
  Judgment conclusion;
  std::vector<Derivation> premises;

  std::size_t size() const;
};

struct RuleInfo {
  std::string name;
  JudgmentKind conclusion;
  std::size_t premises;
  // True for the schemas the declarative system leaves implicit ("other
  // congruences") and that are reconstructed after the algorithmic rules.
  bool reconstructed;
};

const std::vector<RuleInfo>& rule_catalog();
const RuleInfo* find_rule(std::string_view name);

// Fuel for the reduction side conditions of the deep normalisation rules.
inline constexpr std::uint64_t kValidatorFuel = 1'000'000;

// Checks that every node instantiates its rule: the conclusion and the
// premises' conclusions match the rule schema under one assignment of the
// metavariables, and the side conditions hold. On Reject the path lists the
// nodes from the root to the first invalid one as "index:Rule".
ConvVerdict validate(const Derivation& d);

// Instantiates the premise judgments of `rule` for `conclusion`. The
// metavariables occurring only in premises are read from `extra`. Returns an
// error message when the conclusion does not fit the rule or a metavariable
// stays unbound.
std::variant<std::vector<Judgment>, std::string> premises_for(std::string_view rule, const Judgment& conclusion,
                                                              const std::map<std::string, Term>& extra);

// One random local edit meant to invalidate a valid derivation: change a
// term in some conclusion, change a rule name, drop a premise, or drop a
// context entry.
Derivation mutate(const Derivation& d, std::uint64_t seed);

// Fixture text format:
//   (Rule (keyword (x : A)* |- payload) child*)
// with payloads
//   ctx:          (empty)
//   subst:        [t, ...] : (y : B)*
//   type, dnfty:  T
//   typed:        t : T
//   convty:       T == T'
//   conv:         t == t' : A
//   neu:          n == n' : T
//   dnf, dne:     t : A
//   red:          t ~> u
std::string print_judgment(const Judgment& j);
std::string print_derivation(const Derivation& d);
ParseResult<std::vector<Derivation>> parse_derivations(std::string_view text);

}  // namespace mltt
