#pragma once

#include <array>
#include <functional>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mltt/outcome.hpp"
#include "mltt/term.hpp"

namespace mltt {

/// Generator configuration. `weights` is indexed by Tag: type formers weight
/// the choice of types, the remaining constructors weight term shapes
/// (Var: variables and neutral spines, App: beta redexes, Fst/Snd:
/// projection redexes, NatElim/IdElim/EmptyElim: eliminator redexes and
/// spines).
struct GenConfig {
  std::uint64_t seed = 1;
  std::size_t max_depth = 4;
  std::size_t max_ctx_len = 4;
  std::array<double, kTagCount> weights = default_weights();

  static std::array<double, kTagCount> default_weights();

  // Throws std::invalid_argument unless max_depth >= 1, every weight is
  // non-negative and each syntactic class has a positive weight.
  void validate() const;
};

// Raised when generation reaches a target it cannot inhabit; the
// instance-level generators retry.
struct GenFail : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A generated judgment instance: terms all checking at `ty` in `ctx`.
struct Instance {
  Context ctx;
  Term ty;
  std::vector<Term> terms;
};

/// Well-typed generation following the typing rules bottom-up. Types used as
/// generation targets are inhabited by construction: the empty type and
/// neutral types are chosen only when the context holds a variable of that
/// type, and identity types get convertible endpoints.
class Generator {
 public:
  Generator(const GenConfig& cfg, std::uint64_t seed);

  Context gen_ctx();
  // `inhabited` restricts the choice to types the generator can target.
  Term gen_type(const Context& ctx, std::size_t depth, bool inhabited = true);
  Term gen_term(const Context& ctx, const Term& ty, std::size_t depth);
  // A term convertible to t at ty: eta or beta expansion, weak-head or deep
  // normalisation, or a variant of a component.
  Term variant(const Context& ctx, const Term& ty, const Term& t, std::size_t depth);
  // A term of type ty that agrees with the eta expansion of t except at one
  // leaf, which is replaced by a variant or by an independent term.
  Term near(const Context& ctx, const Term& ty, const Term& t, std::size_t depth);

  // (ctx, ty, [t]) with t : ty; retries on GenFail and falls back to
  // (ctx, Nat, [zero]).
  Instance instance();
  // As instance(), with a closed context.
  Instance closed_instance(const Term& ty);

  std::mt19937_64& rng() { return rng_; }

 private:
  bool coin(double p);
  std::size_t below(std::size_t n);
  std::size_t weighted(const std::vector<double>& w);
  double w(Tag t) const { return cfg_.weights[static_cast<std::size_t>(t)]; }

  std::optional<std::pair<Term, Term>> gen_neutral(const Context& ctx, std::size_t depth);
  std::vector<std::size_t> vars_at(const Context& ctx, const Term& ty);
  Term canonical(const Context& ctx, const Term& whnf_ty, std::size_t depth);
  Term redex(const Context& ctx, const Term& ty, std::size_t depth);

  GenConfig cfg_;
  std::mt19937_64 rng_;
};

// Free-function forms seeded from cfg.seed.
Term gen_type(const Context& ctx, const GenConfig& cfg);
Term gen_term(const Context& ctx, const Term& ty, const GenConfig& cfg);

// Seed of query `index` in a run seeded with `seed`.
std::uint64_t query_seed(std::uint64_t seed, std::size_t index);

// Differential run of the typed and untyped conversion algorithms.

inline constexpr std::uint64_t kHarnessFuel = 100'000;

struct DiffRecord {
  std::size_t index;
  Verdict typed;
  Verdict untyped;
  std::uint64_t fuel_typed;
  std::uint64_t fuel_untyped;
};

struct Disagreement {
  std::size_t index;
  std::uint64_t seed;
  Context ctx;
  Term ty;
  Term lhs;
  Term rhs;
  Verdict typed;
  Verdict untyped;
};

struct DiffReport {
  std::size_t total = 0;
  std::size_t agreements = 0;
  std::vector<Disagreement> disagreements;
  std::size_t fuel_exhausted = 0;
  std::size_t accepted = 0;  // agreements on Accept
  std::vector<DiffRecord> records;
};

// One differential query: t and t' both check at ty.
DiffRecord diff_query(std::size_t index, const Context& ctx, const Term& ty, const Term& lhs, const Term& rhs,
                      std::uint64_t fuel = kHarnessFuel);
// Adds a record (and the query, for disagreements) to a report.
void tally(DiffReport& report, const DiffRecord& r, std::uint64_t seed, const Instance& q);

// n generated queries; about half are convertible variants of each other.
DiffReport diff_run(std::size_t n, const GenConfig& cfg, std::uint64_t fuel = kHarnessFuel);

// Line-delimited records `idx, verdictTyped, verdictUntyped, fuelUsedTyped,
// fuelUsedUntyped` followed by a `# summary` line holding a JSON object.
std::string serialize(const DiffReport& report);

// Property suites.

struct PropFailure {
  std::size_t index;
  std::uint64_t seed;
  std::string message;
  std::string counterexample;  // shrunk, in surface syntax
};

struct PropReport {
  std::string suite;
  std::size_t total = 0;
  std::size_t skipped = 0;  // instances the property does not apply to
  std::vector<PropFailure> failures;
};

const std::vector<std::string>& property_suites();

// Throws std::invalid_argument for an unknown suite.
PropReport property_run(std::string_view suite, std::size_t n, const GenConfig& cfg);

std::string serialize(const PropReport& report);

// Shrinks instance terms by greedy subterm replacement while `still_fails`
// holds and every term still checks at the instance type.
Instance shrink(const Instance& inst, const std::function<bool(const Instance&)>& still_fails);

std::string describe(const Instance& inst);

}  // namespace mltt
