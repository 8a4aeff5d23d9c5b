#include "mltt/harness.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>

#include "json.hpp"
#include "mltt/bidir.hpp"
#include "mltt/conv_typed.hpp"
#include "mltt/conv_untyped.hpp"
#include "mltt/normalize.hpp"
#include "mltt/reduction.hpp"
#include "mltt/surface.hpp"

namespace mltt {

namespace {

constexpr std::uint64_t kGenConvFuel = 10'000;
constexpr std::uint64_t kOracleFuel = 1'000'000;
constexpr int kInstanceRetries = 50;

std::size_t tag_index(Tag t) { return static_cast<std::size_t>(t); }

Term whnf_or_fail(const Term& t) {
  auto r = whnf(t, kHarnessFuel);
  if (!r.accepted()) throw GenFail("whnf did not finish");
  return r.value();
}

Term lookup_or_fail(const Context& ctx, std::size_t i) {
  auto ty = ctx.lookup(i);
  if (!ty) throw GenFail("variable out of scope");
  return *ty;
}

}  // namespace

std::array<double, kTagCount> GenConfig::default_weights() {
  std::array<double, kTagCount> w{};
  w.fill(1.0);
  w[tag_index(Tag::Univ)] = 0.5;
  w[tag_index(Tag::Empty)] = 0.3;
  w[tag_index(Tag::EmptyElim)] = 0.3;
  w[tag_index(Tag::Id)] = 0.7;
  return w;
}

void GenConfig::validate() const {
  if (max_depth < 1) throw std::invalid_argument("max_depth must be at least 1");
  for (double x : weights) {
    if (!(x >= 0)) throw std::invalid_argument("weights must be non-negative");
  }
  auto any = [&](std::initializer_list<Tag> tags) {
    return std::any_of(tags.begin(), tags.end(), [&](Tag t) { return weights[tag_index(t)] > 0; });
  };
  if (!any({Tag::Univ, Tag::Pi, Tag::Sig, Tag::Nat, Tag::Empty, Tag::Id})) {
    throw std::invalid_argument("no positive weight among type formers");
  }
  if (!any({Tag::Var, Tag::Lam, Tag::Pair, Tag::Zero, Tag::Succ, Tag::Refl, Tag::App, Tag::Fst, Tag::Snd,
            Tag::NatElim, Tag::EmptyElim, Tag::IdElim})) {
    throw std::invalid_argument("no positive weight among term constructors");
  }
}

Generator::Generator(const GenConfig& cfg, std::uint64_t seed) : cfg_(cfg), rng_(seed) { cfg_.validate(); }

bool Generator::coin(double p) { return std::bernoulli_distribution(p)(rng_); }

std::size_t Generator::below(std::size_t n) {
  if (n == 0) return 0;
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_);
}

std::size_t Generator::weighted(const std::vector<double>& w) {
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  if (total <= 0) return w.size();
  double x = std::uniform_real_distribution<double>(0, total)(rng_);
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (x < w[i]) return i;
    x -= w[i];
  }
  for (std::size_t i = w.size(); i-- > 0;) {
    if (w[i] > 0) return i;
  }
  return w.size();
}

std::vector<std::size_t> Generator::vars_at(const Context& ctx, const Term& ty) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < ctx.size(); ++i) {
    if (conv_ty(ctx, lookup_or_fail(ctx, i), ty, kGenConvFuel).accepted()) out.push_back(i);
  }
  return out;
}

Context Generator::gen_ctx() {
  Context ctx;
  const std::size_t len = below(cfg_.max_ctx_len + 1);
  for (std::size_t i = 0; i < len; ++i) ctx = ctx.extend(gen_type(ctx, 1 + below(2), false));
  return ctx;
}

// Types. With `small` set only codes (types in U) are produced.
namespace {

enum class TyChoice { Nat, Univ, Empty, NeVar, Pi, Sig, Id, Redex };

}  // namespace

Term Generator::gen_type(const Context& ctx, std::size_t depth, bool inhabited) {
  std::function<Term(const Context&, std::size_t, bool, bool)> go;
  go = [&](const Context& g, std::size_t d, bool inh, bool small) -> Term {
    std::vector<TyChoice> choice;
    std::vector<double> weight;
    auto offer = [&](TyChoice c, double x) {
      choice.push_back(c);
      weight.push_back(x);
    };
    offer(TyChoice::Nat, w(Tag::Nat));
    if (!small) offer(TyChoice::Univ, w(Tag::Univ));
    if (!inh || !vars_at(g, Term::empty()).empty()) offer(TyChoice::Empty, w(Tag::Empty));
    std::vector<std::size_t> codes;
    for (std::size_t i : vars_at(g, Term::univ())) {
      if (!inh || !vars_at(g, Term::var(i)).empty()) codes.push_back(i);
    }
    if (!codes.empty()) offer(TyChoice::NeVar, w(Tag::Var));
    if (d > 0) {
      offer(TyChoice::Pi, w(Tag::Pi));
      offer(TyChoice::Sig, w(Tag::Sig));
      offer(TyChoice::Id, w(Tag::Id));
      offer(TyChoice::Redex, 0.2 * w(Tag::App));
    }
    const std::size_t k = weighted(weight);
    const TyChoice c = k < choice.size() ? choice[k] : TyChoice::Nat;
    const std::size_t d1 = d > 0 ? d - 1 : 0;
    switch (c) {
      case TyChoice::Nat:
        return Term::nat();
      case TyChoice::Univ:
        return Term::univ();
      case TyChoice::Empty:
        return Term::empty();
      case TyChoice::NeVar:
        return Term::var(codes[below(codes.size())]);
      case TyChoice::Pi: {
        Term a = go(g, d1, coin(0.7), small);
        return Term::pi(a, go(g.extend(a), d1, inh, small));
      }
      case TyChoice::Sig: {
        Term a = go(g, d1, inh, small);
        return Term::sig(a, go(g.extend(a), d1, inh, small));
      }
      case TyChoice::Id: {
        Term a = go(g, d1, true, small);
        Term x = gen_term(g, a, d1);
        Term y = (inh || coin(0.5)) ? variant(g, a, x, d1) : gen_term(g, a, d1);
        return Term::id(a, x, y);
      }
      case TyChoice::Redex: {
        // (\X:U. X) C, a type whose weak-head form is the code C.
        Term code = go(g, d1, inh, true);
        return Term::app(Term::lam(Term::univ(), Term::var(0)), code);
      }
    }
    return Term::nat();
  };
  return go(ctx, depth, inhabited, false);
}

std::optional<std::pair<Term, Term>> Generator::gen_neutral(const Context& ctx, std::size_t depth) {
  if (ctx.empty()) return std::nullopt;
  const std::size_t i = below(ctx.size());
  Term n = Term::var(i);
  Term ty = lookup_or_fail(ctx, i);
  const std::size_t d = depth > 0 ? depth - 1 : 0;
  const std::size_t steps = below(3);
  for (std::size_t k = 0; k < steps; ++k) {
    const Term wt = whnf_or_fail(ty);
    switch (wt.tag()) {
      case Tag::Pi: {
        Term u = gen_term(ctx, wt.dom(), d);
        ty = subst1(wt.cod(), u);
        n = Term::app(n, u);
        break;
      }
      case Tag::Sig:
        if (coin(0.5)) {
          ty = wt.dom();
          n = Term::fst(n);
        } else {
          ty = subst1(wt.cod(), Term::fst(n));
          n = Term::snd(n);
        }
        break;
      case Tag::Nat: {
        if (w(Tag::NatElim) <= 0) return std::make_pair(n, ty);
        const Context gx = ctx.extend(Term::nat());
        Term p = gen_type(gx, d, true);
        Term b = gen_term(ctx, subst1(p, Term::zero()), d);
        Term s = gen_term(gx.extend(p), nat_step_type(p), d);
        ty = subst1(p, n);
        n = Term::nat_elim(p, b, s, n);
        break;
      }
      case Tag::Empty: {
        if (w(Tag::EmptyElim) <= 0) return std::make_pair(n, ty);
        Term p = gen_type(ctx.extend(Term::empty()), d, false);
        ty = subst1(p, n);
        n = Term::empty_elim(p, n);
        break;
      }
      case Tag::Id: {
        if (w(Tag::IdElim) <= 0) return std::make_pair(n, ty);
        Term p = gen_type(id_motive_context(ctx, wt.ty(), wt.lhs()), d, true);
        Term h = gen_term(ctx, id_branch_type(p, wt.ty(), wt.lhs()), d);
        ty = subst2(p, wt.rhs(), n);
        n = Term::id_elim(wt.ty(), wt.lhs(), p, h, n);
        break;
      }
      default:
        return std::make_pair(n, ty);
    }
  }
  return std::make_pair(n, ty);
}

Term Generator::canonical(const Context& ctx, const Term& wt, std::size_t depth) {
  const std::size_t d = depth > 0 ? depth - 1 : 0;
  switch (wt.tag()) {
    case Tag::Pi:
      return Term::lam(wt.dom(), gen_term(ctx.extend(wt.dom()), wt.cod(), d));
    case Tag::Sig: {
      Term a = gen_term(ctx, wt.dom(), d);
      return Term::pair(wt.dom(), wt.cod(), a, gen_term(ctx, subst1(wt.cod(), a), d));
    }
    case Tag::Nat:
      if (depth == 0 || weighted({w(Tag::Zero), w(Tag::Succ)}) != 1) return Term::zero();
      return Term::succ(gen_term(ctx, Term::nat(), d));
    case Tag::Univ: {
      // A code: generated as a small type.
      Term code = gen_type(ctx, depth, false);
      if (!check(ctx, code, Term::univ(), typed_backend(), kGenConvFuel).accepted()) return Term::nat();
      return code;
    }
    case Tag::Id:
      if (!conv_tm(ctx, wt.ty(), wt.lhs(), wt.rhs(), kGenConvFuel).accepted()) throw GenFail("endpoints differ");
      return Term::refl(wt.ty(), wt.lhs());
    default:
      throw GenFail("no canonical inhabitant");
  }
}

namespace {

enum class RedexKind { Beta, Fst, Snd, NatRec, IdRec, EmptyRec };

}  // namespace

Term Generator::redex(const Context& ctx, const Term& ty, std::size_t depth) {
  const std::size_t d = depth > 0 ? depth - 1 : 0;
  std::vector<RedexKind> kinds = {RedexKind::Beta, RedexKind::Fst, RedexKind::Snd, RedexKind::NatRec,
                                  RedexKind::IdRec};
  std::vector<double> weight = {w(Tag::App), w(Tag::Fst), w(Tag::Snd), w(Tag::NatElim), w(Tag::IdElim)};
  const auto empties = vars_at(ctx, Term::empty());
  if (!empties.empty()) {
    kinds.push_back(RedexKind::EmptyRec);
    weight.push_back(w(Tag::EmptyElim));
  }
  const std::size_t k = weighted(weight);
  if (k >= kinds.size()) throw GenFail("no redex shape enabled");
  switch (kinds[k]) {
    case RedexKind::Beta: {
      Term x = gen_type(ctx, d, true);
      Term body = gen_term(ctx.extend(x), shift(ty), d);
      return Term::app(Term::lam(x, body), gen_term(ctx, x, d));
    }
    case RedexKind::Fst: {
      Term b = gen_type(ctx.extend(ty), 0, true);
      Term t = gen_term(ctx, ty, d);
      return Term::fst(Term::pair(ty, b, t, gen_term(ctx, subst1(b, t), d)));
    }
    case RedexKind::Snd: {
      Term x = gen_type(ctx, d, true);
      Term a = gen_term(ctx, x, d);
      return Term::snd(Term::pair(x, shift(ty), a, gen_term(ctx, ty, d)));
    }
    case RedexKind::NatRec: {
      // Constant motive over a numeral or any natural-number term.
      const Term p = shift(ty);
      Term n = gen_term(ctx, Term::nat(), d);
      Term b = gen_term(ctx, ty, d);
      Term s = coin(0.5) ? Term::var(0) : gen_term(ctx.extend(Term::nat(), p), nat_step_type(p), d);
      return Term::nat_elim(p, b, s, n);
    }
    case RedexKind::IdRec: {
      Term x = gen_type(ctx, d, true);
      Term a = gen_term(ctx, x, d);
      return Term::id_elim(x, a, shift(ty, 2), gen_term(ctx, ty, d), Term::refl(x, a));
    }
    case RedexKind::EmptyRec:
      return Term::empty_elim(shift(ty), Term::var(empties[below(empties.size())]));
  }
  throw GenFail("no redex shape enabled");
}

namespace {

enum class TmChoice { Var, Neutral, Redex, Canonical };

}  // namespace

Term Generator::gen_term(const Context& ctx, const Term& ty, std::size_t depth) {
  const Term wt = whnf_or_fail(ty);
  const auto vars = vars_at(ctx, ty);
  const bool has_canonical = wt.is(Tag::Pi) || wt.is(Tag::Sig) || wt.is(Tag::Nat) || wt.is(Tag::Univ) ||
                             wt.is(Tag::Id);
  std::vector<TmChoice> choice;
  std::vector<double> weight;
  auto offer = [&](TmChoice c, double x) {
    choice.push_back(c);
    weight.push_back(x);
  };
  if (!vars.empty()) offer(TmChoice::Var, 2 * w(Tag::Var));
  if (depth > 0 && !ctx.empty()) offer(TmChoice::Neutral, w(Tag::Var));
  if (depth > 0) {
    offer(TmChoice::Redex, 0.25 * (w(Tag::App) + w(Tag::Fst) + w(Tag::Snd) + w(Tag::NatElim) + w(Tag::IdElim)));
  }
  if (has_canonical) offer(TmChoice::Canonical, 2.0);
  const std::size_t k = weighted(weight);
  const TmChoice c = k < choice.size() ? choice[k] : TmChoice::Canonical;

  auto fallback = [&]() -> Term {
    if (has_canonical) return canonical(ctx, wt, 0);
    if (!vars.empty()) return Term::var(vars[below(vars.size())]);
    throw GenFail("uninhabited target");
  };
  try {
    switch (c) {
      case TmChoice::Var:
        return Term::var(vars[below(vars.size())]);
      case TmChoice::Neutral:
        for (int tries = 0; tries < 3; ++tries) {
          auto ne = gen_neutral(ctx, depth);
          if (ne && conv_ty(ctx, ne->second, ty, kGenConvFuel).accepted()) return ne->first;
        }
        return fallback();
      case TmChoice::Redex:
        return redex(ctx, ty, depth);
      case TmChoice::Canonical:
        return canonical(ctx, wt, depth);
    }
  } catch (const GenFail&) {
    return fallback();
  }
  return fallback();
}

namespace {

enum class VariantKind { Eta, Beta, Whnf, DeepNf, Congruence, Projection };

}  // namespace

Term Generator::variant(const Context& ctx, const Term& ty, const Term& t, std::size_t depth) {
  const Term wt = whnf_or_fail(ty);
  const auto kind = static_cast<VariantKind>(below(6));
  auto beta = [&]() {
    Term x = gen_type(ctx, 0, true);
    return Term::app(Term::lam(x, shift(t)), gen_term(ctx, x, 0));
  };
  switch (kind) {
    case VariantKind::Eta:
      if (wt.is(Tag::Pi)) return Term::lam(wt.dom(), Term::app(shift(t), Term::var(0)));
      if (wt.is(Tag::Sig)) return Term::pair(wt.dom(), wt.cod(), Term::fst(t), Term::snd(t));
      return beta();
    case VariantKind::Beta:
      return beta();
    case VariantKind::Whnf: {
      auto r = whnf(t, kHarnessFuel);
      return r.accepted() ? r.value() : t;
    }
    case VariantKind::DeepNf: {
      auto r = deep_nf_tm(ctx, ty, t, kHarnessFuel);
      return r.accepted() ? r.value() : t;
    }
    case VariantKind::Congruence: {
      const std::size_t d = depth > 0 ? depth - 1 : 0;
      if (t.is(Tag::Succ)) return Term::succ(variant(ctx, Term::nat(), t.pred(), d));
      if (t.is(Tag::Lam) && wt.is(Tag::Pi)) {
        return Term::lam(t.ann(), variant(ctx.extend(wt.dom()), wt.cod(), t.body(), d));
      }
      if (t.is(Tag::Pair) && wt.is(Tag::Sig)) {
        return Term::pair(t.dom(), t.cod(), variant(ctx, wt.dom(), t.first(), d), t.second());
      }
      if (t.is(Tag::Refl) && wt.is(Tag::Id)) return Term::refl(t.ty(), variant(ctx, wt.ty(), t.tm(), d));
      return beta();
    }
    case VariantKind::Projection:
      return Term::fst(Term::pair(ty, Term::nat(), t, Term::zero()));
  }
  return t;
}

Term Generator::near(const Context& ctx, const Term& ty, const Term& t, std::size_t depth) {
  const Term wt = whnf_or_fail(ty);
  if (wt.is(Tag::Pi) && coin(0.8)) {
    return Term::lam(wt.dom(), near(ctx.extend(wt.dom()), wt.cod(), Term::app(shift(t), Term::var(0)), depth));
  }
  if (wt.is(Tag::Sig) && coin(0.8)) {
    const Term a = Term::fst(t);
    // The second component keeps its type only when the first is not mentioned in it.
    if (!occurs_free(wt.cod(), 0) && coin(0.5)) {
      return Term::pair(wt.dom(), wt.cod(), near(ctx, wt.dom(), a, depth), Term::snd(t));
    }
    return Term::pair(wt.dom(), wt.cod(), a, near(ctx, subst1(wt.cod(), a), Term::snd(t), depth));
  }
  return coin(0.5) ? variant(ctx, ty, t, depth) : gen_term(ctx, ty, depth);
}

Instance Generator::instance() {
  for (int attempt = 0; attempt < kInstanceRetries; ++attempt) {
    try {
      Context ctx = gen_ctx();
      const std::size_t depth = 1 + below(cfg_.max_depth);
      Term ty = gen_type(ctx, depth, true);
      Term t = gen_term(ctx, ty, depth);
      return {ctx, ty, {t}};
    } catch (const GenFail&) {
    }
  }
  return {Context{}, Term::nat(), {Term::zero()}};
}

Instance Generator::closed_instance(const Term& ty) {
  for (int attempt = 0; attempt < kInstanceRetries; ++attempt) {
    try {
      return {Context{}, ty, {gen_term(Context{}, ty, 1 + below(cfg_.max_depth))}};
    } catch (const GenFail&) {
    }
  }
  return {Context{}, Term::nat(), {Term::zero()}};
}

Term gen_type(const Context& ctx, const GenConfig& cfg) {
  Generator g(cfg, cfg.seed);
  return g.gen_type(ctx, cfg.max_depth, true);
}

Term gen_term(const Context& ctx, const Term& ty, const GenConfig& cfg) {
  Generator g(cfg, cfg.seed);
  return g.gen_term(ctx, ty, cfg.max_depth);
}

std::uint64_t query_seed(std::uint64_t seed, std::size_t index) {
  // splitmix64 finaliser
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(index) + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Differential runs.

DiffRecord diff_query(std::size_t index, const Context& ctx, const Term& ty, const Term& lhs, const Term& rhs,
                      std::uint64_t fuel) {
  Session typed(fuel);
  const Verdict vt = conv_tm(typed, ctx, ty, lhs, rhs).verdict();
  Session untyped(fuel);
  const Verdict vu = uconv(untyped, lhs, rhs).verdict();
  return {index, vt, vu, typed.used(), untyped.used()};
}

void tally(DiffReport& report, const DiffRecord& r, std::uint64_t seed, const Instance& q) {
  ++report.total;
  report.records.push_back(r);
  if (r.typed == Verdict::OutOfFuel || r.untyped == Verdict::OutOfFuel) {
    ++report.fuel_exhausted;
  } else if (r.typed == r.untyped) {
    ++report.agreements;
    if (r.typed == Verdict::Accept) ++report.accepted;
  } else {
    report.disagreements.push_back({r.index, seed, q.ctx, q.ty, q.terms.at(0), q.terms.at(1), r.typed, r.untyped});
  }
}

namespace {

// Second side of a differential query: a convertible variant, a near miss
// or an independently generated term of the same type.
Instance with_partner(Generator& g, Instance inst, std::size_t depth) {
  const Term& t = inst.terms[0];
  Term u = t;
  try {
    switch (g.rng()() % 3) {
      case 0:
        u = g.variant(inst.ctx, inst.ty, t, depth);
        if (g.rng()() % 2 == 0) u = g.variant(inst.ctx, inst.ty, u, depth);
        break;
      case 1:
        u = g.near(inst.ctx, inst.ty, t, depth);
        break;
      default:
        u = g.gen_term(inst.ctx, inst.ty, depth);
    }
  } catch (const GenFail&) {
    u = t;
  }
  inst.terms.push_back(u);
  return inst;
}

}  // namespace

DiffReport diff_run(std::size_t n, const GenConfig& cfg, std::uint64_t fuel) {
  cfg.validate();
  DiffReport report;
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint64_t seed = query_seed(cfg.seed, i);
    Generator g(cfg, seed);
    const Instance q = with_partner(g, g.instance(), cfg.max_depth);
    tally(report, diff_query(i, q.ctx, q.ty, q.terms[0], q.terms[1], fuel), seed, q);
  }
  return report;
}

std::string serialize(const DiffReport& report) {
  std::ostringstream out;
  for (const auto& r : report.records) {
    out << r.index << ", " << verdict_name(r.typed) << ", " << verdict_name(r.untyped) << ", " << r.fuel_typed
        << ", " << r.fuel_untyped << "\n";
  }
  nlohmann::json summary = {{"total", report.total},
                            {"agreements", report.agreements},
                            {"accepted", report.accepted},
                            {"fuelExhausted", report.fuel_exhausted},
                            {"disagreements", nlohmann::json::array()}};
  for (const auto& d : report.disagreements) {
    summary["disagreements"].push_back({{"index", d.index},
                                        {"seed", d.seed},
                                        {"query", describe({d.ctx, d.ty, {d.lhs, d.rhs}})},
                                        {"typed", verdict_name(d.typed)},
                                        {"untyped", verdict_name(d.untyped)}});
  }
  out << "# summary " << summary.dump() << "\n";
  return out.str();
}

// Property suites.

namespace {

using Prop = std::function<std::optional<std::string>(const Instance&)>;

struct Case {
  Instance inst;
  Prop prop;
};

using SuiteBuilder = std::function<std::optional<Case>(Generator&, const GenConfig&)>;

const ConvBackend* const kBackends[] = {&typed_backend(), &untyped_backend()};

bool checks(const Context& ctx, const Term& t, const Term& ty, std::uint64_t fuel = kOracleFuel) {
  return check(ctx, t, ty, typed_backend(), fuel).accepted();
}

// Verdict of a conversion query under one algorithm.
Verdict conv_verdict(Algo algo, const Context& ctx, const Term& ty, const Term& a, const Term& b,
                     std::uint64_t fuel = kHarnessFuel) {
  if (algo == Algo::Typed) return conv_tm(ctx, ty, a, b, fuel).verdict();
  return uconv(a, b, fuel).verdict();
}

std::string algo_name(Algo a) { return a == Algo::Typed ? "typed" : "untyped"; }

std::optional<std::string> generator_soundness(const Instance& q) {
  for (const ConvBackend* b : kBackends) {
    const std::string who = " (" + std::string(b->name()) + ")";
    if (!check_ctx(q.ctx, *b, kOracleFuel).accepted()) return "context ill-formed" + who;
    if (!check_ty(q.ctx, q.ty, *b, kOracleFuel).accepted()) return "type ill-formed" + who;
    for (const Term& t : q.terms) {
      if (!check(q.ctx, t, q.ty, *b, kOracleFuel).accepted()) return "term does not check" + who;
    }
  }
  return std::nullopt;
}

std::optional<std::string> subject_reduction(const Instance& q) {
  Term cur = q.terms[0];
  for (int k = 0; k < 200; ++k) {
    for (const ConvBackend* b : kBackends) {
      if (!check(q.ctx, cur, q.ty, *b, kOracleFuel).accepted()) {
        return "reduct " + std::to_string(k) + " does not check (" + std::string(b->name()) + ")";
      }
    }
    auto next = step(cur);
    if (!next) break;
    cur = *next;
  }
  return std::nullopt;
}

// Whether a canonical form w may inhabit the weak-head type wt.
bool fits(const Term& w, const Term& wt) {
  switch (wt.tag()) {
    case Tag::Pi:
      return w.is(Tag::Lam);
    case Tag::Sig:
      return w.is(Tag::Pair);
    case Tag::Nat:
      return w.is(Tag::Zero) || w.is(Tag::Succ);
    case Tag::Univ:
      return w.is(Tag::Pi) || w.is(Tag::Sig) || w.is(Tag::Nat) || w.is(Tag::Empty) || w.is(Tag::Id);
    case Tag::Id:
      return w.is(Tag::Refl);
    default:
      return false;
  }
}

std::optional<std::string> classification(const Instance& q) {
  auto w = whnf(q.terms[0], kOracleFuel);
  if (!w.accepted()) return std::string("whnf did not finish");
  auto wt = whnf(q.ty, kOracleFuel);
  if (!wt.accepted()) return std::string("type whnf did not finish");
  if (!is_whnf(w.value())) return std::string("whnf result is not a weak-head normal form");
  if (!checks(q.ctx, w.value(), q.ty)) return std::string("whnf result does not check");
  if (is_canonical(w.value()) && !fits(w.value(), wt.value())) {
    return "canonical " + std::string(tag_name(w.value().tag())) + " at type " +
           std::string(tag_name(wt.value().tag()));
  }
  return std::nullopt;
}

std::optional<std::string> canonicity(const Instance& q) {
  auto nf = deep_nf_tm(q.ctx, q.ty, q.terms[0], kOracleFuel);
  if (!nf.accepted()) return std::string("deep normalisation failed");
  Term n = nf.value();
  while (n.is(Tag::Succ)) n = n.pred();
  if (!n.is(Tag::Zero)) return "normal form is not a numeral: " + print(nf.value());
  return std::nullopt;
}

std::optional<std::string> strengthening(const Instance& q) {
  const Term& t = q.terms[0];
  const Term& u = q.terms[1];
  const Term st = shift(t);
  const Term su = shift(u);
  if (!(strengthen(st) == t) || !(strengthen(su) == u)) return std::string("strengthen is not inverse to shift");
  const Verdict base = uconv(t, u, kHarnessFuel).verdict();
  const Verdict weak = uconv(st, su, kHarnessFuel).verdict();
  if (base != Verdict::OutOfFuel && weak != Verdict::OutOfFuel && base != weak) {
    return "untyped verdict changes under a fresh variable: " + std::string(verdict_name(weak)) + " vs " +
           std::string(verdict_name(base));
  }
  const Verdict typed = conv_tm(q.ctx, q.ty, t, u, kHarnessFuel).verdict();
  if (typed != Verdict::OutOfFuel && weak != Verdict::OutOfFuel && typed != weak) {
    return "untyped verdict on weakened terms differs from the typed verdict";
  }
  return std::nullopt;
}

std::optional<std::string> symmetry(const Instance& q) {
  for (Algo a : {Algo::Typed, Algo::Untyped}) {
    const Verdict l = conv_verdict(a, q.ctx, q.ty, q.terms[0], q.terms[1]);
    const Verdict r = conv_verdict(a, q.ctx, q.ty, q.terms[1], q.terms[0]);
    if (l != Verdict::OutOfFuel && r != Verdict::OutOfFuel && l != r) return algo_name(a) + " is not symmetric";
  }
  return std::nullopt;
}

std::optional<std::string> transitivity(const Instance& q) {
  for (Algo a : {Algo::Typed, Algo::Untyped}) {
    const Verdict ab = conv_verdict(a, q.ctx, q.ty, q.terms[0], q.terms[1]);
    const Verdict bc = conv_verdict(a, q.ctx, q.ty, q.terms[1], q.terms[2]);
    if (ab != Verdict::Accept || bc != Verdict::Accept) continue;
    const Verdict ac = conv_verdict(a, q.ctx, q.ty, q.terms[0], q.terms[2]);
    if (ac == Verdict::Reject) return algo_name(a) + " is not transitive";
  }
  return std::nullopt;
}

std::optional<std::string> reflexivity(const Instance& q) {
  const Term& t = q.terms[0];
  for (Algo a : {Algo::Typed, Algo::Untyped}) {
    if (conv_verdict(a, q.ctx, q.ty, t, t, kOracleFuel) != Verdict::Accept) return algo_name(a) + " not reflexive";
  }
  if (!deep_nf_tm(q.ctx, q.ty, t, kOracleFuel).accepted()) return std::string("not deeply normalising");
  return std::nullopt;
}

std::optional<std::string> nf_soundness(const Instance& q) {
  auto nf = deep_nf_tm(q.ctx, q.ty, q.terms[0], kOracleFuel);
  if (!nf.accepted()) return std::string("not deeply normalising");
  if (!checks(q.ctx, nf.value(), q.ty)) return std::string("normal form does not check");
  for (Algo a : {Algo::Typed, Algo::Untyped}) {
    if (conv_verdict(a, q.ctx, q.ty, q.terms[0], nf.value(), kOracleFuel) != Verdict::Accept) {
      return "normal form not convertible to the term (" + algo_name(a) + ")";
    }
  }
  // refl arguments stay as written, so idempotence holds up to annotations.
  auto again = deep_nf_tm(q.ctx, q.ty, nf.value(), kOracleFuel);
  if (!again.accepted() || !(erase_annotations(again.value()) == erase_annotations(nf.value()))) {
    return std::string("normalisation not idempotent");
  }
  return std::nullopt;
}

// Fuel used is independent of the budget as long as the budget suffices,
// and one unit less than the amount used runs out.
template <class Run>
std::optional<std::string> fuel_exact(const std::string& what, Run run) {
  Session probe(kHarnessFuel);
  const Verdict v = run(probe);
  if (v == Verdict::OutOfFuel) return std::nullopt;
  const std::uint64_t used = probe.used();
  for (std::uint64_t f : {used, used + 1, 2 * used + 1}) {
    Session s(f);
    if (run(s) != v || s.used() != used) return what + ": verdict or fuel used changes with budget " + std::to_string(f);
  }
  if (used > 0) {
    Session s(used - 1);
    if (run(s) != Verdict::OutOfFuel) return what + ": budget below the fuel used does not run out";
  }
  return std::nullopt;
}

std::optional<std::string> fuel_monotonicity(const Instance& q) {
  const Term& t = q.terms[0];
  const Term& u = q.terms[1];
  if (auto e = fuel_exact("conv_tm", [&](Session& s) { return conv_tm(s, q.ctx, q.ty, t, u).verdict(); })) return e;
  if (auto e = fuel_exact("uconv", [&](Session& s) { return uconv(s, t, u).verdict(); })) return e;
  if (auto e = fuel_exact("whnf", [&](Session& s) { return whnf(s, t).verdict(); })) return e;
  if (auto e = fuel_exact("check", [&](Session& s) { return check(s, q.ctx, t, q.ty, typed_backend()).verdict(); })) {
    return e;
  }
  return std::nullopt;
}

Instance pair_instance(Generator& g, const GenConfig& cfg) { return with_partner(g, g.instance(), cfg.max_depth); }

// Convertible chain t, variant, variant of that, or an independent third term.
Instance triple_instance(Generator& g, const GenConfig& cfg) {
  Instance q = pair_instance(g, cfg);
  Term v = q.terms[1];
  try {
    v = g.rng()() % 2 == 0 ? g.variant(q.ctx, q.ty, q.terms[1], cfg.max_depth)
                           : g.gen_term(q.ctx, q.ty, cfg.max_depth);
  } catch (const GenFail&) {
  }
  q.terms.push_back(v);
  return q;
}

Instance redex_instance(Generator& g, const GenConfig& cfg) {
  Instance q = g.instance();
  try {
    if (g.rng()() % 2 == 0) q.terms[0] = g.variant(q.ctx, q.ty, q.terms[0], cfg.max_depth);
  } catch (const GenFail&) {
  }
  return q;
}

std::optional<Case> weakening_case(Generator& g, const GenConfig& cfg) {
  Instance q = pair_instance(g, cfg);
  Term x;
  try {
    x = g.gen_type(q.ctx, 1, false);
  } catch (const GenFail&) {
    x = Term::nat();
  }
  Prop prop = [x](const Instance& q) -> std::optional<std::string> {
    const Context wider = q.ctx.extend(x);
    for (Algo a : {Algo::Typed, Algo::Untyped}) {
      const Verdict base = conv_verdict(a, q.ctx, q.ty, q.terms[0], q.terms[1]);
      const Verdict weak = conv_verdict(a, wider, shift(q.ty), shift(q.terms[0]), shift(q.terms[1]));
      if (base != Verdict::OutOfFuel && weak != Verdict::OutOfFuel && base != weak) {
        return algo_name(a) + " verdict changes under weakening";
      }
    }
    return std::nullopt;
  };
  return Case{q, prop};
}

const std::vector<std::pair<std::string, SuiteBuilder>>& suite_table() {
  static const std::vector<std::pair<std::string, SuiteBuilder>> table = {
      {"generator-soundness", [](Generator& g, const GenConfig& cfg) -> std::optional<Case> {
         return Case{pair_instance(g, cfg), generator_soundness};
       }},
      {"subject-reduction", [](Generator& g, const GenConfig& cfg) -> std::optional<Case> {
         return Case{redex_instance(g, cfg), subject_reduction};
       }},
      {"classification", [](Generator& g, const GenConfig& cfg) -> std::optional<Case> {
         return Case{redex_instance(g, cfg), classification};
       }},
      {"canonicity", [](Generator& g, const GenConfig& cfg) -> std::optional<Case> {
         Instance q = g.closed_instance(Term::nat());
         try {
           if (g.rng()() % 2 == 0) q.terms[0] = g.variant(q.ctx, q.ty, q.terms[0], cfg.max_depth);
         } catch (const GenFail&) {
         }
         return Case{q, canonicity};
       }},
      {"strengthening", [](Generator& g, const GenConfig& cfg) -> std::optional<Case> {
         return Case{pair_instance(g, cfg), strengthening};
       }},
      {"symmetry", [](Generator& g, const GenConfig& cfg) -> std::optional<Case> {
         return Case{pair_instance(g, cfg), symmetry};
       }},
      {"transitivity", [](Generator& g, const GenConfig& cfg) -> std::optional<Case> {
         return Case{triple_instance(g, cfg), transitivity};
       }},
      {"weakening", weakening_case},
      {"reflexivity", [](Generator& g, const GenConfig& cfg) -> std::optional<Case> {
         return Case{redex_instance(g, cfg), reflexivity};
       }},
      {"nf-soundness", [](Generator& g, const GenConfig& cfg) -> std::optional<Case> {
         return Case{redex_instance(g, cfg), nf_soundness};
       }},
      {"fuel-monotonicity", [](Generator& g, const GenConfig& cfg) -> std::optional<Case> {
         return Case{pair_instance(g, cfg), fuel_monotonicity};
       }},
  };
  return table;
}

}  // namespace

const std::vector<std::string>& property_suites() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, _] : suite_table()) out.push_back(name);
    return out;
  }();
  return names;
}

PropReport property_run(std::string_view suite, std::size_t n, const GenConfig& cfg) {
  cfg.validate();
  const auto& table = suite_table();
  auto it = std::find_if(table.begin(), table.end(), [&](const auto& e) { return e.first == suite; });
  if (it == table.end()) throw std::invalid_argument("unknown property suite: " + std::string(suite));
  PropReport report;
  report.suite = std::string(suite);
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint64_t seed = query_seed(cfg.seed, i);
    Generator g(cfg, seed);
    ++report.total;
    auto c = it->second(g, cfg);
    if (!c) {
      ++report.skipped;
      continue;
    }
    auto failure = c->prop(c->inst);
    if (!failure) continue;
    const Instance small = shrink(c->inst, [&](const Instance& q) { return c->prop(q).has_value(); });
    report.failures.push_back({i, seed, *failure, describe(small)});
  }
  return report;
}

std::string serialize(const PropReport& report) {
  nlohmann::json out = {{"suite", report.suite},
                        {"total", report.total},
                        {"skipped", report.skipped},
                        {"failures", nlohmann::json::array()}};
  for (const auto& f : report.failures) {
    out["failures"].push_back(
        {{"index", f.index}, {"seed", f.seed}, {"message", f.message}, {"counterexample", f.counterexample}});
  }
  return out.dump(2) + "\n";
}

Instance shrink(const Instance& inst, const std::function<bool(const Instance&)>& still_fails) {
  constexpr int kMaxAttempts = 400;
  Instance cur = inst;
  int attempts = 0;
  bool improved = true;
  while (improved && attempts < kMaxAttempts) {
    improved = false;
    for (std::size_t ti = 0; ti < cur.terms.size() && !improved; ++ti) {
      const Term t = cur.terms[ti];
      for (std::size_t k = 0; k < t.size() && !improved && attempts < kMaxAttempts; ++k) {
        // Candidates for node k: its children, moved out of their binders.
        std::vector<Term> candidates;
        replace_subterm(t, k, [&](const Term& node) {
          for (std::size_t c = 0; c < node.children().size(); ++c) {
            std::optional<Term> child = node.child(c);
            for (std::size_t b = 0; b < binders(node.tag(), c) && child; ++b) child = strengthen(*child);
            if (child) candidates.push_back(*child);
          }
          return node;
        });
        for (const Term& cand : candidates) {
          ++attempts;
          Instance next = cur;
          next.terms[ti] = replace_subterm(t, k, [&](const Term&) { return cand; });
          if (next.terms[ti].size() >= t.size()) continue;
          if (!checks(next.ctx, next.terms[ti], next.ty, kHarnessFuel)) continue;
          if (!still_fails(next)) continue;
          cur = std::move(next);
          improved = true;
          break;
        }
      }
    }
  }
  return cur;
}

std::string describe(const Instance& inst) {
  std::vector<std::string> names;
  std::string out = print_context(inst.ctx, names) + "|-";
  for (std::size_t i = 0; i < inst.terms.size(); ++i) {
    out += (i ? " ; " : " ") + print(inst.terms[i], names);
  }
  return out + " : " + print(inst.ty, names);
}

}  // namespace mltt
