#include "mltt/term.hpp"

#include <algorithm>
#include <array>
#include <cassert>

namespace mltt {

namespace {

struct TagInfo {
  std::string_view name;
  std::size_t arity;
  std::array<std::size_t, 5> binders;
};

constexpr std::array<TagInfo, kTagCount> kTags = {{
    {"Var", 0, {}},
    {"Univ", 0, {}},
    {"Pi", 2, {0, 1}},
    {"Lam", 2, {0, 1}},
    {"App", 2, {0, 0}},
    {"Sig", 2, {0, 1}},
    {"Pair", 4, {0, 1, 0, 0}},
    {"Fst", 1, {0}},
    {"Snd", 1, {0}},
    {"Nat", 0, {}},
    {"Zero", 0, {}},
    {"Succ", 1, {0}},
    {"NatElim", 4, {1, 0, 2, 0}},
    {"Empty", 0, {}},
    {"EmptyElim", 2, {1, 0}},
    {"Id", 3, {0, 0, 0}},
    {"Refl", 2, {0, 0}},
    {"IdElim", 5, {0, 0, 2, 0, 0}},
}};

const TagInfo& info(Tag tag) { return kTags[static_cast<std::size_t>(tag)]; }

// Leaves are shared.
const Term& leaf(Tag tag) {
  static const std::array<Term, kTagCount> leaves = [] {
    std::array<Term, kTagCount> out;
    for (Tag t : {Tag::Univ, Tag::Nat, Tag::Zero, Tag::Empty}) out[static_cast<std::size_t>(t)] = Term::make(t, {});
    return out;
  }();
  return leaves[static_cast<std::size_t>(tag)];
}

}  // namespace

std::string_view tag_name(Tag tag) { return info(tag).name; }
std::size_t arity(Tag tag) { return info(tag).arity; }
std::size_t binders(Tag tag, std::size_t pos) {
  assert(pos < info(tag).arity);
  return info(tag).binders[pos];
}

Term Term::make(Tag tag, std::vector<Term> children) {
  assert(tag != Tag::Var);
  assert(children.size() == arity(tag));
  auto node = std::make_shared<Node>();
  node->tag = tag;
  for (std::size_t i = 0; i < children.size(); ++i) {
    assert(children[i]);
    const std::size_t b = binders(tag, i);
    const std::size_t fb = children[i].free_bound();
    node->free_bound = std::max(node->free_bound, fb > b ? fb - b : 0);
    node->size += children[i].size();
  }
  node->kids = std::move(children);
  return Term(std::move(node));
}

Term Term::var(std::size_t index) {
  auto node = std::make_shared<Node>();
  node->tag = Tag::Var;
  node->index = index;
  node->free_bound = index + 1;
  return Term(std::move(node));
}

Term Term::univ() { return leaf(Tag::Univ); }
Term Term::nat() { return leaf(Tag::Nat); }
Term Term::zero() { return leaf(Tag::Zero); }
Term Term::empty() { return leaf(Tag::Empty); }
Term Term::pi(Term dom, Term cod) { return make(Tag::Pi, {std::move(dom), std::move(cod)}); }
Term Term::lam(Term ann, Term body) { return make(Tag::Lam, {std::move(ann), std::move(body)}); }
Term Term::app(Term fn, Term arg) { return make(Tag::App, {std::move(fn), std::move(arg)}); }
Term Term::sig(Term dom, Term cod) { return make(Tag::Sig, {std::move(dom), std::move(cod)}); }
Term Term::pair(Term dom, Term cod, Term first, Term second) {
  return make(Tag::Pair, {std::move(dom), std::move(cod), std::move(first), std::move(second)});
}
Term Term::fst(Term pair) { return make(Tag::Fst, {std::move(pair)}); }
Term Term::snd(Term pair) { return make(Tag::Snd, {std::move(pair)}); }
Term Term::succ(Term pred) { return make(Tag::Succ, {std::move(pred)}); }
Term Term::nat_elim(Term motive, Term base, Term step, Term scrut) {
  return make(Tag::NatElim, {std::move(motive), std::move(base), std::move(step), std::move(scrut)});
}
Term Term::empty_elim(Term motive, Term scrut) { return make(Tag::EmptyElim, {std::move(motive), std::move(scrut)}); }
Term Term::id(Term ty, Term lhs, Term rhs) { return make(Tag::Id, {std::move(ty), std::move(lhs), std::move(rhs)}); }
Term Term::refl(Term ty, Term tm) { return make(Tag::Refl, {std::move(ty), std::move(tm)}); }
Term Term::id_elim(Term ty, Term lhs, Term motive, Term branch, Term scrut) {
  return make(Tag::IdElim, {std::move(ty), std::move(lhs), std::move(motive), std::move(branch), std::move(scrut)});
}

Term Term::numeral(std::size_t k) {
  Term t = zero();
  for (std::size_t i = 0; i < k; ++i) t = succ(std::move(t));
  return t;
}

const Term::Node& Term::node() const {
  assert(node_);
  return *node_;
}

Tag Term::tag() const { return node().tag; }
std::size_t Term::index() const {
  assert(tag() == Tag::Var);
  return node().index;
}
std::span<const Term> Term::children() const { return node().kids; }
const Term& Term::child(std::size_t pos) const {
  assert(pos < node().kids.size());
  return node().kids[pos];
}
std::size_t Term::free_bound() const { return node().free_bound; }
std::size_t Term::size() const { return node().size; }

namespace {
[[maybe_unused]] bool one_of(Tag t, std::initializer_list<Tag> tags) { return std::find(tags.begin(), tags.end(), t) != tags.end(); }
}  // namespace

const Term& Term::dom() const {
  assert(one_of(tag(), {Tag::Pi, Tag::Sig, Tag::Pair}));
  return child(0);
}
const Term& Term::cod() const {
  assert(one_of(tag(), {Tag::Pi, Tag::Sig, Tag::Pair}));
  return child(1);
}
const Term& Term::ann() const {
  assert(tag() == Tag::Lam);
  return child(0);
}
const Term& Term::body() const {
  assert(tag() == Tag::Lam);
  return child(1);
}
const Term& Term::fn() const {
  assert(tag() == Tag::App);
  return child(0);
}
const Term& Term::arg() const {
  assert(tag() == Tag::App);
  return child(1);
}
const Term& Term::first() const {
  assert(tag() == Tag::Pair);
  return child(2);
}
const Term& Term::second() const {
  assert(tag() == Tag::Pair);
  return child(3);
}
const Term& Term::pred() const {
  assert(tag() == Tag::Succ);
  return child(0);
}
const Term& Term::motive() const {
  switch (tag()) {
    case Tag::NatElim:
    case Tag::EmptyElim:
      return child(0);
    case Tag::IdElim:
      return child(2);
    default:
      assert(false && "motive() on a non-eliminator");
      return child(0);
  }
}
const Term& Term::base() const {
  assert(tag() == Tag::NatElim);
  return child(1);
}
const Term& Term::step() const {
  assert(tag() == Tag::NatElim);
  return child(2);
}
const Term& Term::scrut() const {
  switch (tag()) {
    case Tag::Fst:
    case Tag::Snd:
      return child(0);
    case Tag::NatElim:
      return child(3);
    case Tag::EmptyElim:
      return child(1);
    case Tag::IdElim:
      return child(4);
    default:
      assert(false && "scrut() on a non-eliminator");
      return child(0);
  }
}
const Term& Term::ty() const {
  assert(one_of(tag(), {Tag::Id, Tag::Refl, Tag::IdElim}));
  return child(0);
}
const Term& Term::lhs() const {
  assert(one_of(tag(), {Tag::Id, Tag::IdElim}));
  return child(1);
}
const Term& Term::rhs() const {
  assert(tag() == Tag::Id);
  return child(2);
}
const Term& Term::tm() const {
  assert(tag() == Tag::Refl);
  return child(1);
}
const Term& Term::branch() const {
  assert(tag() == Tag::IdElim);
  return child(3);
}

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  if (x.tag != y.tag || x.size != y.size || x.free_bound != y.free_bound) return false;
  if (x.tag == Tag::Var) return x.index == y.index;
  for (std::size_t i = 0; i < x.kids.size(); ++i) {
    if (!(x.kids[i] == y.kids[i])) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Renaming and substitution

namespace {

Term shift_from(const Term& t, std::size_t by, std::size_t cutoff) {
  if (by == 0 || t.free_bound() <= cutoff) return t;
  if (t.is(Tag::Var)) return Term::var(t.index() + by);
  return map_children(t, [&](const Term& c, std::size_t b) { return shift_from(c, by, cutoff + b); });
}

// Precondition: index `cutoff` is not free in t.
Term unshift_from(const Term& t, std::size_t cutoff) {
  if (t.free_bound() <= cutoff) return t;
  if (t.is(Tag::Var)) {
    assert(t.index() != cutoff);
    return Term::var(t.index() - 1);
  }
  return map_children(t, [&](const Term& c, std::size_t b) { return unshift_from(c, cutoff + b); });
}

Term apply_under(const Term& t, const Substitution& sigma, std::size_t depth) {
  if (t.free_bound() <= depth) return t;
  if (t.is(Tag::Var)) {
    if (t.index() < depth) return t;
    return shift_from(sigma.lookup(t.index() - depth), depth, 0);
  }
  return map_children(t, [&](const Term& c, std::size_t b) { return apply_under(c, sigma, depth + b); });
}

}  // namespace

Term Substitution::lookup(std::size_t i) const {
  if (i < images.size()) return images[i];
  return Term::var(i - images.size() + tail_shift);
}

Substitution Substitution::lift() const {
  Substitution out;
  out.images.reserve(images.size() + 1);
  out.images.push_back(Term::var(0));
  for (const auto& img : images) out.images.push_back(shift(img));
  out.tail_shift = tail_shift + 1;
  return out;
}

Substitution Substitution::canonical() const {
  Substitution out = *this;
  while (!out.images.empty() && out.tail_shift > 0) {
    const Term& last = out.images.back();
    if (!(last.is(Tag::Var) && last.index() == out.tail_shift - 1)) break;
    out.images.pop_back();
    --out.tail_shift;
  }
  return out;
}

Term apply_subst(const Term& t, const Substitution& sigma) {
  if (sigma.images.empty()) return shift_from(t, sigma.tail_shift, 0);
  return apply_under(t, sigma, 0);
}

Substitution compose(const Substitution& first, const Substitution& then) {
  Substitution out;
  out.images.reserve(first.images.size() + then.images.size());
  for (const auto& img : first.images) out.images.push_back(apply_subst(img, then));
  const std::size_t s = first.tail_shift;
  for (std::size_t j = s; j < then.images.size(); ++j) out.images.push_back(then.images[j]);
  out.tail_shift = std::max(s, then.images.size()) - then.images.size() + then.tail_shift;
  return out.canonical();
}

Term subst1(const Term& t, const Term& u) { return apply_subst(t, Substitution::single(u)); }

Term subst2(const Term& t, const Term& outer, const Term& inner) {
  return apply_subst(t, Substitution::prefix({inner, outer}));
}

Term shift(const Term& t, std::size_t by) { return shift_from(t, by, 0); }

bool occurs_free(const Term& t, std::size_t index) {
  if (t.free_bound() <= index) return false;
  if (t.is(Tag::Var)) return t.index() == index;
  auto kids = t.children();
  for (std::size_t i = 0; i < kids.size(); ++i) {
    if (occurs_free(kids[i], index + binders(t.tag(), i))) return true;
  }
  return false;
}

std::optional<Term> strengthen(const Term& t) {
  if (occurs_free(t, 0)) return std::nullopt;
  return unshift_from(t, 0);
}

// ---------------------------------------------------------------------------
// Weak-head forms

bool is_canonical(const Term& t) {
  switch (t.tag()) {
    case Tag::Univ:
    case Tag::Pi:
    case Tag::Lam:
    case Tag::Nat:
    case Tag::Zero:
    case Tag::Succ:
    case Tag::Sig:
    case Tag::Pair:
    case Tag::Empty:
    case Tag::Id:
    case Tag::Refl:
      return true;
    default:
      return false;
  }
}

bool is_neutral(const Term& t) {
  const Term* cur = &t;
  while (true) {
    switch (cur->tag()) {
      case Tag::Var:
        return true;
      case Tag::App:
        cur = &cur->fn();
        break;
      case Tag::Fst:
      case Tag::Snd:
      case Tag::NatElim:
      case Tag::EmptyElim:
      case Tag::IdElim:
        cur = &cur->scrut();
        break;
      default:
        return false;
    }
  }
}

Class classify(const Term& t) {
  if (is_canonical(t)) return Class::Canonical;
  if (is_neutral(t)) return Class::NeutralForm;
  return Class::NotWhnf;
}

bool is_whnf(const Term& t) { return classify(t) != Class::NotWhnf; }

bool is_ty(const Term& t) {
  switch (t.tag()) {
    case Tag::Univ:
    case Tag::Pi:
    case Tag::Sig:
    case Tag::Nat:
    case Tag::Empty:
    case Tag::Id:
      return true;
    default:
      return is_neutral(t);
  }
}

bool is_pos(const Term& t) {
  switch (t.tag()) {
    case Tag::Univ:
    case Tag::Nat:
    case Tag::Empty:
    case Tag::Id:
      return true;
    default:
      return is_neutral(t);
  }
}

bool is_nat_form(const Term& t) { return t.is(Tag::Zero) || t.is(Tag::Succ) || is_neutral(t); }
bool is_fun_form(const Term& t) { return t.is(Tag::Lam) || is_neutral(t); }
bool is_pair_form(const Term& t) { return t.is(Tag::Pair) || is_neutral(t); }
bool is_id_form(const Term& t) { return t.is(Tag::Refl) || is_neutral(t); }

// ---------------------------------------------------------------------------
// Contexts

Context Context::extend(Term ty) const {
  Context out = *this;
  out.entries_.push_back(std::move(ty));
  return out;
}

std::optional<Term> Context::lookup(std::size_t i) const {
  if (i >= entries_.size()) return std::nullopt;
  return shift(entries_[entries_.size() - 1 - i], i + 1);
}

Context Context::prefix_dropping(std::size_t n) const {
  assert(n <= entries_.size());
  return Context(std::vector<Term>(entries_.begin(), entries_.end() - static_cast<std::ptrdiff_t>(n)));
}

// ---------------------------------------------------------------------------

Term nat_step_type(const Term& motive) {
  return apply_subst(motive, Substitution{{Term::succ(Term::var(1))}, 2});
}

Context id_motive_context(const Context& ctx, const Term& ty, const Term& lhs) {
  return ctx.extend(ty, Term::id(shift(ty), shift(lhs), Term::var(0)));
}

Term id_branch_type(const Term& motive, const Term& ty, const Term& lhs) {
  return subst2(motive, lhs, Term::refl(ty, lhs));
}

namespace {

Term replace_at(const Term& t, std::size_t& k, const std::function<Term(const Term&)>& f) {
  if (k == 0) {
    k = static_cast<std::size_t>(-1);
    return f(t);
  }
  --k;
  std::vector<Term> kids;
  bool changed = false;
  for (const Term& c : t.children()) {
    if (k == static_cast<std::size_t>(-1)) {
      kids.push_back(c);
      continue;
    }
    kids.push_back(replace_at(c, k, f));
    changed = changed || !kids.back().same_node(c);
  }
  return changed ? Term::make(t.tag(), std::move(kids)) : t;
}

}  // namespace

Term replace_subterm(const Term& t, std::size_t k, const std::function<Term(const Term&)>& f) {
  return replace_at(t, k, f);
}

}  // namespace mltt
