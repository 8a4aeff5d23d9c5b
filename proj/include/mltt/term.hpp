#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace mltt {

// Term constructors. The order is relied upon by tables in term.cpp.
enum class Tag : std::uint8_t {
  Var,
  Univ,
  Pi,
  Lam,
  App,
  Sig,
  Pair,
  Fst,
  Snd,
  Nat,
  Zero,
  Succ,
  NatElim,
  Empty,
  EmptyElim,
  Id,
  Refl,
  IdElim,
};

inline constexpr std::size_t kTagCount = 18;

std::string_view tag_name(Tag tag);

// Number of children a constructor carries.
std::size_t arity(Tag tag);

// Number of variables bound by child `pos` of a node tagged `tag`.
std::size_t binders(Tag tag, std::size_t pos);

/// Immutable de Bruijn term. Copies share structure; equality is structural,
/// which coincides with alpha-equivalence for this representation.
class Term {
 public:
  Term() = default;

  static Term var(std::size_t index);
  static Term univ();
  static Term pi(Term dom, Term cod);
  static Term lam(Term ann, Term body);
  static Term app(Term fn, Term arg);
  static Term sig(Term dom, Term cod);
  static Term pair(Term dom, Term cod, Term first, Term second);
  static Term fst(Term pair);
  static Term snd(Term pair);
  static Term nat();
  static Term zero();
  static Term succ(Term pred);
  static Term nat_elim(Term motive, Term base, Term step, Term scrut);
  static Term empty();
  static Term empty_elim(Term motive, Term scrut);
  static Term id(Term ty, Term lhs, Term rhs);
  static Term refl(Term ty, Term tm);
  static Term id_elim(Term ty, Term lhs, Term motive, Term branch, Term scrut);

  // Builds a node from a tag and a child list of the right arity.
  static Term make(Tag tag, std::vector<Term> children);

  // Succ^k(Zero).
  static Term numeral(std::size_t k);

  explicit operator bool() const { return node_ != nullptr; }

  Tag tag() const;
  bool is(Tag t) const { return node_ && tag() == t; }

  std::size_t index() const;  // Var only
  std::span<const Term> children() const;
  const Term& child(std::size_t pos) const;

  // Every free index of the term is strictly below this bound.
  std::size_t free_bound() const;
  std::size_t size() const;  // node count

  // Named views; each asserts the tag.
  const Term& dom() const;     // Pi, Sig, Pair
  const Term& cod() const;     // Pi, Sig, Pair (binding 1)
  const Term& ann() const;     // Lam
  const Term& body() const;    // Lam (binding 1)
  const Term& fn() const;      // App
  const Term& arg() const;     // App
  const Term& first() const;   // Pair
  const Term& second() const;  // Pair
  const Term& pred() const;    // Succ
  const Term& motive() const;  // NatElim (binding 1), EmptyElim (1), IdElim (2)
  const Term& base() const;    // NatElim
  const Term& step() const;    // NatElim (binding 2)
  const Term& scrut() const;   // Fst, Snd, NatElim, EmptyElim, IdElim
  const Term& ty() const;      // Id, Refl, IdElim
  const Term& lhs() const;     // Id, IdElim
  const Term& rhs() const;     // Id
  const Term& tm() const;      // Refl
  const Term& branch() const;  // IdElim

  bool same_node(const Term& other) const { return node_ == other.node_; }

  friend bool operator==(const Term& a, const Term& b);

 private:
  struct Node;
  explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  const Node& node() const;

  std::shared_ptr<const Node> node_;
};

struct Term::Node {
  Tag tag;
  std::size_t index = 0;
  std::size_t free_bound = 0;
  std::size_t size = 1;
  std::vector<Term> kids;
};

// Rebuilds `t` with each child replaced by `f(child, binders)`. Reuses the
// original node when no child changed.
template <class F>
Term map_children(const Term& t, F&& f) {
  auto kids = t.children();
  std::vector<Term> out;
  out.reserve(kids.size());
  bool changed = false;
  for (std::size_t i = 0; i < kids.size(); ++i) {
    out.push_back(f(kids[i], binders(t.tag(), i)));
    changed = changed || !out.back().same_node(kids[i]);
  }
  return changed ? Term::make(t.tag(), std::move(out)) : t;
}

/// Parallel substitution: indices below `images.size()` map to the
/// stored images, every other index i maps to
/// Var(i - images.size() + tail_shift).
struct Substitution {
  std::vector<Term> images;  // image of index 0 first
  std::size_t tail_shift = 0;

  static Substitution identity() { return {}; }
  static Substitution shift_by(std::size_t k) { return {{}, k}; }
  // Maps index 0 to u and index i+1 to Var i.
  static Substitution single(Term u) { return {{std::move(u)}, 0}; }
  // Maps the innermost variables to `innermost_first`, the rest down by
  // their count.
  static Substitution prefix(std::vector<Term> innermost_first) { return {std::move(innermost_first), 0}; }

  Term lookup(std::size_t i) const;
  // Substitution under one binder: 0 -> Var 0, i+1 -> shift(lookup(i)).
  Substitution lift() const;
  // Drops trailing images that coincide with the tail map.
  Substitution canonical() const;

  friend bool operator==(const Substitution& a, const Substitution& b) {
    return a.tail_shift == b.tail_shift && a.images == b.images;
  }
};

Term apply_subst(const Term& t, const Substitution& sigma);

// compose(s, t) is the substitution "first s, then t":
// apply_subst(apply_subst(x, s), t) == apply_subst(x, compose(s, t)).
Substitution compose(const Substitution& first, const Substitution& then);

// t[u / 0]
Term subst1(const Term& t, const Term& u);
// t[inner / 0, outer / 1] for a body binding two variables.
Term subst2(const Term& t, const Term& outer, const Term& inner);

Term shift(const Term& t, std::size_t by = 1);

// The inverse of shift when index 0 does not occur free.
std::optional<Term> strengthen(const Term& t);

bool occurs_free(const Term& t, std::size_t index);

// Replaces the k-th node of t in preorder by f of that node.
Term replace_subterm(const Term& t, std::size_t k, const std::function<Term(const Term&)>& f);

enum class Class : std::uint8_t { Canonical, NeutralForm, NotWhnf };

Class classify(const Term& t);
bool is_canonical(const Term& t);
bool is_neutral(const Term& t);
bool is_whnf(const Term& t);
bool is_ty(const Term& t);
bool is_pos(const Term& t);
bool is_nat_form(const Term& t);
bool is_fun_form(const Term& t);
bool is_pair_form(const Term& t);
bool is_id_form(const Term& t);

/// Telescope of types; entry 0 of `entries()` is the outermost binder.
class Context {
 public:
  Context() = default;
  Context(std::initializer_list<Term> outermost_first) : entries_(outermost_first) {}
  explicit Context(std::vector<Term> outermost_first) : entries_(std::move(outermost_first)) {}

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const std::vector<Term>& entries() const { return entries_; }

  // The context extended with one innermost entry.
  Context extend(Term ty) const;
  Context extend(Term ty1, Term ty2) const { return extend(std::move(ty1)).extend(std::move(ty2)); }

  // The type of de Bruijn index i, scoped in this context.
  std::optional<Term> lookup(std::size_t i) const;

  // Context without its innermost `n` entries.
  Context prefix_dropping(std::size_t n) const;

  friend bool operator==(const Context&, const Context&) = default;

 private:
  std::vector<Term> entries_;
};

// Typing shapes shared by the eliminator rules.

// P[succ x] for a motive P over x : Nat, read in the context G, x : Nat, y : P.
Term nat_step_type(const Term& motive);
// G, x : A, y : Id(A, a, x): the context of an idElim motive.
Context id_motive_context(const Context& ctx, const Term& ty, const Term& lhs);
// P[a, refl A a]: the type of an idElim branch.
Term id_branch_type(const Term& motive, const Term& ty, const Term& lhs);

}  // namespace mltt
