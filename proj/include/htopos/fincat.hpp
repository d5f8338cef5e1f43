// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace htopos {

using Index = std::uint32_t;
inline constexpr Index kNone = std::numeric_limits<Index>::max();

struct Morphism {
  Index dom = 0;
  Index cod = 0;
  std::string name;
};

/// A small finite category stored as dense tables.
///
/// Morphisms are numbered 0..m-1. `compose(g, f)` is the index of g∘f and is
/// defined exactly when cod(f) = dom(g); otherwise it is kNone. The
/// constructor only checks table shapes. Use validate_category() to check
/// the category axioms.
class FinCategory {
 public:
  FinCategory(std::string name, std::vector<std::string> object_names,
              std::vector<Morphism> morphisms, std::vector<Index> identities,
              std::vector<Index> compose_table);

  const std::string& name() const noexcept { return name_; }
  std::size_t object_count() const noexcept { return objects_.size(); }
  std::size_t morphism_count() const noexcept { return morphisms_.size(); }

  const std::string& object_name(Index c) const { return objects_.at(c); }
  const Morphism& morphism(Index f) const { return morphisms_.at(f); }
  Index dom(Index f) const { return morphisms_[f].dom; }
  Index cod(Index f) const { return morphisms_[f].cod; }
  Index identity(Index c) const { return identities_.at(c); }
  bool is_identity(Index f) const { return identities_[morphisms_[f].dom] == f; }

  /// g∘f, or kNone when the pair is not composable.
  Index compose(Index g, Index f) const {
    return table_[static_cast<std::size_t>(g) * morphisms_.size() + f];
  }

  /// Morphisms d → c in ascending index order.
  const std::vector<Index>& hom(Index d, Index c) const {
    return hom_[static_cast<std::size_t>(d) * objects_.size() + c];
  }
  /// Position of f inside hom(dom f, cod f).
  Index hom_position(Index f) const { return hom_pos_[f]; }
  /// All morphisms with codomain c in ascending index order.
  const std::vector<Index>& into(Index c) const { return into_[c]; }

  std::optional<Index> find_object(std::string_view name) const;
  std::optional<Index> find_morphism(std::string_view name) const;

  /// Stable structural digest (names excluded).
  std::uint64_t digest() const noexcept { return digest_; }

  const std::vector<Index>& compose_table() const noexcept { return table_; }
  const std::vector<Index>& identities() const noexcept { return identities_; }
  const std::vector<std::string>& object_names() const noexcept { return objects_; }
  const std::vector<Morphism>& morphisms() const noexcept { return morphisms_; }

  friend bool operator==(const FinCategory& a, const FinCategory& b) {
    return a.objects_.size() == b.objects_.size() &&
           a.identities_ == b.identities_ && a.table_ == b.table_ &&
           a.same_shape(b);
  }

 private:
  bool same_shape(const FinCategory& other) const;

  std::string name_;
  std::vector<std::string> objects_;
  std::vector<Morphism> morphisms_;
  std::vector<Index> identities_;
  std::vector<Index> table_;
  std::vector<std::vector<Index>> hom_;
  std::vector<Index> hom_pos_;
  std::vector<std::vector<Index>> into_;
  std::uint64_t digest_ = 0;
};

using SiteRef = std::shared_ptr<const FinCategory>;

enum class AxiomKind {
  IdentityShape,     // identity_of(c) is not an endomorphism of c
  MissingComposite,  // composable pair without a composite
  SpuriousComposite, // non-composable pair with a composite
  CompositeShape,    // dom/cod of g∘f wrong
  LeftIdentity,      // id_cod(f) ∘ f ≠ f
  RightIdentity,     // f ∘ id_dom(f) ≠ f
  Associativity,     // h∘(g∘f) ≠ (h∘g)∘f
};

struct AxiomViolation {
  AxiomKind kind;
  std::vector<Index> witnesses;  // morphism (or object) indices
  std::string describe(const FinCategory& c) const;
};

/// Every violated category axiom with the morphisms witnessing it. Empty iff
/// the tables form a category.
std::vector<AxiomViolation> validate_category(const FinCategory& c);

/// The unique object t with exactly one morphism c → t for every c.
std::optional<Index> terminal_object(const FinCategory& c);
std::optional<Index> initial_object(const FinCategory& c);

struct PointCheck {
  bool all_pointed = false;
  Index terminal = kNone;
  /// Per object: a morphism terminal → object, if any.
  std::vector<std::optional<Index>> witness;
};

/// Points are morphisms *from* the terminal object. Throws PreconditionError
/// when the category has no terminal object.
PointCheck every_object_has_point(const FinCategory& c);

/// Presheaf-side Nullstellensatz criterion: a terminal object and every
/// object pointed. For the covariant functor category Set^D the matching
/// condition (initial object, every object with a copoint) is obtained by
/// applying this check to opposite(D); see covariant_ns_criterion().
bool presheaf_ns_criterion(const FinCategory& c);
bool covariant_ns_criterion(const FinCategory& d);

/// Swaps dom/cod and transposes the composition table. Indices are kept, so
/// opposite(opposite(C)) == C.
FinCategory opposite(const FinCategory& c);

/// Generators-and-relations presentation of a finite category.
///
/// Words are paths listing generators in the order they are applied, so the
/// word {f, g} denotes g∘f. A relation identifies two parallel words; an empty
/// word is the identity on `object`.
struct Presentation {
  struct Generator {
    std::string name;
    Index dom;
    Index cod;
  };
  struct Relation {
    std::vector<Index> lhs;
    std::vector<Index> rhs;
    Index object = kNone;  // required when one side is empty
  };

  std::string name;
  std::vector<std::string> objects;
  std::vector<Generator> generators;
  std::vector<Relation> relations;
  std::size_t bound = 64;
};

/// Closes a presentation under composition. Relations are oriented into
/// shortlex-decreasing rewrite rules; the result is validated and any axiom
/// violation (non-confluent relations) raises SemanticError. Exceeding
/// `bound` morphisms raises ResourceError.
FinCategory close_presentation(const Presentation& p);

/// Builtin sites: "one", "delta1", "two_discrete", "parallel_pair".
FinCategory builtin_category(std::string_view name);
SiteRef builtin_site(std::string_view name);
const std::vector<std::string>& builtin_names();

/// Functor between finite categories given by object and morphism maps.
struct FinFunctor {
  SiteRef source;
  SiteRef target;
  std::vector<Index> object_map;
  std::vector<Index> morphism_map;
};

/// Laws broken by the functor (identities, dom/cod, composition); empty iff
/// it is a functor.
std::vector<std::string> validate_functor(const FinFunctor& f);

}  // namespace htopos
