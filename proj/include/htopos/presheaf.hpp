// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "htopos/fincat.hpp"

namespace htopos {

using Elem = std::uint32_t;
/// A total function {0..n-1} → {0..k-1} stored as its value table.
using Function = std::vector<Elem>;

/// A finite presheaf on a site: stage(c) = {0..size(c)-1} and, for every
/// morphism f: d → c, a restriction function stage(c) → stage(d).
///
/// Presheaf is an immutable value with O(1) copies; the tables are shared.
class Presheaf {
 public:
  Presheaf() = default;
  Presheaf(SiteRef base, std::vector<std::size_t> sizes, std::vector<Function> action);

  /// Same as the constructor, but throws SemanticError when the functor
  /// laws fail.
  static Presheaf checked(SiteRef base, std::vector<std::size_t> sizes,
                          std::vector<Function> action);

  bool valid_handle() const noexcept { return static_cast<bool>(data_); }
  const FinCategory& base() const { return *data_->base; }
  const SiteRef& base_ref() const { return data_->base; }

  std::size_t size(Index c) const { return data_->sizes[c]; }
  const std::vector<std::size_t>& sizes() const { return data_->sizes; }
  std::size_t total_size() const { return data_->total; }
  /// Offset of stage c in the stage-major numbering of all elements.
  std::size_t offset(Index c) const { return data_->offsets[c]; }

  const Function& action(Index f) const { return data_->action[f]; }
  Elem act(Index f, Elem x) const { return data_->action[f][x]; }

  std::uint64_t digest() const noexcept { return data_->digest; }
  bool same_handle(const Presheaf& o) const noexcept { return data_ == o.data_; }

  /// Violated presheaf laws; empty iff this is a functor C^op → FinSet.
  std::vector<std::string> validate() const;

  friend bool operator==(const Presheaf& a, const Presheaf& b);

 private:
  struct Data {
    SiteRef base;
    std::vector<std::size_t> sizes;
    std::vector<std::size_t> offsets;
    std::size_t total = 0;
    std::vector<Function> action;
    std::uint64_t digest = 0;
  };
  std::shared_ptr<const Data> data_;
};

bool same_site(const Presheaf& a, const Presheaf& b);
void require_same_site(const Presheaf& a, const Presheaf& b, const char* op);

/// Natural transformation dom → cod given by one function per stage.
class PresheafMap {
 public:
  PresheafMap() = default;
  PresheafMap(Presheaf dom, Presheaf cod, std::vector<Function> components);
  static PresheafMap checked(Presheaf dom, Presheaf cod, std::vector<Function> components);

  const Presheaf& dom() const { return dom_; }
  const Presheaf& cod() const { return cod_; }
  const Function& component(Index c) const { return comp_[c]; }
  const std::vector<Function>& components() const { return comp_; }
  Elem operator()(Index c, Elem x) const { return comp_[c][x]; }

  /// Naturality squares that fail, described as "f at x"; empty iff natural.
  std::vector<std::string> validate() const;

  friend bool operator==(const PresheafMap& a, const PresheafMap& b) {
    return a.comp_ == b.comp_ && a.dom_ == b.dom_ && a.cod_ == b.cod_;
  }

 private:
  Presheaf dom_;
  Presheaf cod_;
  std::vector<Function> comp_;
};

PresheafMap identity_map(const Presheaf& x);
/// g∘f.
PresheafMap compose(const PresheafMap& g, const PresheafMap& f);

/// Sieve on c: members are morphisms with codomain c, as a bitmask indexed
/// by morphism index.
struct Sieve {
  Index at = 0;
  std::vector<bool> members;
  friend bool operator==(const Sieve&, const Sieve&) = default;
};

/// Subpresheaf of `of`: selected(c)[x] says whether x ∈ S(c).
struct Subobject {
  Presheaf of;
  std::vector<std::vector<bool>> selected;

  bool contains(Index c, Elem x) const { return selected[c][x]; }
  /// Elements selected whose restriction is not; empty iff closed.
  std::vector<std::string> validate() const;
  friend bool operator==(const Subobject& a, const Subobject& b) {
    return a.selected == b.selected && a.of == b.of;
  }
};

Subobject whole_subobject(const Presheaf& x);
Subobject empty_subobject(const Presheaf& x);
bool subobject_leq(const Subobject& a, const Subobject& b);
Subobject subobject_meet(const Subobject& a, const Subobject& b);

struct Inclusion {
  Presheaf object;
  PresheafMap incl;  // object ↪ of, elements in ascending order
};
Inclusion subobject_presheaf(const Subobject& s);

// --- representables and (co)limits ---------------------------------------

Presheaf yoneda(const SiteRef& site, Index c);
Presheaf terminal(const SiteRef& site);
Presheaf initial(const SiteRef& site);
/// Constant presheaf on n elements with identity restrictions.
Presheaf discrete(const SiteRef& site, std::size_t n);

struct Product {
  Presheaf object;
  PresheafMap p1;
  PresheafMap p2;
  /// Element (x, y) at stage c is encoded as x * |Y(c)| + y.
  Elem pair(Index c, Elem x, Elem y) const {
    return static_cast<Elem>(x * p2.cod().size(c) + y);
  }
};
Product product(const Presheaf& x, const Presheaf& y);
/// ⟨f, g⟩ : A → X×Y.
PresheafMap pair_maps(const Product& prod, const PresheafMap& f, const PresheafMap& g);
/// f × g : A×B → X×Y.
PresheafMap product_maps(const Product& src, const Product& dst, const PresheafMap& f,
                         const PresheafMap& g);

struct Coproduct {
  Presheaf object;
  PresheafMap i1;
  PresheafMap i2;
};
/// X elements first, then Y elements, at every stage.
Coproduct coproduct(const Presheaf& x, const Presheaf& y);
/// [f, g] : X+Y → Z.
PresheafMap copair_maps(const Coproduct& sum, const PresheafMap& f, const PresheafMap& g);

/// Equalizer of f, g : X → Y as the inclusion of {x : f x = g x}.
Inclusion equalizer(const PresheafMap& f, const PresheafMap& g);

struct Quotient {
  Presheaf object;
  PresheafMap q;
};
/// Coequalizer of f, g : X → Y: the generated equivalence on each stage by
/// union-find, then the induced action (verified to descend).
Quotient coequalizer(const PresheafMap& f, const PresheafMap& g);
/// Quotient of X by per-stage labels; classes are numbered by smallest
/// member. Throws SemanticError when the action does not descend.
Quotient quotient_by_labels(const Presheaf& x, const std::vector<std::vector<std::size_t>>& labels);

struct Pullback {
  Presheaf object;
  PresheafMap p1;  // to X
  PresheafMap p2;  // to Y
};
/// Pullback of f: X → Z and g: Y → Z, as the subobject of X×Y.
Pullback pullback(const PresheafMap& f, const PresheafMap& g);

/// ! : X → 1 and the unique map 0 → X.
PresheafMap bang(const Presheaf& x);
PresheafMap from_initial(const Presheaf& x);

// --- image factorization ----------------------------------------------------

bool is_mono(const PresheafMap& f);
bool is_epi(const PresheafMap& f);
bool is_iso(const PresheafMap& f);
/// Inverse of an iso; throws PreconditionError otherwise.
PresheafMap inverse(const PresheafMap& f);

struct ImageFactorization {
  PresheafMap epi;   // X ↠ im
  PresheafMap mono;  // im ↪ Y
};
ImageFactorization image_factorization(const PresheafMap& f);

/// Stable byte serialization used for structural digests: stage count,
/// stage sizes, then every action table in morphism order, each integer as a
/// little-endian u32.
std::vector<std::uint8_t> serialize(const Presheaf& x);

}  // namespace htopos
