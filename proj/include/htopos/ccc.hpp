// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "htopos/topos.hpp"

namespace htopos {

/// f: A×X → Y to its transpose A → Y^X. `f.dom()` must be product(A, X).
PresheafMap transpose(const Topos& t, const Presheaf& a, const Presheaf& x, const PresheafMap& f);
/// g: A → Y^X back to A×X → Y.
PresheafMap untranspose(const Topos& t, const PresheafMap& g, const Presheaf& x, const Presheaf& y);

/// The point 1 → Y^X transposing f∘π_X.
PresheafMap name(const Topos& t, const PresheafMap& f);
/// Inverse of name(): a point 1 → Y^X back to X → Y.
PresheafMap unname(const Topos& t, const PresheafMap& point, const Presheaf& x, const Presheaf& y);

/// σ_X^A : X → X^A, the transpose of π_X : X×A → X.
PresheafMap sigma(const Topos& t, const Presheaf& x, const Presheaf& a);
/// ev^t_X : X^T → X for a point t: 1 → T.
PresheafMap ev_at(const Topos& t, const PresheafMap& point, const Presheaf& x);

/// Z^Y × Y^X → Z^X.
struct InternalComposition {
  Product domain;
  PresheafMap map;
};
InternalComposition internal_composition(const Topos& t, const Presheaf& x, const Presheaf& y,
                                         const Presheaf& z);

/// X^φ : X^A → X^B for φ: B → A.
PresheafMap exp_contravariant(const Topos& t, const Presheaf& x, const PresheafMap& phi);
/// r^A : X^A → Y^A for r: X → Y.
PresheafMap exp_covariant(const Topos& t, const PresheafMap& r, const Presheaf& a);

/// α = ⟨Z^{i1}, Z^{i2}⟩ : Z^{X+Y} → Z^X × Z^Y.
struct Distributivity {
  Coproduct sum;
  Product target;
  PresheafMap alpha;
};
Distributivity distributivity_iso(const Topos& t, const Presheaf& x, const Presheaf& y,
                                  const Presheaf& z);

/// ⟨1, !⟩-style helpers: the constant map a∘! : X → A for a point a: 1 → A.
PresheafMap constant_map(const Presheaf& x, const PresheafMap& point);
/// The map X → 1×... realised as (a!, 1): X → A×X into the given product.
PresheafMap point_section(const Product& ax, const PresheafMap& point);

}  // namespace htopos
