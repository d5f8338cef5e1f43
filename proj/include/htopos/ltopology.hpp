// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "htopos/topos.hpp"

namespace htopos {

/// Lawvere–Tierney topology as one function Ω(c) → Ω(c) per stage.
struct LTTopology {
  std::string name;
  std::vector<Function> j;

  Elem operator()(Index c, Elem s) const { return j[c][s]; }
  PresheafMap as_map(const Topos& t) const;
  friend bool operator==(const LTTopology& a, const LTTopology& b) { return a.j == b.j; }
};

/// Violated axioms: naturality, j⊤ = ⊤, jj = j, j(S∧T) = jS∧jT, and
/// S ≤ jS. Empty iff `j` is a topology.
std::vector<std::string> validate_topology(const Topos& t, const LTTopology& j);

/// Every topology, found by filtering Hom(Ω, Ω) with j⊤ = ⊤ pinned.
/// Named "j0", "j1", ... in canonical order.
std::vector<LTTopology> enumerate_topologies(const Topos& t);
LTTopology identity_topology(const Topos& t);
LTTopology double_negation(const Topos& t);

Subobject closure(const Topos& t, const LTTopology& j, const Subobject& s);
bool is_dense(const Topos& t, const LTTopology& j, const Subobject& s);
bool is_closed(const Topos& t, const LTTopology& j, const Subobject& s);
/// Image of a mono as a subobject of its codomain.
Subobject image_subobject(const PresheafMap& m);
bool is_dense_mono(const Topos& t, const LTTopology& j, const PresheafMap& m);

/// Δ ⊆ X×X.
Subobject diagonal(const Presheaf& x);
/// The diagonal is closed.
bool is_separated(const Topos& t, const LTTopology& j, const Presheaf& x);

/// R_j(X) = closure of the diagonal.
Subobject mod_relation(const Topos& t, const LTTopology& j, const Presheaf& x);

struct QuotientResult {
  Subobject relation;  // ⊆ X×X
  Presheaf object;
  PresheafMap q;
};
/// X / R_j(X). Throws InternalError when R_j(X) is not an equivalence
/// relation.
QuotientResult quotient(const Topos& t, const LTTopology& j, const Presheaf& x);
/// Q_j on an arrow g: X → Y.
PresheafMap quotient_map(const QuotientResult& qx, const QuotientResult& qy, const PresheafMap& g);

struct MediatorResult {
  bool respects = true;
  std::string witness;                // split pair when !respects
  std::optional<PresheafMap> mediator;
  std::uint64_t solutions = 0;        // maps m with m∘q = f (exhaustive)
};
/// The unique f̄ with f̄∘q = f for f constant on R_j-classes.
MediatorResult quotient_universal(const Topos& t, const QuotientResult& qx, const PresheafMap& f);

/// Grothendieck coverage of j: S covers c iff j_c(S) = ⊤.
struct Coverage {
  std::vector<std::vector<Elem>> covers;  // per stage, sieve indices
};
Coverage coverage(const Topos& t, const LTTopology& j);
/// j(S) = {f : f*S covers dom f}.
LTTopology topology_from_coverage(const Topos& t, const Coverage& cov);

struct Sheafification {
  Presheaf plus;       // X⁺
  PresheafMap u;       // X → X⁺
  Presheaf object;     // LX = X⁺⁺
  PresheafMap unit;    // l_X : X → LX
};
/// Plus-construction twice. X⁺(c) = matching families on the least
/// covering sieve of c.
Sheafification sheafify(const Topos& t, const LTTopology& j, const Presheaf& x);

/// Restriction X(c) → Match(S, X) is bijective for every cover S; the
/// first failure is described in `witness`.
bool is_sheaf(const Topos& t, const LTTopology& j, const Presheaf& x, std::string* witness = nullptr);

struct LiftInputs {
  Presheaf k;
  Presheaf x;
  PresheafMap h;  // K×X → Y
  PresheafMap f;  // Y → LX
};
struct LiftResult {
  bool dense_mono = false;  // (1×l_X)∘(γ_K×γ_X) is ¬¬-dense monic
  bool exists = false;
  bool commutes = false;    // h'∘(1×l_X) = f∘h
  std::uint64_t solutions = 0;  // maps making the square commute
  std::optional<PresheafMap> lift;
  std::string witness;
};
/// Extends f∘h∘(γ_K×γ_X) along the dense mono into the sheaf LX, then
/// counts all h' with h'∘(1×l_X) = f∘h. `hypotheses_hold` carries the
/// NS and DSO certificates; PreconditionError when false or j ≠ ¬¬.
LiftResult homotopy_lift(const Topos& t, const LTTopology& j, const LiftInputs& in,
                         const Sheafification& lx, bool hypotheses_hold);

}  // namespace htopos
