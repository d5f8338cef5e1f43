// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>
#include <string>
#include <vector>

#include "htopos/topos.hpp"

namespace htopos {

/// Connected components of the category of elements of X.
struct PiecesResult {
  std::size_t components = 0;
  /// assignment[c][x] = component of x ∈ X(c); components are numbered by
  /// their smallest element in the stage-major numbering.
  std::vector<std::vector<std::size_t>> assignment;
  /// p_X : X → discrete(components).
  PresheafMap p;
};

PiecesResult pi0(const Presheaf& x);
bool is_connected(const Presheaf& x);

/// Π₀f as a function between component indices.
std::vector<std::size_t> pi0_map(const PresheafMap& f, const PiecesResult& px,
                                 const PiecesResult& py);
/// discrete(S) → discrete(T) for a function S → T.
PresheafMap discrete_map(const Topos& t, const std::vector<std::size_t>& fn, std::size_t target_size);

struct PointsResult {
  std::vector<PresheafMap> points;  // global elements in canonical order
  PresheafMap gamma;                // discrete(|points|) → X
};
PointsResult points(const Topos& t, const Presheaf& x);

/// Λ S: stage c = functions hom(t, c) → S for the terminal object t. Refuses
/// (PreconditionError) on sites without a terminal object or with an
/// unpointed object.
Presheaf codiscrete(const Topos& t, std::size_t s);
/// The function points(X) → S read off a map X → Λ S.
std::vector<std::size_t> codiscrete_transpose(const Topos& t, const PresheafMap& f,
                                              const PointsResult& pts, std::size_t s);

/// θ_X = p_X ∘ γ_X as a function from point indices to component indices.
std::vector<std::size_t> theta(const Topos& t, const Presheaf& x);

/// Components of Y^X restricted to its global elements, which are in
/// bijection with Hom(X, Y) (canonical order). On sites with a terminal
/// object where every object is pointed, stage t holds every component and
/// only that stage is materialized; links between global elements are found
/// by projecting the higher stages onto their point restrictions.
/// Elsewhere the exponential is built and pi0() is used. `budget` = 0 means
/// the configured one.
struct ExponentialPieces {
  Presheaf x;
  Presheaf y;
  std::size_t components = 0;  // |Π₀(Y^X)|
  std::size_t classes = 0;     // distinct components hit by names
  std::size_t count = 0;       // |Hom(X, Y)|
  std::size_t width = 0;       // flattened table width (X.total_size())
  std::vector<Elem> tables;    // Hom(X, Y) in canonical order, flattened
  std::vector<std::size_t> label;  // class of name(arrow i), numbered by first arrow
  bool streamed = false;

  PresheafMap arrow(std::size_t i) const;
  /// Position of f in Hom(X, Y).
  std::size_t index_of(const PresheafMap& f) const;
};
std::shared_ptr<const ExponentialPieces> exponential_pieces(const Topos& t, const Presheaf& x,
                                                            const Presheaf& y, std::uint64_t budget = 0);

/// The same computation, uncached and always via the full exponential.
ExponentialPieces exponential_pieces_direct(const Topos& t, const Presheaf& x, const Presheaf& y);

struct CheckLine {
  std::string check;
  bool ok = true;
  std::string witness;
};

struct AdjunctionCertificate {
  std::string left;
  std::string right;
  std::vector<std::string> family;
  std::vector<CheckLine> lines;
  bool verified() const;
};

/// Π ⊣ Δ on the family: Hom(X, ΔS) ≅ functions(Π₀X → S) for S ≤ max_s,
/// natural in X (along every map between family members, capped by
/// rep_bound) and in S, with the triangle identities.
AdjunctionCertificate certify_pieces_adjunction(const Topos& t, const std::vector<Presheaf>& family,
                                                const std::vector<std::string>& names,
                                                std::size_t max_s = 3);
/// Γ ⊣ Λ on the family: Hom(X, ΛS) ≅ functions(points X → S).
AdjunctionCertificate certify_points_adjunction(const Topos& t, const std::vector<Presheaf>& family,
                                                const std::vector<std::string>& names,
                                                std::size_t max_s = 3);

}  // namespace htopos
