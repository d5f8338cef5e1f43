// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "htopos/ltopology.hpp"
#include "htopos/pieces.hpp"

namespace htopos {

enum class TheoryKind { Identity, Bang, Pieces, Topology };

/// p_X : X → Π₀X.
struct Reflection {
  Presheaf object;
  PresheafMap p;
};

/// A natural transformation p : 1 ⇒ Π₀ of one of the supported kinds. The
/// topos must outlive the theory. Copies share one reflection cache.
class HomotopyTheory {
 public:
  /// `j` is required for TheoryKind::Topology and ignored otherwise.
  HomotopyTheory(const Topos& t, TheoryKind kind, std::optional<LTTopology> j = std::nullopt);

  const Topos& topos() const { return *topos_; }
  TheoryKind kind() const { return kind_; }
  const std::optional<LTTopology>& topology() const { return j_; }
  /// "identity", "bang", "pieces" or "topology:<name>".
  std::string name() const;

  Reflection reflect(const Presheaf& x) const;
  /// Π₀f, the unique map with Π₀f ∘ p_X = p_Y ∘ f.
  PresheafMap apply(const PresheafMap& f) const;

  struct Cache;
  Cache& cache() const { return *cache_; }

 private:
  const Topos* topos_;
  TheoryKind kind_;
  std::optional<LTTopology> j_;
  std::shared_ptr<Cache> cache_;
};

struct TheoryCertificate {
  std::string theory;
  std::vector<std::string> family;
  std::vector<CheckLine> lines;
  bool verified() const;
};

/// Checks on the family: p natural along family maps, Π₀1 ≅ 1, the
/// comparison Π₀(X×Y) → Π₀X×Π₀Y bijective, E(1, p_X) surjective.
TheoryCertificate certify_theory(const HomotopyTheory& th, const std::vector<Presheaf>& family,
                                 const std::vector<std::string>& names);

/// p_{Y^X}∘'f' = p_{Y^X}∘'g', computed by the fastest route for the kind.
bool homotopic(const HomotopyTheory& th, const PresheafMap& f, const PresheafMap& g);
/// The same relation evaluated literally on the reflection of Y^X.
bool homotopic_by_definition(const HomotopyTheory& th, const PresheafMap& f, const PresheafMap& g);

/// h : A×Y → Y with h∘⟨a0!,1⟩ = 1_Y and h∘⟨a1!,1⟩ = y0∘!, A connected.
struct Contraction {
  Presheaf a;
  PresheafMap a0;
  PresheafMap a1;
  PresheafMap base;  // y0 : 1 → Y
  Product ay;
  PresheafMap h;
};
/// Violations of the contraction identities; empty iff valid.
std::vector<std::string> verify_contraction(const Topos& t, const Contraction& c);
/// Searches Hom(y(c)×Y, Y) for a contraction through a representable
/// interval. Only attempted when Y has at most `max_size` elements.
std::optional<Contraction> find_contraction(const Topos& t, const Presheaf& y, std::size_t max_size = 256);
/// The induced contraction of Y^Z: (α, φ) ↦ ((u, z) ↦ h(A(u)α, φ(u, z))).
Contraction exponential_contraction(const Topos& t, const Contraction& c, const Presheaf& z);

/// E_p(X, Y) as a partition of Hom(X, Y).
struct HomClasses {
  Presheaf x;
  Presheaf y;
  std::size_t classes = 0;
  /// False when Hom(X, Y) was too large and a contraction of Y decided the
  /// partition; then no arrows are stored.
  bool enumerated = true;
  std::string method;
  std::size_t count = 0;
  std::size_t width = 0;
  std::vector<Elem> tables;            // Hom(X, Y) in canonical order
  std::vector<std::size_t> label;      // arrow → class, numbered by first arrow
  std::vector<std::size_t> representative;  // class → first arrow
  /// |E(1, Π₀(Y^X))| and class → index among those points, when computed.
  std::optional<std::size_t> reflection_points;
  std::vector<std::size_t> class_points;

  PresheafMap arrow(std::size_t i) const;
  std::size_t index_of(const PresheafMap& f) const;
  std::size_t class_of(const PresheafMap& f) const;
};

/// Cached per theory. `hint` may carry a contraction of Y used when the
/// enumeration exceeds the budget (pieces theory only).
std::shared_ptr<const HomClasses> hom_classes(const HomotopyTheory& th, const Presheaf& x,
                                              const Presheaf& y, const Contraction* hint = nullptr);

/// Class of g∘f in E_p(X, Z) for class representatives.
std::size_t ep_compose(const HomotopyTheory& th, const HomClasses& xy, std::size_t cf,
                       const HomClasses& yz, std::size_t cg);

/// Representative independence, with every pair of representatives checked
/// when the pair count is at most rep_bound², otherwise rep_bound² seeded
/// samples.
CheckLine ep_compose_check(const HomotopyTheory& th, const Presheaf& x, const Presheaf& y,
                           const Presheaf& z, const std::string& label);
/// ⟨f, g⟩ : Z → X×Y.
CheckLine ep_pair_check(const HomotopyTheory& th, const Presheaf& z, const Presheaf& x,
                        const Presheaf& y, const std::string& label);
/// f : X×Z → Y to f̂ : X → Y^Z.
CheckLine ep_transpose_check(const HomotopyTheory& th, const Presheaf& x, const Presheaf& z,
                             const Presheaf& y, const std::string& label);
/// [f, g] : X+Y → Z.
CheckLine ep_copair_check(const HomotopyTheory& th, const Presheaf& x, const Presheaf& y,
                          const Presheaf& z, const std::string& label);

/// [h] ↦ ([π₁h], [π₂h]) is a bijection E_p(Z, X×Y) → E_p(Z, X) × E_p(Z, Y).
CheckLine theorem_a_product(const HomotopyTheory& th, const Presheaf& z, const Presheaf& x,
                            const Presheaf& y, const std::string& label);
/// |E_p(X×Z, Y)| = |E_p(X, Y^Z)|, and [f] ↦ [f̂] bijective when enumerated.
CheckLine theorem_a_exponential(const HomotopyTheory& th, const Presheaf& x, const Presheaf& y,
                                const Presheaf& z, const std::string& label);
/// [k] ↦ ([k i₁], [k i₂]) is a bijection E_p(X+Y, Z) → E_p(X, Z) × E_p(Y, Z).
CheckLine theorem_a_sum(const HomotopyTheory& th, const Presheaf& x, const Presheaf& y,
                        const Presheaf& z, const std::string& label);

/// The sum functor E_p/X × E_p/Y → E_p/(X+Y) for X, Y and slice objects
/// drawn from the family: essentially surjective, full and faithful.
std::vector<CheckLine> ep_extensivity_check(const HomotopyTheory& th, const std::vector<Presheaf>& family,
                                            const std::vector<std::string>& names);

/// Π₀(Y^φ ∘ r^A)∘u = Π₀(r^B)∘Π₀(X^φ)∘u for every point u of Π₀(X^A).
CheckLine ep_hom_action(const HomotopyTheory& th, const PresheafMap& phi, const PresheafMap& r,
                        const std::string& label);

}  // namespace htopos
