// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "htopos/homotopy.hpp"

namespace htopos {

struct Decidability {
  bool decidable = false;
  bool complement_closed = false;  // X×X minus the diagonal is a subpresheaf
  bool actions_injective = false;
  std::string witness;
};
Decidability is_decidable(const Presheaf& x);

struct PostulateCertificate {
  std::string postulate;
  /// "site criteria", "family", "refuted", or for WDQO "components
  /// realization refuted" (Π₀ as components is then not the minimal
  /// decidable quotient).
  std::string route;
  std::vector<std::string> family;
  std::vector<CheckLine> lines;
  bool holds = false;
};
/// Site criteria (terminal object, every object pointed) or, failing those,
/// points of every non-initial family member and representable.
PostulateCertificate check_NS(const Topos& t, const std::vector<Presheaf>& family,
                              const std::vector<std::string>& names);
/// Per X: Π₀X decidable, every X → 2 factors uniquely through p_X, and the
/// maps X → 2 separate the components.
PostulateCertificate check_WDQO(const Topos& t, const std::vector<Presheaf>& family,
                                const std::vector<std::string>& names);
/// Per X: the image of γ_X is decidable and contains every decidable
/// subobject that contains all points.
PostulateCertificate check_DSO(const Topos& t, const std::vector<Presheaf>& family,
                               const std::vector<std::string>& names);

/// Connected object A with points a, b and h : A×X → Y.
struct ExplicitHomotopy {
  Presheaf a;
  PresheafMap pa;
  PresheafMap pb;
  Product ax;
  PresheafMap h;
};
/// Violations of h∘⟨a!,1⟩ = f, h∘⟨b!,1⟩ = g and Π₀A = 1.
std::vector<std::string> verify_explicit_homotopy(const Topos& t, const ExplicitHomotopy& e,
                                                  const PresheafMap& f, const PresheafMap& g);
/// K = component of Y^X through 'f', a and b the corestricted names, h the
/// restricted evaluation. Absent when f and g are not homotopic. Pieces
/// theory on an NS site only (PreconditionError otherwise).
std::optional<ExplicitHomotopy> explicit_homotopy_search(const HomotopyTheory& th, const PresheafMap& f,
                                                         const PresheafMap& g);
/// Valid certificate, f ∼ g, and ĥ∘a = 'f', ĥ∘b = 'g'.
bool verify_explicit_implies_homotopic(const HomotopyTheory& th, const ExplicitHomotopy& e,
                                       const PresheafMap& f, const PresheafMap& g,
                                       std::string* witness = nullptr);

/// Π₀X ≅ 1 under the theory.
bool theory_connected(const HomotopyTheory& th, const Presheaf& x);

struct ContractibilityReport {
  std::vector<std::string> family;
  bool pointed = false;
  bool route1 = false;  // 1_A ∼ a! for some point a
  bool route2 = false;  // Π₀(σ_X) iso for X in the family
  bool route3 = false;  // A^X connected for X in the family
  bool route4 = false;  // A pointed and A^A connected
  bool agree = false;
  bool contractible = false;  // route 1
  std::vector<CheckLine> lines;
};
ContractibilityReport is_contractible(const HomotopyTheory& th, const Presheaf& a,
                                      const std::vector<Presheaf>& family,
                                      const std::vector<std::string>& names);

struct CohesionReport {
  std::string site;
  std::vector<std::string> family;  // Ω appended when absent
  bool degenerate = false;
  PostulateCertificate ns;
  PostulateCertificate wdqo;
  PostulateCertificate dso;
  bool postulates = false;
  /// Absent when the postulates fail and the notions do not apply.
  std::optional<bool> quality_type;
  std::optional<bool> sufficiently_cohesive;
  bool omega_contractible = false;
  bool omega_connected = false;
  bool bipointed_connected = false;
  std::string bipointed_witness;
  std::vector<CheckLine> lines;
  bool consistent() const;
};
CohesionReport classify(const Topos& t, const std::vector<Presheaf>& family,
                        const std::vector<std::string>& names);

struct SheafConnectednessReport {
  bool sufficiently_cohesive = false;
  std::vector<CheckLine> lines;
  bool consistent() const;
};
/// For j = ¬¬ and X in the family: LX a sheaf, L idempotent, LX nonempty ⇒
/// connected under sufficient cohesion, L(2) connected and bipointed iff
/// sufficiently cohesive, and X contractible ⇒ LX contractible.
SheafConnectednessReport sheaf_connectedness_check(const Topos& t, const std::vector<Presheaf>& family,
                                                   const std::vector<std::string>& names);

struct NoMotionReport {
  std::vector<std::size_t> exponential_sizes;  // A^T per stage
  std::vector<std::size_t> base_sizes;         // A per stage
  bool iso = false;
};
/// ev⁰ : A^T → A. PreconditionError listing each violated hypothesis (T
/// connected, A decidable, NS, WDQO).
NoMotionReport no_motion(const Topos& t, const Presheaf& tobj, const PresheafMap& zero, const Presheaf& a);

struct MonoidZeroReport {
  std::vector<std::string> axiom_violations;
  bool connected = false;
  bool contractible = false;
  std::optional<ExplicitHomotopy> homotopy;  // h = mult, from 1_M to zero!
  std::vector<CheckLine> lines;
  bool consistent() const;
};
/// `mult` has domain product(m, m).
MonoidZeroReport monoid_zero_check(const HomotopyTheory& th, const Presheaf& m, const PresheafMap& mult,
                                   const PresheafMap& one, const PresheafMap& zero);

struct RReport {
  Presheaf r;
  PresheafMap incl;  // R ↪ T^T
  PresheafMap mult;  // R×R → R, composition
  PresheafMap one;   // '1_T'
  PresheafMap zero;  // 'zero!'
  MonoidZeroReport monoid;
  bool zero_dense = false;
  std::vector<CheckLine> lines;
  bool consistent() const;
};
/// R = pullback of ev⁰ : T^T → T along zero, as a monoid with zero.
RReport build_R(const HomotopyTheory& th, const Presheaf& tobj, const PresheafMap& zero);

/// q_! ⊣ q^* between E_p and decidables: [f] ↦ ε_A∘Π₀f is a well-defined
/// bijection E_p(X, A) → Set(Π₀X, A) for decidable A, and ε_A = p_A⁻¹.
AdjunctionCertificate certify_theorem_b(const HomotopyTheory& th, const std::vector<Presheaf>& family,
                                        const std::vector<std::string>& names, std::size_t max_s = 3);

}  // namespace htopos
