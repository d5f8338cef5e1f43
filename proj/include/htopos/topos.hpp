// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <tuple>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <vector>

#include "htopos/hom_search.hpp"
#include "htopos/presheaf.hpp"

namespace htopos {

struct Config {
  std::uint64_t budget = kDefaultBudget;  // expansions per search
  std::uint64_t seed = 20240917;          // sampling above rep_bound
  std::size_t rep_bound = 64;             // exhaustive representative checks up to this
};

/// The exponential Y^X with its evaluation map.
///
/// Y^X(c) is the set of natural maps y(c)×X → Y, sorted lexicographically by
/// their flattened tables. The table of an element lists, stage-major, the
/// value at each element (g, x) of (y(c)×X)(k), with (g, x) encoded as in
/// Product::pair (g by its position in hom(k, c)).
class Exponential {
 public:
  Exponential(Presheaf x, Presheaf y, std::uint64_t budget);

  const Presheaf& object() const { return object_; }
  const Presheaf& exponent() const { return x_; }
  const Presheaf& value() const { return y_; }
  /// y(c)×X, the domain of the maps forming stage c.
  const Product& probe(Index c) const { return probes_[c]; }
  std::size_t width(Index c) const { return width_[c]; }
  const Elem* table(Index c, Elem e) const { return tables_[c].data() + e * width_[c]; }
  /// Element e of stage c as the map y(c)×X → Y.
  PresheafMap element_map(Index c, Elem e) const;
  /// Index of the element with the given flattened table, if present.
  std::optional<Elem> find(Index c, const Elem* flat) const;
  Elem find_or_throw(Index c, const std::vector<Elem>& flat) const;

  /// E×X and ev: E×X → Y, ev_c(e, x) = e_c(id_c, x).
  const Product& eval_domain() const { return eval_domain_; }
  const PresheafMap& eval() const { return eval_; }

 private:
  Presheaf x_;
  Presheaf y_;
  std::vector<Product> probes_;
  std::vector<std::size_t> width_;
  std::vector<std::vector<Elem>> tables_;
  Presheaf object_;
  Product eval_domain_;
  PresheafMap eval_;
};

/// Sieves and the Heyting structure of Ω.
///
/// Ω(c) lists the sieves on c ordered by size, then lexicographically by the
/// sorted member indices. Members are stored as bitmasks over morphism
/// indices, so sites are limited to 64 morphisms here.
class Omega {
 public:
  explicit Omega(const SiteRef& site);

  const Presheaf& object() const { return object_; }
  std::uint64_t mask(Index c, Elem s) const { return masks_[c][s]; }
  Sieve sieve(Index c, Elem s) const;
  Elem index_of(Index c, std::uint64_t mask) const;
  Elem top(Index c) const { return static_cast<Elem>(masks_[c].size() - 1); }
  Elem bottom(Index) const { return 0; }

  /// f*S = {g : f∘g ∈ S} for f: d → c; the same as the action of Ω.
  std::uint64_t pullback_mask(Index f, std::uint64_t s) const;
  Elem meet(Index c, Elem a, Elem b) const;
  Elem join(Index c, Elem a, Elem b) const;
  Elem implies(Index c, Elem a, Elem b) const;
  Elem neg(Index c, Elem a) const;
  bool leq(Index c, Elem a, Elem b) const { return (mask(c, a) & ~mask(c, b)) == 0; }

  PresheafMap top_map() const { return top_; }
  PresheafMap bottom_map() const { return bottom_; }
  const Product& square() const { return square_; }
  PresheafMap meet_map() const { return meet_; }
  PresheafMap join_map() const { return join_; }
  PresheafMap implies_map() const { return implies_; }
  PresheafMap neg_map() const { return neg_; }

  /// χ_S : X → Ω, x ∈ X(c) ↦ {f : X(f)x ∈ S}.
  PresheafMap characteristic(const Subobject& s) const;
  /// The subobject {x : χ(x) = ⊤}.
  Subobject classified(const PresheafMap& chi) const;

 private:
  SiteRef site_;
  std::vector<std::vector<std::uint64_t>> masks_;
  std::vector<std::map<std::uint64_t, Elem>> index_;
  Presheaf object_;
  Product square_;
  PresheafMap top_, bottom_, meet_, join_, implies_, neg_;
};

/// A finite presheaf topos on one site plus configuration and a memo cache.
/// All members are safe to call concurrently.
class Topos {
 public:
  explicit Topos(SiteRef site, Config config = {});

  const SiteRef& site() const { return site_; }
  const FinCategory& category() const { return *site_; }
  const Config& config() const { return config_; }

  Presheaf terminal() const { return htopos::terminal(site_); }
  Presheaf initial() const { return htopos::initial(site_); }
  Presheaf discrete(std::size_t n) const { return htopos::discrete(site_, n); }
  Presheaf yoneda(Index c) const { return htopos::yoneda(site_, c); }
  /// 1+1.
  Presheaf two() const { return discrete(2); }

  std::shared_ptr<const Exponential> exponential(const Presheaf& x, const Presheaf& y) const;
  const Omega& omega() const;

  std::vector<PresheafMap> hom(const Presheaf& a, const Presheaf& b) const;
  std::uint64_t hom_count(const Presheaf& a, const Presheaf& b) const;
  std::vector<PresheafMap> points(const Presheaf& x) const;

  std::optional<Index> terminal_object() const { return terminal_; }
  /// Terminal object present and every object pointed.
  bool ns_site() const { return ns_site_; }

  std::size_t cached_exponentials() const;

  /// Memo slot for derived per-pair data (tag distinguishes the kind). The
  /// builder runs outside the lock; operands are compared for equality, not
  /// only by digest.
  std::shared_ptr<const void> memo(int tag, const Presheaf& a, const Presheaf& b,
                                   const std::function<std::shared_ptr<const void>()>& build) const;

 private:
  SiteRef site_;
  Config config_;
  std::optional<Index> terminal_;
  bool ns_site_ = false;

  mutable std::shared_mutex mu_;
  mutable std::map<std::pair<std::uint64_t, std::uint64_t>,
                   std::vector<std::shared_ptr<const Exponential>>>
      exp_cache_;
  struct MemoEntry {
    Presheaf a;
    Presheaf b;
    std::shared_ptr<const void> value;
  };
  mutable std::map<std::tuple<int, std::uint64_t, std::uint64_t>, std::vector<MemoEntry>> memo_;
  mutable std::once_flag omega_once_;
  mutable std::unique_ptr<Omega> omega_;
};

}  // namespace htopos
