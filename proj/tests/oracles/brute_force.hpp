// SPDX-License-Identifier: Apache-2.0

// Exhaustive reference computations used to cross-check the library. They
// enumerate value tables and test the defining equations directly.

#pragma once

#include <cstdint>
#include <functional>
#include <queue>
#include <random>
#include <set>
#include <vector>

#include "htopos/presheaf.hpp"

namespace oracle {

using htopos::Elem;
using htopos::Index;
using htopos::Presheaf;

/// Calls `visit` with every natural map x -> y as per-stage tables. Checks
/// naturality only on complete assignments.
inline std::uint64_t for_each_natural(const Presheaf& x, const Presheaf& y,
                                      const std::function<void(const std::vector<htopos::Function>&)>& visit) {
  const auto& cat = x.base();
  const std::size_t n = cat.object_count();
  std::vector<htopos::Function> comp(n);
  for (Index c = 0; c < n; ++c) comp[c].assign(x.size(c), 0);
  for (Index c = 0; c < n; ++c)
    if (x.size(c) > 0 && y.size(c) == 0) return 0;
  std::uint64_t count = 0;
  while (true) {
    bool natural = true;
    for (Index f = 0; f < cat.morphism_count() && natural; ++f) {
      const Index d = cat.dom(f), c = cat.cod(f);
      for (Elem a = 0; a < x.size(c); ++a)
        if (y.act(f, comp[c][a]) != comp[d][x.act(f, a)]) {
          natural = false;
          break;
        }
    }
    if (natural) {
      ++count;
      if (visit) visit(comp);
    }
    // odometer
    Index c = 0;
    Elem a = 0;
    bool carried = true;
    for (c = 0; c < n && carried; ++c)
      for (a = 0; a < x.size(c) && carried; ++a) {
        if (++comp[c][a] < y.size(c)) {
          carried = false;
        } else {
          comp[c][a] = 0;
        }
      }
    if (carried) return count;
  }
}

inline std::uint64_t hom_count(const Presheaf& x, const Presheaf& y) { return for_each_natural(x, y, {}); }

/// Components of the category of elements by breadth-first search.
inline std::size_t components(const Presheaf& x) {
  const auto& cat = x.base();
  std::vector<std::vector<std::size_t>> adj(x.total_size());
  for (Index f = 0; f < cat.morphism_count(); ++f) {
    const Index d = cat.dom(f), c = cat.cod(f);
    for (Elem a = 0; a < x.size(c); ++a) {
      const std::size_t u = x.offset(c) + a, v = x.offset(d) + x.act(f, a);
      adj[u].push_back(v);
      adj[v].push_back(u);
    }
  }
  std::vector<bool> seen(x.total_size(), false);
  std::size_t comps = 0;
  for (std::size_t s = 0; s < seen.size(); ++s) {
    if (seen[s]) continue;
    ++comps;
    std::queue<std::size_t> q;
    q.push(s);
    seen[s] = true;
    while (!q.empty()) {
      auto u = q.front();
      q.pop();
      for (auto v : adj[u])
        if (!seen[v]) {
          seen[v] = true;
          q.push(v);
        }
    }
  }
  return comps;
}

/// Sieves on c as sets of morphism indices, by testing every subset.
inline std::size_t sieve_count(const htopos::FinCategory& cat, Index c) {
  const auto& into = cat.into(c);
  std::size_t count = 0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << into.size()); ++mask) {
    std::set<Index> s;
    for (std::size_t i = 0; i < into.size(); ++i)
      if (mask >> i & 1) s.insert(into[i]);
    bool closed = true;
    for (Index f : s)
      for (Index g = 0; g < cat.morphism_count() && closed; ++g)
        if (cat.cod(g) == cat.dom(f) && !s.count(cat.compose(f, g))) closed = false;
    count += closed;
  }
  return count;
}

/// A random presheaf: a seeded quotient of a sum of representables, so the
/// functor laws hold by construction.
inline Presheaf random_presheaf(const htopos::SiteRef& site, std::mt19937_64& rng, std::size_t max_summands = 2) {
  std::uniform_int_distribution<std::size_t> pick_obj(0, site->object_count() - 1);
  std::uniform_int_distribution<std::size_t> pick_n(0, max_summands);
  Presheaf x = htopos::initial(site);
  const std::size_t n = pick_n(rng);
  for (std::size_t i = 0; i < n; ++i) x = htopos::coproduct(x, htopos::yoneda(site, static_cast<Index>(pick_obj(rng)))).object;
  if (x.total_size() == 0 || rng() % 2) return x;
  // glue two random elements of the same stage, then close under restriction
  const Index c = static_cast<Index>(pick_obj(rng));
  if (x.size(c) < 2) return x;
  std::uniform_int_distribution<Elem> pick_e(0, static_cast<Elem>(x.size(c) - 1));
  const Elem a = pick_e(rng), b = pick_e(rng);
  std::vector<htopos::Function> fa(site->object_count()), fb(site->object_count());
  const Presheaf yc = htopos::yoneda(site, c);
  for (Index d = 0; d < site->object_count(); ++d) {
    for (Elem g = 0; g < yc.size(d); ++g) {
      const Index f = site->hom(d, c)[g];
      fa[d].push_back(x.act(f, a));
      fb[d].push_back(x.act(f, b));
    }
  }
  return htopos::coequalizer(htopos::PresheafMap(yc, x, fa), htopos::PresheafMap(yc, x, fb)).object;
}

}  // namespace oracle
