// SPDX-License-Identifier: Apache-2.0

#include "htopos/topos.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <set>

#include "htopos/error.hpp"

namespace htopos {

// --- exponential ---------------------------------------------------------------

namespace {
constexpr std::size_t kMaxExponentialEntries = std::size_t{1} << 27;
}  // namespace

Exponential::Exponential(Presheaf x, Presheaf y, std::uint64_t budget)
    : x_(std::move(x)), y_(std::move(y)) {
  require_same_site(x_, y_, "exponential");
  const auto& cat = x_.base();
  const std::size_t n = cat.object_count();
  std::vector<std::size_t> sizes(n);
  probes_.reserve(n);
  width_.resize(n);
  tables_.resize(n);
  for (Index c = 0; c < n; ++c) {
    probes_.push_back(product(htopos::yoneda(x_.base_ref(), c), x_));
    width_[c] = probes_[c].object.total_size();
    HomSearch search(probes_[c].object, y_, budget,
                     "stage " + cat.object_name(c) + " of an exponential");
    std::size_t count = 0;
    search.for_each([&](const std::vector<Elem>& s) {
      if (tables_[c].size() + s.size() > kMaxExponentialEntries)
        throw ResourceError("exponential stage " + cat.object_name(c) + " exceeds " +
                            std::to_string(kMaxExponentialEntries) + " table entries");
      tables_[c].insert(tables_[c].end(), s.begin(), s.end());
      ++count;
      return true;
    });
    sizes[c] = count;
  }
  std::vector<Function> action(cat.morphism_count());
  std::vector<Elem> buf;
  for (Index f = 0; f < cat.morphism_count(); ++f) {
    Index c = cat.cod(f), d = cat.dom(f);
    const Presheaf& pc = probes_[c].object;
    const Presheaf& pd = probes_[d].object;
    action[f].resize(sizes[c]);
    for (Elem e = 0; e < sizes[c]; ++e) {
      const Elem* src = table(c, e);
      buf.assign(width_[d], 0);
      for (Index k = 0; k < n; ++k) {
        const auto& hk = cat.hom(k, d);
        std::size_t xk = x_.size(k);
        for (std::size_t gi = 0; gi < hk.size(); ++gi) {
          Index fg = cat.compose(f, hk[gi]);
          std::size_t pos = cat.hom_position(fg);
          for (std::size_t xi = 0; xi < xk; ++xi)
            buf[pd.offset(k) + gi * xk + xi] = src[pc.offset(k) + pos * xk + xi];
        }
      }
      action[f][e] = find_or_throw(d, buf);
    }
  }
  object_ = Presheaf(x_.base_ref(), std::move(sizes), std::move(action));
  eval_domain_ = product(object_, x_);
  std::vector<Function> ev(n);
  for (Index c = 0; c < n; ++c) {
    std::size_t xc = x_.size(c);
    std::size_t idpos = cat.hom_position(cat.identity(c));
    std::size_t base = probes_[c].object.offset(c);
    for (Elem e = 0; e < object_.size(c); ++e)
      for (Elem xi = 0; xi < xc; ++xi) ev[c].push_back(table(c, e)[base + idpos * xc + xi]);
  }
  eval_ = PresheafMap(eval_domain_.object, y_, std::move(ev));
}

PresheafMap Exponential::element_map(Index c, Elem e) const {
  const Presheaf& p = probes_[c].object;
  std::vector<Function> comp(p.base().object_count());
  const Elem* t = table(c, e);
  for (Index k = 0; k < comp.size(); ++k) comp[k].assign(t + p.offset(k), t + p.offset(k) + p.size(k));
  return PresheafMap(p, y_, std::move(comp));
}

std::optional<Elem> Exponential::find(Index c, const Elem* flat) const {
  std::size_t w = width_[c];
  if (w == 0) return Elem{0};
  std::size_t lo = 0, hi = tables_[c].size() / w;
  const Elem* base = tables_[c].data();
  while (lo < hi) {
    std::size_t mid = (lo + hi) / 2;
    const Elem* m = base + mid * w;
    int cmp = 0;
    for (std::size_t i = 0; i < w; ++i) {
      if (m[i] != flat[i]) {
        cmp = m[i] < flat[i] ? -1 : 1;
        break;
      }
    }
    if (cmp == 0) return static_cast<Elem>(mid);
    if (cmp < 0)
      lo = mid + 1;
    else
      hi = mid;
  }
  return std::nullopt;
}

Elem Exponential::find_or_throw(Index c, const std::vector<Elem>& flat) const {
  if (flat.size() != width_[c]) throw ShapeError("exponential lookup: table has the wrong width");
  auto r = find(c, flat.data());
  if (!r) throw InternalError("exponential lookup: table is not a natural map");
  return *r;
}

// --- omega ------------------------------------------------------------------------

Omega::Omega(const SiteRef& site) : site_(site) {
  const auto& cat = *site;
  if (cat.morphism_count() > 64) throw ResourceError("subobject classifier limited to 64 morphisms");
  const std::size_t n = cat.object_count();
  masks_.resize(n);
  index_.resize(n);
  for (Index c = 0; c < n; ++c) {
    // Principal sieves ↓f = {f∘g}.
    std::vector<std::uint64_t> principal;
    for (Index f : cat.into(c)) {
      std::uint64_t m = 0;
      for (Index g : cat.into(cat.dom(f))) m |= std::uint64_t{1} << cat.compose(f, g);
      principal.push_back(m);
    }
    std::set<std::uint64_t> seen{0};
    std::deque<std::uint64_t> todo{0};
    while (!todo.empty()) {
      std::uint64_t s = todo.front();
      todo.pop_front();
      for (auto p : principal) {
        std::uint64_t t = s | p;
        if (seen.insert(t).second) todo.push_back(t);
      }
    }
    std::vector<std::uint64_t> all(seen.begin(), seen.end());
    std::sort(all.begin(), all.end(), [](std::uint64_t a, std::uint64_t b) {
      int pa = std::popcount(a), pb = std::popcount(b);
      if (pa != pb) return pa < pb;
      // lexicographic on ascending member lists
      while (a && b) {
        int la = std::countr_zero(a), lb = std::countr_zero(b);
        if (la != lb) return la < lb;
        a &= a - 1;
        b &= b - 1;
      }
      return false;
    });
    masks_[c] = std::move(all);
    for (Elem i = 0; i < masks_[c].size(); ++i) index_[c][masks_[c][i]] = i;
  }
  std::vector<std::size_t> sizes(n);
  for (Index c = 0; c < n; ++c) sizes[c] = masks_[c].size();
  std::vector<Function> action(cat.morphism_count());
  for (Index f = 0; f < cat.morphism_count(); ++f) {
    Index c = cat.cod(f), d = cat.dom(f);
    for (auto m : masks_[c]) action[f].push_back(index_of(d, pullback_mask(f, m)));
  }
  object_ = Presheaf(site, std::move(sizes), std::move(action));
  Presheaf one = htopos::terminal(site);
  std::vector<Function> t(n), b(n);
  for (Index c = 0; c < n; ++c) {
    t[c] = {top(c)};
    b[c] = {bottom(c)};
  }
  top_ = PresheafMap(one, object_, std::move(t));
  bottom_ = PresheafMap(one, object_, std::move(b));
  square_ = product(object_, object_);
  std::vector<Function> me(n), jo(n), im(n), ne(n);
  for (Index c = 0; c < n; ++c) {
    Elem k = static_cast<Elem>(object_.size(c));
    for (Elem a = 0; a < k; ++a) {
      ne[c].push_back(neg(c, a));
      for (Elem bb = 0; bb < k; ++bb) {
        me[c].push_back(meet(c, a, bb));
        jo[c].push_back(join(c, a, bb));
        im[c].push_back(implies(c, a, bb));
      }
    }
  }
  meet_ = PresheafMap(square_.object, object_, std::move(me));
  join_ = PresheafMap(square_.object, object_, std::move(jo));
  implies_ = PresheafMap(square_.object, object_, std::move(im));
  neg_ = PresheafMap(object_, object_, std::move(ne));
}

Sieve Omega::sieve(Index c, Elem s) const {
  Sieve out{c, std::vector<bool>(site_->morphism_count(), false)};
  for (Index f = 0; f < site_->morphism_count(); ++f) out.members[f] = (mask(c, s) >> f) & 1U;
  return out;
}

Elem Omega::index_of(Index c, std::uint64_t m) const {
  auto it = index_[c].find(m);
  if (it == index_[c].end()) throw SemanticError("not a sieve");
  return it->second;
}

std::uint64_t Omega::pullback_mask(Index f, std::uint64_t s) const {
  std::uint64_t out = 0;
  for (Index g : site_->into(site_->dom(f)))
    if ((s >> site_->compose(f, g)) & 1U) out |= std::uint64_t{1} << g;
  return out;
}

Elem Omega::meet(Index c, Elem a, Elem b) const { return index_of(c, mask(c, a) & mask(c, b)); }
Elem Omega::join(Index c, Elem a, Elem b) const { return index_of(c, mask(c, a) | mask(c, b)); }

Elem Omega::implies(Index c, Elem a, Elem b) const {
  std::uint64_t out = 0;
  for (Index f : site_->into(c)) {
    std::uint64_t pa = pullback_mask(f, mask(c, a)), pb = pullback_mask(f, mask(c, b));
    if ((pa & ~pb) == 0) out |= std::uint64_t{1} << f;
  }
  return index_of(c, out);
}

Elem Omega::neg(Index c, Elem a) const {
  std::uint64_t out = 0;
  for (Index f : site_->into(c))
    if (pullback_mask(f, mask(c, a)) == 0) out |= std::uint64_t{1} << f;
  return index_of(c, out);
}

PresheafMap Omega::characteristic(const Subobject& s) const {
  const auto& x = s.of;
  const auto& cat = *site_;
  std::vector<Function> comp(cat.object_count());
  for (Index c = 0; c < comp.size(); ++c) {
    for (Elem e = 0; e < x.size(c); ++e) {
      std::uint64_t m = 0;
      for (Index f : cat.into(c))
        if (s.selected[cat.dom(f)][x.act(f, e)]) m |= std::uint64_t{1} << f;
      comp[c].push_back(index_of(c, m));
    }
  }
  return PresheafMap(x, object_, std::move(comp));
}

Subobject Omega::classified(const PresheafMap& chi) const {
  Subobject s = empty_subobject(chi.dom());
  for (Index c = 0; c < s.selected.size(); ++c)
    for (Elem e = 0; e < chi.dom().size(c); ++e) s.selected[c][e] = chi(c, e) == top(c);
  return s;
}

// --- topos --------------------------------------------------------------------------

Topos::Topos(SiteRef site, Config config) : site_(std::move(site)), config_(config) {
  if (!site_) throw ShapeError("topos without a site");
  terminal_ = htopos::terminal_object(*site_);
  ns_site_ = presheaf_ns_criterion(*site_);
}

std::shared_ptr<const Exponential> Topos::exponential(const Presheaf& x, const Presheaf& y) const {
  require_same_site(x, y, "exponential");
  auto key = std::make_pair(x.digest(), y.digest());
  {
    std::shared_lock lock(mu_);
    auto it = exp_cache_.find(key);
    if (it != exp_cache_.end())
      for (const auto& e : it->second)
        if (e->exponent() == x && e->value() == y) return e;
  }
  auto built = std::make_shared<const Exponential>(x, y, config_.budget);
  std::unique_lock lock(mu_);
  auto& bucket = exp_cache_[key];
  for (const auto& e : bucket)
    if (e->exponent() == x && e->value() == y) return e;
  bucket.push_back(built);
  return built;
}

const Omega& Topos::omega() const {
  std::call_once(omega_once_, [&] { omega_ = std::make_unique<Omega>(site_); });
  return *omega_;
}

std::vector<PresheafMap> Topos::hom(const Presheaf& a, const Presheaf& b) const {
  return HomSearch(a, b, config_.budget, "Hom").all();
}

std::uint64_t Topos::hom_count(const Presheaf& a, const Presheaf& b) const {
  return HomSearch(a, b, config_.budget, "Hom").count();
}

std::vector<PresheafMap> Topos::points(const Presheaf& x) const { return hom(terminal(), x); }

std::shared_ptr<const void> Topos::memo(
    int tag, const Presheaf& a, const Presheaf& b,
    const std::function<std::shared_ptr<const void>()>& build) const {
  auto key = std::make_tuple(tag, a.digest(), b.digest());
  {
    std::shared_lock lock(mu_);
    auto it = memo_.find(key);
    if (it != memo_.end())
      for (const auto& e : it->second)
        if (e.a == a && e.b == b) return e.value;
  }
  auto value = build();
  std::unique_lock lock(mu_);
  auto& bucket = memo_[key];
  for (const auto& e : bucket)
    if (e.a == a && e.b == b) return e.value;
  bucket.push_back({a, b, value});
  return value;
}

std::size_t Topos::cached_exponentials() const {
  std::shared_lock lock(mu_);
  std::size_t n = 0;
  for (const auto& [k, v] : exp_cache_) n += v.size();
  return n;
}

}  // namespace htopos
