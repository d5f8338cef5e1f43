// SPDX-License-Identifier: Apache-2.0

#include "htopos/presheaf.hpp"

#include <sstream>

#include "htopos/digest.hpp"
#include "htopos/error.hpp"
#include "htopos/union_find.hpp"

namespace htopos {

namespace {

void feed(Digest& h, const std::vector<std::size_t>& sizes, const std::vector<Function>& action) {
  h.u32(static_cast<std::uint32_t>(sizes.size()));
  for (auto s : sizes) h.u32(static_cast<std::uint32_t>(s));
  for (const auto& fn : action)
    for (Elem v : fn) h.u32(v);
}

}  // namespace

Presheaf::Presheaf(SiteRef base, std::vector<std::size_t> sizes,
                   std::vector<Function> action) {
  if (!base) throw ShapeError("presheaf without a site");
  const auto& c = *base;
  if (sizes.size() != c.object_count()) throw ShapeError("presheaf stage count mismatch");
  if (action.size() != c.morphism_count()) throw ShapeError("presheaf action count mismatch");
  for (Index f = 0; f < c.morphism_count(); ++f) {
    if (action[f].size() != sizes[c.cod(f)])
      throw ShapeError("action of " + c.morphism(f).name + " has the wrong length");
    for (Elem v : action[f])
      if (v >= sizes[c.dom(f)])
        throw ShapeError("action of " + c.morphism(f).name + " leaves its stage");
  }
  auto d = std::make_shared<Data>();
  d->base = std::move(base);
  d->sizes = std::move(sizes);
  d->action = std::move(action);
  d->offsets.resize(d->sizes.size());
  for (std::size_t i = 0; i < d->sizes.size(); ++i) {
    d->offsets[i] = d->total;
    d->total += d->sizes[i];
  }
  Digest h;
  h.u64(d->base->digest());
  feed(h, d->sizes, d->action);
  d->digest = h.value();
  data_ = std::move(d);
}

Presheaf Presheaf::checked(SiteRef base, std::vector<std::size_t> sizes,
                           std::vector<Function> action) {
  Presheaf p(std::move(base), std::move(sizes), std::move(action));
  auto v = p.validate();
  if (!v.empty()) throw SemanticError("presheaf law fails: " + v.front());
  return p;
}

std::vector<std::string> Presheaf::validate() const {
  std::vector<std::string> out;
  const auto& c = base();
  for (Index o = 0; o < c.object_count(); ++o) {
    const auto& fn = action(c.identity(o));
    for (Elem x = 0; x < fn.size(); ++x) {
      if (fn[x] != x) {
        out.push_back("identity of " + c.object_name(o) + " moves element " + std::to_string(x));
        break;
      }
    }
  }
  for (Index g = 0; g < c.morphism_count(); ++g) {
    for (Index f = 0; f < c.morphism_count(); ++f) {
      Index gf = c.compose(g, f);
      if (gf == kNone) continue;
      // X(g∘f) = X(f) ∘ X(g)
      const auto& lhs = action(gf);
      for (Elem x = 0; x < lhs.size(); ++x) {
        if (lhs[x] != act(f, act(g, x))) {
          out.push_back("contravariance fails for " + c.morphism(g).name + " o " +
                        c.morphism(f).name + " at element " + std::to_string(x));
          break;
        }
      }
    }
  }
  return out;
}

bool operator==(const Presheaf& a, const Presheaf& b) {
  if (a.data_ == b.data_) return true;
  if (!a.data_ || !b.data_) return false;
  return a.data_->digest == b.data_->digest && *a.data_->base == *b.data_->base &&
         a.data_->sizes == b.data_->sizes && a.data_->action == b.data_->action;
}

bool same_site(const Presheaf& a, const Presheaf& b) {
  return a.base_ref() == b.base_ref() || a.base() == b.base();
}

void require_same_site(const Presheaf& a, const Presheaf& b, const char* op) {
  if (!same_site(a, b)) throw ShapeError(std::string(op) + ": operands live on different sites");
}

// --- maps ---------------------------------------------------------------------

PresheafMap::PresheafMap(Presheaf dom, Presheaf cod, std::vector<Function> components)
    : dom_(std::move(dom)), cod_(std::move(cod)), comp_(std::move(components)) {
  require_same_site(dom_, cod_, "map");
  const auto& c = dom_.base();
  if (comp_.size() != c.object_count()) throw ShapeError("map component count mismatch");
  for (Index o = 0; o < c.object_count(); ++o) {
    if (comp_[o].size() != dom_.size(o))
      throw ShapeError("map component at " + c.object_name(o) + " has the wrong length");
    for (Elem v : comp_[o])
      if (v >= cod_.size(o))
        throw ShapeError("map component at " + c.object_name(o) + " leaves the codomain");
  }
}

PresheafMap PresheafMap::checked(Presheaf dom, Presheaf cod, std::vector<Function> components) {
  PresheafMap m(std::move(dom), std::move(cod), std::move(components));
  auto v = m.validate();
  if (!v.empty()) throw SemanticError("naturality fails: " + v.front());
  return m;
}

std::vector<std::string> PresheafMap::validate() const {
  std::vector<std::string> out;
  const auto& c = dom_.base();
  for (Index f = 0; f < c.morphism_count(); ++f) {
    Index d = c.dom(f), e = c.cod(f);
    for (Elem x = 0; x < dom_.size(e); ++x) {
      if (comp_[d][dom_.act(f, x)] != cod_.act(f, comp_[e][x])) {
        out.push_back("square for " + c.morphism(f).name + " at element " + std::to_string(x) +
                      " of stage " + c.object_name(e));
        break;
      }
    }
  }
  return out;
}

PresheafMap identity_map(const Presheaf& x) {
  std::vector<Function> comp(x.base().object_count());
  for (Index c = 0; c < comp.size(); ++c) {
    comp[c].resize(x.size(c));
    for (Elem i = 0; i < comp[c].size(); ++i) comp[c][i] = i;
  }
  return PresheafMap(x, x, std::move(comp));
}

PresheafMap compose(const PresheafMap& g, const PresheafMap& f) {
  if (!(f.cod() == g.dom())) throw ShapeError("compose: codomain/domain mismatch");
  std::vector<Function> comp(f.dom().base().object_count());
  for (Index c = 0; c < comp.size(); ++c) {
    comp[c].resize(f.dom().size(c));
    for (Elem i = 0; i < comp[c].size(); ++i) comp[c][i] = g(c, f(c, i));
  }
  return PresheafMap(f.dom(), g.cod(), std::move(comp));
}

// --- subobjects -----------------------------------------------------------------

std::vector<std::string> Subobject::validate() const {
  std::vector<std::string> out;
  const auto& c = of.base();
  if (selected.size() != c.object_count()) return {"subobject stage count mismatch"};
  for (Index f = 0; f < c.morphism_count(); ++f) {
    for (Elem x = 0; x < of.size(c.cod(f)); ++x) {
      if (selected[c.cod(f)][x] && !selected[c.dom(f)][of.act(f, x)]) {
        out.push_back("not closed under " + c.morphism(f).name + " at element " +
                      std::to_string(x));
        break;
      }
    }
  }
  return out;
}

Subobject whole_subobject(const Presheaf& x) {
  Subobject s{x, {}};
  for (Index c = 0; c < x.base().object_count(); ++c) s.selected.emplace_back(x.size(c), true);
  return s;
}

Subobject empty_subobject(const Presheaf& x) {
  Subobject s{x, {}};
  for (Index c = 0; c < x.base().object_count(); ++c) s.selected.emplace_back(x.size(c), false);
  return s;
}

bool subobject_leq(const Subobject& a, const Subobject& b) {
  for (std::size_t c = 0; c < a.selected.size(); ++c)
    for (std::size_t x = 0; x < a.selected[c].size(); ++x)
      if (a.selected[c][x] && !b.selected[c][x]) return false;
  return true;
}

Subobject subobject_meet(const Subobject& a, const Subobject& b) {
  Subobject s = a;
  for (std::size_t c = 0; c < s.selected.size(); ++c)
    for (std::size_t x = 0; x < s.selected[c].size(); ++x)
      s.selected[c][x] = a.selected[c][x] && b.selected[c][x];
  return s;
}

Inclusion subobject_presheaf(const Subobject& s) {
  const auto& x = s.of;
  const auto& c = x.base();
  const std::size_t n = c.object_count();
  std::vector<Function> incl(n);
  std::vector<std::vector<Elem>> pos(n);
  std::vector<std::size_t> sizes(n);
  for (Index o = 0; o < n; ++o) {
    pos[o].assign(x.size(o), kNone);
    for (Elem e = 0; e < x.size(o); ++e) {
      if (s.selected[o][e]) {
        pos[o][e] = static_cast<Elem>(incl[o].size());
        incl[o].push_back(e);
      }
    }
    sizes[o] = incl[o].size();
  }
  std::vector<Function> action(c.morphism_count());
  for (Index f = 0; f < c.morphism_count(); ++f) {
    for (Elem e : incl[c.cod(f)]) {
      Elem r = pos[c.dom(f)][x.act(f, e)];
      if (r == kNone) throw SemanticError("subobject is not closed under the action");
      action[f].push_back(r);
    }
  }
  Presheaf obj(x.base_ref(), std::move(sizes), std::move(action));
  return {obj, PresheafMap(obj, x, std::move(incl))};
}

// --- representables and (co)limits ---------------------------------------

Presheaf yoneda(const SiteRef& site, Index c) {
  const auto& cat = *site;
  if (c >= cat.object_count()) throw ShapeError("yoneda: object out of range");
  const std::size_t n = cat.object_count();
  std::vector<std::size_t> sizes(n);
  for (Index d = 0; d < n; ++d) sizes[d] = cat.hom(d, c).size();
  std::vector<Function> action(cat.morphism_count());
  for (Index f = 0; f < cat.morphism_count(); ++f) {
    // precomposition: g ∈ hom(cod f, c) ↦ g∘f ∈ hom(dom f, c)
    for (Index g : cat.hom(cat.cod(f), c)) action[f].push_back(cat.hom_position(cat.compose(g, f)));
  }
  return Presheaf(site, std::move(sizes), std::move(action));
}

Presheaf discrete(const SiteRef& site, std::size_t n) {
  const auto& cat = *site;
  std::vector<std::size_t> sizes(cat.object_count(), n);
  Function id(n);
  for (Elem i = 0; i < n; ++i) id[i] = i;
  std::vector<Function> action(cat.morphism_count(), id);
  return Presheaf(site, std::move(sizes), std::move(action));
}

Presheaf terminal(const SiteRef& site) { return discrete(site, 1); }
Presheaf initial(const SiteRef& site) { return discrete(site, 0); }

Product product(const Presheaf& x, const Presheaf& y) {
  require_same_site(x, y, "product");
  const auto& c = x.base();
  const std::size_t n = c.object_count();
  std::vector<std::size_t> sizes(n);
  for (Index o = 0; o < n; ++o) sizes[o] = x.size(o) * y.size(o);
  std::vector<Function> action(c.morphism_count());
  for (Index f = 0; f < c.morphism_count(); ++f) {
    Index e = c.cod(f), d = c.dom(f);
    auto& fn = action[f];
    fn.reserve(sizes[e]);
    for (Elem a = 0; a < x.size(e); ++a)
      for (Elem b = 0; b < y.size(e); ++b)
        fn.push_back(static_cast<Elem>(x.act(f, a) * y.size(d) + y.act(f, b)));
  }
  Presheaf obj(x.base_ref(), std::move(sizes), std::move(action));
  std::vector<Function> p1(n), p2(n);
  for (Index o = 0; o < n; ++o) {
    for (Elem a = 0; a < x.size(o); ++a)
      for (Elem b = 0; b < y.size(o); ++b) {
        p1[o].push_back(a);
        p2[o].push_back(b);
      }
  }
  return {obj, PresheafMap(obj, x, std::move(p1)), PresheafMap(obj, y, std::move(p2))};
}

PresheafMap pair_maps(const Product& prod, const PresheafMap& f, const PresheafMap& g) {
  if (!(f.dom() == g.dom()) || !(f.cod() == prod.p1.cod()) || !(g.cod() == prod.p2.cod()))
    throw ShapeError("pair: maps do not match the product");
  const std::size_t n = f.dom().base().object_count();
  std::vector<Function> comp(n);
  for (Index c = 0; c < n; ++c)
    for (Elem a = 0; a < f.dom().size(c); ++a) comp[c].push_back(prod.pair(c, f(c, a), g(c, a)));
  return PresheafMap(f.dom(), prod.object, std::move(comp));
}

PresheafMap product_maps(const Product& src, const Product& dst, const PresheafMap& f,
                         const PresheafMap& g) {
  return pair_maps(dst, compose(f, src.p1), compose(g, src.p2));
}

Coproduct coproduct(const Presheaf& x, const Presheaf& y) {
  require_same_site(x, y, "coproduct");
  const auto& c = x.base();
  const std::size_t n = c.object_count();
  std::vector<std::size_t> sizes(n);
  for (Index o = 0; o < n; ++o) sizes[o] = x.size(o) + y.size(o);
  std::vector<Function> action(c.morphism_count());
  for (Index f = 0; f < c.morphism_count(); ++f) {
    Index d = c.dom(f);
    for (Elem a : x.action(f)) action[f].push_back(a);
    for (Elem b : y.action(f)) action[f].push_back(static_cast<Elem>(x.size(d) + b));
  }
  Presheaf obj(x.base_ref(), std::move(sizes), std::move(action));
  std::vector<Function> i1(n), i2(n);
  for (Index o = 0; o < n; ++o) {
    for (Elem a = 0; a < x.size(o); ++a) i1[o].push_back(a);
    for (Elem b = 0; b < y.size(o); ++b) i2[o].push_back(static_cast<Elem>(x.size(o) + b));
  }
  return {obj, PresheafMap(x, obj, std::move(i1)), PresheafMap(y, obj, std::move(i2))};
}

PresheafMap copair_maps(const Coproduct& sum, const PresheafMap& f, const PresheafMap& g) {
  if (!(f.cod() == g.cod()) || !(f.dom() == sum.i1.dom()) || !(g.dom() == sum.i2.dom()))
    throw ShapeError("copair: maps do not match the coproduct");
  const std::size_t n = f.dom().base().object_count();
  std::vector<Function> comp(n);
  for (Index c = 0; c < n; ++c) {
    comp[c] = f.component(c);
    comp[c].insert(comp[c].end(), g.component(c).begin(), g.component(c).end());
  }
  return PresheafMap(sum.object, f.cod(), std::move(comp));
}

Inclusion equalizer(const PresheafMap& f, const PresheafMap& g) {
  if (!(f.dom() == g.dom()) || !(f.cod() == g.cod())) throw ShapeError("equalizer: maps not parallel");
  Subobject s = empty_subobject(f.dom());
  for (Index c = 0; c < s.selected.size(); ++c)
    for (Elem x = 0; x < f.dom().size(c); ++x) s.selected[c][x] = f(c, x) == g(c, x);
  return subobject_presheaf(s);
}

Quotient quotient_by_labels(const Presheaf& x, const std::vector<std::vector<std::size_t>>& labels) {
  const auto& c = x.base();
  const std::size_t n = c.object_count();
  // Renumber each stage by smallest member.
  std::vector<Function> q(n);
  std::vector<std::size_t> sizes(n);
  for (Index o = 0; o < n; ++o) {
    std::vector<Elem> remap;
    std::vector<std::size_t> seen;
    q[o].resize(x.size(o));
    for (Elem e = 0; e < x.size(o); ++e) {
      std::size_t l = labels[o][e];
      if (l >= remap.size()) remap.resize(l + 1, kNone);
      if (remap[l] == kNone) remap[l] = static_cast<Elem>(sizes[o]++);
      q[o][e] = remap[l];
    }
  }
  std::vector<Function> action(c.morphism_count());
  for (Index f = 0; f < c.morphism_count(); ++f) {
    Index e = c.cod(f), d = c.dom(f);
    action[f].assign(sizes[e], kNone);
    for (Elem a = 0; a < x.size(e); ++a) {
      Elem cls = q[e][a];
      Elem img = q[d][x.act(f, a)];
      if (action[f][cls] == kNone)
        action[f][cls] = img;
      else if (action[f][cls] != img)
        throw SemanticError("quotient: action of " + c.morphism(f).name + " does not descend");
    }
  }
  Presheaf obj(x.base_ref(), std::move(sizes), std::move(action));
  return {obj, PresheafMap(x, obj, std::move(q))};
}

Quotient coequalizer(const PresheafMap& f, const PresheafMap& g) {
  if (!(f.dom() == g.dom()) || !(f.cod() == g.cod())) throw ShapeError("coequalizer: maps not parallel");
  const auto& y = f.cod();
  const std::size_t n = y.base().object_count();
  std::vector<std::vector<std::size_t>> labels(n);
  for (Index o = 0; o < n; ++o) {
    UnionFind uf(y.size(o));
    for (Elem a = 0; a < f.dom().size(o); ++a) uf.unite(f(o, a), g(o, a));
    labels[o] = uf.labels();
  }
  return quotient_by_labels(y, labels);
}

Pullback pullback(const PresheafMap& f, const PresheafMap& g) {
  if (!(f.cod() == g.cod())) throw ShapeError("pullback: maps do not share a codomain");
  Product prod = product(f.dom(), g.dom());
  Subobject s = empty_subobject(prod.object);
  for (Index c = 0; c < s.selected.size(); ++c)
    for (Elem a = 0; a < f.dom().size(c); ++a)
      for (Elem b = 0; b < g.dom().size(c); ++b) s.selected[c][prod.pair(c, a, b)] = f(c, a) == g(c, b);
  Inclusion inc = subobject_presheaf(s);
  return {inc.object, compose(prod.p1, inc.incl), compose(prod.p2, inc.incl)};
}

PresheafMap bang(const Presheaf& x) {
  Presheaf one = terminal(x.base_ref());
  std::vector<Function> comp(x.base().object_count());
  for (Index c = 0; c < comp.size(); ++c) comp[c].assign(x.size(c), 0);
  return PresheafMap(x, one, std::move(comp));
}

PresheafMap from_initial(const Presheaf& x) {
  return PresheafMap(initial(x.base_ref()), x, std::vector<Function>(x.base().object_count()));
}

// --- image factorization ----------------------------------------------------

bool is_mono(const PresheafMap& f) {
  for (Index c = 0; c < f.dom().base().object_count(); ++c) {
    std::vector<bool> hit(f.cod().size(c), false);
    for (Elem v : f.component(c)) {
      if (hit[v]) return false;
      hit[v] = true;
    }
  }
  return true;
}

bool is_epi(const PresheafMap& f) {
  for (Index c = 0; c < f.dom().base().object_count(); ++c) {
    std::vector<bool> hit(f.cod().size(c), false);
    for (Elem v : f.component(c)) hit[v] = true;
    for (bool h : hit)
      if (!h) return false;
  }
  return true;
}

bool is_iso(const PresheafMap& f) { return is_mono(f) && is_epi(f); }

PresheafMap inverse(const PresheafMap& f) {
  if (!is_iso(f)) throw PreconditionError("inverse: map is not an isomorphism");
  std::vector<Function> comp(f.dom().base().object_count());
  for (Index c = 0; c < comp.size(); ++c) {
    comp[c].resize(f.cod().size(c));
    for (Elem x = 0; x < f.dom().size(c); ++x) comp[c][f(c, x)] = x;
  }
  return PresheafMap(f.cod(), f.dom(), std::move(comp));
}

ImageFactorization image_factorization(const PresheafMap& f) {
  Subobject s = empty_subobject(f.cod());
  for (Index c = 0; c < s.selected.size(); ++c)
    for (Elem v : f.component(c)) s.selected[c][v] = true;
  Inclusion inc = subobject_presheaf(s);
  std::vector<Function> e(s.selected.size());
  for (Index c = 0; c < e.size(); ++c) {
    std::vector<Elem> pos(f.cod().size(c), kNone);
    for (Elem i = 0; i < inc.incl.component(c).size(); ++i) pos[inc.incl(c, i)] = i;
    for (Elem v : f.component(c)) e[c].push_back(pos[v]);
  }
  return {PresheafMap(f.dom(), inc.object, std::move(e)), inc.incl};
}

std::vector<std::uint8_t> serialize(const Presheaf& x) {
  std::vector<std::uint8_t> out;
  auto put = [&](std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  };
  put(static_cast<std::uint32_t>(x.sizes().size()));
  for (auto s : x.sizes()) put(static_cast<std::uint32_t>(s));
  for (Index f = 0; f < x.base().morphism_count(); ++f)
    for (Elem v : x.action(f)) put(v);
  return out;
}

}  // namespace htopos
