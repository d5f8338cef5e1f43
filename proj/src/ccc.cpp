// SPDX-License-Identifier: Apache-2.0

#include "htopos/ccc.hpp"

#include "htopos/error.hpp"

namespace htopos {

namespace {

void require_point(const PresheafMap& p, const char* op) {
  for (Index c = 0; c < p.dom().base().object_count(); ++c)
    if (p.dom().size(c) != 1) throw ShapeError(std::string(op) + ": expected a point 1 → X");
}

// ev_c(e, x) read straight from the table of e.
Elem evaluate(const Exponential& e, Index c, Elem elem, Elem x) {
  const auto& cat = e.object().base();
  std::size_t xc = e.exponent().size(c);
  return e.table(c, elem)[e.probe(c).object.offset(c) +
                          cat.hom_position(cat.identity(c)) * xc + x];
}

}  // namespace

PresheafMap transpose(const Topos& t, const Presheaf& a, const Presheaf& x, const PresheafMap& f) {
  Product ax = product(a, x);
  if (!(f.dom() == ax.object)) throw ShapeError("transpose: domain is not A×X");
  auto e = t.exponential(x, f.cod());
  const auto& cat = a.base();
  const std::size_t n = cat.object_count();
  std::vector<Function> comp(n);
  std::vector<Elem> buf;
  for (Index c = 0; c < n; ++c) {
    const Presheaf& probe = e->probe(c).object;
    for (Elem el = 0; el < a.size(c); ++el) {
      buf.assign(e->width(c), 0);
      for (Index k = 0; k < n; ++k) {
        const auto& hk = cat.hom(k, c);
        std::size_t xk = x.size(k);
        for (std::size_t gi = 0; gi < hk.size(); ++gi) {
          Elem ag = a.act(hk[gi], el);
          for (Elem xi = 0; xi < xk; ++xi)
            buf[probe.offset(k) + gi * xk + xi] = f(k, ax.pair(k, ag, xi));
        }
      }
      comp[c].push_back(e->find_or_throw(c, buf));
    }
  }
  return PresheafMap(a, e->object(), std::move(comp));
}

PresheafMap untranspose(const Topos& t, const PresheafMap& g, const Presheaf& x, const Presheaf& y) {
  auto e = t.exponential(x, y);
  if (!(g.cod() == e->object())) throw ShapeError("untranspose: codomain is not Y^X");
  const Presheaf& a = g.dom();
  Product ax = product(a, x);
  const std::size_t n = a.base().object_count();
  std::vector<Function> comp(n);
  for (Index c = 0; c < n; ++c)
    for (Elem el = 0; el < a.size(c); ++el)
      for (Elem xi = 0; xi < x.size(c); ++xi) comp[c].push_back(evaluate(*e, c, g(c, el), xi));
  return PresheafMap(ax.object, y, std::move(comp));
}

PresheafMap name(const Topos& t, const PresheafMap& f) {
  Presheaf one = t.terminal();
  Product ox = product(one, f.dom());
  return transpose(t, one, f.dom(), compose(f, ox.p2));
}

PresheafMap unname(const Topos& t, const PresheafMap& point, const Presheaf& x, const Presheaf& y) {
  require_point(point, "unname");
  auto e = t.exponential(x, y);
  if (!(point.cod() == e->object())) throw ShapeError("unname: codomain is not Y^X");
  const std::size_t n = x.base().object_count();
  std::vector<Function> comp(n);
  for (Index c = 0; c < n; ++c)
    for (Elem xi = 0; xi < x.size(c); ++xi) comp[c].push_back(evaluate(*e, c, point(c, 0), xi));
  return PresheafMap(x, y, std::move(comp));
}

PresheafMap sigma(const Topos& t, const Presheaf& x, const Presheaf& a) {
  return transpose(t, x, a, product(x, a).p1);
}

PresheafMap ev_at(const Topos& t, const PresheafMap& point, const Presheaf& x) {
  require_point(point, "ev_at");
  auto e = t.exponential(point.cod(), x);
  const std::size_t n = x.base().object_count();
  std::vector<Function> comp(n);
  for (Index c = 0; c < n; ++c)
    for (Elem el = 0; el < e->object().size(c); ++el)
      comp[c].push_back(evaluate(*e, c, el, point(c, 0)));
  return PresheafMap(e->object(), x, std::move(comp));
}

InternalComposition internal_composition(const Topos& t, const Presheaf& x, const Presheaf& y,
                                         const Presheaf& z) {
  auto zy = t.exponential(y, z);
  auto yx = t.exponential(x, y);
  Product dom = product(zy->object(), yx->object());
  Product dx = product(dom.object, x);
  const std::size_t n = x.base().object_count();
  std::vector<Function> comp(n);
  for (Index c = 0; c < n; ++c)
    for (Elem u = 0; u < zy->object().size(c); ++u)
      for (Elem v = 0; v < yx->object().size(c); ++v)
        for (Elem xi = 0; xi < x.size(c); ++xi)
          comp[c].push_back(evaluate(*zy, c, u, evaluate(*yx, c, v, xi)));
  PresheafMap body(dx.object, z, std::move(comp));
  return {dom, transpose(t, dom.object, x, body)};
}

PresheafMap exp_contravariant(const Topos& t, const Presheaf& x, const PresheafMap& phi) {
  const Presheaf& b = phi.dom();
  auto xa = t.exponential(phi.cod(), x);
  Product eb = product(xa->object(), b);
  const std::size_t n = x.base().object_count();
  std::vector<Function> comp(n);
  for (Index c = 0; c < n; ++c)
    for (Elem el = 0; el < xa->object().size(c); ++el)
      for (Elem bi = 0; bi < b.size(c); ++bi) comp[c].push_back(evaluate(*xa, c, el, phi(c, bi)));
  return transpose(t, xa->object(), b, PresheafMap(eb.object, x, std::move(comp)));
}

PresheafMap exp_covariant(const Topos& t, const PresheafMap& r, const Presheaf& a) {
  auto xa = t.exponential(a, r.dom());
  Product ea = product(xa->object(), a);
  const std::size_t n = a.base().object_count();
  std::vector<Function> comp(n);
  for (Index c = 0; c < n; ++c)
    for (Elem el = 0; el < xa->object().size(c); ++el)
      for (Elem ai = 0; ai < a.size(c); ++ai) comp[c].push_back(r(c, evaluate(*xa, c, el, ai)));
  return transpose(t, xa->object(), a, PresheafMap(ea.object, r.cod(), std::move(comp)));
}

Distributivity distributivity_iso(const Topos& t, const Presheaf& x, const Presheaf& y,
                                  const Presheaf& z) {
  Coproduct sum = coproduct(x, y);
  PresheafMap zi1 = exp_contravariant(t, z, sum.i1);
  PresheafMap zi2 = exp_contravariant(t, z, sum.i2);
  Product target = product(zi1.cod(), zi2.cod());
  return {sum, target, pair_maps(target, zi1, zi2)};
}

PresheafMap constant_map(const Presheaf& x, const PresheafMap& point) {
  require_point(point, "constant_map");
  std::vector<Function> comp(x.base().object_count());
  for (Index c = 0; c < comp.size(); ++c) comp[c].assign(x.size(c), point(c, 0));
  return PresheafMap(x, point.cod(), std::move(comp));
}

PresheafMap point_section(const Product& ax, const PresheafMap& point) {
  const Presheaf& x = ax.p2.cod();
  return pair_maps(ax, constant_map(x, point), identity_map(x));
}

}  // namespace htopos
