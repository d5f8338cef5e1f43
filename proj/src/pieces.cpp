// SPDX-License-Identifier: Apache-2.0

#include "htopos/pieces.hpp"

#include <algorithm>
#include <map>

#include "htopos/ccc.hpp"
#include "htopos/error.hpp"
#include "htopos/union_find.hpp"

namespace htopos {

PiecesResult pi0(const Presheaf& x) {
  const auto& cat = x.base();
  UnionFind uf(x.total_size());
  for (Index f = 0; f < cat.morphism_count(); ++f) {
    Index c = cat.cod(f), d = cat.dom(f);
    for (Elem e = 0; e < x.size(c); ++e) uf.unite(x.offset(c) + e, x.offset(d) + x.act(f, e));
  }
  PiecesResult r;
  auto labels = uf.labels(&r.components);
  const std::size_t n = cat.object_count();
  r.assignment.resize(n);
  std::vector<Function> comp(n);
  for (Index c = 0; c < n; ++c) {
    for (Elem e = 0; e < x.size(c); ++e) {
      r.assignment[c].push_back(labels[x.offset(c) + e]);
      comp[c].push_back(static_cast<Elem>(labels[x.offset(c) + e]));
    }
  }
  r.p = PresheafMap(x, discrete(x.base_ref(), r.components), std::move(comp));
  return r;
}

bool is_connected(const Presheaf& x) { return pi0(x).components == 1; }

std::vector<std::size_t> pi0_map(const PresheafMap& f, const PiecesResult& px,
                                 const PiecesResult& py) {
  std::vector<std::size_t> out(px.components, kNone);
  const auto& cat = f.dom().base();
  for (Index c = 0; c < cat.object_count(); ++c) {
    for (Elem e = 0; e < f.dom().size(c); ++e) {
      std::size_t k = px.assignment[c][e];
      std::size_t v = py.assignment[c][f(c, e)];
      if (out[k] == kNone)
        out[k] = v;
      else if (out[k] != v)
        throw InternalError("pi0 of a natural map is not well defined");
    }
  }
  return out;
}

PresheafMap discrete_map(const Topos& t, const std::vector<std::size_t>& fn, std::size_t target_size) {
  Function f(fn.begin(), fn.end());
  for (Elem v : f)
    if (v >= target_size) throw ShapeError("discrete_map: value out of range");
  std::vector<Function> comp(t.category().object_count(), f);
  return PresheafMap(t.discrete(fn.size()), t.discrete(target_size), std::move(comp));
}

PointsResult points(const Topos& t, const Presheaf& x) {
  PointsResult r;
  r.points = t.points(x);
  const std::size_t n = t.category().object_count();
  std::vector<Function> comp(n);
  for (Index c = 0; c < n; ++c)
    for (const auto& p : r.points) comp[c].push_back(p(c, 0));
  r.gamma = PresheafMap(t.discrete(r.points.size()), x, std::move(comp));
  return r;
}

namespace {

Index require_pointed_terminal(const Topos& t, const char* op) {
  if (!t.terminal_object()) throw PreconditionError(std::string(op) + ": site has no terminal object");
  if (!t.ns_site()) throw PreconditionError(std::string(op) + ": some object of the site has no point");
  return *t.terminal_object();
}

// Digits of n in base s, most significant first, k digits.
std::vector<std::size_t> digits(std::size_t n, std::size_t s, std::size_t k) {
  std::vector<std::size_t> d(k);
  for (std::size_t i = k; i-- > 0;) {
    d[i] = n % s;
    n /= s;
  }
  return d;
}

std::size_t undigits(const std::vector<std::size_t>& d, std::size_t s) {
  std::size_t n = 0;
  for (auto v : d) n = n * s + v;
  return n;
}

}  // namespace

Presheaf codiscrete(const Topos& t, std::size_t s) {
  Index term = require_pointed_terminal(t, "codiscrete");
  const auto& cat = t.category();
  const std::size_t n = cat.object_count();
  std::vector<std::size_t> sizes(n);
  for (Index c = 0; c < n; ++c) {
    std::size_t k = cat.hom(term, c).size(), v = 1;
    for (std::size_t i = 0; i < k; ++i) {
      if (v > (std::size_t{1} << 24) / std::max<std::size_t>(s, 1))
        throw ResourceError("codiscrete: stage too large");
      v *= s;
    }
    sizes[c] = v;
  }
  std::vector<Function> action(cat.morphism_count());
  for (Index f = 0; f < cat.morphism_count(); ++f) {
    Index c = cat.cod(f), d = cat.dom(f);
    const auto& pc = cat.hom(term, c);
    const auto& pd = cat.hom(term, d);
    for (std::size_t e = 0; e < sizes[c]; ++e) {
      auto dc = digits(e, s, pc.size());
      std::vector<std::size_t> dd(pd.size());
      for (std::size_t i = 0; i < pd.size(); ++i) dd[i] = dc[cat.hom_position(cat.compose(f, pd[i]))];
      action[f].push_back(static_cast<Elem>(undigits(dd, s)));
    }
  }
  return Presheaf(t.site(), std::move(sizes), std::move(action));
}

std::vector<std::size_t> codiscrete_transpose(const Topos& t, const PresheafMap& f,
                                              const PointsResult& pts, std::size_t s) {
  Index term = require_pointed_terminal(t, "codiscrete_transpose");
  std::vector<std::size_t> out;
  // At the terminal stage Λ S has S elements (one point of t).
  for (const auto& p : pts.points) out.push_back(f(term, p(term, 0)));
  (void)s;
  return out;
}

std::vector<std::size_t> theta(const Topos& t, const Presheaf& x) {
  auto pr = pi0(x);
  auto pts = points(t, x);
  std::vector<std::size_t> out;
  if (t.category().object_count() == 0) return out;
  for (std::size_t i = 0; i < pts.points.size(); ++i) out.push_back(pr.assignment[0][pts.gamma(0, static_cast<Elem>(i))]);
  return out;
}

// --- components of exponentials -----------------------------------------

PresheafMap ExponentialPieces::arrow(std::size_t i) const {
  std::vector<Function> comp(x.base().object_count());
  const Elem* t = tables.data() + i * width;
  for (Index c = 0; c < comp.size(); ++c) comp[c].assign(t + x.offset(c), t + x.offset(c) + x.size(c));
  return PresheafMap(x, y, std::move(comp));
}

std::size_t ExponentialPieces::index_of(const PresheafMap& f) const {
  auto flat = flatten(f);
  std::size_t lo = 0, hi = count;
  while (lo < hi) {
    std::size_t mid = (lo + hi) / 2;
    const Elem* m = tables.data() + mid * width;
    if (std::lexicographical_compare(m, m + width, flat.begin(), flat.end()))
      lo = mid + 1;
    else
      hi = mid;
  }
  if (lo == count || !std::equal(flat.begin(), flat.end(), tables.data() + lo * width))
    throw ShapeError("arrow is not in the hom-set");
  return lo;
}

namespace {

void collect_arrows(const Topos& t, ExponentialPieces& r, std::uint64_t budget) {
  r.width = r.x.total_size();
  HomSearch s(r.x, r.y, budget, "Hom at the terminal stage of an exponential");
  s.for_each([&](const std::vector<Elem>& v) {
    r.tables.insert(r.tables.end(), v.begin(), v.end());
    ++r.count;
    return true;
  });
}

void renumber(ExponentialPieces& r, const std::vector<std::size_t>& raw) {
  std::map<std::size_t, std::size_t> seen;
  r.label.clear();
  for (auto v : raw) r.label.push_back(seen.emplace(v, seen.size()).first->second);
  r.classes = seen.size();
}

}  // namespace

ExponentialPieces exponential_pieces_direct(const Topos& t, const Presheaf& x, const Presheaf& y) {
  ExponentialPieces r;
  r.x = x;
  r.y = y;
  auto e = t.exponential(x, y);
  auto pr = pi0(e->object());
  r.components = pr.components;
  collect_arrows(t, r, t.config().budget);
  const std::size_t n = t.category().object_count();
  std::map<std::vector<std::size_t>, std::size_t> keys;
  std::vector<std::size_t> raw;
  for (std::size_t i = 0; i < r.count; ++i) {
    PresheafMap nm = name(t, r.arrow(i));
    std::vector<std::size_t> key(n);
    for (Index c = 0; c < n; ++c) key[c] = pr.assignment[c][nm(c, 0)];
    raw.push_back(keys.emplace(key, keys.size()).first->second);
  }
  renumber(r, raw);
  return r;
}

namespace {

ExponentialPieces streamed_pieces(const Topos& t, const Presheaf& x, const Presheaf& y,
                                  std::uint64_t budget) {
  const auto& cat = t.category();
  const Index term = *t.terminal_object();
  const std::size_t n = cat.object_count();
  ExponentialPieces r;
  r.x = x;
  r.y = y;
  r.streamed = true;
  collect_arrows(t, r, budget);
  UnionFind uf(r.count);
  std::size_t live = r.count;
  auto lookup = [&](const std::vector<Elem>& v) -> std::size_t {
    std::size_t lo = 0, hi = r.count;
    while (lo < hi) {
      std::size_t mid = (lo + hi) / 2;
      const Elem* m = r.tables.data() + mid * r.width;
      if (std::lexicographical_compare(m, m + r.width, v.begin(), v.end()))
        lo = mid + 1;
      else
        hi = mid;
    }
    if (lo == r.count || !std::equal(v.begin(), v.end(), r.tables.data() + lo * r.width)) return kNone;
    return lo;
  };
  for (Index c = 0; c < n && live > 1; ++c) {
    const auto& pts = cat.hom(term, c);
    if (c == term || pts.size() < 2) continue;
    Product probe = product(t.yoneda(c), x);
    const Presheaf& a = probe.object;
    auto slice = [&](Index p) {
      std::vector<std::size_t> vars;
      for (Index k = 0; k < n; ++k) {
        Index bang_k = cat.hom(k, term).front();
        std::size_t pos = cat.hom_position(cat.compose(p, bang_k));
        for (Elem xi = 0; xi < x.size(k); ++xi) vars.push_back(a.offset(k) + pos * x.size(k) + xi);
      }
      return vars;
    };
    auto first = slice(pts[0]);
    for (std::size_t j = 1; j < pts.size() && live > 1; ++j) {
      auto other = slice(pts[j]);
      std::vector<std::size_t> vars = first;
      std::vector<std::size_t> where(other.size());
      for (std::size_t i = 0; i < other.size(); ++i) {
        auto it = std::find(vars.begin(), vars.end(), other[i]);
        where[i] = static_cast<std::size_t>(it - vars.begin());
        if (it == vars.end()) vars.push_back(other[i]);
      }
      std::vector<Elem> ta(first.size()), tb(other.size());
      auto split = [&](const std::vector<Elem>& proj, std::size_t* ia, std::size_t* ib) {
        std::copy(proj.begin(), proj.begin() + static_cast<std::ptrdiff_t>(first.size()), ta.begin());
        for (std::size_t i = 0; i < other.size(); ++i) tb[i] = proj[where[i]];
        *ia = lookup(ta);
        *ib = lookup(tb);
      };
      HomSearch s(a, y, budget,
                  "links at stage " + cat.object_name(c) + " of an exponential");
      s.for_each_projection(
          vars,
          [&](const std::vector<Elem>& proj) {
            std::size_t ia, ib;
            split(proj, &ia, &ib);
            if (ia == kNone || ib == kNone) throw InternalError("point restriction is not a global element");
            if (uf.unite(ia, ib)) --live;
            return live > 1;
          },
          [&](const std::vector<Elem>& proj) {
            std::size_t ia, ib;
            split(proj, &ia, &ib);
            return ia == kNone || ib == kNone || !uf.same(ia, ib);
          });
    }
  }
  std::size_t k = 0;
  renumber(r, uf.labels(&k));
  r.components = k;
  return r;
}

}  // namespace

std::shared_ptr<const ExponentialPieces> exponential_pieces(const Topos& t, const Presheaf& x,
                                                            const Presheaf& y, std::uint64_t budget) {
  if (budget == 0) budget = t.config().budget;
  auto v = t.memo(1, x, y, [&]() -> std::shared_ptr<const void> {
    if (t.ns_site()) return std::make_shared<const ExponentialPieces>(streamed_pieces(t, x, y, budget));
    return std::make_shared<const ExponentialPieces>(exponential_pieces_direct(t, x, y));
  });
  return std::static_pointer_cast<const ExponentialPieces>(v);
}

// --- adjunction certificates -----------------------------------------------------

bool AdjunctionCertificate::verified() const {
  return std::all_of(lines.begin(), lines.end(), [](const CheckLine& l) { return l.ok; });
}

namespace {

// Functions {0..a-1} → {0..b-1} in lexicographic order.
std::vector<std::vector<std::size_t>> all_functions(std::size_t a, std::size_t b) {
  std::vector<std::vector<std::size_t>> out;
  if (a == 0) return {{}};
  if (b == 0) return out;
  std::vector<std::size_t> cur(a, 0);
  while (true) {
    out.push_back(cur);
    std::size_t i = a;
    while (i > 0 && ++cur[i - 1] == b) cur[--i] = 0;
    if (i == 0) break;
  }
  return out;
}

std::string fmt_fn(const std::vector<std::size_t>& f) {
  std::string s = "[";
  for (std::size_t i = 0; i < f.size(); ++i) s += (i ? "," : "") + std::to_string(f[i]);
  return s + "]";
}

// Transpose of f: X → ΔS along p_X; kNone entries mean "not constant".
std::vector<std::size_t> factor_through_pieces(const PresheafMap& f, const PiecesResult& pr) {
  std::vector<std::size_t> out(pr.components, kNone);
  for (Index c = 0; c < pr.assignment.size(); ++c)
    for (Elem e = 0; e < f.dom().size(c); ++e) {
      auto& slot = out[pr.assignment[c][e]];
      if (slot == kNone)
        slot = f(c, e);
      else if (slot != f(c, e))
        return {};
    }
  return out;
}

}  // namespace

AdjunctionCertificate certify_pieces_adjunction(const Topos& t, const std::vector<Presheaf>& family,
                                                const std::vector<std::string>& names,
                                                std::size_t max_s) {
  AdjunctionCertificate cert{"Pi0", "Delta", names, {}};
  std::vector<PiecesResult> prs;
  for (const auto& x : family) prs.push_back(pi0(x));
  for (std::size_t i = 0; i < family.size(); ++i) {
    const auto& x = family[i];
    const auto& pr = prs[i];
    for (std::size_t s = 0; s <= max_s; ++s) {
      CheckLine line{"Hom(" + names[i] + ", D" + std::to_string(s) + ") = functions(Pi0 " + names[i] +
                         ", " + std::to_string(s) + ")",
                     true, ""};
      auto maps = t.hom(x, t.discrete(s));
      std::map<std::vector<std::size_t>, std::size_t> seen;
      for (std::size_t m = 0; m < maps.size(); ++m) {
        auto bar = factor_through_pieces(maps[m], pr);
        if (bar.empty() && pr.components > 0) {
          line.ok = false;
          line.witness = "map " + std::to_string(m) + " is not constant on a component";
          break;
        }
        if (!seen.emplace(bar, m).second) {
          line.ok = false;
          line.witness = "maps " + std::to_string(seen[bar]) + " and " + std::to_string(m) + " share " + fmt_fn(bar);
          break;
        }
      }
      auto fns = all_functions(pr.components, s);
      if (line.ok && seen.size() != fns.size()) {
        line.ok = false;
        line.witness = std::to_string(maps.size()) + " maps vs " + std::to_string(fns.size()) + " functions";
      }
      if (line.ok) line.witness = std::to_string(maps.size()) + " maps";
      cert.lines.push_back(line);
    }
    // Triangle identities. Π₀(p_X) is the identity on components and
    // p at a discrete object is invertible.
    {
      CheckLine tri{"triangle Pi0 p_" + names[i] + " = 1", true, ""};
      auto pp = pi0(pr.p.cod());
      auto fn = pi0_map(pr.p, pr, pp);
      for (std::size_t k = 0; k < fn.size(); ++k)
        if (pp.components != pr.components || fn[k] != k) {
          tri.ok = false;
          tri.witness = "component " + std::to_string(k) + " goes to " + std::to_string(fn[k]);
          break;
        }
      cert.lines.push_back(tri);
    }
  }
  for (std::size_t s = 0; s <= max_s; ++s) {
    CheckLine tri{"triangle p_D" + std::to_string(s) + " invertible with inverse the counit", true, ""};
    auto pr = pi0(t.discrete(s));
    if (!is_iso(pr.p) || !(inverse(pr.p) == identity_map(t.discrete(s)))) {
      tri.ok = false;
      tri.witness = "p is not the identity on D" + std::to_string(s);
    }
    cert.lines.push_back(tri);
  }
  // Naturality in X along maps between members, and in S along functions.
  for (std::size_t i = 0; i < family.size(); ++i)
    for (std::size_t j = 0; j < family.size(); ++j) {
      CheckLine nat{"naturality along " + names[i] + " -> " + names[j], true, ""};
      std::vector<PresheafMap> rs;
      try {
        rs = t.hom(family[i], family[j]);
      } catch (const ResourceError& e) {
        nat.ok = false;
        nat.witness = e.what();
        cert.lines.push_back(nat);
        continue;
      }
      if (rs.size() > t.config().rep_bound) rs.resize(t.config().rep_bound);
      auto gs = t.hom(family[j], t.two());
      for (const auto& r : rs) {
        auto pir = pi0_map(r, prs[i], prs[j]);
        for (const auto& g : gs) {
          auto lhs = factor_through_pieces(compose(g, r), prs[i]);
          auto gb = factor_through_pieces(g, prs[j]);
          if (lhs.size() != prs[i].components || gb.size() != prs[j].components) {
            nat.ok = false;
            nat.witness = "a map does not factor through pieces";
            continue;
          }
          for (std::size_t k = 0; k < lhs.size(); ++k)
            if (lhs[k] != gb[pir[k]]) {
              nat.ok = false;
              nat.witness = "component " + std::to_string(k);
            }
        }
      }
      if (nat.ok) nat.witness = std::to_string(rs.size()) + " maps x " + std::to_string(gs.size()) + " tests";
      cert.lines.push_back(nat);
    }
  for (std::size_t i = 0; i < family.size(); ++i) {
    CheckLine nat{"naturality in S for " + names[i], true, ""};
    auto maps = t.hom(family[i], t.discrete(2));
    for (const auto& h : all_functions(2, 3)) {
      PresheafMap dh = discrete_map(t, h, 3);
      for (const auto& f : maps) {
        auto lhs = factor_through_pieces(compose(dh, f), prs[i]);
        auto fb = factor_through_pieces(f, prs[i]);
        if (lhs.size() != prs[i].components || fb.size() != prs[i].components) {
          nat.ok = false;
          nat.witness = "a map does not factor through pieces";
          continue;
        }
        for (std::size_t k = 0; k < lhs.size(); ++k)
          if (lhs[k] != h[fb[k]]) {
            nat.ok = false;
            nat.witness = "function " + fmt_fn(h);
          }
      }
    }
    cert.lines.push_back(nat);
  }
  return cert;
}

AdjunctionCertificate certify_points_adjunction(const Topos& t, const std::vector<Presheaf>& family,
                                                const std::vector<std::string>& names,
                                                std::size_t max_s) {
  AdjunctionCertificate cert{"Gamma", "Lambda", names, {}};
  for (std::size_t i = 0; i < family.size(); ++i) {
    auto pts = points(t, family[i]);
    for (std::size_t s = 0; s <= max_s; ++s) {
      CheckLine line{"Hom(" + names[i] + ", L" + std::to_string(s) + ") = functions(points " + names[i] +
                         ", " + std::to_string(s) + ")",
                     true, ""};
      auto maps = t.hom(family[i], codiscrete(t, s));
      std::map<std::vector<std::size_t>, std::size_t> seen;
      for (std::size_t m = 0; m < maps.size(); ++m)
        if (!seen.emplace(codiscrete_transpose(t, maps[m], pts, s), m).second) {
          line.ok = false;
          line.witness = "maps " + std::to_string(seen[codiscrete_transpose(t, maps[m], pts, s)]) + " and " +
                         std::to_string(m) + " agree on points";
          break;
        }
      auto fns = all_functions(pts.points.size(), s);
      if (line.ok && seen.size() != fns.size()) {
        line.ok = false;
        line.witness = std::to_string(maps.size()) + " maps vs " + std::to_string(fns.size()) + " functions";
      }
      if (line.ok) line.witness = std::to_string(maps.size()) + " maps";
      cert.lines.push_back(line);
    }
  }
  return cert;
}

}  // namespace htopos
