// SPDX-License-Identifier: Apache-2.0

#include "htopos/homotopy.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <map>
#include <mutex>
#include <random>
#include <set>
#include <shared_mutex>
#include <sstream>

#include "htopos/ccc.hpp"
#include "htopos/digest.hpp"
#include "htopos/error.hpp"
#include "htopos/union_find.hpp"

namespace htopos {

namespace {

constexpr std::uint64_t kContractibleListBudget = 100'000;
constexpr std::size_t kContractibleListMaxCodomain = 4096;

std::string stages(const Presheaf& x) {
  std::string s = "(";
  for (Index c = 0; c < x.base().object_count(); ++c) s += (c ? "," : "") + std::to_string(x.size(c));
  return s + ")";
}

std::uint64_t label_seed(const Topos& t, const std::string& label) {
  Digest d;
  d.u64(t.config().seed);
  d.str(label);
  return d.value();
}

}  // namespace

// --- theories -------------------------------------------------------------------

struct HomotopyTheory::Cache {
  std::shared_mutex mu;
  std::map<std::uint64_t, std::vector<std::pair<Presheaf, Reflection>>> reflections;
  std::map<std::pair<std::uint64_t, std::uint64_t>,
           std::vector<std::pair<std::pair<Presheaf, Presheaf>, std::shared_ptr<const HomClasses>>>>
      classes;
};

HomotopyTheory::HomotopyTheory(const Topos& t, TheoryKind kind, std::optional<LTTopology> j)
    : topos_(&t), kind_(kind), cache_(std::make_shared<Cache>()) {
  if (kind == TheoryKind::Topology) {
    if (!j) throw PreconditionError("topology theory needs a topology");
    auto v = validate_topology(t, *j);
    if (!v.empty()) throw SemanticError("not a topology: " + v.front());
    j_ = std::move(j);
  }
}

std::string HomotopyTheory::name() const {
  switch (kind_) {
    case TheoryKind::Identity: return "identity";
    case TheoryKind::Bang: return "bang";
    case TheoryKind::Pieces: return "pieces";
    case TheoryKind::Topology: return "topology:" + j_->name;
  }
  return {};
}

Reflection HomotopyTheory::reflect(const Presheaf& x) const {
  {
    std::shared_lock lock(cache_->mu);
    auto it = cache_->reflections.find(x.digest());
    if (it != cache_->reflections.end())
      for (const auto& [k, v] : it->second)
        if (k == x) return v;
  }
  Reflection r;
  switch (kind_) {
    case TheoryKind::Identity:
      r = {x, identity_map(x)};
      break;
    case TheoryKind::Bang:
      r = {topos_->terminal(), bang(x)};
      break;
    case TheoryKind::Pieces: {
      auto pr = pi0(x);
      r = {pr.p.cod(), pr.p};
      break;
    }
    case TheoryKind::Topology: {
      auto q = quotient(*topos_, *j_, x);
      r = {q.object, q.q};
      break;
    }
  }
  std::unique_lock lock(cache_->mu);
  cache_->reflections[x.digest()].emplace_back(x, r);
  return r;
}

PresheafMap HomotopyTheory::apply(const PresheafMap& f) const {
  Reflection rx = reflect(f.dom());
  Reflection ry = reflect(f.cod());
  const std::size_t n = topos_->category().object_count();
  std::vector<Function> comp(n);
  if (kind_ == TheoryKind::Pieces) {
    // Components may have no element at some stage; the map is one function.
    Function fn(rx.object.size(0), kNone);
    for (Index c = 0; c < n; ++c)
      for (Elem e = 0; e < f.dom().size(c); ++e) {
        Elem k = rx.p(c, e), v = ry.p(c, f(c, e));
        if (fn[k] != kNone && fn[k] != v) throw InternalError("pieces of an arrow are not well defined");
        fn[k] = v;
      }
    for (Index c = 0; c < n; ++c) comp[c] = fn;
    return PresheafMap(rx.object, ry.object, std::move(comp));
  }
  for (Index c = 0; c < n; ++c) {
    comp[c].assign(rx.object.size(c), kNone);
    for (Elem e = 0; e < f.dom().size(c); ++e) {
      Elem k = rx.p(c, e), v = ry.p(c, f(c, e));
      if (comp[c][k] != kNone && comp[c][k] != v)
        throw InternalError("reflection of an arrow is not well defined at " +
                            topos_->category().object_name(c));
      comp[c][k] = v;
    }
    for (auto& v : comp[c]) {
      if (v != kNone) continue;
      if (ry.object.size(c) != 1) throw InternalError("reflection is not surjective and the target is not terminal");
      v = 0;
    }
  }
  return PresheafMap(rx.object, ry.object, std::move(comp));
}

bool TheoryCertificate::verified() const {
  return std::all_of(lines.begin(), lines.end(), [](const CheckLine& l) { return l.ok; });
}

TheoryCertificate certify_theory(const HomotopyTheory& th, const std::vector<Presheaf>& family,
                                 const std::vector<std::string>& names) {
  const Topos& t = th.topos();
  TheoryCertificate cert{th.name(), names, {}};
  const std::size_t bound = t.config().rep_bound;

  CheckLine nat{"p natural on family maps", true, ""};
  std::size_t checked = 0;
  for (std::size_t i = 0; i < family.size() && nat.ok; ++i) {
    for (std::size_t k = 0; k < family.size() && nat.ok; ++k) {
      std::vector<PresheafMap> maps;
      HomSearch s(family[i], family[k], t.config().budget, "family maps");
      s.for_each([&](const std::vector<Elem>& v) {
        maps.push_back(s.to_map(v));
        return maps.size() < bound;
      });
      for (const auto& f : maps) {
        ++checked;
        try {
          PresheafMap pf = th.apply(f);
          if (!pf.validate().empty() ||
              !(compose(pf, th.reflect(f.dom()).p) == compose(th.reflect(f.cod()).p, f))) {
            nat.ok = false;
            nat.witness = "square fails for a map " + names[i] + " → " + names[k];
            break;
          }
        } catch (const InternalError& e) {
          nat.ok = false;
          nat.witness = names[i] + " → " + names[k] + ": " + e.what();
          break;
        }
      }
    }
  }
  if (nat.ok) nat.witness = std::to_string(checked) + " maps, at most " + std::to_string(bound) + " per hom-set";
  cert.lines.push_back(nat);

  Reflection r1 = th.reflect(t.terminal());
  CheckLine term{"Π₀1 ≅ 1", true, "stages " + stages(r1.object)};
  for (Index c = 0; c < t.category().object_count(); ++c)
    if (r1.object.size(c) != 1) term.ok = false;
  cert.lines.push_back(term);

  CheckLine prod{"Π₀(X×Y) → Π₀X×Π₀Y bijective", true, ""};
  for (std::size_t i = 0; i < family.size() && prod.ok; ++i) {
    for (std::size_t k = i; k < family.size(); ++k) {
      Product xy = product(family[i], family[k]);
      Reflection rxy = th.reflect(xy.object);
      Reflection rx = th.reflect(family[i]);
      Reflection ry = th.reflect(family[k]);
      Product target = product(rx.object, ry.object);
      PresheafMap cmp = pair_maps(target, th.apply(xy.p1), th.apply(xy.p2));
      if (!is_iso(cmp)) {
        prod.ok = false;
        std::string xn = names[i], yn = names[k];
        if (th.kind() == TheoryKind::Pieces) {
          prod.witness = "(" + xn + ", " + yn + "): Π₀(" + xn + "×" + yn + ") = " +
                         std::to_string(rxy.object.size(0)) + " but Π₀" + xn + "·Π₀" + yn + " = " +
                         std::to_string(rx.object.size(0) * ry.object.size(0));
        } else {
          prod.witness = "(" + xn + ", " + yn + "): stages " + stages(rxy.object) + " vs " +
                         stages(target.object);
        }
        break;
      }
    }
  }
  if (prod.ok) prod.witness = "all pairs of the family";
  cert.lines.push_back(prod);

  CheckLine surj{"E(1, p_X) surjective", true, ""};
  for (std::size_t i = 0; i < family.size() && surj.ok; ++i) {
    Reflection r = th.reflect(family[i]);
    auto target = t.points(r.object);
    std::set<std::vector<Elem>> hit;
    for (const auto& x : t.points(family[i])) hit.insert(flatten(compose(r.p, x)));
    for (std::size_t k = 0; k < target.size(); ++k) {
      if (!hit.count(flatten(target[k]))) {
        surj.ok = false;
        surj.witness = names[i] + ": point " + std::to_string(k) + " of its reflection has no preimage (" +
                       std::to_string(hit.size()) + " of " + std::to_string(target.size()) + " hit)";
        break;
      }
    }
  }
  if (surj.ok) surj.witness = "every family object";
  cert.lines.push_back(surj);
  return cert;
}

// --- the relation ------------------------------------------------------------------

namespace {

void require_parallel(const PresheafMap& f, const PresheafMap& g) {
  if (!(f.dom() == g.dom()) || !(f.cod() == g.cod())) throw ShapeError("arrows are not parallel");
}

// Names of f and g are related by the closure of the diagonal of Y^X.
bool topology_related(const Topos& t, const LTTopology& j, const PresheafMap& f, const PresheafMap& g) {
  const auto& cat = t.category();
  const Omega& om = t.omega();
  const std::size_t n = cat.object_count();
  std::vector<bool> agree(n), below(n, true);
  for (Index k = 0; k < n; ++k) agree[k] = f.component(k) == g.component(k);
  for (Index k = 0; k < n; ++k)
    for (Index k2 = 0; k2 < n; ++k2)
      if (!cat.hom(k2, k).empty() && !agree[k2]) below[k] = false;
  for (Index c = 0; c < n; ++c) {
    std::uint64_t m = 0;
    for (Index h : cat.into(c))
      if (below[cat.dom(h)]) m |= std::uint64_t{1} << h;
    if (j(c, om.index_of(c, m)) != om.top(c)) return false;
  }
  return true;
}

}  // namespace

bool homotopic(const HomotopyTheory& th, const PresheafMap& f, const PresheafMap& g) {
  require_parallel(f, g);
  switch (th.kind()) {
    case TheoryKind::Identity: return f == g;
    case TheoryKind::Bang: return true;
    case TheoryKind::Pieces: {
      auto ep = exponential_pieces(th.topos(), f.dom(), f.cod());
      return ep->label[ep->index_of(f)] == ep->label[ep->index_of(g)];
    }
    case TheoryKind::Topology: return topology_related(th.topos(), *th.topology(), f, g);
  }
  return false;
}

bool homotopic_by_definition(const HomotopyTheory& th, const PresheafMap& f, const PresheafMap& g) {
  require_parallel(f, g);
  const Topos& t = th.topos();
  auto e = t.exponential(f.dom(), f.cod());
  Reflection r = th.reflect(e->object());
  return compose(r.p, name(t, f)) == compose(r.p, name(t, g));
}

// --- contractions ------------------------------------------------------------------

std::vector<std::string> verify_contraction(const Topos& t, const Contraction& c) {
  std::vector<std::string> out;
  const Presheaf& y = c.base.cod();
  if (!(c.ay.object == product(c.a, y).object)) return {"domain is not A×Y"};
  if (!is_connected(c.a)) out.push_back("A is not connected");
  for (const auto& v : c.h.validate()) out.push_back("h is not natural: " + v);
  if (!out.empty()) return out;
  const std::size_t n = t.category().object_count();
  for (Index k = 0; k < n; ++k) {
    for (Elem e = 0; e < y.size(k); ++e) {
      if (c.h(k, c.ay.pair(k, c.a0(k, 0), e)) != e) {
        out.push_back("h∘⟨a0!,1⟩ ≠ 1 at " + t.category().object_name(k));
        break;
      }
      if (c.h(k, c.ay.pair(k, c.a1(k, 0), e)) != c.base(k, 0)) {
        out.push_back("h∘⟨a1!,1⟩ ≠ y0! at " + t.category().object_name(k));
        break;
      }
    }
  }
  return out;
}

std::optional<Contraction> find_contraction(const Topos& t, const Presheaf& y, std::size_t max_size) {
  if (!t.terminal_object() || y.total_size() > max_size) return std::nullopt;
  auto v = t.memo(4, y, y, [&]() -> std::shared_ptr<const void> {
    const auto& cat = t.category();
    const Index term = *t.terminal_object();
    const std::size_t n = cat.object_count();
    auto ys = t.points(y);
    for (Index c = 0; c < n; ++c) {
      const auto& pts = cat.hom(term, c);
      if (pts.size() < 2) continue;
      Presheaf a = t.yoneda(c);
      Product ay = product(a, y);
      auto point_of = [&](Index p) {
        std::vector<Function> comp(n);
        for (Index k = 0; k < n; ++k)
          comp[k] = {static_cast<Elem>(cat.hom_position(cat.compose(p, cat.hom(k, term).front())))};
        return PresheafMap(t.terminal(), a, std::move(comp));
      };
      for (Index p0 : pts) {
        for (Index p1 : pts) {
          if (p0 == p1) continue;
          PresheafMap a0 = point_of(p0), a1 = point_of(p1);
          for (const auto& y0 : ys) {
            HomSearch s(ay.object, y, t.config().budget, "contraction search");
            for (Index k = 0; k < n; ++k) {
              for (Elem e = 0; e < y.size(k); ++e) {
                s.pin(k, ay.pair(k, a0(k, 0), e), e);
                s.pin(k, ay.pair(k, a1(k, 0), e), y0(k, 0));
              }
            }
            if (auto h = s.first())
              return std::make_shared<const std::optional<Contraction>>(Contraction{a, a0, a1, y0, ay, *h});
          }
        }
      }
    }
    return std::make_shared<const std::optional<Contraction>>(std::nullopt);
  });
  return *std::static_pointer_cast<const std::optional<Contraction>>(v);
}

Contraction exponential_contraction(const Topos& t, const Contraction& c, const Presheaf& z) {
  const Presheaf& y = c.base.cod();
  auto e = t.exponential(z, y);
  const Presheaf& ez = e->object();
  const auto& cat = t.category();
  const std::size_t n = cat.object_count();
  Product aez = product(c.a, ez);
  std::vector<Function> comp(n);
  std::vector<Elem> buf;
  for (Index d = 0; d < n; ++d) {
    const Presheaf& probe = e->probe(d).object;
    comp[d].resize(aez.object.size(d));
    for (Elem alpha = 0; alpha < c.a.size(d); ++alpha) {
      for (Elem phi = 0; phi < ez.size(d); ++phi) {
        const Elem* src = e->table(d, phi);
        buf.assign(e->width(d), 0);
        for (Index k = 0; k < n; ++k) {
          const auto& hk = cat.hom(k, d);
          const std::size_t zk = z.size(k);
          for (std::size_t gi = 0; gi < hk.size(); ++gi) {
            Elem au = c.a.act(hk[gi], alpha);
            for (Elem zi = 0; zi < zk; ++zi) {
              std::size_t at = probe.offset(k) + gi * zk + zi;
              buf[at] = c.h(k, c.ay.pair(k, au, src[at]));
            }
          }
        }
        comp[d][aez.pair(d, alpha, phi)] = e->find_or_throw(d, buf);
      }
    }
  }
  PresheafMap base = name(t, constant_map(z, c.base));
  return {c.a, c.a0, c.a1, base, aez, PresheafMap(aez.object, ez, std::move(comp))};
}

// --- hom classes --------------------------------------------------------------------

namespace {

std::size_t find_table(const std::vector<Elem>& tables, std::size_t count, std::size_t width,
                       const std::vector<Elem>& flat) {
  std::size_t lo = 0, hi = count;
  while (lo < hi) {
    std::size_t mid = (lo + hi) / 2;
    const Elem* m = tables.data() + mid * width;
    if (std::lexicographical_compare(m, m + width, flat.begin(), flat.end()))
      lo = mid + 1;
    else
      hi = mid;
  }
  if (lo == count || !std::equal(flat.begin(), flat.end(), tables.data() + lo * width)) return kNone;
  return lo;
}

void enumerate(const Topos& t, HomClasses& r) {
  r.width = r.x.total_size();
  HomSearch s(r.x, r.y, t.config().budget, "hom-set enumeration");
  s.for_each([&](const std::vector<Elem>& v) {
    r.tables.insert(r.tables.end(), v.begin(), v.end());
    ++r.count;
    return true;
  });
}

void finish_labels(HomClasses& r, const std::vector<std::size_t>& raw) {
  std::map<std::size_t, std::size_t> seen;
  r.label.clear();
  r.representative.clear();
  for (std::size_t i = 0; i < raw.size(); ++i) {
    auto [it, fresh] = seen.emplace(raw[i], seen.size());
    if (fresh) r.representative.push_back(i);
    r.label.push_back(it->second);
  }
  r.classes = seen.size();
}

// Points of the reflection of Y^X hit by the names of the representatives.
void fill_class_points(const HomotopyTheory& th, HomClasses& r) {
  const Topos& t = th.topos();
  try {
    auto e = t.exponential(r.x, r.y);
    Reflection ref = th.reflect(e->object());
    auto pts = t.points(ref.object);
    std::vector<std::vector<Elem>> keys;
    for (const auto& p : pts) keys.push_back(flatten(p));
    r.reflection_points = pts.size();
    r.class_points.clear();
    for (std::size_t rep : r.representative) {
      auto k = flatten(compose(ref.p, name(t, r.arrow(rep))));
      auto it = std::find(keys.begin(), keys.end(), k);
      r.class_points.push_back(static_cast<std::size_t>(it - keys.begin()));
    }
  } catch (const ResourceError&) {
    r.reflection_points.reset();
    r.class_points.clear();
  }
}

HomClasses compute_classes(const HomotopyTheory& th, const Presheaf& x, const Presheaf& y,
                           const Contraction* hint) {
  const Topos& t = th.topos();
  HomClasses r;
  r.x = x;
  r.y = y;
  switch (th.kind()) {
    case TheoryKind::Identity: {
      enumerate(t, r);
      std::vector<std::size_t> raw(r.count);
      for (std::size_t i = 0; i < r.count; ++i) raw[i] = i;
      finish_labels(r, raw);
      r.method = "equality";
      fill_class_points(th, r);
      break;
    }
    case TheoryKind::Bang: {
      enumerate(t, r);
      finish_labels(r, std::vector<std::size_t>(r.count, 0));
      r.method = "single class";
      fill_class_points(th, r);
      break;
    }
    case TheoryKind::Topology: {
      enumerate(t, r);
      std::vector<std::size_t> raw;
      std::vector<std::size_t> reps;
      for (std::size_t i = 0; i < r.count; ++i) {
        PresheafMap f = r.arrow(i);
        std::size_t cls = kNone;
        for (std::size_t k = 0; k < reps.size() && cls == kNone; ++k)
          if (topology_related(t, *th.topology(), f, r.arrow(reps[k]))) cls = k;
        if (cls == kNone) {
          cls = reps.size();
          reps.push_back(i);
        }
        raw.push_back(cls);
      }
      finish_labels(r, raw);
      r.method = "closure of the diagonal of Y^X";
      fill_class_points(th, r);
      break;
    }
    case TheoryKind::Pieces: {
      std::optional<Contraction> found;
      if (!hint && t.ns_site()) {
        found = find_contraction(t, y);
        if (found) hint = &*found;
      }
      if (hint && t.ns_site()) {
        auto bad = verify_contraction(t, *hint);
        if (!bad.empty()) throw InternalError("contraction is invalid: " + bad.front());
        // h∘(1×f) links 'f' to the name of y0∘! at the stage of A, so one
        // class; arrows are listed only when within the default cap.
        r.method = "contraction of Y through a representable interval";
        try {
          if (y.total_size() > kContractibleListMaxCodomain) throw ResourceError("codomain too large to list");
          HomClasses e = r;
          e.width = x.total_size();
          HomSearch s(x, y, std::min<std::uint64_t>(t.config().budget, kContractibleListBudget), "hom-set enumeration");
          s.for_each([&](const std::vector<Elem>& v) {
            e.tables.insert(e.tables.end(), v.begin(), v.end());
            ++e.count;
            return true;
          });
          r = std::move(e);
          finish_labels(r, std::vector<std::size_t>(r.count, 0));
        } catch (const ResourceError&) {
          r.enumerated = false;
          r.classes = 1;
          r.representative.clear();
        }
        r.reflection_points = 1;
        r.class_points = {0};
        break;
      }
      auto ep = exponential_pieces(t, x, y);
      r.count = ep->count;
      r.width = ep->width;
      r.tables = ep->tables;
      finish_labels(r, ep->label);
      if (ep->streamed) {
        r.method = "components of Y^X through point restrictions";
        r.reflection_points = ep->components;
        for (std::size_t k = 0; k < r.classes; ++k) r.class_points.push_back(k);
      } else {
        r.method = "components of Y^X";
        fill_class_points(th, r);
      }
      break;
    }
  }
  return r;
}

}  // namespace

PresheafMap HomClasses::arrow(std::size_t i) const {
  if (!enumerated) throw PreconditionError("hom-set was not enumerated");
  std::vector<Function> comp(x.base().object_count());
  const Elem* t = tables.data() + i * width;
  for (Index c = 0; c < comp.size(); ++c) comp[c].assign(t + x.offset(c), t + x.offset(c) + x.size(c));
  return PresheafMap(x, y, std::move(comp));
}

std::size_t HomClasses::index_of(const PresheafMap& f) const {
  if (!enumerated) throw PreconditionError("hom-set was not enumerated");
  std::size_t i = find_table(tables, count, width, flatten(f));
  if (i == kNone) throw ShapeError("arrow is not in the hom-set");
  return i;
}

std::size_t HomClasses::class_of(const PresheafMap& f) const {
  if (!enumerated) {
    if (classes == 1) return 0;
    throw PreconditionError("hom-set was not enumerated");
  }
  return label[index_of(f)];
}

std::shared_ptr<const HomClasses> hom_classes(const HomotopyTheory& th, const Presheaf& x,
                                              const Presheaf& y, const Contraction* hint) {
  auto& cache = th.cache();
  const auto key = std::make_pair(x.digest(), y.digest());
  {
    std::shared_lock lock(cache.mu);
    auto it = cache.classes.find(key);
    if (it != cache.classes.end())
      for (const auto& [k, v] : it->second)
        if (k.first == x && k.second == y) return v;
  }
  auto v = std::make_shared<const HomClasses>(compute_classes(th, x, y, hint));
  std::unique_lock lock(cache.mu);
  cache.classes[key].push_back({{x, y}, v});
  return v;
}

// --- E_p operations -------------------------------------------------------------------

namespace {

// Every pair (i, k) when n1·n2 ≤ bound², otherwise bound² seeded samples.
// Stops when `visit` returns false. Returns a description of the coverage.
std::string for_pairs(const Topos& t, const std::string& label, std::size_t n1, std::size_t n2,
                      const std::function<bool(std::size_t, std::size_t)>& visit) {
  const std::size_t cap = t.config().rep_bound * t.config().rep_bound;
  if (n1 == 0 || n2 == 0) return "no pairs";
  if (n1 * n2 <= cap) {
    for (std::size_t i = 0; i < n1; ++i)
      for (std::size_t k = 0; k < n2; ++k)
        if (!visit(i, k)) return "";
    return "exhaustive over " + std::to_string(n1 * n2) + " pairs";
  }
  std::mt19937_64 rng(label_seed(t, label));
  for (std::size_t s = 0; s < cap; ++s)
    if (!visit(rng() % n1, rng() % n2)) return "";
  return std::to_string(cap) + " sampled pairs of " + std::to_string(n1 * n2) + ", seed " +
         std::to_string(t.config().seed);
}

std::string for_each_arrow(const Topos& t, const std::string& label, std::size_t n,
                           const std::function<bool(std::size_t)>& visit) {
  const std::size_t cap = t.config().rep_bound * t.config().rep_bound;
  if (n <= cap) {
    for (std::size_t i = 0; i < n; ++i)
      if (!visit(i)) return "";
    return "exhaustive over " + std::to_string(n) + " arrows";
  }
  std::mt19937_64 rng(label_seed(t, label));
  for (std::size_t s = 0; s < cap; ++s)
    if (!visit(rng() % n)) return "";
  return std::to_string(cap) + " sampled arrows of " + std::to_string(n) + ", seed " +
         std::to_string(t.config().seed);
}

std::size_t rep_of(const HomClasses& h, std::size_t i) { return h.representative[h.label[i]]; }

// Binary operation on classes: checks op(a, b) against op(rep a, b) and op(a, rep b).
CheckLine binary_independence(const HomotopyTheory& th, const std::string& label, const HomClasses& h1,
                              const HomClasses& h2, const HomClasses& target,
                              const std::function<PresheafMap(const PresheafMap&, const PresheafMap&)>& op) {
  CheckLine out{label, true, ""};
  if (target.classes <= 1) {
    out.witness = "target has " + std::to_string(target.classes) + " class";
    return out;
  }
  if (!h1.enumerated || !h2.enumerated) {
    out.ok = false;
    out.witness = "operand hom-set not enumerated";
    return out;
  }
  std::string desc = for_pairs(th.topos(), label, h1.count, h2.count, [&](std::size_t i, std::size_t k) {
    PresheafMap a = h1.arrow(i), b = h2.arrow(k);
    std::size_t c = target.class_of(op(a, b));
    if (c != target.class_of(op(h1.arrow(rep_of(h1, i)), b)) ||
        c != target.class_of(op(a, h2.arrow(rep_of(h2, k))))) {
      out.ok = false;
      out.witness = "arrows " + std::to_string(i) + ", " + std::to_string(k) +
                    " and their class representatives give different classes";
      return false;
    }
    return true;
  });
  if (out.ok) out.witness = desc;
  return out;
}

PresheafMap sum_maps(const Coproduct& src, const Coproduct& dst, const PresheafMap& f, const PresheafMap& g) {
  return copair_maps(src, compose(dst.i1, f), compose(dst.i2, g));
}

}  // namespace

std::size_t ep_compose(const HomotopyTheory& th, const HomClasses& xy, std::size_t cf,
                       const HomClasses& yz, std::size_t cg) {
  auto xz = hom_classes(th, xy.x, yz.y);
  return xz->class_of(compose(yz.arrow(yz.representative.at(cg)), xy.arrow(xy.representative.at(cf))));
}

CheckLine ep_compose_check(const HomotopyTheory& th, const Presheaf& x, const Presheaf& y,
                           const Presheaf& z, const std::string& label) {
  auto hxy = hom_classes(th, x, y);
  auto hyz = hom_classes(th, y, z);
  auto hxz = hom_classes(th, x, z);
  return binary_independence(th, label, *hxy, *hyz, *hxz,
                             [](const PresheafMap& f, const PresheafMap& g) { return compose(g, f); });
}

CheckLine ep_pair_check(const HomotopyTheory& th, const Presheaf& z, const Presheaf& x,
                        const Presheaf& y, const std::string& label) {
  Product xy = product(x, y);
  auto hzx = hom_classes(th, z, x);
  auto hzy = hom_classes(th, z, y);
  auto target = hom_classes(th, z, xy.object);
  return binary_independence(th, label, *hzx, *hzy, *target,
                             [&](const PresheafMap& f, const PresheafMap& g) { return pair_maps(xy, f, g); });
}

CheckLine ep_copair_check(const HomotopyTheory& th, const Presheaf& x, const Presheaf& y,
                          const Presheaf& z, const std::string& label) {
  Coproduct s = coproduct(x, y);
  auto hxz = hom_classes(th, x, z);
  auto hyz = hom_classes(th, y, z);
  auto target = hom_classes(th, s.object, z);
  return binary_independence(th, label, *hxz, *hyz, *target,
                             [&](const PresheafMap& f, const PresheafMap& g) { return copair_maps(s, f, g); });
}

namespace {

// E_p(X, Y^Z), with a contraction of Y^Z supplied when Hom(X, Y^Z) is too
// large to enumerate.
std::shared_ptr<const HomClasses> exponential_side(const HomotopyTheory& th, const Presheaf& x,
                                                   const Presheaf& yz, const Presheaf& y, const Presheaf& z) {
  const Topos& t = th.topos();
  if (th.kind() == TheoryKind::Pieces && t.ns_site()) {
    if (auto cy = find_contraction(t, y)) {
      Contraction cz = exponential_contraction(t, *cy, z);
      return hom_classes(th, x, yz, &cz);
    }
  }
  return hom_classes(th, x, yz);
}

}  // namespace

CheckLine ep_transpose_check(const HomotopyTheory& th, const Presheaf& x, const Presheaf& z,
                             const Presheaf& y, const std::string& label) {
  const Topos& t = th.topos();
  CheckLine out{label, true, ""};
  Product xz = product(x, z);
  auto src = hom_classes(th, xz.object, y);
  auto e = t.exponential(z, y);
  auto target = exponential_side(th, x, e->object(), y, z);
  if (target->classes <= 1) {
    out.witness = "target has " + std::to_string(target->classes) + " class";
    return out;
  }
  if (!src->enumerated) {
    out.ok = false;
    out.witness = "source hom-set not enumerated";
    return out;
  }
  std::string desc = for_each_arrow(t, label, src->count, [&](std::size_t i) {
    std::size_t c = target->class_of(transpose(t, x, z, src->arrow(i)));
    if (c != target->class_of(transpose(t, x, z, src->arrow(rep_of(*src, i))))) {
      out.ok = false;
      out.witness = "arrow " + std::to_string(i) + " and its class representative transpose apart";
      return false;
    }
    return true;
  });
  if (out.ok) out.witness = desc;
  return out;
}

CheckLine theorem_a_product(const HomotopyTheory& th, const Presheaf& z, const Presheaf& x,
                            const Presheaf& y, const std::string& label) {
  Product xy = product(x, y);
  auto hp = hom_classes(th, z, xy.object);
  auto hx = hom_classes(th, z, x);
  auto hy = hom_classes(th, z, y);
  CheckLine out{label, hp->classes == hx->classes * hy->classes, ""};
  out.witness = std::to_string(hp->classes) + " = " + std::to_string(hx->classes) + "·" +
                std::to_string(hy->classes);
  if (!out.ok || !hp->enumerated || !hx->enumerated || !hy->enumerated) return out;
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (std::size_t rep : hp->representative) {
    PresheafMap h = hp->arrow(rep);
    seen.emplace(hx->class_of(compose(xy.p1, h)), hy->class_of(compose(xy.p2, h)));
  }
  if (seen.size() != hp->classes) {
    out.ok = false;
    out.witness += ", but two classes have the same projections";
  }
  return out;
}

CheckLine theorem_a_exponential(const HomotopyTheory& th, const Presheaf& x, const Presheaf& y,
                                const Presheaf& z, const std::string& label) {
  const Topos& t = th.topos();
  Product xz = product(x, z);
  auto left = hom_classes(th, xz.object, y);
  auto e = t.exponential(z, y);
  auto right = exponential_side(th, x, e->object(), y, z);
  CheckLine out{label, left->classes == right->classes, ""};
  out.witness = std::to_string(left->classes) + " = " + std::to_string(right->classes);
  if (!left->enumerated || !right->enumerated) {
    out.witness += " (" + std::string(left->enumerated ? "" : "left ") +
                   std::string(right->enumerated ? "" : "right ") + "by contraction)";
    return out;
  }
  if (!out.ok) return out;
  std::set<std::size_t> seen;
  for (std::size_t rep : left->representative) seen.insert(right->class_of(transpose(t, x, z, left->arrow(rep))));
  if (seen.size() != left->classes) {
    out.ok = false;
    out.witness += ", but transposition merges classes";
  }
  return out;
}

CheckLine theorem_a_sum(const HomotopyTheory& th, const Presheaf& x, const Presheaf& y,
                        const Presheaf& z, const std::string& label) {
  Coproduct s = coproduct(x, y);
  auto hs = hom_classes(th, s.object, z);
  auto hx = hom_classes(th, x, z);
  auto hy = hom_classes(th, y, z);
  CheckLine out{label, hs->classes == hx->classes * hy->classes, ""};
  out.witness = std::to_string(hs->classes) + " = " + std::to_string(hx->classes) + "·" +
                std::to_string(hy->classes);
  if (!out.ok || !hs->enumerated || !hx->enumerated || !hy->enumerated) return out;
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (std::size_t rep : hs->representative) {
    PresheafMap k = hs->arrow(rep);
    seen.emplace(hx->class_of(compose(k, s.i1)), hy->class_of(compose(k, s.i2)));
  }
  if (seen.size() != hs->classes) {
    out.ok = false;
    out.witness += ", but two classes have the same restrictions";
  }
  return out;
}

// --- extensivity -----------------------------------------------------------------------

namespace {
constexpr std::uint64_t kExtensivityProbeBudget = 1'000'000;
}  // namespace

std::vector<CheckLine> ep_extensivity_check(const HomotopyTheory& th, const std::vector<Presheaf>& family,
                                            const std::vector<std::string>& names) {
  const Topos& t = th.topos();
  const std::size_t bound = t.config().rep_bound;
  CheckLine ess{"sum functor essentially surjective", true, ""};
  CheckLine full{"sum functor full", true, ""};
  CheckLine faithful{"sum functor faithful", true, ""};
  std::size_t slices = 0, squares = 0, skipped = 0;

  struct SliceObject {
    std::size_t obj;
    PresheafMap map;
  };
  auto slice_objects = [&](const Presheaf& base) {
    std::vector<SliceObject> out;
    for (std::size_t i = 0; i < family.size(); ++i) {
      auto h = hom_classes(th, family[i], base);
      for (std::size_t rep : h->representative) out.push_back({i, h->arrow(rep)});
    }
    return out;
  };

  std::set<std::pair<std::uint64_t, std::uint64_t>> over_budget;
  auto classes_or_null = [&](const Presheaf& a, const Presheaf& b) -> std::shared_ptr<const HomClasses> {
    const auto key = std::make_pair(a.digest(), b.digest());
    if (over_budget.count(key)) return nullptr;
    try {
      htopos::hom_count(a, b, kExtensivityProbeBudget);
      return hom_classes(th, a, b);
    } catch (const ResourceError&) {
      over_budget.insert(key);
      return nullptr;
    }
  };

  for (std::size_t xi = 0; xi < family.size(); ++xi) {
    for (std::size_t yi = 0; yi < family.size(); ++yi) {
      const Presheaf& x = family[xi];
      const Presheaf& y = family[yi];
      Coproduct xy = coproduct(x, y);
      const std::string where = "over " + names[xi] + "+" + names[yi];

      for (std::size_t ci = 0; ci < family.size() && ess.ok; ++ci) {
        HomSearch s(family[ci], xy.object, t.config().budget, "slice objects");
        std::size_t seen = 0;
        s.for_each([&](const std::vector<Elem>& v) {
          PresheafMap h = s.to_map(v);
          Pullback pa = pullback(h, xy.i1);
          Pullback pb = pullback(h, xy.i2);
          Coproduct ab = coproduct(pa.object, pb.object);
          PresheafMap cmp = copair_maps(ab, pa.p1, pb.p1);
          ++slices;
          if (!is_iso(cmp) || !(compose(h, cmp) == sum_maps(ab, xy, pa.p2, pb.p2))) {
            ess.ok = false;
            ess.witness = "an arrow " + names[ci] + " → " + names[xi] + "+" + names[yi] +
                          " is not the sum of its pullbacks";
            return false;
          }
          return ++seen < bound;
        });
      }

      std::vector<SliceObject> over_x, over_y;
      try {
        over_x = slice_objects(x);
        over_y = slice_objects(y);
      } catch (const ResourceError&) {
        ++skipped;
        continue;
      }
      std::vector<std::array<std::size_t, 4>> combos;
      for (std::size_t a = 0; a < over_x.size(); ++a)
        for (std::size_t a2 = 0; a2 < over_x.size(); ++a2)
          for (std::size_t b = 0; b < over_y.size(); ++b)
            for (std::size_t b2 = 0; b2 < over_y.size(); ++b2) combos.push_back({a, a2, b, b2});
      std::mt19937_64 rng(label_seed(t, "extensivity " + where));
      std::size_t take = std::min(combos.size(), bound);
      for (std::size_t s = 0; s < take && full.ok && faithful.ok; ++s) {
        auto [a, a2, b, b2] = combos.size() <= bound ? combos[s] : combos[rng() % combos.size()];
        const auto& A = over_x[a];
        const auto& A2 = over_x[a2];
        const auto& B = over_y[b];
        const auto& B2 = over_y[b2];
        Coproduct src = coproduct(family[A.obj], family[B.obj]);
        Coproduct dst = coproduct(family[A2.obj], family[B2.obj]);
        PresheafMap fg = sum_maps(src, xy, A.map, B.map);
        PresheafMap fg2 = sum_maps(dst, xy, A2.map, B2.map);
        auto hk = classes_or_null(src.object, dst.object);
        auto hs = classes_or_null(src.object, xy.object);
        auto ha = classes_or_null(family[A.obj], family[A2.obj]);
        auto hb = classes_or_null(family[B.obj], family[B2.obj]);
        auto hfa = classes_or_null(family[A.obj], x);
        auto hfb = classes_or_null(family[B.obj], y);
        if (!hk || !hs || !ha || !hb || !hfa || !hfb || !hk->enumerated || !hs->enumerated || !ha->enumerated ||
            !hb->enumerated) {
          ++skipped;
          continue;
        }
        ++squares;
        const std::size_t want = hs->class_of(fg);
        // Slice maps in E_p: classes [k] with [(f'+g')k] = [f+g].
        std::vector<bool> decomposable(hk->classes, false), slice_class(hk->classes, false);
        for (std::size_t i = 0; i < hk->count; ++i) {
          PresheafMap k = hk->arrow(i);
          if (hs->class_of(compose(fg2, k)) == want) slice_class[hk->label[i]] = true;
        }
        // Sums h + r of slice maps in E_p.
        std::map<std::size_t, std::pair<std::size_t, std::size_t>> image;
        const std::size_t fa = hfa->class_of(A.map), fb = hfb->class_of(B.map);
        for (std::size_t hc = 0; hc < ha->classes && faithful.ok; ++hc) {
          PresheafMap h = ha->arrow(ha->representative[hc]);
          if (hfa->class_of(compose(A2.map, h)) != fa) continue;
          for (std::size_t rc = 0; rc < hb->classes; ++rc) {
            PresheafMap r = hb->arrow(hb->representative[rc]);
            if (hfb->class_of(compose(B2.map, r)) != fb) continue;
            std::size_t k = hk->class_of(sum_maps(src, dst, h, r));
            decomposable[k] = true;
            auto [it, fresh] = image.emplace(k, std::make_pair(hc, rc));
            if (!fresh) {
              faithful.ok = false;
              faithful.witness = "two pairs of slice classes have homotopic sums " + where;
              break;
            }
          }
        }
        for (std::size_t k = 0; k < hk->classes && full.ok; ++k) {
          if (slice_class[k] && !decomposable[k]) {
            full.ok = false;
            full.witness = "slice class " + std::to_string(k) + " is not a sum " + where;
          }
        }
      }
    }
  }
  std::string fam;
  for (const auto& n : names) fam += (fam.empty() ? "" : ", ") + n;
  if (ess.ok) ess.witness = std::to_string(slices) + " slice objects over sums of {" + fam + "}";
  const std::string tail = skipped ? ", " + std::to_string(skipped) + " skipped over budget" : "";
  if (full.ok) full.witness = std::to_string(squares) + " slice hom-sets" + tail;
  if (faithful.ok) faithful.witness = std::to_string(squares) + " slice hom-sets" + tail;
  return {ess, full, faithful};
}

CheckLine ep_hom_action(const HomotopyTheory& th, const PresheafMap& phi, const PresheafMap& r,
                        const std::string& label) {
  const Topos& t = th.topos();
  const Presheaf& a = phi.cod();
  const Presheaf& b = phi.dom();
  PresheafMap x_phi = exp_contravariant(t, r.dom(), phi);
  PresheafMap y_phi = exp_contravariant(t, r.cod(), phi);
  PresheafMap r_a = exp_covariant(t, r, a);
  PresheafMap r_b = exp_covariant(t, r, b);
  CheckLine out{label, true, ""};
  if (!(compose(y_phi, r_a) == compose(r_b, x_phi))) {
    out.ok = false;
    out.witness = "Y^φ∘r^A ≠ r^B∘X^φ";
    return out;
  }
  PresheafMap left = th.apply(compose(y_phi, r_a));
  PresheafMap right = compose(th.apply(r_b), th.apply(x_phi));
  auto us = t.points(left.dom());
  for (std::size_t i = 0; i < us.size(); ++i) {
    if (!(compose(left, us[i]) == compose(right, us[i]))) {
      out.ok = false;
      out.witness = "class point " + std::to_string(i) + " breaks the square";
      return out;
    }
  }
  out.witness = std::to_string(us.size()) + " class points";
  return out;
}

}  // namespace htopos
