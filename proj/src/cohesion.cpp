// SPDX-License-Identifier: Apache-2.0

#include "htopos/cohesion.hpp"

#include <algorithm>
#include <future>
#include <map>
#include <set>
#include <sstream>

#include "htopos/ccc.hpp"
#include "htopos/error.hpp"

namespace htopos {

namespace {

std::string stage_sizes(const Presheaf& x) {
  std::ostringstream o;
  o << "(";
  for (Index c = 0; c < x.sizes().size(); ++c) o << (c ? "," : "") << x.size(c);
  o << ")";
  return o.str();
}

bool is_initial(const Presheaf& x) { return x.total_size() == 0; }

std::vector<Presheaf> with_representables(const Topos& t, const std::vector<Presheaf>& family,
                                          std::vector<std::string>& names) {
  std::vector<Presheaf> out = family;
  for (Index c = 0; c < t.category().object_count(); ++c) {
    Presheaf y = t.yoneda(c);
    if (std::find(out.begin(), out.end(), y) != out.end()) continue;
    out.push_back(y);
    names.push_back("y(" + t.category().object_name(c) + ")");
  }
  return out;
}

bool all_ok(const std::vector<CheckLine>& lines) {
  return std::all_of(lines.begin(), lines.end(), [](const CheckLine& l) { return l.ok; });
}

/// Elements of X in the image of its global elements.
Subobject points_subobject(const Topos& t, const Presheaf& x) {
  Subobject s = empty_subobject(x);
  for (const PresheafMap& p : t.points(x))
    for (Index c = 0; c < x.sizes().size(); ++c) s.selected[c][p(c, 0)] = true;
  return s;
}

/// The global element of X at stage c.
Elem point_value(const PresheafMap& p, Index c) { return p(c, 0); }

/// Map 1 → S corestricting a point lying in the subobject.
PresheafMap corestrict_point(const Inclusion& inc, const PresheafMap& p) {
  const Presheaf& s = inc.object;
  std::vector<Function> comp(s.sizes().size());
  for (Index c = 0; c < comp.size(); ++c) {
    const Function& in = inc.incl.component(c);
    const Elem v = point_value(p, c);
    auto it = std::find(in.begin(), in.end(), v);
    if (it == in.end()) throw InternalError("point is not in the subobject");
    comp[c] = {static_cast<Elem>(it - in.begin())};
  }
  return PresheafMap(p.dom(), s, std::move(comp));
}

}  // namespace

// --- decidability --------------------------------------------------------------------

Decidability is_decidable(const Presheaf& x) {
  const FinCategory& cat = x.base();
  Decidability d;
  d.actions_injective = true;
  for (Index f = 0; f < cat.morphism_count() && d.actions_injective; ++f) {
    const Function& a = x.action(f);
    std::vector<Elem> seen(x.size(cat.dom(f)), static_cast<Elem>(-1));
    for (Elem e = 0; e < a.size(); ++e) {
      if (seen[a[e]] != static_cast<Elem>(-1)) {
        d.actions_injective = false;
        d.witness = "restriction along " + cat.morphism(f).name + " identifies " + std::to_string(seen[a[e]]) +
                    " and " + std::to_string(e) + " of stage " + cat.object_name(cat.cod(f));
        break;
      }
      seen[a[e]] = e;
    }
  }
  Product xx = product(x, x);
  Subobject complement = whole_subobject(xx.object);
  for (Index c = 0; c < cat.object_count(); ++c)
    for (Elem e = 0; e < x.size(c); ++e) complement.selected[c][xx.pair(c, e, e)] = false;
  d.complement_closed = complement.validate().empty();
  if (d.complement_closed != d.actions_injective)
    throw InternalError("decidability scans disagree on a presheaf of sizes " + stage_sizes(x));
  d.decidable = d.actions_injective;
  return d;
}

// --- postulates ----------------------------------------------------------------------

PostulateCertificate check_NS(const Topos& t, const std::vector<Presheaf>& family,
                              const std::vector<std::string>& names) {
  PostulateCertificate cert;
  cert.postulate = "NS";
  std::vector<std::string> all_names = names;
  std::vector<Presheaf> objs = with_representables(t, family, all_names);
  cert.family = all_names;

  CheckLine site{"site has a terminal object and every object is pointed", t.ns_site(), ""};
  if (!t.terminal_object()) {
    site.witness = "no terminal object";
  } else {
    site.witness = "terminal " + t.category().object_name(*t.terminal_object());
    for (Index c = 0; c < t.category().object_count(); ++c)
      if (t.category().hom(*t.terminal_object(), c).empty()) {
        site.witness = "object " + t.category().object_name(c) + " has no point";
        break;
      }
  }
  cert.lines.push_back(site);

  CheckLine objects{"non-initial objects have points", true, ""};
  std::size_t checked = 0;
  for (std::size_t i = 0; i < objs.size(); ++i) {
    if (is_initial(objs[i])) continue;
    ++checked;
    if (t.points(objs[i]).empty()) {
      objects.ok = false;
      objects.witness = all_names[i] + " of sizes " + stage_sizes(objs[i]) + " has no points";
      break;
    }
  }
  if (objects.ok) objects.witness = std::to_string(checked) + " non-initial objects pointed";
  cert.lines.push_back(objects);

  if (site.ok) {
    cert.route = "site criteria";
    cert.holds = true;
    if (!objects.ok) throw InternalError("NS site criteria hold but " + objects.witness);
  } else if (!objects.ok) {
    cert.route = "refuted";
  } else {
    cert.route = "family";
    cert.holds = true;
  }
  return cert;
}

PostulateCertificate check_WDQO(const Topos& t, const std::vector<Presheaf>& family,
                                const std::vector<std::string>& names) {
  PostulateCertificate cert;
  cert.postulate = "WDQO";
  cert.family = names;
  cert.route = "family";
  const Presheaf two = t.two();
  for (std::size_t i = 0; i < family.size(); ++i) {
    const Presheaf& x = family[i];
    PiecesResult px = pi0(x);
    const Presheaf& d = px.p.cod();

    CheckLine dec{names[i] + ": Π₀X decidable", is_decidable(d).decidable, ""};
    dec.witness = std::to_string(px.components) + " components";
    cert.lines.push_back(dec);

    CheckLine fac{names[i] + ": maps to 2 factor uniquely through p_X", true, ""};
    std::set<std::vector<std::size_t>> cuts;
    auto maps = t.hom(x, two);
    for (const PresheafMap& f : maps) {
      HomSearch s(d, two, t.config().budget, "WDQO factorization");
      for (Index c = 0; c < x.sizes().size(); ++c)
        for (Elem e = 0; e < x.size(c); ++e) s.pin(c, px.p(c, e), f(c, e));
      const std::uint64_t n = s.count();
      if (n != 1) {
        fac.ok = false;
        std::ostringstream o;
        o << "a map X → 2 has " << n << " factorizations";
        fac.witness = o.str();
        break;
      }
      std::vector<std::size_t> cut(px.components, 0);
      for (Index c = 0; c < x.sizes().size(); ++c)
        for (Elem e = 0; e < x.size(c); ++e) cut[px.assignment[c][e]] = f(c, e);
      cuts.insert(cut);
    }
    if (fac.ok) fac.witness = std::to_string(maps.size()) + " maps to 2";
    cert.lines.push_back(fac);

    CheckLine sep{names[i] + ": maps to 2 separate components", true, ""};
    for (std::size_t a = 0; a < px.components && sep.ok; ++a)
      for (std::size_t b = a + 1; b < px.components; ++b) {
        bool split = std::any_of(cuts.begin(), cuts.end(), [&](const auto& cut) { return cut[a] != cut[b]; });
        if (!split) {
          sep.ok = false;
          sep.witness = "components " + std::to_string(a) + " and " + std::to_string(b) + " are not separated";
          break;
        }
      }
    if (sep.ok) sep.witness = std::to_string(px.components) + " components, " + std::to_string(cuts.size()) + " cuts";
    cert.lines.push_back(sep);
  }
  cert.holds = all_ok(cert.lines);
  if (!cert.holds) cert.route = "components realization refuted";
  return cert;
}

PostulateCertificate check_DSO(const Topos& t, const std::vector<Presheaf>& family,
                               const std::vector<std::string>& names) {
  PostulateCertificate cert;
  cert.postulate = "DSO";
  cert.family = names;
  cert.route = "family";
  const Omega& om = t.omega();
  for (std::size_t i = 0; i < family.size(); ++i) {
    const Presheaf& x = family[i];
    Subobject g = points_subobject(t, x);
    CheckLine line{names[i] + ": points span the largest decidable subobject containing them", true, ""};
    if (!is_decidable(subobject_presheaf(g).object).decidable) {
      line.ok = false;
      line.witness = "the image of γ is not decidable";
      cert.lines.push_back(line);
      continue;
    }
    HomSearch s(x, om.object(), t.config().budget, "DSO subobject scan");
    for (Index c = 0; c < x.sizes().size(); ++c)
      for (Elem e = 0; e < x.size(c); ++e)
        if (g.contains(c, e)) s.pin(c, e, om.top(c));
    std::size_t scanned = 0, decidable = 0;
    s.for_each([&](const std::vector<Elem>& v) {
      ++scanned;
      Subobject sub = om.classified(s.to_map(v));
      if (!is_decidable(subobject_presheaf(sub).object).decidable) return true;
      ++decidable;
      if (!subobject_leq(sub, g)) {
        line.ok = false;
        line.witness = "a decidable subobject containing the points exceeds their image";
        return false;
      }
      return true;
    });
    if (line.ok)
      line.witness = std::to_string(scanned) + " subobjects over the points, " + std::to_string(decidable) +
                     " decidable";
    cert.lines.push_back(line);
  }
  cert.holds = all_ok(cert.lines);
  if (!cert.holds) cert.route = "refuted";
  return cert;
}

// --- explicit homotopies ---------------------------------------------------------------

std::vector<std::string> verify_explicit_homotopy(const Topos& t, const ExplicitHomotopy& e,
                                                  const PresheafMap& f, const PresheafMap& g) {
  (void)t;
  std::vector<std::string> out;
  if (!(f.dom() == g.dom()) || !(f.cod() == g.cod())) return {"f and g are not parallel"};
  if (!(e.ax.object == product(e.a, f.dom()).object)) return {"h is not defined on A×X"};
  if (!(e.h.dom() == e.ax.object) || !(e.h.cod() == f.cod())) return {"h is not a map A×X → Y"};
  if (!is_connected(e.a)) out.push_back("A is not connected");
  for (const auto& v : e.h.validate()) out.push_back("h is not natural: " + v);
  if (!out.empty()) return out;
  if (!(compose(e.h, point_section(e.ax, e.pa)) == f)) out.push_back("h∘⟨a!,1⟩ ≠ f");
  if (!(compose(e.h, point_section(e.ax, e.pb)) == g)) out.push_back("h∘⟨b!,1⟩ ≠ g");
  return out;
}

std::optional<ExplicitHomotopy> explicit_homotopy_search(const HomotopyTheory& th, const PresheafMap& f,
                                                         const PresheafMap& g) {
  const Topos& t = th.topos();
  if (th.kind() != TheoryKind::Pieces) throw PreconditionError("explicit homotopies need the pieces theory");
  if (!t.ns_site()) throw PreconditionError("explicit homotopy search needs an NS site");
  if (!(f.dom() == g.dom()) || !(f.cod() == g.cod())) throw ShapeError("f and g are not parallel");
  auto e = t.exponential(f.dom(), f.cod());
  PiecesResult pe = pi0(e->object());
  PresheafMap nf = name(t, f), ng = name(t, g);
  const Index top = *t.terminal_object();
  const std::size_t k = pe.assignment[top][point_value(nf, top)];
  if (pe.assignment[top][point_value(ng, top)] != k) return std::nullopt;

  Subobject comp = empty_subobject(e->object());
  for (Index c = 0; c < comp.selected.size(); ++c)
    for (Elem x = 0; x < e->object().size(c); ++x) comp.selected[c][x] = pe.assignment[c][x] == k;
  Inclusion inc = subobject_presheaf(comp);

  ExplicitHomotopy out;
  out.a = inc.object;
  out.pa = corestrict_point(inc, nf);
  out.pb = corestrict_point(inc, ng);
  out.ax = product(out.a, f.dom());
  PresheafMap restrict_ev = product_maps(out.ax, e->eval_domain(), inc.incl, identity_map(f.dom()));
  out.h = compose(e->eval(), restrict_ev);
  auto bad = verify_explicit_homotopy(t, out, f, g);
  if (!bad.empty()) throw InternalError("constructed homotopy is invalid: " + bad.front());
  return out;
}

bool verify_explicit_implies_homotopic(const HomotopyTheory& th, const ExplicitHomotopy& e,
                                       const PresheafMap& f, const PresheafMap& g, std::string* witness) {
  const Topos& t = th.topos();
  auto fail = [&](const std::string& why) {
    if (witness) *witness = why;
    return false;
  };
  auto bad = verify_explicit_homotopy(t, e, f, g);
  if (!bad.empty()) return fail(bad.front());
  PresheafMap hat = transpose(t, e.a, f.dom(), e.h);
  if (!(compose(hat, e.pa) == name(t, f))) return fail("ĥ∘a ≠ 'f'");
  if (!(compose(hat, e.pb) == name(t, g))) return fail("ĥ∘b ≠ 'g'");
  if (!homotopic(th, f, g)) return fail("f and g are not homotopic");
  if (witness) witness->clear();
  return true;
}

// --- contractibility -----------------------------------------------------------------

bool theory_connected(const HomotopyTheory& th, const Presheaf& x) {
  if (th.kind() == TheoryKind::Pieces) return is_connected(x);
  const Presheaf r = th.reflect(x).object;
  return std::all_of(r.sizes().begin(), r.sizes().end(), [](std::size_t n) { return n == 1; });
}

ContractibilityReport is_contractible(const HomotopyTheory& th, const Presheaf& a,
                                      const std::vector<Presheaf>& family,
                                      const std::vector<std::string>& names) {
  const Topos& t = th.topos();
  ContractibilityReport r;
  r.family = names;
  auto pts = t.points(a);
  r.pointed = !pts.empty();

  CheckLine l1{"route 1: 1_A homotopic to a constant", false, "A has no point"};
  if (r.pointed) {
    auto cls = hom_classes(th, a, a);
    const std::size_t id_class = cls->class_of(identity_map(a));
    for (std::size_t i = 0; i < pts.size(); ++i)
      if (cls->class_of(constant_map(a, pts[i])) == id_class) {
        l1.ok = true;
        l1.witness = "point " + std::to_string(i) + " (" + cls->method + ")";
        break;
      }
    if (!l1.ok) l1.witness = "no constant is homotopic to 1_A";
  }
  r.route1 = l1.ok;

  struct PerX {
    bool sigma_iso = false;
    bool connected = false;
    std::string sizes;
  };
  std::vector<std::future<PerX>> jobs;
  for (const Presheaf& x : family)
    jobs.push_back(std::async(std::launch::async, [&th, &a, x] {
      const Topos& tt = th.topos();
      PerX out;
      PresheafMap s = sigma(tt, x, a);
      out.sigma_iso = is_iso(th.apply(s));
      auto e = tt.exponential(x, a);
      out.connected = theory_connected(th, e->object());
      out.sizes = stage_sizes(e->object());
      return out;
    }));
  CheckLine l2{"route 2: Π₀(σ_X) iso on the family", true, ""};
  CheckLine l3{"route 3: A^X connected on the family", true, ""};
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    PerX p = jobs[i].get();
    if (!p.sigma_iso && l2.ok) {
      l2.ok = false;
      l2.witness = "X = " + names[i];
    }
    if (!p.connected && l3.ok) {
      l3.ok = false;
      l3.witness = "X = " + names[i] + ", A^X of sizes " + p.sizes;
    }
  }
  if (l2.ok) l2.witness = std::to_string(family.size()) + " family objects";
  if (l3.ok) l3.witness = std::to_string(family.size()) + " family objects";
  r.route2 = l2.ok;
  r.route3 = l3.ok;

  CheckLine l4{"route 4: A pointed and A^A connected", false, ""};
  if (!r.pointed) {
    l4.witness = "A has no point";
  } else {
    auto e = t.exponential(a, a);
    l4.ok = theory_connected(th, e->object());
    l4.witness = "A^A of sizes " + stage_sizes(e->object());
  }
  r.route4 = l4.ok;

  r.contractible = r.route1;
  r.agree = r.route1 == r.route2 && r.route1 == r.route3 && r.route1 == r.route4;
  r.lines = {l1, l2, l3, l4};
  CheckLine agree{"routes agree", r.agree, r.contractible ? "contractible" : "not contractible"};
  r.lines.push_back(agree);
  return r;
}

// --- classification --------------------------------------------------------------------

bool CohesionReport::consistent() const { return all_ok(lines); }

namespace {

bool bipointed(const Topos& t, const Presheaf& x) {
  return x.total_size() > 0 && is_connected(x) && t.points(x).size() >= 2;
}

/// Search over family, sub-presheaves of Ω, and components of exponentials
/// between family members.
std::optional<std::string> find_bipointed(const Topos& t, const std::vector<Presheaf>& family,
                                          const std::vector<std::string>& names) {
  for (std::size_t i = 0; i < family.size(); ++i)
    if (bipointed(t, family[i])) return names[i];
  const Omega& om = t.omega();
  {
    HomSearch s(om.object(), om.object(), t.config().budget, "subobjects of Omega");
    std::optional<std::string> found;
    std::size_t n = 0;
    s.for_each([&](const std::vector<Elem>& v) {
      Subobject sub = om.classified(s.to_map(v));
      if (bipointed(t, subobject_presheaf(sub).object)) {
        found = "subobject " + std::to_string(n) + " of Omega";
        return false;
      }
      ++n;
      return true;
    });
    if (found) return found;
  }
  std::size_t tried = 0;
  for (std::size_t i = 0; i < family.size(); ++i)
    for (std::size_t k = 0; k < family.size(); ++k) {
      if (tried++ >= t.config().rep_bound) return std::nullopt;
      std::shared_ptr<const Exponential> e;
      try {
        e = t.exponential(family[i], family[k]);
      } catch (const ResourceError&) {
        continue;
      }
      PiecesResult pe = pi0(e->object());
      for (std::size_t comp = 0; comp < pe.components; ++comp) {
        Subobject s = empty_subobject(e->object());
        for (Index c = 0; c < s.selected.size(); ++c)
          for (Elem x = 0; x < e->object().size(c); ++x) s.selected[c][x] = pe.assignment[c][x] == comp;
        if (bipointed(t, subobject_presheaf(s).object))
          return "component " + std::to_string(comp) + " of " + names[k] + "^" + names[i];
      }
    }
  return std::nullopt;
}

}  // namespace

CohesionReport classify(const Topos& t, const std::vector<Presheaf>& family,
                        const std::vector<std::string>& names) {
  CohesionReport r;
  r.site = t.category().name();
  std::vector<Presheaf> fam = family;
  r.family = names;
  const Presheaf omega = t.omega().object();
  if (std::find(fam.begin(), fam.end(), omega) == fam.end()) {
    fam.push_back(omega);
    r.family.push_back("Omega");
  }
  r.degenerate = t.terminal().total_size() == 0;
  r.ns = check_NS(t, fam, r.family);
  r.wdqo = check_WDQO(t, fam, r.family);
  r.dso = check_DSO(t, fam, r.family);
  r.postulates = r.ns.holds && r.wdqo.holds && r.dso.holds;
  r.lines.push_back({"NS", true, r.ns.holds ? r.ns.route : "refuted"});
  r.lines.push_back({"WDQO", true, r.wdqo.route});
  r.lines.push_back({"DSO", true, r.dso.route});
  if (r.degenerate) {
    r.lines.push_back({"degenerate", true, "initial ≅ terminal"});
    return r;
  }

  HomotopyTheory th(t, TheoryKind::Pieces);
  r.omega_connected = is_connected(omega);
  {
    auto cls = hom_classes(th, omega, omega);
    const std::size_t id_class = cls->class_of(identity_map(omega));
    for (const PresheafMap& p : t.points(omega))
      if (cls->class_of(constant_map(omega, p)) == id_class) r.omega_contractible = true;
  }
  auto bp = find_bipointed(t, fam, r.family);
  r.bipointed_connected = bp.has_value();
  r.bipointed_witness = bp.value_or("none found");

  bool qt = true;
  std::string qt_witness = "θ bijective on the family";
  for (std::size_t i = 0; i < fam.size(); ++i) {
    auto th_x = theta(t, fam[i]);
    const std::size_t comps = pi0(fam[i]).components;
    std::vector<std::size_t> sorted = th_x;
    std::sort(sorted.begin(), sorted.end());
    bool bij = sorted.size() == comps && std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
    if (!bij) {
      qt = false;
      qt_witness = "θ_" + r.family[i] + ": " + std::to_string(th_x.size()) + " points → " + std::to_string(comps) +
                   " components";
      break;
    }
  }

  const bool detectors_agree = r.omega_contractible == r.omega_connected && r.omega_connected == r.bipointed_connected;
  r.lines.push_back({"sufficient cohesion detectors agree", detectors_agree,
                     std::string("Ω contractible ") + (r.omega_contractible ? "yes" : "no") + ", Ω connected " +
                         (r.omega_connected ? "yes" : "no") + ", bipointed connected " + r.bipointed_witness});
  r.lines.push_back({"quality type", true, qt_witness});
  if (!r.postulates) {
    r.lines.push_back({"dichotomy", true, "not applicable: postulates fail"});
    return r;
  }
  r.quality_type = qt;
  r.sufficiently_cohesive = r.omega_contractible;
  r.lines.push_back({"dichotomy", qt != r.omega_contractible,
                     std::string(r.omega_contractible ? "sufficiently cohesive" : "not sufficiently cohesive") + ", " +
                         (qt ? "quality type" : "not a quality type")});
  return r;
}

// --- ¬¬-sheaves --------------------------------------------------------------------------

bool SheafConnectednessReport::consistent() const { return all_ok(lines); }

SheafConnectednessReport sheaf_connectedness_check(const Topos& t, const std::vector<Presheaf>& family,
                                                   const std::vector<std::string>& names) {
  SheafConnectednessReport r;
  const LTTopology j = double_negation(t);
  HomotopyTheory th(t, TheoryKind::Pieces);
  {
    const Presheaf omega = t.omega().object();
    auto cls = hom_classes(th, omega, omega);
    const std::size_t id_class = cls->class_of(identity_map(omega));
    for (const PresheafMap& p : t.points(omega))
      if (cls->class_of(constant_map(omega, p)) == id_class) r.sufficiently_cohesive = true;
  }
  const std::string sc = r.sufficiently_cohesive ? "sufficiently cohesive" : "not sufficiently cohesive";

  bool all_connected = true;
  for (std::size_t i = 0; i < family.size(); ++i) {
    const Presheaf& x = family[i];
    Sheafification l = sheafify(t, j, x);
    std::string why;
    r.lines.push_back({"L(" + names[i] + ") is a sheaf", is_sheaf(t, j, l.object, &why), why});
    Sheafification ll = sheafify(t, j, l.object);
    r.lines.push_back({"L(L(" + names[i] + ")) ≅ L(" + names[i] + ")", is_iso(ll.unit),
                       "sizes " + stage_sizes(l.object) + " and " + stage_sizes(ll.object)});
    if (l.object.total_size() == 0) {
      r.lines.push_back({"L(" + names[i] + ") nonempty ⇒ connected", true, "empty"});
    } else {
      const bool conn = is_connected(l.object);
      all_connected = all_connected && conn;
      r.lines.push_back({"L(" + names[i] + ") nonempty ⇒ connected", conn || !r.sufficiently_cohesive,
                         std::string(conn ? "connected" : "disconnected") + ", " + sc});
    }
    ContractibilityReport cx = is_contractible(th, x, {}, {});
    if (cx.route1) {
      ContractibilityReport cl = is_contractible(th, l.object, {}, {});
      r.lines.push_back({names[i] + " contractible ⇒ L(" + names[i] + ") contractible", cl.route1,
                         "L(" + names[i] + ") of sizes " + stage_sizes(l.object)});
    }
  }
  Sheafification l2 = sheafify(t, j, t.two());
  const bool conn2 = is_connected(l2.object);
  const std::size_t pts2 = t.points(l2.object).size();
  const bool bp2 = conn2 && pts2 >= 2;
  r.lines.push_back({"L(2) connected and bipointed iff sufficiently cohesive", bp2 == r.sufficiently_cohesive,
                     "L(2) of sizes " + stage_sizes(l2.object) + ", " + std::to_string(pts2) + " points, " +
                         (conn2 ? "connected" : "disconnected") + ", " + sc});
  const bool every = all_connected && conn2;
  r.lines.push_back({"nonempty sheaves connected iff sufficiently cohesive", every == r.sufficiently_cohesive,
                     std::string(every ? "all connected" : "a disconnected sheaf exists") + " on the family and L(2)"});
  return r;
}

// --- impossibility of motion ---------------------------------------------------------------

NoMotionReport no_motion(const Topos& t, const Presheaf& tobj, const PresheafMap& zero, const Presheaf& a) {
  std::vector<std::string> bad;
  if (!(zero.cod() == tobj) || !(zero.dom() == t.terminal())) bad.push_back("zero is not a point of T");
  if (!is_connected(tobj)) bad.push_back("T is not connected");
  Decidability d = is_decidable(a);
  if (!d.decidable) bad.push_back("A is not decidable (" + d.witness + ")");
  std::vector<std::string> nm{"T", "A"};
  if (!check_NS(t, {tobj, a}, nm).holds) bad.push_back("NS fails");
  if (!check_WDQO(t, {tobj, a}, {"T", "A"}).holds) bad.push_back("WDQO fails");
  if (!bad.empty()) {
    std::string msg = "no-motion hypotheses fail:";
    for (const auto& b : bad) msg += " " + b + ";";
    msg.pop_back();
    throw PreconditionError(msg);
  }
  NoMotionReport r;
  PresheafMap ev = ev_at(t, zero, a);
  r.exponential_sizes = ev.dom().sizes();
  r.base_sizes = a.sizes();
  r.iso = is_iso(ev);
  return r;
}

// --- monoids with zero ---------------------------------------------------------------------

bool MonoidZeroReport::consistent() const { return axiom_violations.empty() && all_ok(lines); }

MonoidZeroReport monoid_zero_check(const HomotopyTheory& th, const Presheaf& m, const PresheafMap& mult,
                                   const PresheafMap& one, const PresheafMap& zero) {
  const Topos& t = th.topos();
  MonoidZeroReport r;
  Product mm = product(m, m);
  if (!(mult.dom() == mm.object) || !(mult.cod() == m)) throw ShapeError("mult is not a map M×M → M");
  if (!(one.cod() == m) || !(zero.cod() == m)) throw ShapeError("unit and zero must be points of M");
  for (const auto& v : mult.validate()) r.axiom_violations.push_back("mult is not natural: " + v);
  if (r.axiom_violations.empty()) {
    const std::size_t stages_n = m.sizes().size();
    for (Index c = 0; c < stages_n; ++c) {
      const Elem e1 = point_value(one, c), e0 = point_value(zero, c);
      auto mul = [&](Elem x, Elem y) { return mult(c, mm.pair(c, x, y)); };
      const std::string at = " at stage " + t.category().object_name(c);
      for (Elem x = 0; x < m.size(c); ++x) {
        if (mul(e1, x) != x || mul(x, e1) != x) r.axiom_violations.push_back("unit law fails" + at);
        if (mul(e0, x) != e0 || mul(x, e0) != e0) r.axiom_violations.push_back("zero does not absorb" + at);
        for (Elem y = 0; y < m.size(c); ++y)
          for (Elem z = 0; z < m.size(c); ++z)
            if (mul(mul(x, y), z) != mul(x, mul(y, z))) {
              r.axiom_violations.push_back("associativity fails" + at);
              y = z = static_cast<Elem>(m.size(c));
            }
        if (!r.axiom_violations.empty()) break;
      }
      if (!r.axiom_violations.empty()) break;
    }
  }
  if (!r.axiom_violations.empty()) return r;

  r.connected = is_connected(m);
  const PresheafMap constant_zero = constant_map(m, zero);
  r.contractible = homotopic(th, identity_map(m), constant_zero);
  r.lines.push_back({"connected iff contractible", r.connected == r.contractible,
                     std::string(r.connected ? "connected" : "disconnected") + ", " +
                         (r.contractible ? "contractible" : "not contractible")});
  if (r.connected) {
    ExplicitHomotopy h{m, one, zero, mm, mult};
    std::string why;
    const bool ok = verify_explicit_implies_homotopic(th, h, identity_map(m), constant_zero, &why);
    r.lines.push_back({"mult is a homotopy from 1_M to zero!", ok, ok ? "h = mult" : why});
    if (ok) r.homotopy = h;
  }
  return r;
}

bool RReport::consistent() const { return monoid.consistent() && all_ok(lines); }

RReport build_R(const HomotopyTheory& th, const Presheaf& tobj, const PresheafMap& zero) {
  const Topos& t = th.topos();
  if (!(zero.cod() == tobj)) throw ShapeError("zero is not a point of T");
  RReport r;
  auto e = t.exponential(tobj, tobj);
  const Presheaf& tt = e->object();
  Pullback pb = pullback(ev_at(t, zero, tobj), zero);
  r.r = pb.object;
  r.incl = pb.p1;
  if (!is_mono(r.incl)) throw InternalError("R → T^T is not monic");

  // Factor maps into T^T through R.
  auto lift = [&](const PresheafMap& f) {
    std::vector<Function> comp(f.dom().sizes().size());
    for (Index c = 0; c < comp.size(); ++c) {
      const Function& in = r.incl.component(c);
      std::map<Elem, Elem> back;
      for (Elem k = 0; k < in.size(); ++k) back[in[k]] = k;
      for (Elem x = 0; x < f.dom().size(c); ++x) {
        auto it = back.find(f(c, x));
        if (it == back.end()) throw InternalError("map does not factor through R");
        comp[c].push_back(it->second);
      }
    }
    return PresheafMap(f.dom(), r.r, std::move(comp));
  };
  InternalComposition ic = internal_composition(t, tobj, tobj, tobj);
  Product rr = product(r.r, r.r);
  r.mult = lift(compose(ic.map, product_maps(rr, ic.domain, r.incl, r.incl)));
  r.one = lift(name(t, identity_map(tobj)));
  r.zero = lift(name(t, constant_map(tobj, zero)));
  (void)tt;
  r.monoid = monoid_zero_check(th, r.r, r.mult, r.one, r.zero);

  Subobject z = image_subobject(zero);
  r.zero_dense = is_dense(t, double_negation(t), z);
  r.lines.push_back({"R is a monoid with zero", r.monoid.axiom_violations.empty(),
                     r.monoid.axiom_violations.empty() ? "R of sizes " + stage_sizes(r.r)
                                                       : r.monoid.axiom_violations.front()});
  if (r.zero_dense && r.monoid.connected) {
    const bool tt_connected = is_connected(tt);
    r.lines.push_back({"T^T connected", tt_connected, "T^T of sizes " + stage_sizes(tt)});
    const bool tc = is_contractible(th, tobj, {}, {}).route1;
    r.lines.push_back({"T contractible", tc, "zero is ¬¬-dense and R connected"});
  } else {
    r.lines.push_back({"dense-point consequences", true,
                       std::string(r.zero_dense ? "" : "zero not ¬¬-dense") +
                           (r.zero_dense || r.monoid.connected ? "" : ", ") +
                           (r.monoid.connected ? "" : "R disconnected")});
  }
  return r;
}

// --- Theorem B -------------------------------------------------------------------------------

AdjunctionCertificate certify_theorem_b(const HomotopyTheory& th, const std::vector<Presheaf>& family,
                                        const std::vector<std::string>& names, std::size_t max_s) {
  const Topos& t = th.topos();
  if (th.kind() != TheoryKind::Pieces) throw PreconditionError("the reflection of decidables needs the pieces theory");
  AdjunctionCertificate cert;
  cert.left = "q_!";
  cert.right = "q^*";
  cert.family = names;

  TheoryCertificate tc = certify_theory(th, family, names);
  cert.lines.push_back({"p is a homotopy theory on the family", tc.verified(),
                        tc.verified() ? "" : [&] {
                          for (const auto& l : tc.lines)
                            if (!l.ok) return l.check + ": " + l.witness;
                          return std::string();
                        }()});

  std::vector<Presheaf> dec;
  std::vector<std::string> dec_names;
  for (std::size_t i = 0; i < family.size(); ++i)
    if (is_decidable(family[i]).decidable) {
      dec.push_back(family[i]);
      dec_names.push_back(names[i]);
    }
  for (std::size_t s = 1; s <= max_s; ++s) {
    Presheaf d = t.discrete(s);
    if (std::find(dec.begin(), dec.end(), d) != dec.end()) continue;
    dec.push_back(d);
    dec_names.push_back("discrete(" + std::to_string(s) + ")");
  }

  std::vector<PresheafMap> counits;
  for (std::size_t k = 0; k < dec.size(); ++k) {
    const Presheaf& a = dec[k];
    PiecesResult pa = pi0(a);
    CheckLine line{"ε_" + dec_names[k] + " = p⁻¹", true, ""};
    HomSearch s(pa.p.cod(), a, t.config().budget, "counit");
    for (Index c = 0; c < a.sizes().size(); ++c)
      for (Elem x = 0; x < a.size(c); ++x) s.pin(c, pa.p(c, x), x);
    auto sol = s.all();
    if (sol.size() != 1 || !is_iso(pa.p)) {
      line.ok = false;
      line.witness = std::to_string(sol.size()) + " maps e with e∘p = 1";
      counits.push_back(PresheafMap());
    } else {
      const PresheafMap inv = inverse(pa.p);
      line.ok = flatten(inv) == flatten(sol.front()) && inv == sol.front();
      line.witness = line.ok ? "bit-exact on " + stage_sizes(a) : "tables differ";
      counits.push_back(sol.front());
    }
    cert.lines.push_back(line);
  }

  for (std::size_t i = 0; i < family.size(); ++i) {
    const Presheaf& x = family[i];
    PiecesResult px = pi0(x);
    const Presheaf& dx = px.p.cod();
    for (std::size_t k = 0; k < dec.size(); ++k) {
      if (!counits[k].cod().valid_handle()) continue;
      const Presheaf& a = dec[k];
      PiecesResult pa = pi0(a);
      CheckLine line{"E_p(" + names[i] + ", " + dec_names[k] + ") ≅ Set(Π₀" + names[i] + ", " + dec_names[k] + ")",
                     true, ""};
      auto cls = hom_classes(th, x, a);
      auto transpose_of = [&](const PresheafMap& f) {
        return flatten(compose(counits[k], discrete_map(t, pi0_map(f, px, pa), pa.components)));
      };
      if (!cls->enumerated) {
        line.ok = false;
        line.witness = "hom-set not enumerated";
        cert.lines.push_back(line);
        continue;
      }
      std::map<std::vector<Elem>, std::size_t> image;
      for (std::size_t n = 0; n < cls->count && line.ok; ++n) {
        auto key = transpose_of(cls->arrow(n));
        auto [it, fresh] = image.emplace(key, cls->label[n]);
        if (!fresh && it->second != cls->label[n]) {
          line.ok = false;
          line.witness = "arrows of different classes share ε∘Π₀f";
        }
      }
      std::set<std::size_t> hit;
      for (const auto& kv : image) hit.insert(kv.second);
      if (line.ok && image.size() != cls->classes) {
        line.ok = false;
        line.witness = "homotopic arrows give different ε∘Π₀f";
      }
      const auto targets = t.hom(dx, a);
      if (line.ok && targets.size() != image.size()) {
        line.ok = false;
        line.witness = std::to_string(image.size()) + " classes but " + std::to_string(targets.size()) +
                       " functions";
      }
      if (line.ok) {
        for (const PresheafMap& g : targets) {
          if (transpose_of(compose(g, px.p)) != flatten(g)) {
            line.ok = false;
            line.witness = "ε∘Π₀(g∘p_X) ≠ g";
            break;
          }
        }
      }
      if (line.ok && cls->classes != cls->count) {
        line.ok = false;
        line.witness = "distinct homotopic arrows into a decidable object";
      }
      if (line.ok) line.witness = std::to_string(cls->classes) + " classes";
      cert.lines.push_back(line);
    }
  }
  return cert;
}

}  // namespace htopos
