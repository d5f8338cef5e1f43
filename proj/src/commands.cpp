// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>

#include <json.hpp>

#include "htopos/ccc.hpp"
#include "htopos/cohesion.hpp"
#include "htopos/error.hpp"
#include "htopos/hom_search.hpp"
#include "htopos/workspace.hpp"

namespace htopos {

namespace {

std::size_t display_width(const std::string& s) {
  std::size_t n = 0;
  for (unsigned char ch : s) n += (ch & 0xC0) != 0x80;
  return n;
}

std::string sizes_of(const Presheaf& x) {
  std::ostringstream o;
  o << "(";
  for (Index c = 0; c < x.sizes().size(); ++c) o << (c ? "," : "") << x.size(c);
  o << ")";
  return o.str();
}

std::string table_of(const Topos& t, const PresheafMap& f) {
  std::ostringstream o;
  for (Index c = 0; c < f.components().size(); ++c) {
    o << (c ? " | " : "") << t.category().object_name(c) << ":";
    for (Elem v : f.component(c)) o << " " << v;
  }
  return o.str();
}

struct Ctx {
  const Workspace& ws;
  const SiteEntry& site;
  const Topos& t;
  std::vector<Presheaf> family;
  std::vector<std::string> names;
  std::string theory_name;
  Report& report;
  std::string prefix;

  void add(const std::string& check, bool ok, const std::string& witness) {
    report.results.push_back({prefix + check, ok ? "pass" : "fail", witness});
  }
  void add(const CheckLine& l) { add(l.check, l.ok, l.witness); }
  void add_all(const std::vector<CheckLine>& ls) {
    for (const auto& l : ls) add(l);
  }
  void error_line(const std::string& check, const std::string& why) {
    report.results.push_back({prefix + check, "error", why});
  }
  /// Runs one check body; resource exhaustion becomes an "error" line.
  void guarded(const std::string& check, const std::function<void()>& body) {
    try {
      body();
    } catch (const ResourceError& e) {
      error_line(check, e.what());
    }
  }

  const Presheaf& object(const std::string& n) const {
    const Presheaf* p = site.object(n);
    if (!p) throw UnknownNameError("unknown object '" + n + "'");
    return *p;
  }
  std::optional<std::size_t> index_of(const std::string& n) const {
    auto it = std::find(names.begin(), names.end(), n);
    if (it == names.end()) return std::nullopt;
    return static_cast<std::size_t>(it - names.begin());
  }
};

LTTopology topology_named(const Topos& t, const std::string& n) {
  if (n == "notnot") return double_negation(t);
  if (n == "identity") return identity_topology(t);
  for (auto& j : enumerate_topologies(t))
    if (j.name == n) return j;
  throw UnknownNameError("unknown topology '" + n + "'");
}

HomotopyTheory theory_from(const Topos& t, const std::string& n) {
  if (n == "identity") return HomotopyTheory(t, TheoryKind::Identity);
  if (n == "bang") return HomotopyTheory(t, TheoryKind::Bang);
  if (n == "pieces") return HomotopyTheory(t, TheoryKind::Pieces);
  if (n.rfind("topology:", 0) == 0) return HomotopyTheory(t, TheoryKind::Topology, topology_named(t, n.substr(9)));
  throw UnknownNameError("unknown theory '" + n + "'");
}

/// Names and tags each topology: "j3 (notnot)".
std::string topology_label(const Topos& t, const LTTopology& j) {
  std::string s = j.name;
  if (j == identity_topology(t)) s += " (identity)";
  if (j == double_negation(t)) s += " (notnot)";
  return s;
}

// --- commands -------------------------------------------------------------------------------

void cmd_validate(Ctx& c) {
  const FinCategory& cat = c.t.category();
  auto viol = validate_category(cat);
  c.add("site " + c.site.name + " is a category", viol.empty(),
        viol.empty() ? std::to_string(cat.object_count()) + " objects, " + std::to_string(cat.morphism_count()) +
                           " morphisms"
                     : viol.front().describe(cat));
  for (const auto& [n, x] : c.site.objects) {
    auto v = x.validate();
    c.add("object " + n + " is a presheaf", v.empty(), v.empty() ? "sizes " + sizes_of(x) : v.front());
  }
  for (const auto& [n, f] : c.site.arrows) {
    auto v = f.validate();
    c.add("arrow " + n + " is natural", v.empty(), v.empty() ? "" : v.front());
  }
  std::string fam;
  for (const auto& n : c.names) fam += (fam.empty() ? "" : ", ") + n;
  c.add("family resolves", true, fam);
  HomotopyTheory th = theory_from(c.t, c.theory_name);
  c.add("theory resolves", true, th.name());
}

void cmd_homset(Ctx& c, const std::string& xn, const std::string& yn) {
  const Presheaf& x = c.object(xn);
  const Presheaf& y = c.object(yn);
  HomSearch s(x, y, c.t.config().budget, "Hom(" + xn + ", " + yn + ")");
  std::vector<PresheafMap> listed;
  const std::uint64_t n = s.for_each([&](const std::vector<Elem>& v) {
    if (listed.size() < c.t.config().rep_bound) listed.push_back(s.to_map(v));
    return true;
  });
  c.add("Hom(" + xn + ", " + yn + ")", true, std::to_string(n) + " arrows");
  for (std::size_t i = 0; i < listed.size(); ++i) c.add("arrow " + std::to_string(i), true, table_of(c.t, listed[i]));
  if (listed.size() < n) c.add("listing", true, "first " + std::to_string(listed.size()) + " arrows shown");
}

void cmd_classes(Ctx& c, const std::string& xn, const std::string& yn) {
  const Presheaf& x = c.object(xn);
  const Presheaf& y = c.object(yn);
  HomotopyTheory th = theory_from(c.t, c.theory_name);
  auto cls = hom_classes(th, x, y);
  const std::string e = "E_p(" + xn + ", " + yn + ")";
  c.add(e, true,
        std::to_string(cls->classes) + " class" + (cls->classes == 1 ? "" : "es") +
            (cls->enumerated ? " of " + std::to_string(cls->count) + " arrows" : "") + " (" + cls->method + ")");
  if (cls->reflection_points && c.t.ns_site())
    c.add("|" + e + "| = |E(1, Π₀(" + yn + "^" + xn + "))|", *cls->reflection_points == cls->classes,
          std::to_string(cls->classes) + " and " + std::to_string(*cls->reflection_points));
  if (!cls->enumerated) return;
  std::vector<std::size_t> size(cls->classes, 0);
  for (std::size_t l : cls->label) ++size[l];
  for (std::size_t k = 0; k < cls->classes && k < c.t.config().rep_bound; ++k)
    c.add("class " + std::to_string(k), true,
          std::to_string(size[k]) + (size[k] == 1 ? " arrow" : " arrows") + ", representative " + table_of(c.t, cls->arrow(cls->representative[k])));
}

void postulate_lines(Ctx& c, const PostulateCertificate& p) {
  for (const auto& l : p.lines) c.add(p.postulate + ": " + l.check, true, (l.ok ? "" : "refuted: ") + l.witness);
}

void cmd_classify(Ctx& c) {
  CohesionReport r = classify(c.t, c.family, c.names);
  postulate_lines(c, r.ns);
  postulate_lines(c, r.wdqo);
  postulate_lines(c, r.dso);
  c.add_all(r.lines);
  std::string verdict;
  if (r.degenerate) {
    verdict = "degenerate";
  } else if (!r.sufficiently_cohesive) {
    verdict = "not applicable (NS " + std::string(r.ns.holds ? "holds" : "fails") + ", WDQO " +
              (r.wdqo.holds ? "holds" : "fails") + ", DSO " + (r.dso.holds ? "holds" : "fails") + ")";
  } else {
    verdict = std::string(*r.sufficiently_cohesive ? "sufficiently cohesive" : "not sufficiently cohesive") + ", " +
              (*r.quality_type ? "quality type" : "not a quality type");
  }
  c.add("classification", r.consistent(), verdict);
}

void cmd_topologies(Ctx& c) {
  auto js = enumerate_topologies(c.t);
  c.add("topologies", true, std::to_string(js.size()) + " topologies");
  for (const auto& j : js) {
    auto v = validate_topology(c.t, j);
    Coverage cov = coverage(c.t, j);
    std::string w;
    for (Index k = 0; k < cov.covers.size(); ++k)
      w += (k ? ", " : "") + c.t.category().object_name(k) + ": " + std::to_string(cov.covers[k].size()) + " covers";
    const bool round = topology_from_coverage(c.t, cov) == j;
    c.add(topology_label(c.t, j) + ": topology axioms", v.empty(), v.empty() ? w : v.front());
    c.add(topology_label(c.t, j) + ": coverage round trip", round, round ? "" : "j differs from its coverage");
  }
}

void cmd_contractible(Ctx& c, const std::string& an) {
  HomotopyTheory th = theory_from(c.t, c.theory_name);
  ContractibilityReport r = is_contractible(th, c.object(an), c.family, c.names);
  c.add_all(r.lines);
}

void cmd_no_motion(Ctx& c, const std::string& tn, const std::string& an, std::size_t k) {
  const Presheaf& tobj = c.object(tn);
  const Presheaf& a = c.object(an);
  auto pts = c.t.points(tobj);
  if (k >= pts.size())
    throw PreconditionError("object '" + tn + "' has " + std::to_string(pts.size()) + " points, point " +
                            std::to_string(k) + " requested");
  NoMotionReport r = no_motion(c.t, tobj, pts[k], a);
  Presheaf e = c.t.exponential(tobj, a)->object();
  c.add("ev⁰ : " + an + "^" + tn + " → " + an + " bijective", r.iso,
        "stages " + sizes_of(e) + " and " + sizes_of(a));
}

// --- suites ---------------------------------------------------------------------------------

void suite_theories(Ctx& c) {
  std::vector<HomotopyTheory> ths{HomotopyTheory(c.t, TheoryKind::Identity), HomotopyTheory(c.t, TheoryKind::Bang),
                                  HomotopyTheory(c.t, TheoryKind::Pieces)};
  for (auto& j : enumerate_topologies(c.t)) ths.emplace_back(c.t, TheoryKind::Topology, j);
  for (const auto& th : ths) {
    TheoryCertificate cert = certify_theory(th, c.family, c.names);
    for (const auto& l : cert.lines) c.add(th.name() + ": " + l.check, l.ok, l.witness);
  }
}

void suite_theorem_a(Ctx& c) {
  HomotopyTheory th = theory_from(c.t, c.theory_name);
  const auto& f = c.family;
  const auto& n = c.names;
  for (std::size_t a = 0; a < f.size(); ++a)
    for (std::size_t b = 0; b < f.size(); ++b)
      for (std::size_t k = 0; k < f.size(); ++k) {
        const std::string l = n[a] + "," + n[b] + "," + n[k];
        c.guarded("product " + l, [&] {
          CheckLine r = theorem_a_product(th, f[a], f[b], f[k], l);
          c.add("product bijection (Z,X,Y)=(" + l + ")", r.ok, r.witness);
        });
        c.guarded("exponential " + l, [&] {
          CheckLine r = theorem_a_exponential(th, f[a], f[b], f[k], l);
          c.add("exponential bijection (X,Y,Z)=(" + l + ")", r.ok, r.witness);
        });
        c.guarded("sum " + l, [&] {
          CheckLine r = theorem_a_sum(th, f[a], f[b], f[k], l);
          c.add("sum bijection (X,Y,Z)=(" + l + ")", r.ok, r.witness);
        });
        c.guarded("composition " + l, [&] {
          CheckLine r = ep_compose_check(th, f[a], f[b], f[k], l);
          c.add("composition independence (X,Y,Z)=(" + l + ")", r.ok, r.witness);
        });
        c.guarded("pairing " + l, [&] {
          CheckLine r = ep_pair_check(th, f[a], f[b], f[k], l);
          c.add("pairing independence (Z,X,Y)=(" + l + ")", r.ok, r.witness);
        });
        c.guarded("copairing " + l, [&] {
          CheckLine r = ep_copair_check(th, f[a], f[b], f[k], l);
          c.add("copairing independence (X,Y,Z)=(" + l + ")", r.ok, r.witness);
        });
        c.guarded("transposition " + l, [&] {
          CheckLine r = ep_transpose_check(th, f[a], f[k], f[b], l);
          c.add("transposition independence (X,Z,Y)=(" + l + ")", r.ok, r.witness);
        });
      }
  c.guarded("extensivity", [&] { c.add_all(ep_extensivity_check(th, f, n)); });

  std::size_t done = 0;
  for (std::size_t a = 0; a < f.size() && done < c.t.config().rep_bound; ++a) {
    auto pts = c.t.points(f[a]);
    for (std::size_t p = 0; p < pts.size() && done < c.t.config().rep_bound; ++p)
      for (std::size_t x = 0; x < f.size() && done < c.t.config().rep_bound; ++x)
        for (std::size_t y = 0; y < f.size() && done < c.t.config().rep_bound; ++y) {
          if (c.t.hom_count(f[x], f[y]) > 8) continue;
          for (const PresheafMap& r : c.t.hom(f[x], f[y])) {
            if (done >= c.t.config().rep_bound) break;
            const std::string l = "point " + std::to_string(p) + " of " + n[a] + ", r: " + n[x] + " → " + n[y];
            c.guarded("hom action " + l, [&] { c.add("hom action " + l, ep_hom_action(th, pts[p], r, l).ok, ""); });
            ++done;
          }
        }
  }
}

void suite_adjunctions(Ctx& c) {
  AdjunctionCertificate pa = certify_pieces_adjunction(c.t, c.family, c.names);
  for (const auto& l : pa.lines) c.add("Π₀ ⊣ Δ: " + l.check, l.ok, l.witness);
  if (c.t.ns_site()) {
    AdjunctionCertificate pt = certify_points_adjunction(c.t, c.family, c.names);
    for (const auto& l : pt.lines) c.add("Γ ⊣ Λ: " + l.check, l.ok, l.witness);
  }
}

void suite_theorem_b(Ctx& c) {
  AdjunctionCertificate cert = certify_theorem_b(HomotopyTheory(c.t, TheoryKind::Pieces), c.family, c.names);
  c.add_all(cert.lines);
}

void suite_theorem_c(Ctx& c) {
  HomotopyTheory th(c.t, TheoryKind::Pieces);
  for (std::size_t a = 0; a < c.family.size(); ++a)
    for (std::size_t b = 0; b < c.family.size(); ++b) {
      const std::string l = "Hom(" + c.names[a] + ", " + c.names[b] + ")";
      c.guarded(l, [&] {
        if (c.t.hom_count(c.family[a], c.family[b]) > 16) return;
        auto hs = c.t.hom(c.family[a], c.family[b]);
        std::size_t pairs = 0, homotopic_pairs = 0;
        std::string bad;
        for (std::size_t i = 0; i < hs.size(); ++i)
          for (std::size_t k = 0; k < hs.size(); ++k) {
            ++pairs;
            const bool h = homotopic(th, hs[i], hs[k]);
            auto e = explicit_homotopy_search(th, hs[i], hs[k]);
            if (h) ++homotopic_pairs;
            std::string why;
            if (h != e.has_value() && bad.empty())
              bad = "arrows " + std::to_string(i) + ", " + std::to_string(k) + ": homotopic " + (h ? "yes" : "no") +
                    ", explicit homotopy " + (e ? "found" : "absent");
            else if (e && !verify_explicit_implies_homotopic(th, *e, hs[i], hs[k], &why) && bad.empty())
              bad = "arrows " + std::to_string(i) + ", " + std::to_string(k) + ": " + why;
          }
        c.add(l + ": homotopic iff explicit homotopy", bad.empty(),
              bad.empty() ? std::to_string(pairs) + " pairs, " + std::to_string(homotopic_pairs) + " homotopic" : bad);
      });
    }
  const Omega& om = c.t.omega();
  if (!is_connected(om.object())) return;
  ExplicitHomotopy meet{om.object(), om.top_map(), om.bottom_map(), om.square(), om.meet_map()};
  std::string why;
  const bool ok = verify_explicit_implies_homotopic(th, meet, identity_map(om.object()),
                                                    constant_map(om.object(), om.bottom_map()), &why);
  c.add("∧ : Ω×Ω → Ω is a homotopy from 1_Ω to ⊥!", ok, why);
}

void suite_theorem_d(Ctx& c) {
  HomotopyTheory th(c.t, TheoryKind::Pieces);
  for (std::size_t a = 0; a < c.family.size(); ++a) {
    if (c.t.points(c.family[a]).empty()) continue;
    c.guarded(c.names[a] + ": routes", [&] {
      ContractibilityReport r = is_contractible(th, c.family[a], c.family, c.names);
      for (const auto& l : r.lines) {
        if (l.check == "routes agree")
          c.add(c.names[a] + ": " + l.check, l.ok, l.witness);
        else
          c.add(c.names[a] + ": " + l.check, true, std::string(l.ok ? "holds" : "fails") + ", " + l.witness);
      }
    });
  }
}

void suite_theorem_e(Ctx& c) {
  cmd_classify(c);
  if (!c.t.ns_site()) return;
  SheafConnectednessReport s = sheaf_connectedness_check(c.t, c.family, c.names);
  c.add_all(s.lines);
}

void suite_no_motion(Ctx& c) {
  std::vector<Presheaf> bases;
  std::vector<std::string> bnames;
  for (std::size_t i = 0; i < c.family.size(); ++i)
    if (is_decidable(c.family[i]).decidable) {
      bases.push_back(c.family[i]);
      bnames.push_back(c.names[i]);
    }
  for (std::size_t k = 1; k <= 3; ++k) {
    Presheaf d = c.t.discrete(k);
    if (std::find(bases.begin(), bases.end(), d) != bases.end()) continue;
    bases.push_back(d);
    bnames.push_back("discrete(" + std::to_string(k) + ")");
  }
  for (std::size_t i = 0; i < c.family.size(); ++i) {
    const Presheaf& tobj = c.family[i];
    auto pts = c.t.points(tobj);
    if (pts.empty() || !is_connected(tobj)) continue;
    for (std::size_t b = 0; b < bases.size(); ++b) {
      const std::string l = "ev⁰ : " + bnames[b] + "^" + c.names[i] + " → " + bnames[b] + " bijective";
      c.guarded(l, [&] {
        try {
          NoMotionReport r = no_motion(c.t, tobj, pts[0], bases[b]);
          c.add(l, r.iso, "stages " + sizes_of(c.t.exponential(tobj, bases[b])->object()) + " and " +
                              sizes_of(bases[b]));
        } catch (const PreconditionError& e) {
          c.add(l, true, std::string("not applicable: ") + e.what());
        }
      });
    }
  }
  const Presheaf omega = c.t.omega().object();
  if (!is_decidable(omega).decidable) {
    for (std::size_t i = 0; i < c.family.size(); ++i) {
      auto pts = c.t.points(c.family[i]);
      if (pts.empty() || !is_connected(c.family[i])) continue;
      bool refused = false;
      try {
        no_motion(c.t, c.family[i], pts[0], omega);
      } catch (const PreconditionError&) {
        refused = true;
      }
      c.add("Omega^" + c.names[i] + " refused (Ω not decidable)", refused, "");
      break;
    }
  }
}

void suite_appendix_b(Ctx& c) {
  const auto& f = c.family;
  const auto& n = c.names;
  for (const LTTopology& j : enumerate_topologies(c.t)) {
    const std::string jl = topology_label(c.t, j) + ": ";
    auto v = validate_topology(c.t, j);
    c.add(jl + "modality axioms", v.empty(), v.empty() ? "" : v.front());
    std::vector<QuotientResult> q;
    for (const auto& x : f) q.push_back(quotient(c.t, j, x));
    for (std::size_t a = 0; a < f.size(); ++a) {
      c.add(jl + "Q(" + n[a] + ") separated", is_separated(c.t, j, q[a].object), "Q of sizes " + sizes_of(q[a].object));
      const PresheafMap qid = quotient_map(q[a], q[a], identity_map(f[a]));
      c.add(jl + "Q(1_" + n[a] + ") = 1", qid == identity_map(q[a].object), "");
    }
    std::size_t maps = 0;
    std::string fbad, nbad;
    for (std::size_t a = 0; a < f.size(); ++a)
      for (std::size_t b = 0; b < f.size(); ++b) {
        if (c.t.hom_count(f[a], f[b]) > c.t.config().rep_bound) continue;
        auto hab = c.t.hom(f[a], f[b]);
        for (std::size_t k = 0; k < f.size(); ++k) {
          if (c.t.hom_count(f[b], f[k]) > c.t.config().rep_bound) continue;
          auto hbk = c.t.hom(f[b], f[k]);
          for (const auto& g1 : hab)
            for (const auto& g2 : hbk) {
              if (maps >= c.t.config().rep_bound * c.t.config().rep_bound) break;
              ++maps;
              PresheafMap lhs = quotient_map(q[a], q[k], compose(g2, g1));
              PresheafMap rhs = compose(quotient_map(q[b], q[k], g2), quotient_map(q[a], q[b], g1));
              if (!(lhs == rhs) && fbad.empty()) fbad = n[a] + " → " + n[b] + " → " + n[k];
            }
        }
        for (const auto& g : hab)
          if (!(compose(quotient_map(q[a], q[b], g), q[a].q) == compose(q[b].q, g)) && nbad.empty())
            nbad = n[a] + " → " + n[b];
      }
    c.add(jl + "Q functorial on family maps", fbad.empty(), fbad.empty() ? std::to_string(maps) + " composites" : fbad);
    c.add(jl + "q natural on family maps", nbad.empty(), nbad);
    for (std::size_t a = 0; a < f.size(); ++a)
      for (std::size_t b = a; b < f.size(); ++b) {
        Product xy = product(f[a], f[b]);
        if (xy.object.total_size() > 4096) continue;
        QuotientResult qxy = quotient(c.t, j, xy.object);
        Product qq = product(q[a].object, q[b].object);
        PresheafMap cmp = pair_maps(qq, quotient_map(qxy, q[a], xy.p1), quotient_map(qxy, q[b], xy.p2));
        c.add(jl + "Q(" + n[a] + "×" + n[b] + ") ≅ Q(" + n[a] + ")×Q(" + n[b] + ")", is_iso(cmp),
              "sizes " + sizes_of(qxy.object) + " and " + sizes_of(qq.object));
      }
    const Presheaf two = c.t.two();
    for (std::size_t a = 0; a < f.size(); ++a) {
      std::size_t respecting = 0, refused = 0;
      std::string bad;
      for (const auto& g : c.t.hom(f[a], two)) {
        MediatorResult m = quotient_universal(c.t, q[a], g);
        if (m.respects) {
          ++respecting;
          if (!m.mediator || m.solutions != 1 || !(compose(*m.mediator, q[a].q) == g))
            bad = std::to_string(m.solutions) + " mediators for a map respecting R";
        } else {
          ++refused;
          if (m.witness.empty()) bad = "split pair without witness";
        }
      }
      c.add(jl + "universal property of Q(" + n[a] + ") for maps to 2", bad.empty(),
            bad.empty() ? std::to_string(respecting) + " unique mediators, " + std::to_string(refused) + " refused"
                        : bad);
    }
    if (c.t.ns_site()) {
      TheoryCertificate tc = certify_theory(HomotopyTheory(c.t, TheoryKind::Topology, j), f, n);
      std::string w;
      for (const auto& l : tc.lines)
        if (!l.ok && w.empty()) w = l.check + ": " + l.witness;
      c.add(jl + "induced theory certifies", tc.verified(), w);
    }
  }
}

void suite_sheaves(Ctx& c) {
  if (!c.t.ns_site()) return;
  SheafConnectednessReport s = sheaf_connectedness_check(c.t, c.family, c.names);
  c.add_all(s.lines);
  const LTTopology j = double_negation(c.t);
  PostulateCertificate ns = check_NS(c.t, c.family, c.names);
  PostulateCertificate dso = check_DSO(c.t, c.family, c.names);
  HomotopyTheory th(c.t, TheoryKind::Pieces);
  for (std::size_t a = 0; a < c.family.size(); ++a) {
    const Presheaf& x = c.family[a];
    auto pts = c.t.points(x);
    if (pts.empty()) continue;
    Sheafification lx = sheafify(c.t, j, x);
    std::vector<std::pair<std::string, LiftInputs>> cases;
    Product one_x = product(c.t.terminal(), x);
    cases.push_back({"K = 1", {c.t.terminal(), x, one_x.p2, lx.unit}});
    if (is_contractible(th, x, {}, {}).route1) {
      auto e = explicit_homotopy_search(th, identity_map(x), constant_map(x, pts[0]));
      if (e) cases.push_back({"contraction", {e->a, x, e->h, lx.unit}});
    }
    for (const auto& [label, in] : cases) {
      const std::string l = "lift along l_" + c.names[a] + " (" + label + ")";
      c.guarded(l, [&] {
        LiftResult r = homotopy_lift(c.t, j, in, lx, ns.holds && dso.holds);
        const bool ok = r.dense_mono && r.exists && r.commutes && r.solutions == 1;
        c.add(l, ok,
              ok ? "unique lift" : r.witness + " (" + std::to_string(r.solutions) + " solutions)");
      });
    }
  }
}

void suite_monoids(Ctx& c) {
  HomotopyTheory th(c.t, TheoryKind::Pieces);
  const Omega& om = c.t.omega();
  MonoidZeroReport m = monoid_zero_check(th, om.object(), om.meet_map(), om.top_map(), om.bottom_map());
  for (const auto& v : m.axiom_violations) c.add("Ω (∧, ⊤, ⊥): axioms", false, v);
  if (m.axiom_violations.empty()) c.add("Ω (∧, ⊤, ⊥): axioms", true, "");
  for (const auto& l : m.lines) c.add("Ω (∧, ⊤, ⊥): " + l.check, l.ok, l.witness);

  const Presheaf d = c.t.two();
  Product dd = product(d, d);
  std::vector<Function> comp(c.t.category().object_count());
  for (Index k = 0; k < comp.size(); ++k) {
    comp[k].resize(4);
    for (Elem a = 0; a < 2; ++a)
      for (Elem b = 0; b < 2; ++b) comp[k][dd.pair(k, a, b)] = a * b;
  }
  auto pd = c.t.points(d);
  if (pd.size() == 2) {
    MonoidZeroReport m2 = monoid_zero_check(th, d, PresheafMap(dd.object, d, comp), pd[1], pd[0]);
    c.add("{0,1} (·, 1, 0): axioms", m2.axiom_violations.empty(),
          m2.axiom_violations.empty() ? "" : m2.axiom_violations.front());
    for (const auto& l : m2.lines) c.add("{0,1} (·, 1, 0): " + l.check, l.ok, l.witness);
  }

  for (std::size_t a = 0; a < c.family.size(); ++a) {
    auto pts = c.t.points(c.family[a]);
    if (pts.empty()) continue;
    const std::string l = "R(" + c.names[a] + ", point 0)";
    c.guarded(l, [&] {
      auto e = c.t.exponential(c.family[a], c.family[a]);
      const auto& sz = e->object().sizes();
      if (*std::max_element(sz.begin(), sz.end()) > 16) return;
      RReport r = build_R(th, c.family[a], pts[0]);
      for (const auto& v : r.monoid.axiom_violations) c.add(l + ": axioms", false, v);
      for (const auto& x : r.lines) c.add(l + ": " + x.check, x.ok, x.witness);
      for (const auto& x : r.monoid.lines) c.add(l + ": " + x.check, x.ok, x.witness);
    });
  }
}

struct Suite {
  std::string name;
  void (*run)(Ctx&);
};

const std::vector<Suite>& suites() {
  static const std::vector<Suite> s{{"theories", suite_theories},     {"theorem-A", suite_theorem_a},
                                    {"adjunctions", suite_adjunctions}, {"theorem-B", suite_theorem_b},
                                    {"theorem-C", suite_theorem_c},   {"theorem-D", suite_theorem_d},
                                    {"theorem-E", suite_theorem_e},   {"no-motion", suite_no_motion},
                                    {"appendix-B", suite_appendix_b}, {"sheaves", suite_sheaves},
                                    {"monoids", suite_monoids}};
  return s;
}

bool needs_ns(const std::string& s) {
  return s == "theorem-B" || s == "theorem-C" || s == "theorem-D" || s == "no-motion" || s == "sheaves" ||
         s == "monoids";
}

void cmd_suite(Ctx& c, const std::string& name) {
  if (name == "all") {
    for (const auto& s : suites()) {
      if (needs_ns(s.name) && !c.t.ns_site()) {
        c.report.results.push_back({s.name + ": skipped", "pass", "site criteria for NS fail"});
        continue;
      }
      c.prefix = s.name + ": ";
      s.run(c);
    }
    c.prefix.clear();
    return;
  }
  for (const auto& s : suites())
    if (s.name == name) {
      if (needs_ns(s.name) && !c.t.ns_site())
        throw PreconditionError("suite '" + name + "' needs a site satisfying the NS criteria");
      s.run(c);
      return;
    }
  throw UnknownNameError("unknown suite '" + name + "'");
}

const char* kUsage =
    "commands: validate | homset X Y | classes X Y | classify | topologies | contractible A | "
    "no-motion T A [point] | suite <name>";

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> n = [] {
    std::vector<std::string> v;
    for (const auto& s : suites()) v.push_back(s.name);
    v.push_back("all");
    return v;
  }();
  return n;
}

Report run_command(const Workspace& ws, const std::vector<std::string>& args, const RunOptions& options) {
  Report report;
  const SiteEntry& site = ws.active();
  report.site = site.name;
  report.config = ws.config();
  report.theory = options.theory.value_or(site.theory);
  for (const auto& a : args) report.command += (report.command.empty() ? "" : " ") + a;

  Ctx c{ws, site, *site.topos, {}, {}, report.theory, report, ""};
  try {
    if (options.family) {
      c.names = *options.family;
    } else if (!site.family.empty()) {
      c.names = site.family;
    } else {
      for (const auto& [n, x] : site.objects) c.names.push_back(n);
    }
    for (const auto& n : c.names) c.family.push_back(c.object(n));
    report.family = c.names;
    theory_from(c.t, c.theory_name);

    if (args.empty()) throw PreconditionError(std::string("no command given; ") + kUsage);
    const std::string& cmd = args[0];
    auto want = [&](std::size_t lo, std::size_t hi) {
      if (args.size() - 1 < lo || args.size() - 1 > hi)
        throw PreconditionError("wrong number of arguments for '" + cmd + "'; " + kUsage);
    };
    if (cmd == "validate") {
      want(0, 0);
      cmd_validate(c);
    } else if (cmd == "homset") {
      want(2, 2);
      cmd_homset(c, args[1], args[2]);
    } else if (cmd == "classes") {
      want(2, 2);
      cmd_classes(c, args[1], args[2]);
    } else if (cmd == "classify") {
      want(0, 0);
      cmd_classify(c);
    } else if (cmd == "topologies") {
      want(0, 0);
      cmd_topologies(c);
    } else if (cmd == "contractible") {
      want(1, 1);
      cmd_contractible(c, args[1]);
    } else if (cmd == "no-motion") {
      want(2, 3);
      std::size_t k = 0;
      if (args.size() == 4) {
        try {
          k = std::stoul(args[3]);
        } catch (const std::exception&) {
          throw PreconditionError("point index '" + args[3] + "' is not a number");
        }
      }
      cmd_no_motion(c, args[1], args[2], k);
    } else if (cmd == "suite") {
      want(1, 1);
      cmd_suite(c, args[1]);
    } else {
      throw PreconditionError("unknown command '" + cmd + "'; " + kUsage);
    }
  } catch (const Error& e) {
    report.error = e.what();
  }
  bool fail = false, error = !report.error.empty();
  for (const auto& r : report.results) {
    fail = fail || r.status == "fail";
    error = error || r.status == "error";
  }
  report.exit_code = fail ? 1 : error ? 2 : 0;
  if (!report.error.empty()) report.exit_code = 2;
  return report;
}

std::string Report::text() const {
  std::ostringstream o;
  o << "command: " << command << "\n";
  o << "site: " << site << "  theory: " << theory << "  family: ";
  for (std::size_t i = 0; i < family.size(); ++i) o << (i ? ", " : "") << family[i];
  o << "\n";
  o << "budget: " << config.budget << "  seed: " << config.seed << "  rep_bound: " << config.rep_bound << "\n";
  std::size_t width = 5;
  for (const auto& r : results) width = std::max(width, display_width(r.check));
  std::size_t pass = 0, fail = 0, err = 0;
  for (const auto& r : results) {
    o << (r.status == "pass" ? "PASS " : r.status == "fail" ? "FAIL " : "ERROR") << "  " << r.check;
    if (!r.witness.empty()) o << std::string(width - display_width(r.check) + 2, ' ') << r.witness;
    o << "\n";
    (r.status == "pass" ? pass : r.status == "fail" ? fail : err)++;
  }
  if (!error.empty()) o << "error: " << error << "\n";
  o << "summary: " << results.size() << (results.size() == 1 ? " check, " : " checks, ") << pass << " pass, " << fail << " fail, " << err << " error\n";
  return o.str();
}

std::string Report::json() const {
  nlohmann::ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = command;
  j["config"] = {{"site", site},
                 {"theory", theory},
                 {"family", family},
                 {"budget", config.budget},
                 {"rep_bound", config.rep_bound},
                 {"seed", config.seed}};
  j["seed"] = config.seed;
  nlohmann::ordered_json rs = nlohmann::ordered_json::array();
  for (const auto& r : results) rs.push_back({{"check", r.check}, {"status", r.status}, {"witness", r.witness}});
  j["results"] = rs;
  if (!error.empty()) j["error"] = error;
  j["exit_code"] = exit_code;
  return j.dump(2) + "\n";
}

}  // namespace htopos
