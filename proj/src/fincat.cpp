// SPDX-License-Identifier: Apache-2.0

#include "htopos/fincat.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "htopos/digest.hpp"
#include "htopos/error.hpp"

namespace htopos {

FinCategory::FinCategory(std::string name, std::vector<std::string> object_names,
                         std::vector<Morphism> morphisms,
                         std::vector<Index> identities,
                         std::vector<Index> compose_table)
    : name_(std::move(name)),
      objects_(std::move(object_names)),
      morphisms_(std::move(morphisms)),
      identities_(std::move(identities)),
      table_(std::move(compose_table)) {
  const std::size_t n = objects_.size();
  const std::size_t m = morphisms_.size();
  if (identities_.size() != n) throw ShapeError("identity table size mismatch");
  if (table_.size() != m * m) throw ShapeError("composition table size mismatch");
  for (const auto& mor : morphisms_) {
    if (mor.dom >= n || mor.cod >= n)
      throw ShapeError("morphism '" + mor.name + "' has an out-of-range endpoint");
  }
  for (Index id : identities_) {
    if (id >= m) throw ShapeError("identity index out of range");
  }
  for (Index v : table_) {
    if (v != kNone && v >= m) throw ShapeError("composite index out of range");
  }

  hom_.assign(n * n, {});
  into_.assign(n, {});
  hom_pos_.assign(m, 0);
  for (Index f = 0; f < m; ++f) {
    auto& h = hom_[static_cast<std::size_t>(morphisms_[f].dom) * n + morphisms_[f].cod];
    hom_pos_[f] = static_cast<Index>(h.size());
    h.push_back(f);
    into_[morphisms_[f].cod].push_back(f);
  }

  Digest d;
  d.u32(static_cast<std::uint32_t>(n));
  d.u32(static_cast<std::uint32_t>(m));
  for (const auto& mor : morphisms_) {
    d.u32(mor.dom);
    d.u32(mor.cod);
  }
  for (Index id : identities_) d.u32(id);
  for (Index v : table_) d.u32(v);
  digest_ = d.value();
}

bool FinCategory::same_shape(const FinCategory& other) const {
  if (morphisms_.size() != other.morphisms_.size()) return false;
  for (std::size_t i = 0; i < morphisms_.size(); ++i) {
    if (morphisms_[i].dom != other.morphisms_[i].dom ||
        morphisms_[i].cod != other.morphisms_[i].cod)
      return false;
  }
  return true;
}

std::optional<Index> FinCategory::find_object(std::string_view name) const {
  for (Index c = 0; c < objects_.size(); ++c)
    if (objects_[c] == name) return c;
  return std::nullopt;
}

std::optional<Index> FinCategory::find_morphism(std::string_view name) const {
  for (Index f = 0; f < morphisms_.size(); ++f)
    if (morphisms_[f].name == name) return f;
  return std::nullopt;
}

std::string AxiomViolation::describe(const FinCategory& c) const {
  std::ostringstream os;
  auto mor = [&](std::size_t i) -> std::string {
    Index f = witnesses.at(i);
    return f < c.morphism_count() ? c.morphism(f).name : "#" + std::to_string(f);
  };
  switch (kind) {
    case AxiomKind::IdentityShape:
      os << "identity of object " << c.object_name(witnesses.at(0))
         << " is not an endomorphism of it";
      break;
    case AxiomKind::MissingComposite:
      os << "no composite for composable pair " << mor(0) << " o " << mor(1);
      break;
    case AxiomKind::SpuriousComposite:
      os << "composite recorded for non-composable pair " << mor(0) << " o " << mor(1);
      break;
    case AxiomKind::CompositeShape:
      os << "composite " << mor(0) << " o " << mor(1) << " has wrong domain or codomain";
      break;
    case AxiomKind::LeftIdentity:
      os << "left identity law fails for " << mor(0);
      break;
    case AxiomKind::RightIdentity:
      os << "right identity law fails for " << mor(0);
      break;
    case AxiomKind::Associativity:
      os << "associativity fails for " << mor(0) << ", " << mor(1) << ", " << mor(2);
      break;
  }
  return os.str();
}

std::vector<AxiomViolation> validate_category(const FinCategory& c) {
  std::vector<AxiomViolation> out;
  const Index n = static_cast<Index>(c.object_count());
  const Index m = static_cast<Index>(c.morphism_count());
  for (Index o = 0; o < n; ++o) {
    Index id = c.identity(o);
    if (c.dom(id) != o || c.cod(id) != o) out.push_back({AxiomKind::IdentityShape, {o}});
  }
  for (Index g = 0; g < m; ++g) {
    for (Index f = 0; f < m; ++f) {
      Index gf = c.compose(g, f);
      bool composable = c.cod(f) == c.dom(g);
      if (composable && gf == kNone) {
        out.push_back({AxiomKind::MissingComposite, {g, f}});
      } else if (!composable && gf != kNone) {
        out.push_back({AxiomKind::SpuriousComposite, {g, f}});
      } else if (composable && (c.dom(gf) != c.dom(f) || c.cod(gf) != c.cod(g))) {
        out.push_back({AxiomKind::CompositeShape, {g, f}});
      }
    }
  }
  if (!out.empty()) return out;  // later checks assume total, well-shaped tables

  for (Index f = 0; f < m; ++f) {
    if (c.compose(c.identity(c.cod(f)), f) != f)
      out.push_back({AxiomKind::LeftIdentity, {f}});
    if (c.compose(f, c.identity(c.dom(f))) != f)
      out.push_back({AxiomKind::RightIdentity, {f}});
  }
  for (Index f = 0; f < m; ++f) {
    for (Index g = 0; g < m; ++g) {
      if (c.cod(f) != c.dom(g)) continue;
      Index gf = c.compose(g, f);
      for (Index h = 0; h < m; ++h) {
        if (c.cod(g) != c.dom(h)) continue;
        if (c.compose(h, gf) != c.compose(c.compose(h, g), f))
          out.push_back({AxiomKind::Associativity, {h, g, f}});
      }
    }
  }
  return out;
}

std::optional<Index> terminal_object(const FinCategory& c) {
  for (Index t = 0; t < c.object_count(); ++t) {
    bool ok = true;
    for (Index o = 0; o < c.object_count() && ok; ++o) ok = c.hom(o, t).size() == 1;
    if (ok) return t;
  }
  return std::nullopt;
}

std::optional<Index> initial_object(const FinCategory& c) {
  for (Index i = 0; i < c.object_count(); ++i) {
    bool ok = true;
    for (Index o = 0; o < c.object_count() && ok; ++o) ok = c.hom(i, o).size() == 1;
    if (ok) return i;
  }
  return std::nullopt;
}

PointCheck every_object_has_point(const FinCategory& c) {
  auto t = terminal_object(c);
  if (!t) throw PreconditionError("site '" + c.name() + "' has no terminal object");
  PointCheck out;
  out.terminal = *t;
  out.all_pointed = true;
  for (Index o = 0; o < c.object_count(); ++o) {
    const auto& h = c.hom(*t, o);
    if (h.empty()) {
      out.witness.emplace_back(std::nullopt);
      out.all_pointed = false;
    } else {
      out.witness.emplace_back(h.front());
    }
  }
  return out;
}

bool presheaf_ns_criterion(const FinCategory& c) {
  if (!terminal_object(c)) return false;
  return every_object_has_point(c).all_pointed;
}

bool covariant_ns_criterion(const FinCategory& d) {
  // Set^D = presheaves on D^op; an initial object of D with copoints is a
  // terminal object of D^op with points.
  return presheaf_ns_criterion(opposite(d));
}

FinCategory opposite(const FinCategory& c) {
  const std::size_t m = c.morphism_count();
  std::vector<Morphism> mors;
  mors.reserve(m);
  for (const auto& mor : c.morphisms()) mors.push_back({mor.cod, mor.dom, mor.name});
  std::vector<Index> table(m * m, kNone);
  for (Index g = 0; g < m; ++g)
    for (Index f = 0; f < m; ++f) table[g * m + f] = c.compose(f, g);
  std::string name = c.name();
  if (name.size() > 3 && name.compare(name.size() - 3, 3, "^op") == 0)
    name.resize(name.size() - 3);
  else
    name += "^op";
  return FinCategory(std::move(name), c.object_names(), std::move(mors),
                     c.identities(), std::move(table));
}

namespace {

using Word = std::vector<Index>;

bool shortlex_less(const Word& a, const Word& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

struct Rule {
  Word lhs;
  Word rhs;
};

Word normalize(Word w, const std::vector<Rule>& rules) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& r : rules) {
      auto it = std::search(w.begin(), w.end(), r.lhs.begin(), r.lhs.end());
      if (it == w.end()) continue;
      auto pos = it - w.begin();
      w.erase(w.begin() + pos, w.begin() + pos + static_cast<std::ptrdiff_t>(r.lhs.size()));
      w.insert(w.begin() + pos, r.rhs.begin(), r.rhs.end());
      changed = true;
      break;
    }
  }
  return w;
}

}  // namespace

FinCategory close_presentation(const Presentation& p) {
  const Index n = static_cast<Index>(p.objects.size());
  for (const auto& g : p.generators) {
    if (g.dom >= n || g.cod >= n)
      throw ShapeError("generator '" + g.name + "' has an out-of-range endpoint");
  }
  // Endpoints of a non-empty path; throws if not composable.
  auto endpoints = [&](const Word& w) -> std::pair<Index, Index> {
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (w[i] >= p.generators.size()) throw ShapeError("relation uses unknown generator");
      if (i > 0 && p.generators[w[i - 1]].cod != p.generators[w[i]].dom)
        throw ShapeError("relation word is not a composable path");
    }
    return {p.generators[w.front()].dom, p.generators[w.back()].cod};
  };

  std::vector<Rule> rules;
  for (const auto& rel : p.relations) {
    std::optional<std::pair<Index, Index>> el, er;
    if (!rel.lhs.empty()) el = endpoints(rel.lhs);
    if (!rel.rhs.empty()) er = endpoints(rel.rhs);
    if (!el && !er) continue;
    auto ends = el ? *el : *er;
    if (el && er && *el != *er) throw ShapeError("relation sides are not parallel");
    if ((!el || !er) && ends.first != ends.second)
      throw ShapeError("relation equates a non-endomorphism with an identity");
    if ((!el || !er) && rel.object != kNone && rel.object != ends.first)
      throw ShapeError("relation identity object does not match");
    if (rel.lhs == rel.rhs) continue;
    if (shortlex_less(rel.lhs, rel.rhs))
      rules.push_back({rel.rhs, rel.lhs});
    else
      rules.push_back({rel.lhs, rel.rhs});
  }

  struct Key {
    Index dom;
    Word word;
    bool operator<(const Key& o) const {
      if (word.size() != o.word.size()) return word.size() < o.word.size();
      if (word != o.word) return word < o.word;
      return dom < o.dom;
    }
  };
  auto cod_of = [&](const Key& k) { return k.word.empty() ? k.dom : p.generators[k.word.back()].cod; };

  std::map<Key, Index> seen;
  std::vector<Key> order;
  for (Index o = 0; o < n; ++o) {
    seen.emplace(Key{o, {}}, static_cast<Index>(order.size()));
    order.push_back(Key{o, {}});
  }
  for (std::size_t i = 0; i < order.size(); ++i) {
    Key cur = order[i];
    Index c = cod_of(cur);
    for (Index g = 0; g < p.generators.size(); ++g) {
      if (p.generators[g].dom != c) continue;
      Word w = cur.word;
      w.push_back(g);
      Key next{cur.dom, normalize(std::move(w), rules)};
      if (seen.count(next)) continue;
      if (order.size() >= p.bound)
        throw ResourceError("closure of presentation '" + p.name + "' exceeds " +
                            std::to_string(p.bound) + " morphisms");
      seen.emplace(next, static_cast<Index>(order.size()));
      order.push_back(std::move(next));
    }
  }

  // Identities first, then shortlex.
  std::vector<Key> sorted(order.begin() + n, order.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<Key> all(order.begin(), order.begin() + n);
  all.insert(all.end(), sorted.begin(), sorted.end());
  std::map<Key, Index> index;
  for (Index i = 0; i < all.size(); ++i) index.emplace(all[i], i);

  std::vector<Morphism> mors;
  for (const auto& k : all) {
    std::string nm;
    if (k.word.empty()) {
      nm = "id" + p.objects[k.dom];
    } else {
      for (auto it = k.word.rbegin(); it != k.word.rend(); ++it) {
        if (!nm.empty()) nm += '.';
        nm += p.generators[*it].name;
      }
    }
    mors.push_back({k.dom, cod_of(k), std::move(nm)});
  }
  std::vector<Index> ids(n);
  for (Index o = 0; o < n; ++o) ids[o] = o;
  const std::size_t m = all.size();
  std::vector<Index> table(m * m, kNone);
  for (Index g = 0; g < m; ++g) {
    for (Index f = 0; f < m; ++f) {
      if (mors[f].cod != mors[g].dom) continue;
      Word w = all[f].word;
      w.insert(w.end(), all[g].word.begin(), all[g].word.end());
      auto it = index.find(Key{all[f].dom, normalize(std::move(w), rules)});
      if (it == index.end())
        throw SemanticError("presentation '" + p.name + "' is not closed under composition");
      table[g * m + f] = it->second;
    }
  }
  FinCategory cat(p.name, p.objects, std::move(mors), std::move(ids), std::move(table));
  auto violations = validate_category(cat);
  if (!violations.empty())
    throw SemanticError("presentation '" + p.name +
                        "' does not close to a category: " + violations.front().describe(cat));
  return cat;
}

const std::vector<std::string>& builtin_names() {
  static const std::vector<std::string> names{"one", "delta1", "two_discrete", "parallel_pair"};
  return names;
}

FinCategory builtin_category(std::string_view name) {
  Presentation p;
  p.name = std::string(name);
  if (name == "one") {
    p.objects = {"*"};
  } else if (name == "delta1") {
    // Reflexive graphs: [0] vertices, [1] edges; s∘d0 = s∘d1 = id.
    p.objects = {"[0]", "[1]"};
    p.generators = {{"d0", 0, 1}, {"d1", 0, 1}, {"s", 1, 0}};
    p.relations = {{{0, 2}, {}, 0}, {{1, 2}, {}, 0}};
  } else if (name == "two_discrete") {
    p.objects = {"a", "b"};
  } else if (name == "parallel_pair") {
    // Irreflexive graphs: V vertices, E edges, two endpoint arrows.
    p.objects = {"V", "E"};
    p.generators = {{"s", 0, 1}, {"t", 0, 1}};
  } else {
    throw UnknownNameError("unknown builtin site '" + std::string(name) + "'");
  }
  return close_presentation(p);
}

SiteRef builtin_site(std::string_view name) {
  return std::make_shared<const FinCategory>(builtin_category(name));
}

std::vector<std::string> validate_functor(const FinFunctor& f) {
  std::vector<std::string> out;
  if (!f.source || !f.target) return {"functor has no source or target"};
  const auto& s = *f.source;
  const auto& t = *f.target;
  if (f.object_map.size() != s.object_count() || f.morphism_map.size() != s.morphism_count())
    return {"functor tables have the wrong size"};
  for (Index o : f.object_map)
    if (o >= t.object_count()) return {"object image out of range"};
  for (Index m : f.morphism_map)
    if (m >= t.morphism_count()) return {"morphism image out of range"};
  for (Index m = 0; m < s.morphism_count(); ++m) {
    Index fm = f.morphism_map[m];
    if (t.dom(fm) != f.object_map[s.dom(m)] || t.cod(fm) != f.object_map[s.cod(m)])
      out.push_back("dom/cod not preserved by " + s.morphism(m).name);
  }
  for (Index o = 0; o < s.object_count(); ++o) {
    if (f.morphism_map[s.identity(o)] != t.identity(f.object_map[o]))
      out.push_back("identity of " + s.object_name(o) + " not preserved");
  }
  if (!out.empty()) return out;
  for (Index g = 0; g < s.morphism_count(); ++g) {
    for (Index h = 0; h < s.morphism_count(); ++h) {
      Index gh = s.compose(g, h);
      if (gh == kNone) continue;
      if (f.morphism_map[gh] != t.compose(f.morphism_map[g], f.morphism_map[h]))
        out.push_back("composite " + s.morphism(g).name + " o " + s.morphism(h).name +
                      " not preserved");
    }
  }
  return out;
}

}  // namespace htopos
