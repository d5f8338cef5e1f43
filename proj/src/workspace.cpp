// SPDX-License-Identifier: Apache-2.0

#include "htopos/workspace.hpp"

#include <algorithm>
#include <charconv>
#include <functional>
#include <map>

#include "htopos/ccc.hpp"
#include "htopos/error.hpp"
#include "htopos/ltopology.hpp"
#include "htopos/pieces.hpp"

namespace htopos {

const Presheaf* SiteEntry::object(std::string_view n) const {
  for (const auto& [k, v] : objects)
    if (k == n) return &v;
  return nullptr;
}

const PresheafMap* SiteEntry::arrow(std::string_view n) const {
  for (const auto& [k, v] : arrows)
    if (k == n) return &v;
  return nullptr;
}

namespace {

struct Token {
  std::string text;
  std::size_t line = 0;
  std::size_t column = 0;
};

bool is_punct(char c) { return c == '=' || c == ':' || c == '(' || c == ')' || c == ','; }

std::vector<Token> tokenize(std::string_view line, std::size_t line_no) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    const char c = line[i];
    if (c == '#') break;
    if (c == ' ' || c == '\t' || c == '\r') {
      ++i;
      continue;
    }
    Token t;
    t.line = line_no;
    t.column = i + 1;
    if (c == '-' && i + 1 < line.size() && line[i + 1] == '>') {
      t.text = "->";
      i += 2;
    } else if (is_punct(c)) {
      t.text = std::string(1, c);
      ++i;
    } else {
      std::size_t j = i;
      while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r' && line[j] != '#' &&
             !is_punct(line[j]) && !(line[j] == '-' && j + 1 < line.size() && line[j + 1] == '>'))
        ++j;
      t.text = std::string(line.substr(i, j - i));
      i = j;
    }
    out.push_back(std::move(t));
  }
  return out;
}

/// Cursor over the tokens of one line.
class Line {
 public:
  Line(std::vector<Token> toks, std::size_t line_no, std::size_t width)
      : toks_(std::move(toks)), line_(line_no), width_(width) {}

  bool done() const { return pos_ >= toks_.size(); }
  const Token& peek() const {
    if (done()) fail_end("unexpected end of line");
    return toks_[pos_];
  }
  Token next(const char* what) {
    if (done()) fail_end(std::string("expected ") + what);
    return toks_[pos_++];
  }
  void expect(const std::string& text) {
    Token t = next(("'" + text + "'").c_str());
    if (t.text != text) throw ParseError(t.line, t.column, "expected '" + text + "', found '" + t.text + "'");
  }
  bool accept(const std::string& text) {
    if (!done() && toks_[pos_].text == text) {
      ++pos_;
      return true;
    }
    return false;
  }
  void end() {
    if (!done()) throw ParseError(toks_[pos_].line, toks_[pos_].column, "unexpected '" + toks_[pos_].text + "'");
  }
  [[noreturn]] void fail_end(const std::string& what) const { throw ParseError(line_, width_ + 1, what); }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::size_t line_;
  std::size_t width_;
};

std::uint64_t to_uint(const Token& t) {
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
  if (ec != std::errc() || p != t.text.data() + t.text.size())
    throw ParseError(t.line, t.column, "expected a non-negative integer, found '" + t.text + "'");
  return v;
}

const std::vector<std::string>& keywords() {
  static const std::vector<std::string> k{"site", "use", "object", "arrow", "let", "family", "theory", "end"};
  return k;
}

}  // namespace

class WorkspaceParser {
 public:
  WorkspaceParser(std::string_view text, const std::string& source, const Config& config) : text_(text) {
    ws_.config_ = config;
    ws_.source_ = source;
  }

  Workspace run() {
    std::size_t start = 0, line_no = 0;
    while (start <= text_.size()) {
      std::size_t nl = text_.find('\n', start);
      if (nl == std::string_view::npos) nl = text_.size();
      lines_.emplace_back(text_.substr(start, nl - start));
      start = nl + 1;
      if (nl == text_.size()) break;
    }
    for (cur_ = 0; cur_ < lines_.size(); ++cur_) {
      line_no = cur_ + 1;
      auto toks = tokenize(lines_[cur_], line_no);
      if (toks.empty()) continue;
      Line ln(std::move(toks), line_no, lines_[cur_].size());
      statement(ln);
    }
    if (ws_.sites_.empty()) throw ParseError(1, 1, "document declares no site");
    return std::move(ws_);
  }

 private:
  std::string_view text_;
  std::vector<std::string_view> lines_;
  std::size_t cur_ = 0;
  Workspace ws_;

  SiteEntry& site(const Token& at) {
    if (ws_.sites_.empty()) throw ParseError(at.line, at.column, "no site declared before '" + at.text + "'");
    return ws_.sites_[ws_.active_];
  }

  /// Lines up to the matching `end`, tokenized.
  std::vector<Line> block(const Token& opener) {
    std::vector<Line> out;
    for (++cur_; cur_ < lines_.size(); ++cur_) {
      auto toks = tokenize(lines_[cur_], cur_ + 1);
      if (toks.empty()) continue;
      if (toks.front().text == "end") {
        Line e(std::move(toks), cur_ + 1, lines_[cur_].size());
        e.next("end");
        e.end();
        return out;
      }
      out.emplace_back(std::move(toks), cur_ + 1, lines_[cur_].size());
    }
    throw ParseError(opener.line, opener.column, "block '" + opener.text + "' is not closed by 'end'");
  }

  void check_fresh(const SiteEntry& s, const Token& name) {
    if (std::find(keywords().begin(), keywords().end(), name.text) != keywords().end())
      throw ParseError(name.line, name.column, "'" + name.text + "' is a keyword");
    if (s.object(name.text) || s.arrow(name.text))
      throw ParseError(name.line, name.column, "name '" + name.text + "' is already defined");
  }

  void statement(Line& ln) {
    Token kw = ln.next("a declaration");
    if (kw.text == "site") return site_decl(ln, kw);
    if (kw.text == "use") {
      Token n = ln.next("a site name");
      ln.end();
      for (std::size_t i = 0; i < ws_.sites_.size(); ++i)
        if (ws_.sites_[i].name == n.text) {
          ws_.active_ = i;
          return;
        }
      throw ParseError(n.line, n.column, "unknown site '" + n.text + "'");
    }
    if (kw.text == "object") return object_block(ln, kw);
    if (kw.text == "arrow") return arrow_block(ln, kw);
    if (kw.text == "let") return let_decl(ln, kw);
    if (kw.text == "family") {
      SiteEntry& s = site(kw);
      s.family.clear();
      while (!ln.done()) {
        Token n = ln.next("an object name");
        if (!s.object(n.text)) throw ParseError(n.line, n.column, "unknown object '" + n.text + "'");
        s.family.push_back(n.text);
      }
      if (s.family.empty()) throw ParseError(kw.line, kw.column, "family lists no objects");
      return;
    }
    if (kw.text == "theory") {
      SiteEntry& s = site(kw);
      Token n = ln.next("a theory");
      std::string th = n.text;
      if (ln.accept(":")) th += ":" + ln.next("a topology name").text;
      ln.end();
      if (th != "identity" && th != "bang" && th != "pieces" && th.rfind("topology:", 0) != 0)
        throw ParseError(n.line, n.column, "unknown theory '" + th + "'");
      s.theory = th;
      return;
    }
    throw ParseError(kw.line, kw.column, "unknown declaration '" + kw.text + "'");
  }

  void add_site(const Token& name, SiteRef ref) {
    for (const auto& s : ws_.sites_)
      if (s.name == name.text) throw ParseError(name.line, name.column, "site '" + name.text + "' is already defined");
    SiteEntry e;
    e.name = name.text;
    e.topos = std::make_shared<Topos>(std::move(ref), ws_.config_);
    e.objects = {{"0", e.topos->initial()},
                 {"1", e.topos->terminal()},
                 {"2", e.topos->two()},
                 {"Omega", e.topos->omega().object()}};
    ws_.sites_.push_back(std::move(e));
    ws_.active_ = ws_.sites_.size() - 1;
  }

  void site_decl(Line& ln, const Token& kw) {
    Token name = ln.next("a site name");
    ln.expect("=");
    Token kind = ln.next("'builtin' or 'presentation'");
    if (kind.text == "builtin") {
      Token b = ln.next("a builtin site");
      ln.end();
      const auto& names = builtin_names();
      if (std::find(names.begin(), names.end(), b.text) == names.end())
        throw ParseError(b.line, b.column, "unknown builtin site '" + b.text + "'");
      add_site(name, builtin_site(b.text));
      return;
    }
    if (kind.text != "presentation")
      throw ParseError(kind.line, kind.column, "expected 'builtin' or 'presentation', found '" + kind.text + "'");
    ln.end();
    Presentation p;
    p.name = name.text;
    auto object_index = [&](const Token& t) {
      auto it = std::find(p.objects.begin(), p.objects.end(), t.text);
      if (it == p.objects.end()) throw ParseError(t.line, t.column, "unknown object '" + t.text + "'");
      return static_cast<Index>(it - p.objects.begin());
    };
    auto word = [&](Line& l, Index* object) {
      std::vector<Index> w;
      if (l.accept("id")) {
        l.expect("(");
        *object = object_index(l.next("an object"));
        l.expect(")");
        return w;
      }
      while (!l.done() && l.peek().text != "=") {
        Token g = l.next("a generator");
        auto it = std::find_if(p.generators.begin(), p.generators.end(),
                               [&](const auto& gen) { return gen.name == g.text; });
        if (it == p.generators.end()) throw ParseError(g.line, g.column, "unknown generator '" + g.text + "'");
        if (!w.empty() && p.generators[w.back()].cod != it->dom)
          throw ParseError(g.line, g.column, "generator '" + g.text + "' does not compose with the previous one");
        w.push_back(static_cast<Index>(it - p.generators.begin()));
      }
      if (w.empty()) l.fail_end("expected a word");
      return w;
    };
    for (Line& l : block(kind)) {
      Token k = l.next("a presentation line");
      if (k.text == "objects") {
        while (!l.done()) {
          Token o = l.next("an object");
          if (std::find(p.objects.begin(), p.objects.end(), o.text) != p.objects.end())
            throw ParseError(o.line, o.column, "object '" + o.text + "' is already declared");
          p.objects.push_back(o.text);
        }
      } else if (k.text == "generator") {
        Token g = l.next("a generator name");
        l.expect(":");
        Index d = object_index(l.next("a domain"));
        l.expect("->");
        Index c = object_index(l.next("a codomain"));
        l.end();
        p.generators.push_back({g.text, d, c});
      } else if (k.text == "relation") {
        Presentation::Relation r;
        Index lo = kNone, ro = kNone;
        r.lhs = word(l, &lo);
        l.expect("=");
        r.rhs = word(l, &ro);
        l.end();
        r.object = lo != kNone ? lo : ro;
        p.relations.push_back(std::move(r));
      } else {
        throw ParseError(k.line, k.column, "expected 'objects', 'generator' or 'relation', found '" + k.text + "'");
      }
    }
    if (p.objects.empty()) throw ParseError(kw.line, kw.column, "presentation '" + name.text + "' has no objects");
    try {
      add_site(name, std::make_shared<const FinCategory>(close_presentation(p)));
    } catch (const SemanticError& e) {
      throw SemanticError("line " + std::to_string(kw.line) + ": site '" + name.text + "': " + e.what());
    } catch (const ShapeError& e) {
      throw SemanticError("line " + std::to_string(kw.line) + ": site '" + name.text + "': " + e.what());
    }
  }

  Index stage_index(const SiteEntry& s, const Token& t) {
    auto o = s.topos->category().find_object(t.text);
    if (!o) throw ParseError(t.line, t.column, "unknown stage '" + t.text + "' of site '" + s.name + "'");
    return *o;
  }

  std::vector<Elem> values(Line& l) {
    std::vector<Elem> v;
    while (!l.done()) v.push_back(static_cast<Elem>(to_uint(l.next("a value"))));
    return v;
  }

  void object_block(Line& ln, const Token& kw) {
    SiteEntry& s = site(kw);
    Token name = ln.next("an object name");
    ln.end();
    check_fresh(s, name);
    const FinCategory& cat = s.topos->category();
    std::vector<std::optional<std::size_t>> sizes(cat.object_count());
    std::vector<std::optional<Function>> action(cat.morphism_count());
    for (Line& l : block(kw)) {
      Token k = l.next("'stage' or 'act'");
      if (k.text == "stage") {
        Token st = l.next("a stage");
        Index c = stage_index(s, st);
        sizes[c] = to_uint(l.next("a size"));
        l.end();
      } else if (k.text == "act") {
        Token m = l.next("a morphism");
        auto f = cat.find_morphism(m.text);
        if (!f) throw ParseError(m.line, m.column, "unknown morphism '" + m.text + "'");
        l.expect("=");
        action[*f] = values(l);
      } else {
        throw ParseError(k.line, k.column, "expected 'stage' or 'act', found '" + k.text + "'");
      }
    }
    for (Index c = 0; c < cat.object_count(); ++c)
      if (!sizes[c])
        throw SemanticError("line " + std::to_string(kw.line) + ": object '" + name.text + "': stage " +
                            cat.object_name(c) + " has no size");
    for (Index c = 0; c < cat.object_count(); ++c) {
      Function id(*sizes[c]);
      for (Elem e = 0; e < id.size(); ++e) id[e] = e;
      action[cat.identity(c)] = id;
    }
    // Derive missing tables from composites of given ones.
    bool progress = true;
    while (progress) {
      progress = false;
      for (Index h = 0; h < cat.morphism_count(); ++h) {
        if (action[h]) continue;
        for (Index f = 0; f < cat.morphism_count() && !action[h]; ++f)
          for (Index g = 0; g < cat.morphism_count(); ++g) {
            if (!action[f] || !action[g] || cat.is_identity(f) || cat.is_identity(g)) continue;
            if (cat.dom(g) != cat.cod(f) || cat.compose(g, f) != h) continue;
            const Function& af = *action[f];
            const Function& ag = *action[g];
            if (ag.size() != *sizes[cat.cod(g)] || af.size() != *sizes[cat.cod(f)]) continue;
            Function ah(ag.size());
            bool in_range = true;
            for (Elem e = 0; e < ag.size(); ++e) {
              if (ag[e] >= af.size()) {
                in_range = false;
                break;
              }
              ah[e] = af[ag[e]];
            }
            if (!in_range) continue;
            action[h] = std::move(ah);
            progress = true;
            break;
          }
      }
    }
    std::vector<std::size_t> sz;
    std::vector<Function> act;
    for (const auto& v : sizes) sz.push_back(*v);
    for (Index f = 0; f < cat.morphism_count(); ++f) {
      if (!action[f])
        throw SemanticError("line " + std::to_string(kw.line) + ": object '" + name.text +
                            "': no restriction table for " + cat.morphism(f).name);
      if (action[f]->size() != sz[cat.cod(f)])
        throw SemanticError("line " + std::to_string(kw.line) + ": object '" + name.text + "': table for " +
                            cat.morphism(f).name + " has " + std::to_string(action[f]->size()) +
                            " entries, stage " + cat.object_name(cat.cod(f)) + " has " +
                            std::to_string(sz[cat.cod(f)]));
      for (Elem v : *action[f])
        if (v >= sz[cat.dom(f)])
          throw SemanticError("line " + std::to_string(kw.line) + ": object '" + name.text + "': table for " +
                              cat.morphism(f).name + " has value " + std::to_string(v) + " outside stage " +
                              cat.object_name(cat.dom(f)));
      act.push_back(*action[f]);
    }
    try {
      s.objects.emplace_back(name.text, Presheaf::checked(s.topos->site(), sz, act));
    } catch (const SemanticError& e) {
      throw SemanticError("line " + std::to_string(kw.line) + ": object '" + name.text + "': " + e.what());
    }
  }

  const Presheaf& object_ref(const SiteEntry& s, const Token& t) {
    const Presheaf* p = s.object(t.text);
    if (!p) throw ParseError(t.line, t.column, "unknown object '" + t.text + "'");
    return *p;
  }
  const PresheafMap& arrow_ref(const SiteEntry& s, const Token& t) {
    const PresheafMap* p = s.arrow(t.text);
    if (!p) throw ParseError(t.line, t.column, "unknown arrow '" + t.text + "'");
    return *p;
  }

  void arrow_block(Line& ln, const Token& kw) {
    SiteEntry& s = site(kw);
    Token name = ln.next("an arrow name");
    check_fresh(s, name);
    ln.expect(":");
    const Presheaf dom = object_ref(s, ln.next("a domain"));
    ln.expect("->");
    const Presheaf cod = object_ref(s, ln.next("a codomain"));
    ln.end();
    const FinCategory& cat = s.topos->category();
    std::vector<std::optional<Function>> comp(cat.object_count());
    for (Line& l : block(kw)) {
      l.expect("at");
      Token st = l.next("a stage");
      Index c = stage_index(s, st);
      l.expect("=");
      comp[c] = values(l);
    }
    std::vector<Function> cs;
    for (Index c = 0; c < cat.object_count(); ++c) {
      if (!comp[c]) {
        if (dom.size(c) != 0)
          throw SemanticError("line " + std::to_string(kw.line) + ": arrow '" + name.text + "': stage " +
                              cat.object_name(c) + " is not given");
        comp[c] = Function{};
      }
      if (comp[c]->size() != dom.size(c))
        throw SemanticError("line " + std::to_string(kw.line) + ": arrow '" + name.text + "': stage " +
                            cat.object_name(c) + " has " + std::to_string(comp[c]->size()) + " values, domain has " +
                            std::to_string(dom.size(c)));
      for (Elem v : *comp[c])
        if (v >= cod.size(c))
          throw SemanticError("line " + std::to_string(kw.line) + ": arrow '" + name.text + "': value " +
                              std::to_string(v) + " outside stage " + cat.object_name(c) + " of the codomain");
      cs.push_back(*comp[c]);
    }
    try {
      s.arrows.emplace_back(name.text, PresheafMap::checked(dom, cod, cs));
    } catch (const SemanticError& e) {
      throw SemanticError("line " + std::to_string(kw.line) + ": arrow '" + name.text + "': " + e.what());
    }
  }

  void let_decl(Line& ln, const Token& kw) {
    SiteEntry& s = site(kw);
    Token name = ln.next("a name");
    check_fresh(s, name);
    ln.expect("=");
    Token ctor = ln.next("a constructor");
    ln.expect("(");
    std::vector<Token> args;
    if (!ln.accept(")")) {
      while (true) {
        args.push_back(ln.next("an argument"));
        if (ln.accept(")")) break;
        ln.expect(",");
      }
    }
    ln.end();
    try {
      construct(s, name, ctor, args);
    } catch (const ParseError&) {
      throw;
    } catch (const SemanticError& e) {
      throw SemanticError("line " + std::to_string(kw.line) + ": " + ctor.text + ": " + e.what());
    } catch (const ShapeError& e) {
      throw SemanticError("line " + std::to_string(kw.line) + ": " + ctor.text + ": " + e.what());
    } catch (const PreconditionError& e) {
      throw SemanticError("line " + std::to_string(kw.line) + ": " + ctor.text + ": " + e.what());
    }
  }

  void construct(SiteEntry& s, const Token& name, const Token& ctor, const std::vector<Token>& a) {
    const Topos& t = *s.topos;
    auto arity = [&](std::size_t n) {
      if (a.size() != n)
        throw ParseError(ctor.line, ctor.column,
                         ctor.text + " takes " + std::to_string(n) + " argument" + (n == 1 ? "" : "s") + ", " +
                             std::to_string(a.size()) + " given");
    };
    auto obj = [&](std::size_t i) { return object_ref(s, a[i]); };
    auto arr = [&](std::size_t i) { return arrow_ref(s, a[i]); };
    auto num = [&](std::size_t i) { return to_uint(a[i]); };
    auto topology = [&](const Token& tk) {
      if (tk.text == "notnot") return double_negation(t);
      if (tk.text == "identity") return identity_topology(t);
      for (auto& j : enumerate_topologies(t))
        if (j.name == tk.text) return j;
      throw ParseError(tk.line, tk.column, "unknown topology '" + tk.text + "'");
    };
    auto put_object = [&](Presheaf p) { s.objects.emplace_back(name.text, std::move(p)); };
    auto put_arrow = [&](PresheafMap m) { s.arrows.emplace_back(name.text, std::move(m)); };
    const std::string& c = ctor.text;

    if (c == "terminal") { arity(0); return put_object(t.terminal()); }
    if (c == "initial") { arity(0); return put_object(t.initial()); }
    if (c == "omega") { arity(0); return put_object(t.omega().object()); }
    if (c == "discrete") { arity(1); return put_object(t.discrete(num(0))); }
    if (c == "codiscrete") { arity(1); return put_object(codiscrete(t, num(0))); }
    if (c == "yoneda") { arity(1); return put_object(t.yoneda(stage_index(s, a[0]))); }
    if (c == "product") { arity(2); return put_object(product(obj(0), obj(1)).object); }
    if (c == "coproduct") { arity(2); return put_object(coproduct(obj(0), obj(1)).object); }
    if (c == "exponential") { arity(2); return put_object(t.exponential(obj(1), obj(0))->object()); }
    if (c == "pi0") { arity(1); return put_object(pi0(obj(0)).p.cod()); }
    if (c == "points") { arity(1); return put_object(points(t, obj(0)).gamma.dom()); }
    if (c == "sheafify") { arity(1); return put_object(sheafify(t, double_negation(t), obj(0)).object); }
    if (c == "quotient") { arity(2); return put_object(quotient(t, topology(a[1]), obj(0)).object); }

    if (c == "identity") { arity(1); return put_arrow(identity_map(obj(0))); }
    if (c == "compose") { arity(2); return put_arrow(compose(arr(0), arr(1))); }
    if (c == "point") {
      arity(2);
      auto pts = t.points(obj(0));
      const auto k = num(1);
      if (k >= pts.size())
        throw ParseError(a[1].line, a[1].column,
                         "object '" + a[0].text + "' has " + std::to_string(pts.size()) + " points");
      return put_arrow(pts[k]);
    }
    if (c == "bang") { arity(1); return put_arrow(bang(obj(0))); }
    if (c == "constant") { arity(2); return put_arrow(constant_map(obj(0), arr(1))); }
    if (c == "fst") { arity(2); return put_arrow(product(obj(0), obj(1)).p1); }
    if (c == "snd") { arity(2); return put_arrow(product(obj(0), obj(1)).p2); }
    if (c == "pair") {
      arity(2);
      return put_arrow(pair_maps(product(arr(0).cod(), arr(1).cod()), arr(0), arr(1)));
    }
    if (c == "inl") { arity(2); return put_arrow(coproduct(obj(0), obj(1)).i1); }
    if (c == "inr") { arity(2); return put_arrow(coproduct(obj(0), obj(1)).i2); }
    if (c == "copair") {
      arity(2);
      return put_arrow(copair_maps(coproduct(arr(0).dom(), arr(1).dom()), arr(0), arr(1)));
    }
    if (c == "name") { arity(1); return put_arrow(htopos::name(t, arr(0))); }
    if (c == "unit") { arity(1); return put_arrow(pi0(obj(0)).p); }
    if (c == "sheaf_unit") { arity(1); return put_arrow(sheafify(t, double_negation(t), obj(0)).unit); }
    if (c == "sigma") { arity(2); return put_arrow(sigma(t, obj(0), obj(1))); }
    if (c == "eval_at") { arity(2); return put_arrow(ev_at(t, arr(0), obj(1))); }
    if (c == "top") { arity(0); return put_arrow(t.omega().top_map()); }
    if (c == "bottom") { arity(0); return put_arrow(t.omega().bottom_map()); }
    if (c == "meet") { arity(0); return put_arrow(t.omega().meet_map()); }
    if (c == "join") { arity(0); return put_arrow(t.omega().join_map()); }
    if (c == "implies") { arity(0); return put_arrow(t.omega().implies_map()); }
    if (c == "neg") { arity(0); return put_arrow(t.omega().neg_map()); }
    throw ParseError(ctor.line, ctor.column, "unknown constructor '" + c + "'");
  }
};

Workspace Workspace::parse(std::string_view text, const std::string& source, const Config& config) {
  return WorkspaceParser(text, source, config).run();
}

Workspace Workspace::builtin(const std::string& site, const Config& config) {
  const auto& names = builtin_names();
  if (std::find(names.begin(), names.end(), site) == names.end())
    throw UnknownNameError("unknown builtin site '" + site + "'");
  return parse("site " + site + " = builtin " + site + "\n", "<builtin>", config);
}

}  // namespace htopos
