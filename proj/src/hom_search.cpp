// SPDX-License-Identifier: Apache-2.0

#include "htopos/hom_search.hpp"

#include <algorithm>
#include <bit>

#include "htopos/error.hpp"

namespace htopos {

namespace {

inline bool test_bit(const std::uint64_t* w, Elem i) { return (w[i >> 6] >> (i & 63)) & 1U; }
inline void set_bit(std::uint64_t* w, Elem i) { w[i >> 6] |= std::uint64_t{1} << (i & 63); }

template <typename F>
inline void each_bit(const std::uint64_t* w, std::size_t words, F&& fn) {
  for (std::size_t k = 0; k < words; ++k) {
    std::uint64_t v = w[k];
    while (v) {
      int b = std::countr_zero(v);
      fn(static_cast<Elem>(k * 64 + b));
      v &= v - 1;
    }
  }
}

}  // namespace

HomSearch::HomSearch(Presheaf a, Presheaf b, std::uint64_t budget, std::string context)
    : a_(std::move(a)), b_(std::move(b)), budget_(budget), context_(std::move(context)) {
  require_same_site(a_, b_, "hom search");
  const auto& c = a_.base();
  const std::size_t n = a_.total_size();
  stage_of_.resize(n);
  word_off_.resize(n);
  words_.resize(n);
  std::size_t off = 0;
  for (Index s = 0; s < c.object_count(); ++s) {
    std::size_t w = (b_.size(s) + 63) / 64;
    for (Elem x = 0; x < a_.size(s); ++x) {
      std::size_t v = a_.offset(s) + x;
      stage_of_[v] = s;
      word_off_[v] = off;
      words_[v] = w;
      off += w;
    }
  }
  initial_.assign(off, 0);
  for (std::size_t v = 0; v < n; ++v) {
    std::size_t m = b_.size(stage_of_[v]);
    for (Elem i = 0; i < m; ++i) set_bit(dom(initial_, v), i);
    if (m == 0) consistent_ = false;
  }
  out_.resize(n);
  in_.resize(n);
  for (Index f = 0; f < c.morphism_count(); ++f) {
    if (c.is_identity(f)) continue;
    Index cs = c.cod(f), ds = c.dom(f);
    for (Elem x = 0; x < a_.size(cs); ++x) {
      std::size_t u = a_.offset(cs) + x;
      std::size_t v = a_.offset(ds) + a_.act(f, x);
      arcs_.push_back({u, v, f});
      out_[u].push_back(arcs_.size() - 1);
      in_[v].push_back(arcs_.size() - 1);
    }
  }
}

void HomSearch::pin(Index c, Elem x, Elem value) {
  if (c >= a_.base().object_count() || x >= a_.size(c)) throw ShapeError("pin: variable out of range");
  std::size_t v = variable(c, x);
  if (value >= b_.size(c)) throw ShapeError("pin: value out of range");
  bool had = test_bit(dom(initial_, v), value);
  std::fill_n(dom(initial_, v), words_[v], 0);
  if (had)
    set_bit(dom(initial_, v), value);
  else
    consistent_ = false;
  prepared_ = false;
}

void HomSearch::restrict(Index c, Elem x, const std::vector<bool>& allowed) {
  std::size_t v = variable(c, x);
  std::uint64_t* w = dom(initial_, v);
  bool any = false;
  for (Elem i = 0; i < b_.size(c); ++i) {
    if (test_bit(w, i) && !(i < allowed.size() && allowed[i])) w[i >> 6] &= ~(std::uint64_t{1} << (i & 63));
    any = any || test_bit(w, i);
  }
  if (!any) consistent_ = false;
  prepared_ = false;
}

bool HomSearch::singleton(const Domains& d, std::size_t var, Elem* value) const {
  const std::uint64_t* w = dom(d, var);
  int seen = 0;
  for (std::size_t k = 0; k < words_[var]; ++k) {
    if (!w[k]) continue;
    if (std::popcount(w[k]) > 1 || ++seen > 1) return false;
    *value = static_cast<Elem>(k * 64 + std::countr_zero(w[k]));
  }
  return seen == 1;
}

bool HomSearch::propagate(Domains& d, std::vector<std::size_t>& queue) const {
  std::vector<std::uint64_t> scratch;
  std::vector<char> queued(variable_count(), 0);
  for (auto v : queue) queued[v] = 1;
  while (!queue.empty()) {
    std::size_t z = queue.back();
    queue.pop_back();
    queued[z] = 0;
    // z → v: D(v) ⊆ B(f)(D(z))
    for (std::size_t id : out_[z]) {
      const Arc& arc = arcs_[id];
      const auto& fn = b_.action(arc.f);
      std::size_t wv = words_[arc.to];
      scratch.assign(wv, 0);
      each_bit(dom(d, z), words_[z], [&](Elem b) { set_bit(scratch.data(), fn[b]); });
      std::uint64_t* t = dom(d, arc.to);
      bool changed = false, any = false;
      for (std::size_t k = 0; k < wv; ++k) {
        std::uint64_t nv = t[k] & scratch[k];
        changed = changed || nv != t[k];
        any = any || nv != 0;
        t[k] = nv;
      }
      if (!any) return false;
      if (changed && !queued[arc.to]) {
        queued[arc.to] = 1;
        queue.push_back(arc.to);
      }
    }
    // w → z: D(w) ⊆ B(f)⁻¹(D(z))
    for (std::size_t id : in_[z]) {
      const Arc& arc = arcs_[id];
      const auto& fn = b_.action(arc.f);
      std::uint64_t* s = dom(d, arc.from);
      const std::uint64_t* t = dom(d, z);
      bool changed = false, any = false;
      each_bit(s, words_[arc.from], [&](Elem b) {
        if (!test_bit(t, fn[b])) {
          s[b >> 6] &= ~(std::uint64_t{1} << (b & 63));
          changed = true;
        }
      });
      for (std::size_t k = 0; k < words_[arc.from] && !any; ++k) any = s[k] != 0;
      if (!any) return false;
      if (changed && !queued[arc.from]) {
        queued[arc.from] = 1;
        queue.push_back(arc.from);
      }
    }
  }
  return true;
}

bool HomSearch::assign(Domains& d, std::size_t var, Elem value) const {
  std::uint64_t* w = dom(d, var);
  std::fill_n(w, words_[var], 0);
  set_bit(w, value);
  std::vector<std::size_t> q{var};
  return propagate(d, q);
}

void HomSearch::tick() {
  if (++expansions_ > budget_)
    throw ResourceError("enumeration budget of " + std::to_string(budget_) +
                        " expansions exceeded" + (context_.empty() ? "" : " in " + context_));
}

bool HomSearch::prepare() {
  if (!consistent_) return false;
  if (!prepared_) {
    std::vector<std::size_t> q(variable_count());
    for (std::size_t v = 0; v < q.size(); ++v) q[v] = v;
    if (!propagate(initial_, q)) {
      consistent_ = false;
      return false;
    }
    prepared_ = true;
  }
  return true;
}

std::uint64_t HomSearch::for_each(const Visitor& visit) {
  if (!prepare()) return 0;
  const std::size_t n = variable_count();
  std::vector<Elem> sol(n);
  std::uint64_t found = 0;
  bool stop = false;
  std::function<void(std::size_t, const Domains&)> rec = [&](std::size_t i, const Domains& d) {
    while (i < n) {
      Elem v;
      if (!singleton(d, i, &v)) break;
      sol[i++] = v;
    }
    if (i == n) {
      ++found;
      if (!visit(sol)) stop = true;
      return;
    }
    std::vector<Elem> values;
    each_bit(dom(d, i), words_[i], [&](Elem b) { values.push_back(b); });
    for (Elem b : values) {
      if (stop) return;
      tick();
      Domains next = d;
      if (!assign(next, i, b)) continue;
      sol[i] = b;
      rec(i + 1, next);
    }
  };
  rec(0, initial_);
  return found;
}

std::uint64_t HomSearch::count() {
  return for_each([](const std::vector<Elem>&) { return true; });
}

std::vector<PresheafMap> HomSearch::all() {
  std::vector<PresheafMap> out;
  for_each([&](const std::vector<Elem>& s) {
    out.push_back(to_map(s));
    return true;
  });
  return out;
}

std::optional<PresheafMap> HomSearch::first() {
  std::optional<PresheafMap> out;
  for_each([&](const std::vector<Elem>& s) {
    out = to_map(s);
    return false;
  });
  return out;
}

std::uint64_t HomSearch::for_each_projection(const std::vector<std::size_t>& vars,
                                             const Visitor& visit, const Visitor& want) {
  if (!prepare()) return 0;
  const std::size_t n = variable_count();
  std::vector<std::size_t> order = vars;
  std::vector<char> in_proj(n, 0);
  for (auto v : vars) {
    if (v >= n) throw ShapeError("projection variable out of range");
    in_proj[v] = 1;
  }
  for (std::size_t v = 0; v < n; ++v)
    if (!in_proj[v]) order.push_back(v);
  const std::size_t k = vars.size();
  std::vector<Elem> proj(k);
  std::uint64_t found = 0;
  bool stop = false;

  // Existence of a completion from position i.
  std::function<bool(std::size_t, const Domains&)> extend = [&](std::size_t i,
                                                               const Domains& d) -> bool {
    while (i < n) {
      Elem v;
      if (!singleton(d, order[i], &v)) break;
      ++i;
    }
    if (i == n) return true;
    std::size_t var = order[i];
    std::vector<Elem> values;
    each_bit(dom(d, var), words_[var], [&](Elem b) { values.push_back(b); });
    for (Elem b : values) {
      tick();
      Domains next = d;
      if (assign(next, var, b) && extend(i + 1, next)) return true;
    }
    return false;
  };

  std::function<void(std::size_t, const Domains&)> rec = [&](std::size_t i, const Domains& d) {
    if (stop) return;
    if (i == k) {
      if (want && !want(proj)) return;
      if (!extend(k, d)) return;
      ++found;
      if (!visit(proj)) stop = true;
      return;
    }
    std::size_t var = order[i];
    std::vector<Elem> values;
    each_bit(dom(d, var), words_[var], [&](Elem b) { values.push_back(b); });
    for (Elem b : values) {
      if (stop) return;
      tick();
      Domains next = d;
      if (!assign(next, var, b)) continue;
      proj[i] = b;
      rec(i + 1, next);
    }
  };
  rec(0, initial_);
  return found;
}

PresheafMap HomSearch::to_map(const std::vector<Elem>& flat) const {
  std::vector<Function> comp(a_.base().object_count());
  for (Index c = 0; c < comp.size(); ++c)
    comp[c].assign(flat.begin() + static_cast<std::ptrdiff_t>(a_.offset(c)),
                   flat.begin() + static_cast<std::ptrdiff_t>(a_.offset(c) + a_.size(c)));
  return PresheafMap(a_, b_, std::move(comp));
}

std::vector<PresheafMap> hom_set(const Presheaf& a, const Presheaf& b, std::uint64_t budget) {
  return HomSearch(a, b, budget, "Hom").all();
}

std::uint64_t hom_count(const Presheaf& a, const Presheaf& b, std::uint64_t budget) {
  return HomSearch(a, b, budget, "Hom").count();
}

std::vector<PresheafMap> global_elements(const Presheaf& x, std::uint64_t budget) {
  return hom_set(terminal(x.base_ref()), x, budget);
}

std::vector<Elem> flatten(const PresheafMap& f) {
  std::vector<Elem> out;
  out.reserve(f.dom().total_size());
  for (const auto& c : f.components()) out.insert(out.end(), c.begin(), c.end());
  return out;
}

}  // namespace htopos
