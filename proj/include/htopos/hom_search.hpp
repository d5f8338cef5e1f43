// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "htopos/presheaf.hpp"

namespace htopos {

/// Default cap on value assignments tried by a single search.
inline constexpr std::uint64_t kDefaultBudget = 1'000'000;

/// Backtracking search for natural transformations A → B.
///
/// There is one variable per element of A (stage-major numbering, see
/// Presheaf::offset) whose domain is a bitset over the matching stage of B.
/// Naturality is a functional constraint val(A(f)a) = B(f)(val(a)) between
/// two variables and is kept arc-consistent after every assignment.
///
/// Variables are assigned in index order and values in ascending order, so
/// the solutions come out sorted lexicographically by their flattened
/// component tables. Every value tried counts against the budget; running
/// out raises ResourceError carrying `context`.
class HomSearch {
 public:
  HomSearch(Presheaf a, Presheaf b, std::uint64_t budget = kDefaultBudget,
            std::string context = {});

  const Presheaf& source() const { return a_; }
  const Presheaf& target() const { return b_; }
  std::size_t variable(Index c, Elem x) const { return a_.offset(c) + x; }
  std::size_t variable_count() const { return a_.total_size(); }

  /// Restricts element x of A(c) to map to `value`.
  void pin(Index c, Elem x, Elem value);
  /// Restricts element x of A(c) to values with allowed[value] set.
  void restrict(Index c, Elem x, const std::vector<bool>& allowed);

  /// Flat solution: value of variable i at position i.
  using Visitor = std::function<bool(const std::vector<Elem>&)>;

  /// Calls `visit` on every solution in lexicographic order until it
  /// returns false. Returns the number of solutions visited.
  std::uint64_t for_each(const Visitor& visit);
  std::uint64_t count();
  std::vector<PresheafMap> all();
  std::optional<PresheafMap> first();
  bool exists() { return first().has_value(); }

  /// Distinct assignments of `vars` that extend to a full solution, in
  /// lexicographic order of the projected values. `want` (optional) is asked
  /// before the extension check and may skip a projection.
  std::uint64_t for_each_projection(const std::vector<std::size_t>& vars, const Visitor& visit,
                                    const Visitor& want = {});

  std::uint64_t expansions() const noexcept { return expansions_; }

  PresheafMap to_map(const std::vector<Elem>& flat) const;

 private:
  struct Arc {
    std::size_t from;
    std::size_t to;
    Index f;
  };
  using Domains = std::vector<std::uint64_t>;

  bool propagate(Domains& d, std::vector<std::size_t>& queue) const;
  bool assign(Domains& d, std::size_t var, Elem value) const;
  std::uint64_t* dom(Domains& d, std::size_t var) const { return d.data() + word_off_[var]; }
  const std::uint64_t* dom(const Domains& d, std::size_t var) const {
    return d.data() + word_off_[var];
  }
  bool singleton(const Domains& d, std::size_t var, Elem* value) const;
  void tick();
  bool prepare();

  Presheaf a_;
  Presheaf b_;
  std::uint64_t budget_;
  std::string context_;
  std::uint64_t expansions_ = 0;

  std::vector<Index> stage_of_;
  std::vector<std::size_t> word_off_;
  std::vector<std::size_t> words_;
  std::vector<Arc> arcs_;
  std::vector<std::vector<std::size_t>> out_;  // arc ids by source
  std::vector<std::vector<std::size_t>> in_;   // arc ids by target
  Domains initial_;
  bool consistent_ = true;
  bool prepared_ = false;
};

/// Hom(A, B) in lexicographic order.
std::vector<PresheafMap> hom_set(const Presheaf& a, const Presheaf& b,
                                 std::uint64_t budget = kDefaultBudget);
/// |Hom(A, B)|.
std::uint64_t hom_count(const Presheaf& a, const Presheaf& b,
                        std::uint64_t budget = kDefaultBudget);
/// Maps 1 → X; equivalently the elements of X at the terminal stage.
std::vector<PresheafMap> global_elements(const Presheaf& x, std::uint64_t budget = kDefaultBudget);

/// Flattened component tables, stage-major; the key used for canonical
/// ordering of maps.
std::vector<Elem> flatten(const PresheafMap& f);

}  // namespace htopos
