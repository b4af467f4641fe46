#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "cellsheaf/errors.hpp"

namespace cellsheaf {

using CellId = std::string;
using Index = std::size_t;

struct ElementSpec {
  CellId id;
  int dim = 0;

  friend bool operator==(const ElementSpec&, const ElementSpec&) = default;
};

/// Finite poset given by its covering relation and a dimension grading.
///
/// Elements keep their input order as indices. Ties elsewhere in the library are
/// broken by comparing ids lexicographically (see id_less).
class GradedPoset {
 public:
  GradedPoset() = default;

  static GradedPoset build(std::vector<ElementSpec> elements, const std::vector<std::pair<CellId, CellId>>& covers) {
    GradedPoset poset;
    poset.elements_ = std::move(elements);
    const std::size_t n = poset.elements_.size();
    poset.index_.reserve(n);
    for (Index i = 0; i < n; ++i) {
      const auto& e = poset.elements_[i];
      if (e.dim < 0) throw ValidationError("element '" + e.id + "' has negative dimension");
      if (!poset.index_.emplace(e.id, i).second) throw ValidationError("duplicate element id '" + e.id + "'");
    }
    poset.up_.assign(n, {});
    poset.down_.assign(n, {});
    for (const auto& [from, to] : covers) {
      auto x = poset.find(from);
      auto y = poset.find(to);
      if (!x) throw DanglingId("cover references unknown element '" + from + "'");
      if (!y) throw DanglingId("cover references unknown element '" + to + "'");
      if (poset.dim(*y) != poset.dim(*x) + 1) {
        throw NonGradedCover("cover (" + from + ", " + to + ") joins dimensions " + std::to_string(poset.dim(*x)) +
                             " and " + std::to_string(poset.dim(*y)));
      }
      if (std::find(poset.up_[*x].begin(), poset.up_[*x].end(), *y) != poset.up_[*x].end()) {
        throw ValidationError("duplicate cover (" + from + ", " + to + ")");
      }
      poset.up_[*x].push_back(*y);
      poset.down_[*y].push_back(*x);
    }
    return poset;
  }

  std::size_t size() const noexcept { return elements_.size(); }
  bool empty() const noexcept { return elements_.empty(); }

  const ElementSpec& element(Index i) const { return elements_.at(i); }
  const std::vector<ElementSpec>& elements() const noexcept { return elements_; }
  const CellId& id(Index i) const { return elements_.at(i).id; }
  int dim(Index i) const { return elements_.at(i).dim; }

  std::optional<Index> find(const CellId& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  Index at(const CellId& id) const {
    auto i = find(id);
    if (!i) throw UnknownCell("unknown element '" + id + "'");
    return *i;
  }

  /// x_+ : elements covering x.
  const std::vector<Index>& up(Index x) const { return up_.at(x); }
  /// x_- : elements covered by x.
  const std::vector<Index>& down(Index x) const { return down_.at(x); }

  bool covers(Index x, Index y) const {
    const auto& u = up_.at(x);
    return std::find(u.begin(), u.end(), y) != u.end();
  }

  std::vector<std::pair<Index, Index>> cover_pairs() const {
    std::vector<std::pair<Index, Index>> out;
    for (Index x = 0; x < size(); ++x)
      for (Index y : up_[x]) out.emplace_back(x, y);
    return out;
  }

  std::vector<std::pair<CellId, CellId>> cover_ids() const {
    std::vector<std::pair<CellId, CellId>> out;
    for (auto [x, y] : cover_pairs()) out.emplace_back(id(x), id(y));
    return out;
  }

  std::size_t cover_count() const {
    std::size_t total = 0;
    for (const auto& u : up_) total += u.size();
    return total;
  }

  /// The parameter p = max |x_+|.
  std::size_t max_up_degree() const {
    std::size_t p = 0;
    for (const auto& u : up_) p = std::max(p, u.size());
    return p;
  }

  /// Largest element dimension, or -1 when empty.
  int max_dim() const {
    int d = -1;
    for (const auto& e : elements_) d = std::max(d, e.dim);
    return d;
  }

  std::vector<Index> elements_of_dim(int n) const {
    std::vector<Index> out;
    for (Index i = 0; i < size(); ++i) {
      if (elements_[i].dim == n) out.push_back(i);
    }
    return out;
  }

  bool id_less(Index a, Index b) const { return id(a) < id(b); }

 private:
  std::vector<ElementSpec> elements_;
  std::unordered_map<CellId, Index> index_;
  std::vector<std::vector<Index>> up_;
  std::vector<std::vector<Index>> down_;
};

inline GradedPoset build_poset(std::vector<ElementSpec> elements,
                               const std::vector<std::pair<CellId, CellId>>& covers) {
  return GradedPoset::build(std::move(elements), covers);
}

}  // namespace cellsheaf
