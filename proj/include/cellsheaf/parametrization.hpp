#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include "cellsheaf/errors.hpp"
#include "cellsheaf/matrix.hpp"
#include "cellsheaf/poset.hpp"

namespace cellsheaf {

namespace detail {
template <Field F>
struct Reducer;
}

/// A cochain complex of free modules parametrized over a graded poset: a rank F(x) for
/// every element and a matrix F_xy (rank y x rank x) for every covering pair x < y.
/// Maps are zero for non-covering pairs.
///
/// Indices are stable for the lifetime of the object. Reduction (see morse.hpp) removes
/// elements by marking them dead; everything else here is read-only.
template <Field F>
class Parametrization {
 public:
  using matrix_type = Matrix<F>;

  struct Cell {
    CellId id;
    int dim = 0;
    std::size_t rank = 0;

    friend bool operator==(const Cell&, const Cell&) = default;
  };

  struct CoverMap {
    CellId from;
    CellId to;
    Matrix<F> map;
  };

  explicit Parametrization(F field) : field_(std::move(field)) {}

  static Parametrization build(F field, std::vector<Cell> cells, std::vector<CoverMap> covers,
                               std::optional<int> declared_top_dim = std::nullopt) {
    Parametrization param(std::move(field));
    const std::size_t n = cells.size();
    param.cells_ = std::move(cells);
    param.alive_.assign(n, true);
    param.up_.assign(n, {});
    param.down_.assign(n, {});
    param.top_dim_ = declared_top_dim.value_or(-1);
    for (Index i = 0; i < n; ++i) {
      const auto& c = param.cells_[i];
      if (c.dim < 0) throw ValidationError("element '" + c.id + "' has negative dimension");
      if (!param.index_.emplace(c.id, i).second) throw ValidationError("duplicate element id '" + c.id + "'");
      param.top_dim_ = std::max(param.top_dim_, c.dim);
    }
    for (auto& cover : covers) {
      const Index x = param.lookup(cover.from);
      const Index y = param.lookup(cover.to);
      if (param.cells_[y].dim != param.cells_[x].dim + 1) {
        throw NonGradedCover("cover (" + cover.from + ", " + cover.to + ") joins dimensions " +
                             std::to_string(param.cells_[x].dim) + " and " + std::to_string(param.cells_[y].dim));
      }
      if (!(cover.map.field() == param.field_)) throw FieldMismatch("cover map over a different field");
      if (cover.map.rows() != param.cells_[y].rank || cover.map.cols() != param.cells_[x].rank) {
        throw ValidationError("map on (" + cover.from + ", " + cover.to + ") has shape " +
                              std::to_string(cover.map.rows()) + "x" + std::to_string(cover.map.cols()) +
                              ", expected " + std::to_string(param.cells_[y].rank) + "x" +
                              std::to_string(param.cells_[x].rank));
      }
      if (param.up_[x].count(y)) throw ValidationError("duplicate cover (" + cover.from + ", " + cover.to + ")");
      param.stored_entries_ += cover.map.entry_count();
      param.up_[x].emplace(y, std::move(cover.map));
      param.down_[y].insert(x);
    }
    return param;
  }

  const F& field() const noexcept { return field_; }

  /// Number of indices ever allocated, alive or not.
  std::size_t capacity() const noexcept { return cells_.size(); }

  std::size_t size() const { return static_cast<std::size_t>(std::count(alive_.begin(), alive_.end(), true)); }

  bool alive(Index i) const { return alive_.at(i); }
  const Cell& cell(Index i) const { return cells_.at(i); }
  const CellId& id(Index i) const { return cells_.at(i).id; }
  int dim(Index i) const { return cells_.at(i).dim; }
  std::size_t rank(Index i) const { return cells_.at(i).rank; }

  /// Index of a live element.
  std::optional<Index> find(const CellId& id) const {
    auto it = index_.find(id);
    if (it == index_.end() || !alive_[it->second]) return std::nullopt;
    return it->second;
  }

  Index at(const CellId& id) const {
    auto i = find(id);
    if (!i) throw UnknownCell("unknown element '" + id + "'");
    return *i;
  }

  /// Covers out of x, keyed by target index.
  const std::map<Index, Matrix<F>>& up(Index x) const { return up_.at(x); }
  /// Elements covered by x.
  const std::set<Index>& down(Index x) const { return down_.at(x); }

  const Matrix<F>* map(Index x, Index y) const {
    const auto& u = up_.at(x);
    auto it = u.find(y);
    return it == u.end() ? nullptr : &it->second;
  }

  /// F_xy, or the zero matrix of the right shape when x does not cover y.
  Matrix<F> map_or_zero(Index x, Index y) const {
    if (const auto* m = map(x, y)) return *m;
    return Matrix<F>(field_, rank(y), rank(x));
  }

  /// Top dimension of the complex this parametrization started as. Reduction never lowers it.
  int top_dim() const noexcept { return top_dim_; }

  std::vector<Index> alive_indices() const {
    std::vector<Index> out;
    for (Index i = 0; i < capacity(); ++i) {
      if (alive_[i]) out.push_back(i);
    }
    return out;
  }

  std::vector<Index> elements_of_dim(int n) const {
    std::vector<Index> out;
    for (Index i = 0; i < capacity(); ++i) {
      if (alive_[i] && cells_[i].dim == n) out.push_back(i);
    }
    return out;
  }

  std::size_t cover_count() const {
    std::size_t total = 0;
    for (Index i = 0; i < capacity(); ++i) total += alive_[i] ? up_[i].size() : 0;
    return total;
  }

  /// p = max |x_+| over live elements.
  std::size_t max_up_degree() const {
    std::size_t p = 0;
    for (Index i = 0; i < capacity(); ++i) {
      if (alive_[i]) p = std::max(p, up_[i].size());
    }
    return p;
  }

  /// d = max rank F(x) over live elements.
  std::size_t max_rank() const {
    std::size_t d = 0;
    for (Index i = 0; i < capacity(); ++i) {
      if (alive_[i]) d = std::max(d, cells_[i].rank);
    }
    return d;
  }

  /// Total number of matrix entries currently stored on covers.
  std::size_t stored_entries() const noexcept { return stored_entries_; }

  std::vector<Cell> live_cells() const {
    std::vector<Cell> out;
    for (Index i : alive_indices()) out.push_back(cells_[i]);
    return out;
  }

  std::vector<CoverMap> cover_maps() const {
    std::vector<CoverMap> out;
    for (Index x : alive_indices()) {
      for (const auto& [y, m] : up_[x]) out.push_back({cells_[x].id, cells_[y].id, m});
    }
    return out;
  }

  /// Snapshot of the live elements and their covering relation.
  GradedPoset poset() const {
    std::vector<ElementSpec> elements;
    std::vector<std::pair<CellId, CellId>> covers;
    for (Index x : alive_indices()) {
      elements.push_back({cells_[x].id, cells_[x].dim});
      for (const auto& [y, m] : up_[x]) covers.emplace_back(cells_[x].id, cells_[y].id);
    }
    return GradedPoset::build(std::move(elements), covers);
  }

  /// Same live cells in the same order, same covers and maps, same top dimension.
  friend bool operator==(const Parametrization& a, const Parametrization& b) {
    if (!(a.field_ == b.field_) || a.top_dim_ != b.top_dim_) return false;
    if (a.live_cells() != b.live_cells()) return false;
    auto key = [](const Parametrization& p) {
      std::map<std::pair<CellId, CellId>, const Matrix<F>*> out;
      for (Index x : p.alive_indices())
        for (const auto& [y, m] : p.up_[x]) out.emplace(std::make_pair(p.cells_[x].id, p.cells_[y].id), &m);
      return out;
    };
    auto ka = key(a);
    auto kb = key(b);
    if (ka.size() != kb.size()) return false;
    for (const auto& [k, m] : ka) {
      auto it = kb.find(k);
      if (it == kb.end() || !(*m == *it->second)) return false;
    }
    return true;
  }

 private:
  friend struct detail::Reducer<F>;

  Index lookup(const CellId& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) throw DanglingId("cover references unknown element '" + id + "'");
    return it->second;
  }

  F field_;
  std::vector<Cell> cells_;
  std::vector<bool> alive_;
  std::unordered_map<CellId, Index> index_;
  std::vector<std::map<Index, Matrix<F>>> up_;
  std::vector<std::set<Index>> down_;
  int top_dim_ = -1;
  std::size_t stored_entries_ = 0;
};

}  // namespace cellsheaf
