#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cellsheaf/cochain_complex.hpp"
#include "cellsheaf/cw_complex.hpp"
#include "cellsheaf/errors.hpp"
#include "cellsheaf/matrix.hpp"
#include "cellsheaf/parametrization.hpp"

namespace cellsheaf {

/// Cellular sheaf over a CW complex: a stalk rank per cell and a restriction matrix per
/// covering pair. Restrictions are stored on covers only; a missing entry is the zero map.
template <Field F>
class CellularSheaf {
 public:
  CellularSheaf(CWComplex base, F field, std::vector<std::size_t> ranks,
                std::map<std::pair<Index, Index>, Matrix<F>> restrictions)
      : base_(std::move(base)), field_(std::move(field)), ranks_(std::move(ranks)),
        restrictions_(std::move(restrictions)) {
    if (ranks_.size() != base_.size()) throw ValidationError("one stalk rank per cell expected");
    for (const auto& [pair, m] : restrictions_) {
      const auto [s, t] = pair;
      if (!base_.poset().covers(s, t)) {
        throw ValidationError("restriction on non-covering pair (" + base_.poset().id(s) + ", " +
                              base_.poset().id(t) + ")");
      }
      if (m.rows() != ranks_[t] || m.cols() != ranks_[s]) {
        throw ValidationError("restriction (" + base_.poset().id(s) + ", " + base_.poset().id(t) +
                              ") has the wrong shape");
      }
    }
  }

  const CWComplex& base() const noexcept { return base_; }
  const F& field() const noexcept { return field_; }
  std::size_t stalk_rank(Index cell) const { return ranks_.at(cell); }
  const std::vector<std::size_t>& stalk_ranks() const noexcept { return ranks_; }

  Matrix<F> restriction(Index s, Index t) const {
    auto it = restrictions_.find({s, t});
    if (it != restrictions_.end()) return it->second;
    return Matrix<F>(field_, ranks_.at(t), ranks_.at(s));
  }

  const std::map<std::pair<Index, Index>, Matrix<F>>& restrictions() const noexcept { return restrictions_; }

 private:
  CWComplex base_;
  F field_;
  std::vector<std::size_t> ranks_;
  std::map<std::pair<Index, Index>, Matrix<F>> restrictions_;
};

/// Every stalk is F^rank and every restriction the identity.
template <Field F>
CellularSheaf<F> constant_sheaf(const CWComplex& base, std::size_t rank, const F& field) {
  std::map<std::pair<Index, Index>, Matrix<F>> maps;
  for (auto [s, t] : base.poset().cover_pairs()) maps.emplace(std::make_pair(s, t), Matrix<F>::identity(field, rank));
  return CellularSheaf<F>(base, field, std::vector<std::size_t>(base.size(), rank), std::move(maps));
}

/// Rank one on `cell`, zero elsewhere, all restrictions zero.
template <Field F>
CellularSheaf<F> skyscraper_sheaf(const CWComplex& base, const CellId& cell, const F& field) {
  auto idx = base.poset().find(cell);
  if (!idx) throw UnknownCell("unknown cell '" + cell + "'");
  std::vector<std::size_t> ranks(base.size(), 0);
  ranks[*idx] = 1;
  return CellularSheaf<F>(base, field, std::move(ranks), {});
}

/// Constant sheaf of a subcomplex A pushed forward to the whole complex.
template <Field F>
CellularSheaf<F> pushforward_constant(const CWComplex& base, const std::vector<CellId>& subcomplex, const F& field) {
  const auto cells = base.indices_of(subcomplex);
  if (!base.is_face_closed(cells)) throw NotASubcomplex("subcomplex is not closed under taking faces");
  std::vector<std::size_t> ranks(base.size(), 0);
  for (Index c : cells) ranks[c] = 1;
  std::map<std::pair<Index, Index>, Matrix<F>> maps;
  for (auto [s, t] : base.poset().cover_pairs()) {
    if (cells.count(s) && cells.count(t)) maps.emplace(std::make_pair(s, t), Matrix<F>::identity(field, 1));
  }
  return CellularSheaf<F>(base, field, std::move(ranks), std::move(maps));
}

/// Parametrization with F_st = [s:t] * restriction(s, t) on every cover of the base.
template <Field F>
Parametrization<F> compile(const CellularSheaf<F>& sheaf) {
  const auto& poset = sheaf.base().poset();
  const F& field = sheaf.field();
  std::vector<typename Parametrization<F>::Cell> cells;
  cells.reserve(poset.size());
  for (Index i = 0; i < poset.size(); ++i) cells.push_back({poset.id(i), poset.dim(i), sheaf.stalk_rank(i)});
  std::vector<typename Parametrization<F>::CoverMap> covers;
  for (auto [s, t] : poset.cover_pairs()) {
    auto m = sheaf.restriction(s, t);
    if (sheaf.base().incidence(s, t) < 0) m = m.negated();
    covers.push_back({poset.id(s), poset.id(t), std::move(m)});
  }
  auto param = Parametrization<F>::build(field, std::move(cells), std::move(covers));
  auto report = verify_d_squared(param);
  if (!report.ok) {
    std::string msg = "sheaf coboundary does not square to zero at";
    for (const auto& [s, t] : report.witnesses) msg += " (" + s + ", " + t + ")";
    throw InvalidSheafData(msg, std::move(report.witnesses));
  }
  return param;
}

}  // namespace cellsheaf
