#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "cellsheaf/errors.hpp"
#include "cellsheaf/matrix.hpp"
#include "cellsheaf/parametrization.hpp"

namespace cellsheaf {

struct BasisBlock {
  CellId id;
  std::size_t offset = 0;
  std::size_t rank = 0;

  friend bool operator==(const BasisBlock&, const BasisBlock&) = default;
};

/// Coordinates of C^n: one block of rank F(x) per element x of dimension n.
struct CochainBasis {
  std::vector<BasisBlock> blocks;
  std::size_t total = 0;

  void append(CellId id, std::size_t rank) {
    blocks.push_back({std::move(id), total, rank});
    total += rank;
  }

  const BasisBlock* find(const CellId& id) const {
    for (const auto& b : blocks) {
      if (b.id == id) return &b;
    }
    return nullptr;
  }

  /// Block containing coordinate k.
  const BasisBlock& block_of(std::size_t k) const {
    auto it = std::upper_bound(blocks.begin(), blocks.end(), k,
                               [](std::size_t v, const BasisBlock& b) { return v < b.offset; });
    // blocks of rank 0 share offsets with their successor; step back to the one holding k
    while (it != blocks.begin()) {
      --it;
      if (k < it->offset + it->rank) return *it;
    }
    throw DimensionMismatch("coordinate outside basis");
  }

  friend bool operator==(const CochainBasis&, const CochainBasis&) = default;
};

/// Block matrices d^n : C^n -> C^{n+1} for n = 0..top, with their bases.
template <Field F>
class CochainComplex {
 public:
  explicit CochainComplex(F field) : field_(std::move(field)) {}

  CochainComplex(F field, std::vector<CochainBasis> bases, std::vector<Matrix<F>> coboundaries)
      : field_(std::move(field)), bases_(std::move(bases)), d_(std::move(coboundaries)) {
    if (d_.size() != bases_.size()) throw DimensionMismatch("one coboundary per degree expected");
    for (std::size_t n = 0; n < d_.size(); ++n) {
      const std::size_t next = n + 1 < bases_.size() ? bases_[n + 1].total : 0;
      if (d_[n].cols() != bases_[n].total || d_[n].rows() != next) {
        throw DimensionMismatch("coboundary d^" + std::to_string(n) + " has the wrong shape");
      }
    }
  }

  const F& field() const noexcept { return field_; }

  /// Top degree, -1 for the empty complex.
  int top_degree() const noexcept { return static_cast<int>(bases_.size()) - 1; }

  std::size_t dimension(int n) const {
    if (n < 0 || n > top_degree()) return 0;
    return bases_[static_cast<std::size_t>(n)].total;
  }

  const CochainBasis& basis(int n) const {
    static const CochainBasis empty{};
    if (n < 0 || n > top_degree()) return empty;
    return bases_[static_cast<std::size_t>(n)];
  }

  /// d^n, including the zero maps d^{-1} and d^{top}.
  Matrix<F> coboundary(int n) const {
    if (n >= 0 && n <= top_degree()) return d_[static_cast<std::size_t>(n)];
    return Matrix<F>(field_, dimension(n + 1), dimension(n));
  }

  const std::vector<CochainBasis>& bases() const noexcept { return bases_; }

 private:
  F field_;
  std::vector<CochainBasis> bases_;
  std::vector<Matrix<F>> d_;
};

/// C^n = sum of F(x) over dim x = n (live elements in index order); block (y, x) of d^n is F_xy.
template <Field F>
CochainComplex<F> assemble(const Parametrization<F>& param) {
  const int top = param.top_dim();
  if (top < 0) return CochainComplex<F>(param.field());
  std::vector<CochainBasis> bases(static_cast<std::size_t>(top) + 1);
  std::vector<std::size_t> offset_of(param.capacity(), 0);
  for (Index i : param.alive_indices()) {
    auto& basis = bases[static_cast<std::size_t>(param.dim(i))];
    offset_of[i] = basis.total;
    basis.append(param.id(i), param.rank(i));
  }
  std::vector<Matrix<F>> d;
  for (int n = 0; n <= top; ++n) {
    const auto& src = bases[static_cast<std::size_t>(n)];
    const std::size_t rows = n < top ? bases[static_cast<std::size_t>(n) + 1].total : 0;
    d.emplace_back(param.field(), rows, src.total);
  }
  for (Index x : param.alive_indices()) {
    for (const auto& [y, m] : param.up(x)) {
      d[static_cast<std::size_t>(param.dim(x))].set_block(offset_of[y], offset_of[x], m);
    }
  }
  return CochainComplex<F>(param.field(), std::move(bases), std::move(d));
}

struct DSquaredReport {
  bool ok = true;
  /// (source, target) element ids of nonzero blocks of d^{n+1} d^n.
  WitnessPairs witnesses;
};

template <Field F>
DSquaredReport verify_d_squared(const CochainComplex<F>& cx) {
  DSquaredReport report;
  for (int n = 0; n + 1 <= cx.top_degree(); ++n) {
    const auto product = mat_mul(cx.coboundary(n + 1), cx.coboundary(n));
    std::set<std::pair<CellId, CellId>> seen;
    for (std::size_t i = 0; i < product.rows(); ++i) {
      for (std::size_t j = 0; j < product.cols(); ++j) {
        if (cx.field().is_zero(product(i, j))) continue;
        const auto& target = cx.basis(n + 2).block_of(i);
        const auto& source = cx.basis(n).block_of(j);
        if (seen.emplace(source.id, target.id).second) report.witnesses.emplace_back(source.id, target.id);
      }
    }
  }
  report.ok = report.witnesses.empty();
  return report;
}

/// Same check, block by block on the poset: for x and z two dimensions apart, the sum over
/// y between them of F_zy F_yx must vanish. Never builds the dense coboundaries.
template <Field F>
DSquaredReport verify_d_squared(const Parametrization<F>& param) {
  DSquaredReport report;
  std::vector<std::tuple<int, Index, Index>> bad;
  for (Index x : param.alive_indices()) {
    std::map<Index, Matrix<F>> sums;
    for (const auto& [y, fyx] : param.up(x)) {
      for (const auto& [z, fzy] : param.up(y)) {
        auto product = mat_mul(fzy, fyx);
        auto it = sums.find(z);
        if (it == sums.end()) {
          sums.emplace(z, std::move(product));
        } else {
          it->second += product;
        }
      }
    }
    for (const auto& [z, total] : sums) {
      if (!total.is_zero()) bad.emplace_back(param.dim(x), z, x);
    }
  }
  std::sort(bad.begin(), bad.end());
  for (const auto& [n, z, x] : bad) report.witnesses.emplace_back(param.id(x), param.id(z));
  report.ok = report.witnesses.empty();
  return report;
}

}  // namespace cellsheaf
