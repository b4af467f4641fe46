#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cellsheaf/cochain_complex.hpp"
#include "cellsheaf/errors.hpp"
#include "cellsheaf/matrix.hpp"

namespace cellsheaf {

template <Field F>
struct CohomologyProfile {
  std::vector<std::size_t> betti;
  /// Per degree, columns are cocycle representatives of a basis of H^n.
  std::optional<std::vector<Matrix<F>>> generators;

  std::size_t betti_at(std::size_t n) const { return n < betti.size() ? betti[n] : 0; }
};

namespace detail {

template <Field F>
void require_complex(const CochainComplex<F>& cx) {
  auto report = verify_d_squared(cx);
  if (!report.ok) {
    std::string msg = "coboundary does not square to zero at";
    for (const auto& [s, t] : report.witnesses) msg += " (" + s + ", " + t + ")";
    throw NotAComplex(msg, std::move(report.witnesses));
  }
}

}  // namespace detail

/// Cocycles of degree n: `kernel` spans ker d^n; `flagged` picks kernel columns that are
/// independent modulo im d^{n-1} and together represent a basis of H^n.
template <Field F>
struct CocycleBasis {
  Matrix<F> kernel;
  std::vector<std::size_t> flagged;

  Matrix<F> representatives() const {
    Matrix<F> reps(kernel.field(), kernel.rows(), flagged.size());
    for (std::size_t k = 0; k < flagged.size(); ++k) reps.set_block(0, k, kernel.block(0, flagged[k], kernel.rows(), 1));
    return reps;
  }
};

namespace detail {

template <Field F>
CocycleBasis<F> cocycle_basis_unchecked(const CochainComplex<F>& cx, int n) {
  const F& f = cx.field();
  if (n < 0 || n > cx.top_degree()) return {Matrix<F>(f, 0, 0), {}};
  Matrix<F> kernel = kernel_basis(cx.coboundary(n));
  const Matrix<F> image = cx.coboundary(n - 1);
  // Greedy left-to-right: kernel columns that are pivots after the image columns.
  const auto echelon = rref(hstack(image, kernel));
  std::vector<std::size_t> flagged;
  for (auto c : echelon.pivots) {
    if (c >= image.cols()) flagged.push_back(c - image.cols());
  }
  return {std::move(kernel), std::move(flagged)};
}

}  // namespace detail

template <Field F>
CocycleBasis<F> cocycle_basis(const CochainComplex<F>& cx, int n) {
  detail::require_complex(cx);
  return detail::cocycle_basis_unchecked(cx, n);
}

template <Field F>
CohomologyProfile<F> betti(const CochainComplex<F>& cx, bool with_generators = false) {
  detail::require_complex(cx);
  CohomologyProfile<F> profile;
  const int top = cx.top_degree();
  std::vector<std::size_t> ranks;
  for (int n = 0; n <= top; ++n) ranks.push_back(rank(cx.coboundary(n)));
  for (int n = 0; n <= top; ++n) {
    const std::size_t below = n > 0 ? ranks[static_cast<std::size_t>(n) - 1] : 0;
    profile.betti.push_back(cx.dimension(n) - ranks[static_cast<std::size_t>(n)] - below);
  }
  if (with_generators) {
    std::vector<Matrix<F>> gens;
    for (int n = 0; n <= top; ++n) gens.push_back(detail::cocycle_basis_unchecked(cx, n).representatives());
    profile.generators = std::move(gens);
  }
  return profile;
}

/// Expresses degree-n cocycles in the flagged representative basis modulo coboundaries,
/// reusing a single elimination of [representatives | coboundaries].
template <Field F>
class ClassSolver {
 public:
  ClassSolver(const CochainComplex<F>& cx, int n) : ClassSolver(cx, n, detail::cocycle_basis_unchecked(cx, n)) {}

  ClassSolver(const CochainComplex<F>& cx, int n, const CocycleBasis<F>& basis)
      : transform_(cx.field(), 0, 0), dim_(cx.dimension(n)) {
    const F& f = cx.field();
    const Matrix<F> reps = basis.representatives();
    classes_ = reps.cols();
    const Matrix<F> span = hstack(reps, cx.coboundary(n - 1));
    // rref([span | I]) yields T with T * span in reduced form.
    const auto echelon = rref(hstack(span, Matrix<F>::identity(f, dim_)));
    rank_ = 0;
    for (auto c : echelon.pivots) {
      if (c < span.cols()) ++rank_;
    }
    transform_ = echelon.reduced.block(0, span.cols(), dim_, dim_);
  }

  std::size_t class_count() const noexcept { return classes_; }

  /// Column k of the result holds the class coordinates of column k of cocycles.
  Matrix<F> solve(const Matrix<F>& cocycles) const {
    if (cocycles.rows() != dim_) throw DimensionMismatch("cochain has the wrong length");
    const F& f = cocycles.field();
    const Matrix<F> t = mat_mul(transform_, cocycles);
    for (std::size_t r = rank_; r < dim_; ++r) {
      for (std::size_t c = 0; c < t.cols(); ++c) {
        if (!f.is_zero(t(r, c))) throw SolveFailed("cochain is not in the span of cocycles");
      }
    }
    return t.block(0, 0, classes_, t.cols());
  }

 private:
  Matrix<F> transform_;
  std::size_t dim_;
  std::size_t classes_ = 0;
  std::size_t rank_ = 0;
};

/// Restricts degree-n cochains of `big` onto the blocks of `small`. small_to_big maps
/// small cell ids to big cell ids; ids missing from it map to themselves.
template <Field F>
Matrix<F> restrict_cochains(const CochainComplex<F>& big, const CochainComplex<F>& small,
                            const std::map<CellId, CellId>& small_to_big, int n, const Matrix<F>& cochains) {
  Matrix<F> out(big.field(), small.dimension(n), cochains.cols());
  for (const auto& block : small.basis(n).blocks) {
    auto it = small_to_big.find(block.id);
    const CellId& target = it == small_to_big.end() ? block.id : it->second;
    const BasisBlock* source = big.basis(n).find(target);
    if (source == nullptr) throw SolveFailed("embedded cell '" + target + "' missing from the larger complex");
    if (source->rank != block.rank) throw SolveFailed("stalk rank differs on embedded cell '" + target + "'");
    out.set_block(block.offset, 0, cochains.block(source->offset, 0, source->rank, cochains.cols()));
  }
  return out;
}

/// Matrix of H^n(big) -> H^n(small) induced by restriction of cochains, in the flagged
/// representative bases (columns: big classes, rows: small classes).
template <Field F>
Matrix<F> induced_map(const CochainComplex<F>& big, const CocycleBasis<F>& big_basis, const CochainComplex<F>& small,
                      const ClassSolver<F>& small_solver, const std::map<CellId, CellId>& small_to_big, int n) {
  const Matrix<F> restricted = restrict_cochains(big, small, small_to_big, n, big_basis.representatives());
  if (!mat_mul(small.coboundary(n), restricted).is_zero()) {
    throw SolveFailed("restricted representative is not a cocycle; the embedding is not a subcomplex map");
  }
  return small_solver.solve(restricted);
}

template <Field F>
Matrix<F> induced_map(const CochainComplex<F>& big, const CochainComplex<F>& small,
                      const std::map<CellId, CellId>& small_to_big, int n) {
  detail::require_complex(big);
  detail::require_complex(small);
  const auto big_basis = detail::cocycle_basis_unchecked(big, n);
  const ClassSolver<F> solver(small, n);
  return induced_map(big, big_basis, small, solver, small_to_big, n);
}

template <Field F>
Matrix<F> induced_map(const CochainComplex<F>& big, const CochainComplex<F>& small, int n) {
  return induced_map(big, small, std::map<CellId, CellId>{}, n);
}

}  // namespace cellsheaf
