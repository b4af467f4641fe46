#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "cellsheaf/cochain_complex.hpp"
#include "cellsheaf/errors.hpp"
#include "cellsheaf/matrix.hpp"
#include "cellsheaf/parametrization.hpp"

namespace cellsheaf {

/// Cochain equivalence between an original complex C and a reduced complex C_S:
///   project^n : C^n -> C_S^n,  lift^n : C_S^n -> C^n,  homotopy^n : C^n -> C^{n-1}
/// with project . lift = id and id - lift . project = homotopy d + d homotopy.
template <Field F>
struct Equivalence {
  std::vector<CochainBasis> original_bases;
  std::vector<CochainBasis> current_bases;
  std::vector<Matrix<F>> project;
  std::vector<Matrix<F>> lift;
  std::vector<Matrix<F>> homotopy;

  static Equivalence identity(const CochainComplex<F>& cx) {
    Equivalence eq;
    const F& f = cx.field();
    eq.original_bases = cx.bases();
    eq.current_bases = cx.bases();
    for (int n = 0; n <= cx.top_degree(); ++n) {
      eq.project.push_back(Matrix<F>::identity(f, cx.dimension(n)));
      eq.lift.push_back(Matrix<F>::identity(f, cx.dimension(n)));
      eq.homotopy.emplace_back(f, cx.dimension(n - 1), cx.dimension(n));
    }
    return eq;
  }
};

/// Single reduction step maps written in the ambient bases before and after removing (x, y).
template <Field F>
struct StepMaps {
  std::vector<CochainBasis> before_bases;
  std::vector<CochainBasis> after_bases;
  std::vector<Matrix<F>> project;
  std::vector<Matrix<F>> lift;
  std::vector<Matrix<F>> homotopy;
};

/// What a reduction step needs to remember to rebuild the equivalence later.
template <Field F>
struct ReductionStep {
  CellId lower;
  CellId upper;
  Matrix<F> inverse;                                   // F_xy^{-1}
  std::vector<std::pair<CellId, Matrix<F>>> cofaces;  // (z, F_xz), z in x_+ \ {y}
  std::vector<std::pair<CellId, Matrix<F>>> faces;    // (w, F_wy), w in y_- \ {x}
};

namespace detail {

inline std::vector<CochainBasis> remove_blocks(const std::vector<CochainBasis>& bases, const CellId& a,
                                               const CellId& b) {
  std::vector<CochainBasis> out(bases.size());
  for (std::size_t n = 0; n < bases.size(); ++n) {
    for (const auto& block : bases[n].blocks) {
      if (block.id != a && block.id != b) out[n].append(block.id, block.rank);
    }
  }
  return out;
}

inline const BasisBlock& require_block(const CochainBasis& basis, const CellId& id) {
  const BasisBlock* b = basis.find(id);
  if (b == nullptr) throw DimensionMismatch("cell '" + id + "' has no block in the basis");
  return *b;
}

}  // namespace detail

template <Field F>
StepMaps<F> step_maps(const Parametrization<F>& before, const CellId& lower, const CellId& upper) {
  const F& f = before.field();
  const Index x = before.at(lower);
  const Index y = before.at(upper);
  const Matrix<F>* fxy = before.map(x, y);
  if (fxy == nullptr) throw NotACover("(" + lower + ", " + upper + ") is not a cover");
  auto inv = try_invert(*fxy);
  if (!inv) throw NotInvertible("F_(" + lower + ", " + upper + ") is not invertible");

  StepMaps<F> maps;
  maps.before_bases = assemble(before).bases();
  maps.after_bases = detail::remove_blocks(maps.before_bases, lower, upper);
  const int dx = before.dim(x);
  const int dy = before.dim(y);
  for (std::size_t n = 0; n < maps.before_bases.size(); ++n) {
    const auto& src = maps.before_bases[n];
    const auto& dst = maps.after_bases[n];
    Matrix<F> project(f, dst.total, src.total);
    Matrix<F> lift(f, src.total, dst.total);
    for (const auto& block : dst.blocks) {
      const auto& orig = detail::require_block(src, block.id);
      project.set_block(block.offset, orig.offset, Matrix<F>::identity(f, block.rank));
      lift.set_block(orig.offset, block.offset, Matrix<F>::identity(f, block.rank));
    }
    if (static_cast<int>(n) == dy) {
      const auto& yb = detail::require_block(src, upper);
      for (const auto& [z, fxz] : before.up(x)) {
        if (z == y) continue;
        const auto& zb = detail::require_block(dst, before.id(z));
        project.set_block(zb.offset, yb.offset, mat_mul(fxz, *inv).negated());
      }
    }
    if (static_cast<int>(n) == dx) {
      const auto& xb = detail::require_block(src, lower);
      for (Index w : before.down(y)) {
        if (w == x) continue;
        const auto& wb = detail::require_block(dst, before.id(w));
        lift.set_block(xb.offset, wb.offset, mat_mul(*inv, *before.map(w, y)).negated());
      }
    }
    const std::size_t prev = n > 0 ? maps.before_bases[n - 1].total : 0;
    Matrix<F> homotopy(f, prev, src.total);
    if (static_cast<int>(n) == dy) {
      const auto& yb = detail::require_block(src, upper);
      const auto& xb = detail::require_block(maps.before_bases[n - 1], lower);
      homotopy.set_block(xb.offset, yb.offset, *inv);
    }
    maps.project.push_back(std::move(project));
    maps.lift.push_back(std::move(lift));
    maps.homotopy.push_back(std::move(homotopy));
  }
  return maps;
}

/// Appends one step: project' = step.project eq.project, lift' = eq.lift step.lift,
/// homotopy' = eq.homotopy + eq.lift step.homotopy eq.project.
template <Field F>
Equivalence<F> compose(const Equivalence<F>& eq, const StepMaps<F>& step) {
  if (eq.current_bases != step.before_bases) throw DimensionMismatch("step does not start where the equivalence ends");
  Equivalence<F> out;
  out.original_bases = eq.original_bases;
  out.current_bases = step.after_bases;
  for (std::size_t n = 0; n < eq.project.size(); ++n) {
    out.project.push_back(mat_mul(step.project[n], eq.project[n]));
    out.lift.push_back(mat_mul(eq.lift[n], step.lift[n]));
    Matrix<F> h = eq.homotopy[n];
    if (n > 0) h += mat_mul(mat_mul(eq.lift[n - 1], step.homotopy[n]), eq.project[n]);
    out.homotopy.push_back(std::move(h));
  }
  return out;
}

/// Accumulates the composed equivalence in place, one reduction step at a time, using
/// row and column updates instead of full products.
template <Field F>
class EquivalenceTracker {
 public:
  EquivalenceTracker(F field, std::vector<CochainBasis> original_bases)
      : field_(std::move(field)), original_(std::move(original_bases)) {
    for (std::size_t n = 0; n < original_.size(); ++n) {
      const std::size_t size = original_[n].total;
      psi_.push_back(Matrix<F>::identity(field_, size));
      phi_.push_back(Matrix<F>::identity(field_, size));
      theta_.emplace_back(field_, n > 0 ? original_[n - 1].total : 0, size);
      for (const auto& block : original_[n].blocks) where_.emplace(block.id, std::make_pair(n, block));
    }
  }

  void apply(const ReductionStep<F>& step) {
    const auto& [nx, xb] = locate(step.lower);
    const auto& [ny, yb] = locate(step.upper);
    if (ny != nx + 1) throw DimensionMismatch("reduced pair is not graded");
    Matrix<F>& psi = psi_[ny];
    Matrix<F>& phi = phi_[nx];
    const Matrix<F> row_y = psi.block(yb.offset, 0, yb.rank, psi.cols());
    const Matrix<F> col_x = phi.block(0, xb.offset, phi.rows(), xb.rank);
    const Matrix<F> col_x_inv = mat_mul(col_x, step.inverse);
    theta_[ny].add_to_block(0, 0, mat_mul(col_x_inv, row_y));
    for (const auto& [z, fxz] : step.cofaces) {
      const auto& zb = locate(z).second;
      psi.add_to_block(zb.offset, 0, mat_mul(mat_mul(fxz, step.inverse), row_y).negated());
    }
    for (const auto& [w, fwy] : step.faces) {
      const auto& wb = locate(w).second;
      phi.add_to_block(0, wb.offset, mat_mul(col_x_inv, fwy).negated());
    }
  }

  /// Equivalence onto the given current bases (blocks must be a subset of the original ones).
  Equivalence<F> materialize(const std::vector<CochainBasis>& current) const {
    Equivalence<F> eq;
    eq.original_bases = original_;
    eq.current_bases = current;
    for (std::size_t n = 0; n < original_.size(); ++n) {
      const auto& cur = n < current.size() ? current[n] : CochainBasis{};
      Matrix<F> project(field_, cur.total, original_[n].total);
      Matrix<F> lift(field_, original_[n].total, cur.total);
      for (const auto& block : cur.blocks) {
        const auto& ob = locate(block.id).second;
        project.set_block(block.offset, 0, psi_[n].block(ob.offset, 0, ob.rank, original_[n].total));
        lift.set_block(0, block.offset, phi_[n].block(0, ob.offset, original_[n].total, ob.rank));
      }
      eq.project.push_back(std::move(project));
      eq.lift.push_back(std::move(lift));
      eq.homotopy.push_back(theta_[n]);
    }
    return eq;
  }

 private:
  const std::pair<std::size_t, BasisBlock>& locate(const CellId& id) const {
    auto it = where_.find(id);
    if (it == where_.end()) throw UnknownCell("cell '" + id + "' is not part of the original complex");
    return it->second;
  }

  F field_;
  std::vector<CochainBasis> original_;
  std::map<CellId, std::pair<std::size_t, BasisBlock>> where_;
  std::vector<Matrix<F>> psi_;    // rows indexed by original coordinates of surviving blocks
  std::vector<Matrix<F>> phi_;    // columns likewise
  std::vector<Matrix<F>> theta_;
};

/// Rebuilds an equivalence from a recorded step list.
template <Field F>
Equivalence<F> replay_equivalence(const F& field, const std::vector<CochainBasis>& original_bases,
                                  const std::vector<ReductionStep<F>>& steps,
                                  const std::vector<CochainBasis>& current_bases) {
  EquivalenceTracker<F> tracker(field, original_bases);
  for (const auto& s : steps) tracker.apply(s);
  return tracker.materialize(current_bases);
}

/// phi^n applied to cocycles of the reduced complex (one per column).
template <Field F>
Matrix<F> lift_cocycle(const Equivalence<F>& eq, const CochainComplex<F>& reduced, const Matrix<F>& cochains, int n) {
  if (n < 0 || static_cast<std::size_t>(n) >= eq.lift.size()) return Matrix<F>(reduced.field(), 0, cochains.cols());
  if (!mat_mul(reduced.coboundary(n), cochains).is_zero()) throw NotACocycle("input is not a cocycle of the reduced complex");
  return mat_mul(eq.lift[static_cast<std::size_t>(n)], cochains);
}

/// psi^n applied to cocycles of the original complex (one per column).
template <Field F>
Matrix<F> project_cocycle(const Equivalence<F>& eq, const CochainComplex<F>& original, const Matrix<F>& cochains,
                          int n) {
  if (n < 0 || static_cast<std::size_t>(n) >= eq.project.size()) return Matrix<F>(original.field(), 0, cochains.cols());
  if (!mat_mul(original.coboundary(n), cochains).is_zero()) throw NotACocycle("input is not a cocycle of the original complex");
  return mat_mul(eq.project[static_cast<std::size_t>(n)], cochains);
}

}  // namespace cellsheaf
