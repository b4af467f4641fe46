#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cellsheaf/cochain_complex.hpp"
#include "cellsheaf/cohomology.hpp"
#include "cellsheaf/cw_complex.hpp"
#include "cellsheaf/errors.hpp"
#include "cellsheaf/morse.hpp"
#include "cellsheaf/parallel.hpp"
#include "cellsheaf/sheaf.hpp"

namespace cellsheaf {

struct CoverPiece {
  std::string name;
  std::vector<CellId> cells;
};

/// A cover of a CW complex by face-closed pieces whose union is everything.
class Cover {
 public:
  struct Piece {
    std::string name;
    std::set<Index> cells;
  };

  static Cover build(CWComplex base, const std::vector<CoverPiece>& pieces) {
    Cover cover;
    cover.base_ = std::move(base);
    std::set<std::string> names;
    std::set<Index> covered;
    for (const auto& piece : pieces) {
      if (piece.name.empty() || piece.name.find('|') != std::string::npos) {
        throw ValidationError("piece name '" + piece.name + "' must be nonempty and must not contain '|'");
      }
      if (!names.insert(piece.name).second) throw ValidationError("duplicate piece '" + piece.name + "'");
      auto cells = cover.base_.indices_of(piece.cells);
      if (cells.empty()) throw ValidationError("piece '" + piece.name + "' is empty");
      if (!cover.base_.is_face_closed(cells)) {
        throw NotASubcomplex("piece '" + piece.name + "' is not closed under taking faces");
      }
      covered.insert(cells.begin(), cells.end());
      cover.pieces_.push_back({piece.name, std::move(cells)});
    }
    if (covered.size() != cover.base_.size()) {
      for (Index i = 0; i < cover.base_.size(); ++i) {
        if (!covered.count(i)) throw ValidationError("cell '" + cover.base_.poset().id(i) + "' is not covered");
      }
    }
    return cover;
  }

  const CWComplex& base() const noexcept { return base_; }
  const std::vector<Piece>& pieces() const noexcept { return pieces_; }

 private:
  CWComplex base_;
  std::vector<Piece> pieces_;
};

/// Nerve of a cover: one simplex per set of pieces with a common cell. `supports[i]` is the
/// intersection of the pieces of nerve cell i (cells indexed as in `complex`).
struct Nerve {
  CWComplex complex;
  std::vector<std::vector<std::size_t>> simplices;
  std::vector<std::set<Index>> supports;

  int dimension() const { return complex.dimension(); }
};

inline Nerve nerve(const Cover& cover) {
  const auto& pieces = cover.pieces();
  std::vector<std::vector<std::size_t>> found;
  std::map<std::vector<std::size_t>, std::set<Index>> support_of;
  // extend simplices by pieces of larger index; supports only shrink
  std::vector<std::pair<std::vector<std::size_t>, std::set<Index>>> stack;
  for (std::size_t i = pieces.size(); i-- > 0;) stack.push_back({{i}, pieces[i].cells});
  while (!stack.empty()) {
    auto [simplex, support] = std::move(stack.back());
    stack.pop_back();
    for (std::size_t j = simplex.back() + 1; j < pieces.size(); ++j) {
      std::set<Index> meet;
      for (Index c : support) {
        if (pieces[j].cells.count(c)) meet.insert(c);
      }
      if (meet.empty()) continue;
      auto bigger = simplex;
      bigger.push_back(j);
      stack.push_back({std::move(bigger), std::move(meet)});
    }
    found.push_back(simplex);
    support_of.emplace(std::move(simplex), std::move(support));
  }
  std::vector<std::string> names;
  for (const auto& p : pieces) names.push_back(p.name);
  Nerve out;
  out.complex = simplicial_complex(found, names, "|");
  // simplicial_complex orders cells by size, then lexicographically, as does this sort
  std::vector<std::vector<std::size_t>> ordered;
  for (const auto& [s, supp] : support_of) ordered.push_back(s);
  std::stable_sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) { return a.size() < b.size(); });
  for (const auto& s : ordered) {
    out.simplices.push_back(s);
    out.supports.push_back(support_of.at(s));
  }
  return out;
}

struct PipelineOptions {
  std::size_t workers = 1;
  /// Run scythe on each nerve-level sheaf before taking cohomology.
  bool reduce = true;
};

/// A sheaf over a nerve (or over a graph for the Leray construction) in a fixed degree.
template <Field F>
struct SheafOverNerve {
  int degree = 0;
  CellularSheaf<F> sheaf;
  std::vector<std::set<Index>> supports;
};

namespace detail {

template <Field F>
struct LocalStalk {
  CochainComplex<F> complex;
  CocycleBasis<F> basis;
  ClassSolver<F> solver;
};

/// Stalk over cell i = H^n of the subcomplex on supports[i]; restriction along s < t is the map
/// induced by the inclusion supports[t] into supports[s].
template <Field F>
CellularSheaf<F> local_cohomology_sheaf(const CWComplex& space, const CWComplex& over,
                                        const std::vector<std::set<Index>>& supports, int n, const F& field,
                                        std::size_t workers) {
  auto stalks = unwrap_all(parallel_map<LocalStalk<F>>(supports.size(), workers, [&](std::size_t i) {
    auto cx = assemble(compile(constant_sheaf(space.subcomplex(supports[i]), 1, field)));
    detail::require_complex(cx);
    auto basis = detail::cocycle_basis_unchecked(cx, n);
    ClassSolver<F> solver(cx, n, basis);
    return LocalStalk<F>{std::move(cx), std::move(basis), std::move(solver)};
  }));
  const auto covers = over.poset().cover_pairs();
  auto maps = unwrap_all(parallel_map<Matrix<F>>(covers.size(), workers, [&](std::size_t k) {
    const auto [s, t] = covers[k];
    const auto& big = stalks[s];
    const auto& small = stalks[t];
    return induced_map(big.complex, big.basis, small.complex, small.solver, {}, n);
  }));
  std::vector<std::size_t> ranks;
  for (const auto& st : stalks) ranks.push_back(st.basis.flagged.size());
  std::map<std::pair<Index, Index>, Matrix<F>> restrictions;
  for (std::size_t k = 0; k < covers.size(); ++k) {
    if (maps[k].rows() == 0 || maps[k].cols() == 0) continue;
    restrictions.emplace(covers[k], std::move(maps[k]));
  }
  return CellularSheaf<F>(over, field, std::move(ranks), std::move(restrictions));
}

template <Field F>
CohomologyProfile<F> sheaf_cohomology(const CellularSheaf<F>& sheaf, bool reduce) {
  auto param = compile(sheaf);
  if (!reduce) return betti(assemble(param));
  return betti(assemble(scythe(std::move(param)).reduced));
}

/// betti_n = b0(S^n) + b1(S^{n-1}) for n = 0 .. top.
template <Field F>
CohomologyProfile<F> combine_two_columns(const std::vector<CohomologyProfile<F>>& per_degree) {
  CohomologyProfile<F> out;
  for (std::size_t n = 0; n < per_degree.size(); ++n) {
    std::size_t b = per_degree[n].betti_at(0);
    if (n > 0) b += per_degree[n - 1].betti_at(1);
    out.betti.push_back(b);
  }
  // H^{top+1} would be b1 of the last sheaf; it vanishes for genuine inputs and is kept if not
  if (!per_degree.empty() && per_degree.back().betti_at(1) != 0) out.betti.push_back(per_degree.back().betti_at(1));
  return out;
}

inline void require_graph_like(const CWComplex& complex, const std::string& what) {
  if (complex.dimension() >= 2) {
    throw NerveTooBig(what + " has dimension " + std::to_string(complex.dimension()) +
                      "; the two-column decomposition needs dimension at most 1");
  }
}

}  // namespace detail

template <Field F>
SheafOverNerve<F> cech_sheaf(const Cover& cover, int n, const F& field, const PipelineOptions& opts = {}) {
  Nerve nv = nerve(cover);
  auto sheaf = detail::local_cohomology_sheaf(cover.base(), nv.complex, nv.supports, n, field, opts.workers);
  return {n, std::move(sheaf), std::move(nv.supports)};
}

template <Field F>
CohomologyProfile<F> cohomology_via_cech(const Cover& cover, const F& field, const PipelineOptions& opts = {}) {
  Nerve nv = nerve(cover);
  detail::require_graph_like(nv.complex, "nerve");
  std::vector<CohomologyProfile<F>> per_degree;
  for (int n = 0; n <= cover.base().dimension(); ++n) {
    auto sheaf = detail::local_cohomology_sheaf(cover.base(), nv.complex, nv.supports, n, field, opts.workers);
    per_degree.push_back(detail::sheaf_cohomology(sheaf, opts.reduce));
  }
  return detail::combine_two_columns(per_degree);
}

struct NerveCheckReport {
  bool supports_acyclic = true;
  /// Nerve cells whose support has nontrivial reduced cohomology.
  std::vector<CellId> witnesses;
  bool checked = false;
  bool agrees = false;
  std::vector<std::size_t> betti_nerve;
  std::vector<std::size_t> betti_base;
};

inline NerveCheckReport nerve_theorem_check(const Cover& cover) {
  const Rationals q;
  NerveCheckReport report;
  Nerve nv = nerve(cover);
  for (Index i = 0; i < nv.supports.size(); ++i) {
    auto b = betti(assemble(compile(constant_sheaf(cover.base().subcomplex(nv.supports[i]), 1, q)))).betti;
    bool acyclic = !b.empty() && b[0] == 1;
    for (std::size_t k = 1; k < b.size(); ++k) acyclic = acyclic && b[k] == 0;
    if (!acyclic) {
      report.supports_acyclic = false;
      report.witnesses.push_back(nv.complex.poset().id(i));
    }
  }
  if (!report.supports_acyclic) return report;
  report.checked = true;
  auto trim = [](std::vector<std::size_t> v) {
    while (!v.empty() && v.back() == 0) v.pop_back();
    return v;
  };
  report.betti_nerve = trim(betti(assemble(compile(constant_sheaf(nv.complex, 1, q)))).betti);
  report.betti_base = trim(betti(assemble(compile(constant_sheaf(cover.base(), 1, q)))).betti);
  report.agrees = report.betti_nerve == report.betti_base;
  return report;
}

/// Fibers of a map X -> graph, one face-closed subcomplex of X per graph cell.
struct FiberMap {
  CWComplex graph;
  std::map<CellId, std::vector<CellId>> fibers;
};

namespace detail {

/// Validates the fiber data and returns the fiber of every graph cell (graph order).
inline std::vector<std::set<Index>> fiber_supports(const CWComplex& space, const FiberMap& fm) {
  const auto& gp = fm.graph.poset();
  std::vector<std::set<Index>> supports;
  for (Index i = 0; i < gp.size(); ++i) {
    auto it = fm.fibers.find(gp.id(i));
    if (it == fm.fibers.end()) throw ValidationError("graph cell '" + gp.id(i) + "' has no fiber");
    auto cells = space.indices_of(it->second);
    if (!space.is_face_closed(cells)) throw NotASubcomplex("fiber of '" + gp.id(i) + "' is not closed under faces");
    supports.push_back(std::move(cells));
  }
  for (const auto& [id, cells] : fm.fibers) {
    if (!gp.find(id)) throw UnknownCell("fiber given for unknown graph cell '" + id + "'");
  }
  for (auto [s, t] : gp.cover_pairs()) {
    for (Index c : supports[t]) {
      if (!supports[s].count(c)) {
        throw FiberInclusionViolated("fiber of '" + gp.id(t) + "' contains '" + space.poset().id(c) +
                                     "' which is missing from the fiber of its face '" + gp.id(s) + "'");
      }
    }
  }
  return supports;
}

}  // namespace detail

template <Field F>
SheafOverNerve<F> leray_sheaf(const CWComplex& space, const FiberMap& fm, int n, const F& field,
                              const PipelineOptions& opts = {}) {
  detail::require_graph_like(fm.graph, "graph");
  auto supports = detail::fiber_supports(space, fm);
  auto sheaf = detail::local_cohomology_sheaf(space, fm.graph, supports, n, field, opts.workers);
  return {n, std::move(sheaf), std::move(supports)};
}

template <Field F>
CohomologyProfile<F> cohomology_via_leray(const CWComplex& space, const FiberMap& fm, const F& field,
                                          const PipelineOptions& opts = {}) {
  detail::require_graph_like(fm.graph, "graph");
  auto supports = detail::fiber_supports(space, fm);
  std::vector<CohomologyProfile<F>> per_degree;
  for (int n = 0; n <= space.dimension(); ++n) {
    auto sheaf = detail::local_cohomology_sheaf(space, fm.graph, supports, n, field, opts.workers);
    per_degree.push_back(detail::sheaf_cohomology(sheaf, opts.reduce));
  }
  return detail::combine_two_columns(per_degree);
}

struct StalkTask {
  std::vector<CellId> cells;
  int degree = 0;
};

/// Cohomology (with generators) of the subcomplexes named by the tasks, constant coefficients.
template <Field F>
std::vector<TaskResult<CohomologyProfile<F>>> parallel_stalks(const CWComplex& space,
                                                             const std::vector<StalkTask>& tasks, const F& field,
                                                             std::size_t workers) {
  return parallel_map<CohomologyProfile<F>>(tasks.size(), workers, [&](std::size_t i) {
    auto cx = assemble(compile(constant_sheaf(space.subcomplex(tasks[i].cells), 1, field)));
    auto full = betti(cx, true);
    CohomologyProfile<F> one;
    const auto n = static_cast<std::size_t>(tasks[i].degree);
    one.betti = {full.betti_at(n)};
    one.generators = std::vector<Matrix<F>>{n < full.generators->size() ? (*full.generators)[n]
                                                                         : Matrix<F>(field, 0, 0)};
    return one;
  });
}

/// Cost model of the distributed pipeline against the direct computation.
struct ComplexityEstimate {
  std::uint64_t N = 0;  // cells of X
  std::uint64_t g = 0;  // cells of the graph / nerve
  std::uint64_t K = 0;  // largest fiber / support
  std::uint64_t d = 0;  // dimension of X
  double local = 0;     // K^3 + g^3 d^3
  double direct = 0;    // N^3
  double ratio = 0;     // local / direct

  static ComplexityEstimate from_counts(std::uint64_t N, std::uint64_t g, std::uint64_t K, std::uint64_t d) {
    ComplexityEstimate e{N, g, K, d, 0, 0, 0};
    e.local = std::pow(double(K), 3) + std::pow(double(g), 3) * std::pow(double(d), 3);
    e.direct = std::pow(double(N), 3);
    e.ratio = e.direct > 0 ? e.local / e.direct : 0;
    return e;
  }
};

inline ComplexityEstimate complexity_estimate(const CWComplex& space, const FiberMap& fm) {
  auto supports = detail::fiber_supports(space, fm);
  std::uint64_t K = 0;
  for (const auto& s : supports) K = std::max<std::uint64_t>(K, s.size());
  return ComplexityEstimate::from_counts(space.size(), fm.graph.size(), K,
                                         static_cast<std::uint64_t>(std::max(0, space.dimension())));
}

inline ComplexityEstimate complexity_estimate(const Cover& cover) {
  Nerve nv = nerve(cover);
  std::uint64_t K = 0;
  for (const auto& s : nv.supports) K = std::max<std::uint64_t>(K, s.size());
  return ComplexityEstimate::from_counts(cover.base().size(), nv.complex.size(), K,
                                         static_cast<std::uint64_t>(std::max(0, cover.base().dimension())));
}

}  // namespace cellsheaf
