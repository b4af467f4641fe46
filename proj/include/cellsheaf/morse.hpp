#pragma once

#include <algorithm>
#include <cstddef>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cellsheaf/cochain_complex.hpp"
#include "cellsheaf/equivalence.hpp"
#include "cellsheaf/errors.hpp"
#include "cellsheaf/matrix.hpp"
#include "cellsheaf/parametrization.hpp"
#include "cellsheaf/poset.hpp"

namespace cellsheaf {

struct MatchedPair {
  CellId lower;
  CellId upper;

  friend bool operator==(const MatchedPair&, const MatchedPair&) = default;
  friend auto operator<=>(const MatchedPair&, const MatchedPair&) = default;
};

/// Pairs in the order they were reduced, plus the critical elements left over.
struct Matching {
  std::vector<MatchedPair> pairs;
  std::vector<CellId> critical;
};

/// How a dequeued candidate picks its partner.
///  strict:            the partner must be the only non-critical element across the cover, and its map invertible
///  unique_invertible: the partner must be the only non-critical one with an invertible map; other
///                     non-critical neighbours may remain (cohomology is still preserved, but the union of
///                     pairs need not be acyclic on the input poset)
enum class MatchPolicy { strict, unique_invertible };

/// Equivalence bookkeeping during reduction. `steps` keeps only the per-pair records and builds the
/// dense matrices on demand (see MorseData::materialize_equivalence).
enum class Tracking { off, dense, steps };

struct ScytheOptions {
  MatchPolicy policy = MatchPolicy::strict;
  Tracking tracking = Tracking::off;
  /// Check that the matching of every pass is acyclic and that removal order was monotone.
  bool self_check = false;
};

/// One scythe sweep: its pairs and the poset it started from.
struct PassRecord {
  std::vector<MatchedPair> pairs;
  GradedPoset input;
  bool top_down = false;
};

template <Field F>
struct MorseData {
  Parametrization<F> reduced;
  Matching matching;
  std::vector<PassRecord> passes;
  GradedPoset critical_poset;
  std::optional<Equivalence<F>> equivalence;
  std::vector<ReductionStep<F>> steps;
  std::vector<CochainBasis> original_bases;
  /// Largest number of map entries stored at any point of the run.
  std::size_t peak_map_entries = 0;
  std::vector<std::size_t> m_k;
  std::size_t m_tilde = 0;

  /// Dense equivalence from the recorded steps (Tracking::steps), or the tracked one.
  Equivalence<F> materialize_equivalence() const {
    if (equivalence) return *equivalence;
    if (original_bases.empty() && reduced.top_dim() >= 0) {
      throw Error("equivalence was not tracked; rerun with Tracking::dense or Tracking::steps");
    }
    return replay_equivalence(reduced.field(), original_bases, steps, assemble(reduced).bases());
  }
};

namespace detail {

template <Field F>
struct Reducer {
  /// F_wz -= F_xz F_xy^{-1} F_wy for every w below y and z above x, then drops x and y.
  /// Fills `record` with the step when it is non-null.
  static void reduce(Parametrization<F>& p, Index x, Index y, const Matrix<F>& inverse,
                     ReductionStep<F>* record) {
    if (record != nullptr) {
      record->lower = p.id(x);
      record->upper = p.id(y);
      record->inverse = inverse;
      for (const auto& [z, fxz] : p.up_[x]) {
        if (z != y) record->cofaces.emplace_back(p.id(z), fxz);
      }
      for (Index w : p.down_[y]) {
        if (w != x) record->faces.emplace_back(p.id(w), p.up_[w].at(y));
      }
    }
    for (const auto& [z, fxz] : p.up_[x]) {
      if (z == y) continue;
      const Matrix<F> a = mat_mul(fxz, inverse);
      for (Index w : p.down_[y]) {
        if (w == x) continue;
        const Matrix<F> delta = mat_mul(a, p.up_[w].at(y));
        if (delta.is_zero()) continue;
        auto& wup = p.up_[w];
        auto it = wup.find(z);
        if (it == wup.end()) {
          p.stored_entries_ += delta.entry_count();
          wup.emplace(z, delta.negated());
          p.down_[z].insert(w);
          continue;
        }
        it->second -= delta;
        if (it->second.is_zero()) {
          p.stored_entries_ -= it->second.entry_count();
          wup.erase(it);
          p.down_[z].erase(w);
        }
      }
    }
    remove(p, x);
    remove(p, y);
  }

  static void remove(Parametrization<F>& p, Index v) {
    for (const auto& [z, m] : p.up_[v]) {
      p.stored_entries_ -= m.entry_count();
      p.down_[z].erase(v);
    }
    p.up_[v].clear();
    for (Index w : p.down_[v]) {
      auto it = p.up_[w].find(v);
      p.stored_entries_ -= it->second.entry_count();
      p.up_[w].erase(it);
    }
    p.down_[v].clear();
    p.alive_[v] = false;
  }
};

}  // namespace detail

/// Removes the pair (x, y) from param and patches the surrounding maps.
template <Field F>
void reduce_pair(Parametrization<F>& param, const CellId& lower, const CellId& upper) {
  const Index x = param.at(lower);
  const Index y = param.at(upper);
  const Matrix<F>* fxy = param.map(x, y);
  if (fxy == nullptr) throw NotACover("(" + lower + ", " + upper + ") is not a cover");
  auto inverse = try_invert(*fxy);
  if (!inverse) throw NotInvertible("map on (" + lower + ", " + upper + ") is not invertible");
  detail::Reducer<F>::reduce(param, x, y, *inverse, nullptr);
}

// ---------------------------------------------------------------------------
// Matching checks

struct AcyclicityReport {
  bool ok = true;
  std::string message;
  /// Pairs along a directed cycle of the relation (x,y) < (x',y') iff x covered by y'.
  std::vector<MatchedPair> cycle;
  /// On success: the pairs in a monotone (topologically sorted) order.
  std::vector<MatchedPair> order;
};

/// Dimension and partition axioms: every pair is a cover of the poset, no element used twice.
inline AcyclicityReport check_matching_axioms(const std::vector<MatchedPair>& pairs, const GradedPoset& poset) {
  AcyclicityReport report;
  std::set<CellId> used;
  for (const auto& pair : pairs) {
    auto x = poset.find(pair.lower);
    auto y = poset.find(pair.upper);
    if (!x || !y) {
      report.ok = false;
      report.message = "pair (" + pair.lower + ", " + pair.upper + ") references an unknown element";
      return report;
    }
    if (!poset.covers(*x, *y)) {
      report.ok = false;
      report.message = "pair (" + pair.lower + ", " + pair.upper + ") is not a cover";
      return report;
    }
    for (const auto& id : {pair.lower, pair.upper}) {
      if (!used.insert(id).second) {
        report.ok = false;
        report.message = "element '" + id + "' is matched twice";
        return report;
      }
    }
  }
  return report;
}

/// Topological sort of the pair digraph; a witness cycle on failure.
inline AcyclicityReport verify_acyclic(const std::vector<MatchedPair>& pairs, const GradedPoset& poset) {
  AcyclicityReport report;
  const std::size_t k = pairs.size();
  std::map<Index, std::size_t> pair_of_upper;
  std::vector<Index> lower(k);
  for (std::size_t i = 0; i < k; ++i) {
    auto x = poset.find(pairs[i].lower);
    auto y = poset.find(pairs[i].upper);
    if (!x || !y) {
      report.ok = false;
      report.message = "pair (" + pairs[i].lower + ", " + pairs[i].upper + ") references an unknown element";
      return report;
    }
    lower[i] = *x;
    pair_of_upper[*y] = i;
  }
  // edge i -> j when lower(i) is covered by upper(j), i != j
  std::vector<std::vector<std::size_t>> out(k);
  std::vector<std::size_t> indegree(k, 0);
  for (std::size_t i = 0; i < k; ++i) {
    for (Index y : poset.up(lower[i])) {
      auto it = pair_of_upper.find(y);
      if (it == pair_of_upper.end() || it->second == i) continue;
      out[i].push_back(it->second);
      ++indegree[it->second];
    }
  }
  std::deque<std::size_t> ready;
  for (std::size_t i = 0; i < k; ++i) {
    if (indegree[i] == 0) ready.push_back(i);
  }
  std::size_t seen = 0;
  while (!ready.empty()) {
    const std::size_t i = ready.front();
    ready.pop_front();
    ++seen;
    report.order.push_back(pairs[i]);
    for (std::size_t j : out[i]) {
      if (--indegree[j] == 0) ready.push_back(j);
    }
  }
  if (seen == k) return report;
  report.order.clear();

  // Everything left has positive in-degree; walk backwards along remaining edges until a repeat.
  std::vector<std::vector<std::size_t>> in(k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j : out[i]) {
      if (indegree[i] > 0 && indegree[j] > 0) in[j].push_back(i);
    }
  }
  std::size_t cur = 0;
  while (indegree[cur] == 0) ++cur;
  std::map<std::size_t, std::size_t> position;
  std::vector<std::size_t> walk;
  while (!position.count(cur)) {
    position[cur] = walk.size();
    walk.push_back(cur);
    cur = in[cur].front();
  }
  std::vector<std::size_t> cycle(walk.begin() + static_cast<std::ptrdiff_t>(position[cur]), walk.end());
  std::reverse(cycle.begin(), cycle.end());
  report.ok = false;
  report.message = "matching has a cycle of length " + std::to_string(cycle.size());
  for (std::size_t i : cycle) report.cycle.push_back(pairs[i]);
  return report;
}

/// True when every pair comes after all pairs below it (or, with `reversed`, before them).
inline bool is_removal_monotone(const std::vector<MatchedPair>& order, const GradedPoset& poset, bool reversed = false) {
  std::map<CellId, std::size_t> lower_pos;
  for (std::size_t i = 0; i < order.size(); ++i) lower_pos[order[i].lower] = i;
  for (std::size_t j = 0; j < order.size(); ++j) {
    auto y = poset.find(order[j].upper);
    if (!y) return false;
    for (Index x : poset.down(*y)) {
      auto it = lower_pos.find(poset.id(x));
      if (it == lower_pos.end() || it->second == j) continue;
      if (!reversed && it->second > j) return false;
      if (reversed && it->second < j) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Scythe

namespace detail {

template <Field F>
class Sweeper {
 public:
  Sweeper(Parametrization<F>& param, const ScytheOptions& opts, EquivalenceTracker<F>* tracker,
          std::vector<ReductionStep<F>>* steps, std::size_t& peak)
      : p_(param), opts_(opts), tracker_(tracker), steps_(steps), peak_(peak) {}

  /// One full pass. Returns the pairs in removal order.
  std::vector<MatchedPair> run(bool top_down) {
    const std::size_t cap = p_.capacity();
    critical_.assign(cap, false);
    flag_.assign(cap, 0);
    epoch_ = 0;
    std::vector<Index> order = p_.alive_indices();
    std::sort(order.begin(), order.end(), [&](Index a, Index b) {
      if (p_.dim(a) != p_.dim(b)) return top_down ? p_.dim(a) > p_.dim(b) : p_.dim(a) < p_.dim(b);
      return p_.id(a) < p_.id(b);
    });
    std::vector<MatchedPair> pairs;
    std::size_t cursor = 0;
    for (;;) {
      while (cursor < order.size() && (!p_.alive(order[cursor]) || critical_[order[cursor]])) ++cursor;
      if (cursor == order.size()) break;
      const Index c = order[cursor];
      critical_[c] = true;
      ++epoch_;
      std::deque<Index> queue;
      flag_[c] = epoch_;
      queue.push_back(c);
      while (!queue.empty()) {
        const Index y = queue.front();
        queue.pop_front();
        if (!p_.alive(y)) continue;
        // y's neighbours on the far side, captured before y is possibly removed
        std::vector<Index> onward = top_down ? std::vector<Index>(p_.down(y).begin(), p_.down(y).end())
                                             : up_indices(y);
        if (auto partner = select_partner(y, top_down)) {
          const auto& [x, inverse] = *partner;
          if (top_down) {
            for (Index w : p_.down(x)) {
              if (w != y) enqueue(queue, w);
            }
            pairs.push_back({p_.id(y), p_.id(x)});
            reduce(y, x, inverse);
          } else {
            for (Index z : up_indices(x)) {
              if (z != y) enqueue(queue, z);
            }
            pairs.push_back({p_.id(x), p_.id(y)});
            reduce(x, y, inverse);
          }
        }
        for (Index v : onward) enqueue(queue, v);
      }
    }
    return pairs;
  }

 private:
  std::vector<Index> up_indices(Index v) const {
    std::vector<Index> out;
    for (const auto& [z, m] : p_.up(v)) out.push_back(z);
    return out;
  }

  void enqueue(std::deque<Index>& queue, Index v) {
    if (!p_.alive(v) || critical_[v] || flag_[v] == epoch_) return;
    flag_[v] = epoch_;
    queue.push_back(v);
  }

  const Matrix<F>& map_between(Index y, Index other, bool top_down) const {
    return top_down ? *p_.map(y, other) : *p_.map(other, y);
  }

  std::optional<std::pair<Index, Matrix<F>>> select_partner(Index y, bool top_down) const {
    if (critical_[y]) return std::nullopt;
    std::vector<Index> candidates;
    if (top_down) {
      for (const auto& [z, m] : p_.up(y)) {
        if (!critical_[z]) candidates.push_back(z);
      }
    } else {
      for (Index x : p_.down(y)) {
        if (!critical_[x]) candidates.push_back(x);
      }
    }
    std::optional<std::pair<Index, Matrix<F>>> found;
    if (opts_.policy == MatchPolicy::strict) {
      if (candidates.size() != 1) return std::nullopt;
      const auto& m = map_between(y, candidates.front(), top_down);
      if (m.rows() == 0) return std::nullopt;  // 0x0 blocks are never matched
      auto inv = try_invert(m);
      if (!inv) return std::nullopt;
      return std::make_pair(candidates.front(), std::move(*inv));
    }
    for (Index c : candidates) {
      const auto& m = map_between(y, c, top_down);
      if (m.rows() == 0) continue;
      auto inv = try_invert(m);
      if (!inv) continue;
      if (found) return std::nullopt;
      found = std::make_pair(c, std::move(*inv));
    }
    return found;
  }

  void reduce(Index x, Index y, const Matrix<F>& inverse) {
    const bool record = tracker_ != nullptr || steps_ != nullptr;
    ReductionStep<F> step{{}, {}, Matrix<F>(p_.field()), {}, {}};
    Reducer<F>::reduce(p_, x, y, inverse, record ? &step : nullptr);
    if (tracker_ != nullptr) tracker_->apply(step);
    if (steps_ != nullptr) steps_->push_back(std::move(step));
    peak_ = std::max(peak_, p_.stored_entries());
  }

  Parametrization<F>& p_;
  const ScytheOptions& opts_;
  EquivalenceTracker<F>* tracker_;
  std::vector<ReductionStep<F>>* steps_;
  std::size_t& peak_;
  std::vector<bool> critical_;
  std::vector<unsigned> flag_;
  unsigned epoch_ = 0;
};

template <Field F>
MorseData<F> run_reduction(Parametrization<F> param, const ScytheOptions& opts, bool top_down, bool iterate) {
  MorseData<F> data{std::move(param), {}, {}, {}, std::nullopt, {}, {}, 0, {}, 0};
  Parametrization<F>& p = data.reduced;
  data.peak_map_entries = p.stored_entries();
  std::optional<EquivalenceTracker<F>> tracker;
  if (opts.tracking != Tracking::off) data.original_bases = assemble(p).bases();
  if (opts.tracking == Tracking::dense) tracker.emplace(p.field(), data.original_bases);

  for (;;) {
    const std::size_t before = p.size();
    PassRecord pass;
    pass.top_down = top_down;
    pass.input = p.poset();
    Sweeper<F> sweeper(p, opts, tracker ? &*tracker : nullptr,
                       opts.tracking == Tracking::steps ? &data.steps : nullptr, data.peak_map_entries);
    pass.pairs = sweeper.run(top_down);
    if (opts.self_check) {
      auto axioms = check_matching_axioms(pass.pairs, pass.input);
      if (!axioms.ok) throw Error("scythe produced an illegal matching: " + axioms.message);
      auto acyclic = verify_acyclic(pass.pairs, pass.input);
      if (!acyclic.ok) throw CyclicMatching("scythe produced a cyclic matching: " + acyclic.message);
      if (!is_removal_monotone(pass.pairs, pass.input, top_down)) throw Error("scythe removal order is not monotone");
      if (!verify_d_squared(assemble(p)).ok) throw NotAComplex("reduced complex fails d^2 = 0", {});
    }
    data.matching.pairs.insert(data.matching.pairs.end(), pass.pairs.begin(), pass.pairs.end());
    data.passes.push_back(std::move(pass));
    if (!iterate || p.size() == before) break;
  }

  for (Index i : p.alive_indices()) data.matching.critical.push_back(p.id(i));
  data.critical_poset = p.poset();
  data.m_k.assign(p.top_dim() >= 0 ? static_cast<std::size_t>(p.top_dim()) + 1 : 0, 0);
  for (Index i : p.alive_indices()) ++data.m_k[static_cast<std::size_t>(p.dim(i))];
  for (auto m : data.m_k) data.m_tilde += m * m;
  if (tracker) data.equivalence = tracker->materialize(assemble(p).bases());
  return data;
}

}  // namespace detail

/// Bottom-up reduction: repeatedly declares the minimal (dimension, then id) non-critical element
/// critical and sweeps upward from it, reducing pairs as they become available.
template <Field F>
MorseData<F> scythe(Parametrization<F> param, const ScytheOptions& opts = {}) {
  return detail::run_reduction(std::move(param), opts, false, false);
}

/// Top-down dual of scythe: starts from maximal elements and looks for partners below.
template <Field F>
MorseData<F> coscythe(Parametrization<F> param, const ScytheOptions& opts = {}) {
  return detail::run_reduction(std::move(param), opts, true, false);
}

/// Scythe passes until a pass no longer shrinks the complex.
template <Field F>
MorseData<F> iterate_scythe(Parametrization<F> param, const ScytheOptions& opts = {}) {
  return detail::run_reduction(std::move(param), opts, false, true);
}

// ---------------------------------------------------------------------------
// Gradient-path oracle

/// Morse coboundary blocks F^S_{mm'} for critical m < m' summed over explicitly enumerated
/// gradient paths on the original parametrization. Only nonzero blocks are returned, keyed by ids.
/// Exponential in the worst case; intended for small inputs.
template <Field F>
std::map<std::pair<CellId, CellId>, Matrix<F>> morse_coboundary_oracle(const Parametrization<F>& original,
                                                                       const std::vector<MatchedPair>& pairs) {
  const auto poset = original.poset();
  auto axioms = check_matching_axioms(pairs, poset);
  if (!axioms.ok) throw Error("oracle input is not a matching: " + axioms.message);
  auto acyclic = verify_acyclic(pairs, poset);
  if (!acyclic.ok) throw CyclicMatching("oracle input: " + acyclic.message);

  struct Pair {
    Index x;
    Index y;
    Matrix<F> neg_inverse;
  };
  std::vector<Pair> matched;
  std::map<Index, std::size_t> by_upper;
  std::set<Index> in_matching;
  for (const auto& mp : pairs) {
    const Index x = original.at(mp.lower);
    const Index y = original.at(mp.upper);
    auto inv = try_invert(*original.map(x, y));
    if (!inv) throw NotInvertible("matched map on (" + mp.lower + ", " + mp.upper + ") is not invertible");
    by_upper[y] = matched.size();
    matched.push_back({x, y, inv->negated()});
    in_matching.insert(x);
    in_matching.insert(y);
  }
  auto critical = [&](Index v) { return !in_matching.count(v); };

  std::map<std::pair<Index, Index>, Matrix<F>> sums;
  auto accumulate = [&](Index m, Index mp, const Matrix<F>& block) {
    auto it = sums.find({m, mp});
    if (it == sums.end()) {
      sums.emplace(std::make_pair(m, mp), block);
    } else {
      it->second += block;
    }
  };

  std::vector<bool> on_path(matched.size(), false);
  // acc : F(m) -> F(y_P) on entry
  std::function<void(Index, std::size_t, const Matrix<F>&)> walk = [&](Index m, std::size_t k, const Matrix<F>& acc) {
    if (on_path[k]) throw CyclicMatching("gradient path revisits (" + original.id(matched[k].x) + ", " +
                                         original.id(matched[k].y) + ")");
    on_path[k] = true;
    const Pair& pr = matched[k];
    const Matrix<F> at_x = mat_mul(pr.neg_inverse, acc);
    for (const auto& [z, fxz] : original.up(pr.x)) {
      if (z == pr.y) continue;
      if (critical(z)) {
        accumulate(m, z, mat_mul(fxz, at_x));
      } else if (auto it = by_upper.find(z); it != by_upper.end()) {
        walk(m, it->second, mat_mul(fxz, at_x));
      }
    }
    on_path[k] = false;
  };

  for (Index m : original.alive_indices()) {
    if (!critical(m)) continue;
    for (const auto& [y, fmy] : original.up(m)) {
      if (critical(y)) {
        accumulate(m, y, fmy);
      } else if (auto it = by_upper.find(y); it != by_upper.end()) {
        walk(m, it->second, fmy);
      }
    }
  }

  std::map<std::pair<CellId, CellId>, Matrix<F>> out;
  for (auto& [key, block] : sums) {
    if (!block.is_zero()) out.emplace(std::make_pair(original.id(key.first), original.id(key.second)), std::move(block));
  }
  return out;
}

/// Nonzero cover maps of a parametrization keyed by ids, in the oracle's format.
template <Field F>
std::map<std::pair<CellId, CellId>, Matrix<F>> cover_blocks(const Parametrization<F>& param) {
  std::map<std::pair<CellId, CellId>, Matrix<F>> out;
  for (auto& cm : param.cover_maps()) {
    if (!cm.map.is_zero()) out.emplace(std::make_pair(cm.from, cm.to), std::move(cm.map));
  }
  return out;
}

}  // namespace cellsheaf
