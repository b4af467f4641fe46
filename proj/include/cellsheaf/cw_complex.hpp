#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "cellsheaf/errors.hpp"
#include "cellsheaf/poset.hpp"

namespace cellsheaf {

struct SignedCover {
  CellId from;
  CellId to;
  int sign = 1;

  friend bool operator==(const SignedCover&, const SignedCover&) = default;
};

/// Regular CW complex: a graded face poset plus incidence numbers [s:t] in {+1, -1}
/// on its covering pairs. Pairs with incidence 0 are not covers.
class CWComplex {
 public:
  CWComplex() = default;

  static CWComplex build(std::vector<ElementSpec> cells, const std::vector<SignedCover>& incidences) {
    std::vector<std::pair<CellId, CellId>> covers;
    covers.reserve(incidences.size());
    for (const auto& c : incidences) {
      if (c.sign != 1 && c.sign != -1) {
        throw ValidationError("incidence of (" + c.from + ", " + c.to + ") must be +1 or -1");
      }
      covers.emplace_back(c.from, c.to);
    }
    CWComplex cw;
    cw.poset_ = GradedPoset::build(std::move(cells), covers);
    cw.up_sign_.assign(cw.poset_.size(), {});
    for (Index x = 0; x < cw.poset_.size(); ++x) cw.up_sign_[x].resize(cw.poset_.up(x).size(), 0);
    for (const auto& c : incidences) {
      const Index x = cw.poset_.at(c.from);
      const Index y = cw.poset_.at(c.to);
      const auto& u = cw.poset_.up(x);
      const auto k = static_cast<std::size_t>(std::find(u.begin(), u.end(), y) - u.begin());
      cw.up_sign_[x][k] = c.sign;
    }
    auto violations = cw.incidence_violations();
    if (!violations.empty()) {
      std::string msg = "incidence identity fails for";
      for (const auto& [s, t] : violations) msg += " (" + s + ", " + t + ")";
      throw IncidenceIdentityViolation(msg, std::move(violations));
    }
    return cw;
  }

  const GradedPoset& poset() const noexcept { return poset_; }
  std::size_t size() const noexcept { return poset_.size(); }
  int dimension() const { return poset_.max_dim(); }

  /// [x:y], zero when y does not cover x.
  int incidence(Index x, Index y) const {
    const auto& u = poset_.up(x);
    for (std::size_t k = 0; k < u.size(); ++k) {
      if (u[k] == y) return up_sign_[x][k];
    }
    return 0;
  }

  int incidence(const CellId& x, const CellId& y) const { return incidence(poset_.at(x), poset_.at(y)); }

  std::vector<SignedCover> signed_covers() const {
    std::vector<SignedCover> out;
    for (Index x = 0; x < size(); ++x) {
      const auto& u = poset_.up(x);
      for (std::size_t k = 0; k < u.size(); ++k) out.push_back({poset_.id(x), poset_.id(u[k]), up_sign_[x][k]});
    }
    return out;
  }

  /// All (s, t) with dim t = dim s + 2 whose two-step incidence sum is nonzero.
  WitnessPairs incidence_violations() const {
    WitnessPairs out;
    for (Index s = 0; s < size(); ++s) {
      std::map<Index, int> sums;
      const auto& u = poset_.up(s);
      for (std::size_t k = 0; k < u.size(); ++k) {
        const Index l = u[k];
        const auto& ul = poset_.up(l);
        for (std::size_t m = 0; m < ul.size(); ++m) sums[ul[m]] += up_sign_[s][k] * up_sign_[l][m];
      }
      for (const auto& [t, sum] : sums) {
        if (sum != 0) out.emplace_back(poset_.id(s), poset_.id(t));
      }
    }
    return out;
  }

  bool is_face_closed(const std::set<Index>& cells) const {
    for (Index c : cells) {
      for (Index f : poset_.down(c)) {
        if (!cells.count(f)) return false;
      }
    }
    return true;
  }

  /// Smallest face-closed set containing the given cells.
  std::set<Index> closure(const std::vector<CellId>& cells) const {
    std::set<Index> out;
    std::vector<Index> stack;
    for (const auto& id : cells) stack.push_back(poset_.at(id));
    while (!stack.empty()) {
      const Index c = stack.back();
      stack.pop_back();
      if (!out.insert(c).second) continue;
      for (Index f : poset_.down(c)) stack.push_back(f);
    }
    return out;
  }

  std::set<Index> indices_of(const std::vector<CellId>& cells) const {
    std::set<Index> out;
    for (const auto& id : cells) {
      auto i = poset_.find(id);
      if (!i) throw UnknownCell("unknown cell '" + id + "'");
      out.insert(*i);
    }
    return out;
  }

  /// The subcomplex spanned by a face-closed cell set, cells kept in this complex's order.
  CWComplex subcomplex(const std::set<Index>& cells) const {
    if (!is_face_closed(cells)) throw NotASubcomplex("cell set is not closed under taking faces");
    std::vector<ElementSpec> elements;
    std::vector<SignedCover> incidences;
    for (Index c : cells) elements.push_back(poset_.element(c));
    for (Index c : cells) {
      const auto& u = poset_.up(c);
      for (std::size_t k = 0; k < u.size(); ++k) {
        if (cells.count(u[k])) incidences.push_back({poset_.id(c), poset_.id(u[k]), up_sign_[c][k]});
      }
    }
    return build(std::move(elements), incidences);
  }

  CWComplex subcomplex(const std::vector<CellId>& cells) const { return subcomplex(indices_of(cells)); }

  friend bool operator==(const CWComplex& a, const CWComplex& b) {
    if (a.poset_.elements() != b.poset_.elements()) return false;
    auto ca = a.signed_covers();
    auto cb = b.signed_covers();
    auto key = [](const SignedCover& c) { return std::tie(c.from, c.to, c.sign); };
    auto less = [&](const SignedCover& l, const SignedCover& r) { return key(l) < key(r); };
    std::sort(ca.begin(), ca.end(), less);
    std::sort(cb.begin(), cb.end(), less);
    return ca == cb;
  }

 private:
  GradedPoset poset_;
  std::vector<std::vector<int>> up_sign_;  // aligned with poset_.up(x)
};

inline CWComplex build_cw(std::vector<ElementSpec> cells, const std::vector<SignedCover>& incidences) {
  return CWComplex::build(std::move(cells), incidences);
}

/// Simplicial complex generated by the given simplices (vertex index lists) with the
/// standard orientation [face_i : s] = (-1)^i on sorted vertices. Cell ids join vertex
/// names with `sep`; cells are ordered by dimension, then lexicographically by vertex list.
inline CWComplex simplicial_complex(const std::vector<std::vector<std::size_t>>& simplices,
                                    const std::vector<std::string>& vertex_names, const std::string& sep = ",") {
  std::set<std::vector<std::size_t>> all;
  for (auto s : simplices) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    if (s.empty()) continue;
    for (auto v : s) {
      if (v >= vertex_names.size()) throw UnknownCell("simplex uses vertex without a name");
    }
    // enumerate every nonempty face
    const std::size_t k = s.size();
    for (std::size_t mask = 1; mask < (std::size_t{1} << k); ++mask) {
      std::vector<std::size_t> face;
      for (std::size_t i = 0; i < k; ++i) {
        if (mask & (std::size_t{1} << i)) face.push_back(s[i]);
      }
      all.insert(std::move(face));
    }
  }
  std::vector<std::vector<std::size_t>> ordered(all.begin(), all.end());
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const auto& a, const auto& b) { return a.size() < b.size(); });
  auto name = [&](const std::vector<std::size_t>& s) {
    std::string id;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (i) id += sep;
      id += vertex_names[s[i]];
    }
    return id;
  };
  std::vector<ElementSpec> cells;
  std::vector<SignedCover> incidences;
  for (const auto& s : ordered) {
    cells.push_back({name(s), static_cast<int>(s.size()) - 1});
    if (s.size() < 2) continue;
    for (std::size_t i = 0; i < s.size(); ++i) {
      auto face = s;
      face.erase(face.begin() + static_cast<std::ptrdiff_t>(i));
      incidences.push_back({name(face), name(s), i % 2 == 0 ? 1 : -1});
    }
  }
  return CWComplex::build(std::move(cells), incidences);
}

}  // namespace cellsheaf
