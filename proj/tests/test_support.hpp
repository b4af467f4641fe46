#pragma once

// Shared helpers for the unit and acceptance tests: fixture loading, seeded random
// complexes/sheaves, and rank oracles that do not go through the library's Matrix code.

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "cellsheaf/cellsheaf.hpp"

namespace testing_support {

using namespace cellsheaf;

inline std::string data_path(const std::string& name) { return std::string(CELLSHEAF_DATA_DIR) + "/" + name; }

inline io::Document load_document(const std::string& name) {
  return io::parse_document(io::read_json_file(data_path(name)), data_path(name));
}

inline CWComplex load_complex(const std::string& name) { return io::complex_from_document(load_document(name)); }

inline Cover load_cover(const CWComplex& base, const std::string& name) {
  return Cover::build(base, io::pieces_from_json(io::read_json_file(data_path(name))));
}

inline FiberMap load_fibers(const std::string& name) {
  return io::fibers_from_json(io::read_json_file(data_path(name)));
}

/// Fixture complexes with their known Betti numbers.
struct NamedFixture {
  std::string file;
  std::vector<std::size_t> betti;
};

inline std::vector<NamedFixture> standard_fixtures() {
  return {{"point.json", {1}},          {"interval.json", {1, 0}},   {"circle.json", {1, 1}},
          {"hexagon.json", {1, 1}},     {"triangle.json", {1, 0, 0}}, {"torus.json", {1, 2, 1}},
          {"genus2.json", {1, 4, 1}}};
}

// ---------------------------------------------------------------------------
// Oracles

/// Betti numbers of the constant sheaf over GF(2) from the unsigned coboundary (every cover
/// contributes a 1). Surfaces and graphs have no torsion, so these equal the rational ones.
inline std::vector<std::size_t> gf2_betti(const CWComplex& cw) {
  const auto& poset = cw.poset();
  const int top = cw.dimension();
  std::vector<std::vector<Index>> by_dim(static_cast<std::size_t>(std::max(top, 0)) + 1);
  std::map<Index, std::size_t> pos;
  for (Index i = 0; i < poset.size(); ++i) {
    auto& bucket = by_dim[static_cast<std::size_t>(poset.dim(i))];
    pos[i] = bucket.size();
    bucket.push_back(i);
  }
  // rank of d^k : C^k -> C^{k+1}; rows indexed by (k+1)-cells as bitsets over k-cells
  auto rank_of = [&](int k) -> std::size_t {
    if (k < 0 || k + 1 > top) return 0;
    std::vector<std::vector<bool>> rows;
    for (Index y : by_dim[static_cast<std::size_t>(k + 1)]) {
      std::vector<bool> row(by_dim[static_cast<std::size_t>(k)].size(), false);
      for (Index x : poset.down(y)) row[pos[x]] = !row[pos[x]];
      rows.push_back(std::move(row));
    }
    std::size_t r = 0;
    const std::size_t cols = by_dim[static_cast<std::size_t>(k)].size();
    for (std::size_t c = 0; c < cols && r < rows.size(); ++c) {
      std::size_t piv = r;
      while (piv < rows.size() && !rows[piv][c]) ++piv;
      if (piv == rows.size()) continue;
      std::swap(rows[piv], rows[r]);
      for (std::size_t i = 0; i < rows.size(); ++i) {
        if (i != r && rows[i][c]) {
          for (std::size_t j = 0; j < cols; ++j) rows[i][j] = rows[i][j] != rows[r][j];
        }
      }
      ++r;
    }
    return r;
  };
  std::vector<std::size_t> out;
  for (int k = 0; k <= top; ++k) {
    out.push_back(by_dim[static_cast<std::size_t>(k)].size() - rank_of(k) - rank_of(k - 1));
  }
  return out;
}

/// Rank over F_p with plain 64-bit arithmetic.
inline std::size_t oracle_rank_mod_p(std::vector<std::vector<std::uint64_t>> a, std::uint64_t p) {
  auto inv = [&](std::uint64_t x) {
    std::uint64_t result = 1, base = x % p, e = p - 2;
    while (e) {
      if (e & 1) result = result * base % p;
      base = base * base % p;
      e >>= 1;
    }
    return result;
  };
  std::size_t r = 0;
  const std::size_t cols = a.empty() ? 0 : a[0].size();
  for (std::size_t c = 0; c < cols && r < a.size(); ++c) {
    std::size_t piv = r;
    while (piv < a.size() && a[piv][c] % p == 0) ++piv;
    if (piv == a.size()) continue;
    std::swap(a[piv], a[r]);
    const std::uint64_t s = inv(a[r][c]);
    for (auto& v : a[r]) v = v * s % p;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (i == r || a[i][c] == 0) continue;
      const std::uint64_t f = a[i][c];
      for (std::size_t j = 0; j < cols; ++j) a[i][j] = (a[i][j] + p - f * a[r][j] % p) % p;
    }
    ++r;
  }
  return r;
}

/// Rank over Q by fraction-free (Bareiss) elimination on integers.
inline std::size_t oracle_rank_rational(const std::vector<std::vector<mpq_class>>& q) {
  std::vector<std::vector<mpz_class>> a;
  for (const auto& row : q) {
    mpz_class lcm = 1;
    for (const auto& v : row) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), v.get_den_mpz_t());
    std::vector<mpz_class> out;
    for (const auto& v : row) out.push_back(mpz_class(v * lcm));
    a.push_back(std::move(out));
  }
  const std::size_t cols = a.empty() ? 0 : a[0].size();
  std::size_t r = 0;
  mpz_class prev = 1;
  for (std::size_t c = 0; c < cols && r < a.size(); ++c) {
    std::size_t piv = r;
    while (piv < a.size() && a[piv][c] == 0) ++piv;
    if (piv == a.size()) continue;
    std::swap(a[piv], a[r]);
    for (std::size_t i = r + 1; i < a.size(); ++i) {
      for (std::size_t j = c + 1; j < cols; ++j) {
        a[i][j] = (a[r][c] * a[i][j] - a[i][c] * a[r][j]) / prev;
      }
      a[i][c] = 0;
    }
    prev = a[r][c];
    ++r;
  }
  return r;
}

template <Field F>
std::size_t oracle_rank(const Matrix<F>& m) {
  if constexpr (std::is_same_v<F, Rationals>) {
    std::vector<std::vector<mpq_class>> rows(m.rows(), std::vector<mpq_class>(m.cols()));
    for (std::size_t i = 0; i < m.rows(); ++i) {
      for (std::size_t j = 0; j < m.cols(); ++j) rows[i][j] = m(i, j);
    }
    return oracle_rank_rational(rows);
  } else {
    std::vector<std::vector<std::uint64_t>> rows(m.rows(), std::vector<std::uint64_t>(m.cols()));
    for (std::size_t i = 0; i < m.rows(); ++i) {
      for (std::size_t j = 0; j < m.cols(); ++j) rows[i][j] = m(i, j);
    }
    return oracle_rank_mod_p(rows, m.field().characteristic());
  }
}

/// Betti numbers by rank/nullity with the oracle ranks above.
template <Field F>
std::vector<std::size_t> oracle_betti(const CochainComplex<F>& cx) {
  std::vector<std::size_t> ranks;
  for (int n = 0; n <= cx.top_degree(); ++n) ranks.push_back(oracle_rank(cx.coboundary(n)));
  std::vector<std::size_t> out;
  for (int n = 0; n <= cx.top_degree(); ++n) {
    const auto k = static_cast<std::size_t>(n);
    out.push_back(cx.dimension(n) - ranks[k] - (k ? ranks[k - 1] : 0));
  }
  return out;
}

template <Field F>
std::vector<std::size_t> oracle_betti(const Parametrization<F>& p) {
  return oracle_betti(assemble(p));
}

// ---------------------------------------------------------------------------
// Random inputs

using Rng = std::mt19937_64;

inline std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

/// Random simplicial complex with at most `max_cells` cells and dimension at most `max_dim`,
/// with every cell's orientation flipped at random (incidences stay consistent).
inline CWComplex random_complex(Rng& rng, std::size_t max_cells = 20, int max_dim = 3) {
  const std::size_t verts = uniform(rng, 2, 6);
  std::vector<std::string> names;
  for (std::size_t i = 0; i < verts; ++i) names.push_back("v" + std::to_string(i));
  std::vector<std::vector<std::size_t>> simplices;
  std::size_t cells = 0;
  auto closure_size = [](const std::vector<std::vector<std::size_t>>& ss) {
    std::set<std::vector<std::size_t>> all;
    for (auto s : ss) {
      std::sort(s.begin(), s.end());
      for (std::size_t mask = 1; mask < (std::size_t{1} << s.size()); ++mask) {
        std::vector<std::size_t> f;
        for (std::size_t i = 0; i < s.size(); ++i) {
          if (mask & (std::size_t{1} << i)) f.push_back(s[i]);
        }
        all.insert(f);
      }
    }
    return all.size();
  };
  for (int attempt = 0; attempt < 12; ++attempt) {
    const std::size_t k = uniform(rng, 1, std::min<std::size_t>(verts, static_cast<std::size_t>(max_dim) + 1));
    std::vector<std::size_t> all(verts);
    for (std::size_t i = 0; i < verts; ++i) all[i] = i;
    std::shuffle(all.begin(), all.end(), rng);
    std::vector<std::size_t> s(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k));
    simplices.push_back(s);
    const std::size_t size = closure_size(simplices);
    if (size > max_cells) {
      simplices.pop_back();
      continue;
    }
    cells = size;
  }
  if (cells == 0) simplices = {{0}};
  const CWComplex plain = simplicial_complex(simplices, names);
  std::vector<int> flip(plain.size());
  for (auto& f : flip) f = uniform(rng, 0, 1) ? -1 : 1;
  std::vector<ElementSpec> elements;
  for (Index i = 0; i < plain.size(); ++i) elements.push_back(plain.poset().element(i));
  std::vector<SignedCover> covers;
  for (auto c : plain.signed_covers()) {
    c.sign *= flip[plain.poset().at(c.from)] * flip[plain.poset().at(c.to)];
    covers.push_back(c);
  }
  return CWComplex::build(elements, covers);
}

template <Field F>
typename F::value_type random_element(Rng& rng, const F& field) {
  return field.from_int(static_cast<long>(uniform(rng, 0, 8)) - 4);
}

template <Field F>
Matrix<F> random_invertible(Rng& rng, const F& field, std::size_t n) {
  for (;;) {
    Matrix<F> m(field, n, n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) m(i, j) = random_element(rng, field);
    }
    if (try_invert(m)) return m;
  }
}

/// Direct sum of up to three pushforwards of constant sheaves on random subcomplexes, then a
/// random change of basis in every stalk. Stalk ranks are at most 3 and the restriction maps
/// range from invertible to rank-deficient.
template <Field F>
CellularSheaf<F> random_sheaf(Rng& rng, const CWComplex& base, const F& field) {
  const std::size_t summands = uniform(rng, 1, 3);
  const auto& poset = base.poset();
  std::vector<std::set<Index>> supports;
  for (std::size_t s = 0; s < summands; ++s) {
    std::vector<CellId> pick;
    for (Index i = 0; i < poset.size(); ++i) {
      if (uniform(rng, 0, 2) != 0) pick.push_back(poset.id(i));
    }
    supports.push_back(base.closure(pick));
  }
  // coordinates of each stalk: the summands containing the cell, in order
  std::vector<std::vector<std::size_t>> coords(poset.size());
  std::vector<std::size_t> ranks(poset.size());
  for (Index i = 0; i < poset.size(); ++i) {
    for (std::size_t s = 0; s < summands; ++s) {
      if (supports[s].count(i)) coords[i].push_back(s);
    }
    ranks[i] = coords[i].size();
  }
  std::vector<Matrix<F>> change, change_inv;
  for (Index i = 0; i < poset.size(); ++i) {
    auto p = random_invertible(rng, field, ranks[i]);
    change_inv.push_back(*try_invert(p));
    change.push_back(std::move(p));
  }
  std::map<std::pair<Index, Index>, Matrix<F>> restrictions;
  for (auto [s, t] : poset.cover_pairs()) {
    Matrix<F> m(field, ranks[t], ranks[s]);
    for (std::size_t a = 0; a < coords[t].size(); ++a) {
      for (std::size_t b = 0; b < coords[s].size(); ++b) {
        if (coords[t][a] == coords[s][b]) m(a, b) = field.one();
      }
    }
    restrictions.emplace(std::make_pair(s, t), mat_mul(mat_mul(change[t], m), change_inv[s]));
  }
  return CellularSheaf<F>(base, field, ranks, std::move(restrictions));
}

template <Field F>
Parametrization<F> random_parametrization(Rng& rng, const F& field, std::size_t max_cells = 20, int max_dim = 3) {
  return compile(random_sheaf(rng, random_complex(rng, max_cells, max_dim), field));
}

/// A compatible acyclic matching built greedily from randomly ordered invertible covers.
/// The pairs come back in a monotone order (topological order of the pair relation).
template <Field F>
std::vector<MatchedPair> random_acyclic_matching(Rng& rng, const Parametrization<F>& param) {
  const auto poset = param.poset();
  std::vector<std::pair<Index, Index>> candidates;
  for (Index x : param.alive_indices()) {
    for (const auto& [y, m] : param.up(x)) {
      if (m.rows() > 0 && try_invert(m)) candidates.emplace_back(x, y);
    }
  }
  std::shuffle(candidates.begin(), candidates.end(), rng);
  std::vector<MatchedPair> pairs;
  std::set<Index> used;
  for (auto [x, y] : candidates) {
    if (used.count(x) || used.count(y)) continue;
    pairs.push_back({param.id(x), param.id(y)});
    if (!verify_acyclic(pairs, poset).ok) {
      pairs.pop_back();
      continue;
    }
    used.insert(x);
    used.insert(y);
  }
  return verify_acyclic(pairs, poset).order;
}

template <Field F>
std::vector<std::size_t> profile_betti(const Parametrization<F>& p) {
  return betti(assemble(p)).betti;
}

}  // namespace testing_support
