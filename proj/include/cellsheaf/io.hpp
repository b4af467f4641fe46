#pragma once

#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>  // vendored nlohmann::json

#include "cellsheaf/cohomology.hpp"
#include "cellsheaf/cw_complex.hpp"
#include "cellsheaf/equivalence.hpp"
#include "cellsheaf/errors.hpp"
#include "cellsheaf/field.hpp"
#include "cellsheaf/morse.hpp"
#include "cellsheaf/nerve.hpp"
#include "cellsheaf/parametrization.hpp"
#include "cellsheaf/sheaf.hpp"

namespace cellsheaf::io {

/// Keys keep insertion order so that output files are stable.
using json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Low-level helpers with JSON-pointer diagnostics

namespace detail {

inline std::string join(const std::string& path, const std::string& key) { return path + "/" + key; }
inline std::string join(const std::string& path, std::size_t i) { return path + "/" + std::to_string(i); }

inline const json& require(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) throw ParseError(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(join(path, key), "missing required key");
  return *it;
}

inline std::string as_string(const json& v, const std::string& path) {
  if (!v.is_string()) throw ParseError(path, "expected a string");
  return v.get<std::string>();
}

inline long as_int(const json& v, const std::string& path) {
  if (!v.is_number_integer()) throw ParseError(path, "expected an integer");
  return v.get<long>();
}

inline const json& as_array(const json& v, const std::string& path) {
  if (!v.is_array()) throw ParseError(path, "expected an array");
  return v;
}

template <Field F>
typename F::value_type parse_entry(const F& field, const json& v, const std::string& path) {
  try {
    if (v.is_string()) return field.parse(v.get<std::string>());
    if (v.is_number_integer()) return field.parse(std::to_string(v.get<long long>()));
  } catch (const InvalidField& e) {
    throw ParseError(path, e.what());
  }
  throw ParseError(path, "matrix entries must be strings or integers");
}

}  // namespace detail

template <Field F>
json matrix_to_json(const Matrix<F>& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m.field().to_string(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

/// Nested rows of entries. `[]` stands for any matrix with zero rows.
template <Field F>
Matrix<F> matrix_from_json(const F& field, const json& v, std::size_t rows, std::size_t cols, const std::string& path) {
  detail::as_array(v, path);
  Matrix<F> m(field, rows, cols);
  if (v.empty() && (rows == 0 || cols == 0)) return m;
  if (v.size() != rows) {
    throw ParseError(path, "expected " + std::to_string(rows) + " rows, found " + std::to_string(v.size()));
  }
  for (std::size_t i = 0; i < rows; ++i) {
    const auto rpath = detail::join(path, i);
    const auto& row = detail::as_array(v[i], rpath);
    if (row.size() != cols) {
      throw ParseError(rpath, "expected " + std::to_string(cols) + " entries, found " + std::to_string(row.size()));
    }
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = detail::parse_entry(field, row[j], detail::join(rpath, j));
  }
  return m;
}

inline json field_to_json(const FieldSpec& spec) {
  json f = json::object();
  if (spec.kind() == FieldSpec::Kind::rationals) {
    f["kind"] = "rational";
  } else {
    f["kind"] = "fp";
    f["p"] = spec.characteristic();
  }
  return f;
}

inline FieldSpec field_from_json(const json& v, const std::string& path) {
  if (v.is_string()) {
    try {
      return FieldSpec::parse(v.get<std::string>());
    } catch (const InvalidField& e) {
      throw ParseError(path, e.what());
    }
  }
  const auto kind = detail::as_string(detail::require(v, "kind", path), detail::join(path, "kind"));
  if (kind == "rational" || kind == "rationals" || kind == "Q") return FieldSpec::rationals();
  if (kind != "fp") throw ParseError(detail::join(path, "kind"), "unknown field kind '" + kind + "'");
  const auto ppath = detail::join(path, "p");
  const long p = detail::as_int(detail::require(v, "p", path), ppath);
  if (p < 2) throw ParseError(ppath, "characteristic " + std::to_string(p) + " is not prime");
  try {
    return FieldSpec::prime(static_cast<std::uint64_t>(p));
  } catch (const InvalidField& e) {
    throw ParseError(ppath, e.what());
  }
}

inline json parse_json_text(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(source, e.what());
  }
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, "cannot open file");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_json_text(buffer.str(), path);
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  out << text;
}

/// Pretty JSON text ending in a newline.
inline std::string dump(const json& doc) { return doc.dump(2) + "\n"; }

// ---------------------------------------------------------------------------
// Complex / sheaf / parametrization documents
//
// {"field": {"kind": "rational"} | {"kind": "fp", "p": 5},
//  "cells":  [{"id": "a", "dim": 0, "rank": 1}, ...],
//  "covers": [{"from": "a", "to": "e", "incidence": 1, "map": [["1"]]}, ...],
//  "dimension": 1}
//
// Covers with "incidence" describe a CW complex; with ranks and maps on top, a sheaf whose
// maps are restrictions. Covers without incidence are raw parametrization maps F_xy.

struct Document {
  std::optional<FieldSpec> field;
  std::vector<ElementSpec> elements;
  std::vector<std::optional<std::size_t>> ranks;
  struct CoverEntry {
    CellId from;
    CellId to;
    std::optional<int> incidence;
    std::optional<json> map;
    std::string path;
  };
  std::vector<CoverEntry> covers;
  std::optional<int> dimension;
  json source;

  bool has_incidences() const {
    if (covers.empty()) return !elements.empty() && !has_ranks();
    for (const auto& c : covers) {
      if (!c.incidence) return false;
    }
    return true;
  }

  bool has_ranks() const {
    for (const auto& r : ranks) {
      if (r) return true;
    }
    return false;
  }

  bool has_maps() const {
    for (const auto& c : covers) {
      if (c.map) return true;
    }
    return false;
  }
};

/// Structural parse of a complex-like document.
inline Document parse_document(json doc, const std::string& path = "") {
  Document out;
  out.source = std::move(doc);
  const json& d = out.source;
  if (!d.is_object()) throw ParseError(path, "expected an object");
  if (auto it = d.find("field"); it != d.end()) out.field = field_from_json(*it, detail::join(path, "field"));
  if (auto it = d.find("dimension"); it != d.end()) {
    out.dimension = static_cast<int>(detail::as_int(*it, detail::join(path, "dimension")));
  }
  const auto cpath = detail::join(path, "cells");
  const auto& cells = detail::as_array(detail::require(d, "cells", path), cpath);
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const auto p = detail::join(cpath, i);
    const auto& c = cells[i];
    CellId id = detail::as_string(detail::require(c, "id", p), detail::join(p, "id"));
    const long dim = detail::as_int(detail::require(c, "dim", p), detail::join(p, "dim"));
    if (dim < 0) throw ParseError(detail::join(p, "dim"), "dimension must be nonnegative");
    std::optional<std::size_t> rank;
    if (auto it = c.find("rank"); it != c.end()) {
      const long r = detail::as_int(*it, detail::join(p, "rank"));
      if (r < 0) throw ParseError(detail::join(p, "rank"), "rank must be nonnegative");
      rank = static_cast<std::size_t>(r);
    }
    out.elements.push_back({std::move(id), static_cast<int>(dim)});
    out.ranks.push_back(rank);
  }
  const auto vpath = detail::join(path, "covers");
  if (auto it = d.find("covers"); it != d.end()) {
    const auto& covers = detail::as_array(*it, vpath);
    for (std::size_t i = 0; i < covers.size(); ++i) {
      const auto p = detail::join(vpath, i);
      const auto& c = covers[i];
      Document::CoverEntry entry;
      entry.from = detail::as_string(detail::require(c, "from", p), detail::join(p, "from"));
      entry.to = detail::as_string(detail::require(c, "to", p), detail::join(p, "to"));
      if (auto inc = c.find("incidence"); inc != c.end()) {
        entry.incidence = static_cast<int>(detail::as_int(*inc, detail::join(p, "incidence")));
      }
      if (auto m = c.find("map"); m != c.end()) entry.map = *m;
      entry.path = p;
      out.covers.push_back(std::move(entry));
    }
  }
  return out;
}

inline CWComplex complex_from_document(const Document& doc) {
  std::vector<SignedCover> incidences;
  for (const auto& c : doc.covers) {
    if (!c.incidence) throw ParseError(detail::join(c.path, "incidence"), "missing incidence; not a CW complex");
    incidences.push_back({c.from, c.to, *c.incidence});
  }
  return CWComplex::build(doc.elements, incidences);
}

template <Field F>
CellularSheaf<F> sheaf_from_document(const Document& doc, const CWComplex& base, const F& field) {
  std::vector<std::size_t> ranks;
  for (std::size_t i = 0; i < doc.ranks.size(); ++i) {
    if (!doc.ranks[i]) throw ParseError("/cells/" + std::to_string(i) + "/rank", "missing stalk rank");
    ranks.push_back(*doc.ranks[i]);
  }
  std::map<std::pair<Index, Index>, Matrix<F>> maps;
  const auto& poset = base.poset();
  for (const auto& c : doc.covers) {
    const Index s = poset.at(c.from);
    const Index t = poset.at(c.to);
    if (!c.map) {
      if (ranks[s] == 0 || ranks[t] == 0) continue;
      throw ParseError(detail::join(c.path, "map"), "missing restriction map");
    }
    maps.emplace(std::make_pair(s, t), matrix_from_json(field, *c.map, ranks[t], ranks[s], detail::join(c.path, "map")));
  }
  return CellularSheaf<F>(base, field, std::move(ranks), std::move(maps));
}

template <Field F>
Parametrization<F> raw_parametrization_from_document(const Document& doc, const F& field) {
  std::vector<typename Parametrization<F>::Cell> cells;
  std::map<CellId, std::size_t> rank_of;
  for (std::size_t i = 0; i < doc.elements.size(); ++i) {
    if (!doc.ranks[i]) throw ParseError("/cells/" + std::to_string(i) + "/rank", "missing rank");
    cells.push_back({doc.elements[i].id, doc.elements[i].dim, *doc.ranks[i]});
    rank_of[doc.elements[i].id] = *doc.ranks[i];
  }
  std::vector<typename Parametrization<F>::CoverMap> covers;
  for (const auto& c : doc.covers) {
    auto from = rank_of.find(c.from);
    auto to = rank_of.find(c.to);
    if (from == rank_of.end()) throw DanglingId("cover references unknown element '" + c.from + "'");
    if (to == rank_of.end()) throw DanglingId("cover references unknown element '" + c.to + "'");
    if (!c.map) throw ParseError(detail::join(c.path, "map"), "missing map");
    covers.push_back({c.from, c.to, matrix_from_json(field, *c.map, to->second, from->second, detail::join(c.path, "map"))});
  }
  auto param = Parametrization<F>::build(field, std::move(cells), std::move(covers), doc.dimension);
  auto report = verify_d_squared(param);
  if (!report.ok) {
    std::string msg = "coboundary does not square to zero at";
    for (const auto& [s, t] : report.witnesses) msg += " (" + s + ", " + t + ")";
    throw NotAComplex(msg, std::move(report.witnesses));
  }
  return param;
}

/// The parametrization a document stands for: a compiled sheaf, the constant sheaf on a bare
/// complex, or raw maps.
template <Field F>
Parametrization<F> parametrization_from_document(const Document& doc, const F& field) {
  if (doc.has_incidences()) {
    CWComplex base = complex_from_document(doc);
    if (doc.has_ranks()) return compile(sheaf_from_document(doc, base, field));
    return compile(constant_sheaf(base, 1, field));
  }
  return raw_parametrization_from_document(doc, field);
}

inline json complex_to_json(const CWComplex& cw) {
  json doc = json::object();
  json cells = json::array();
  for (const auto& e : cw.poset().elements()) cells.push_back({{"id", e.id}, {"dim", e.dim}});
  json covers = json::array();
  for (const auto& c : cw.signed_covers()) covers.push_back({{"from", c.from}, {"to", c.to}, {"incidence", c.sign}});
  doc["cells"] = std::move(cells);
  doc["covers"] = std::move(covers);
  return doc;
}

template <Field F>
json sheaf_to_json(const CellularSheaf<F>& sheaf) {
  json doc = json::object();
  doc["field"] = field_to_json(sheaf.field().spec());
  const auto& poset = sheaf.base().poset();
  json cells = json::array();
  for (Index i = 0; i < poset.size(); ++i) {
    cells.push_back({{"id", poset.id(i)}, {"dim", poset.dim(i)}, {"rank", sheaf.stalk_rank(i)}});
  }
  json covers = json::array();
  for (auto [s, t] : poset.cover_pairs()) {
    covers.push_back({{"from", poset.id(s)},
                      {"to", poset.id(t)},
                      {"incidence", sheaf.base().incidence(s, t)},
                      {"map", matrix_to_json(sheaf.restriction(s, t))}});
  }
  doc["cells"] = std::move(cells);
  doc["covers"] = std::move(covers);
  return doc;
}

template <Field F>
json parametrization_to_json(const Parametrization<F>& param) {
  json doc = json::object();
  doc["field"] = field_to_json(param.field().spec());
  doc["dimension"] = param.top_dim();
  json cells = json::array();
  for (const auto& c : param.live_cells()) cells.push_back({{"id", c.id}, {"dim", c.dim}, {"rank", c.rank}});
  json covers = json::array();
  for (const auto& cm : param.cover_maps()) {
    covers.push_back({{"from", cm.from}, {"to", cm.to}, {"map", matrix_to_json(cm.map)}});
  }
  doc["cells"] = std::move(cells);
  doc["covers"] = std::move(covers);
  return doc;
}

inline json matching_to_json(const Matching& m) {
  json pairs = json::array();
  for (const auto& p : m.pairs) pairs.push_back({{"lower", p.lower}, {"upper", p.upper}});
  return {{"pairs", std::move(pairs)}, {"critical", m.critical}};
}

inline Matching matching_from_json(const json& v, const std::string& path) {
  Matching m;
  const auto ppath = detail::join(path, "pairs");
  const auto& pairs = detail::as_array(detail::require(v, "pairs", path), ppath);
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto p = detail::join(ppath, i);
    m.pairs.push_back({detail::as_string(detail::require(pairs[i], "lower", p), detail::join(p, "lower")),
                       detail::as_string(detail::require(pairs[i], "upper", p), detail::join(p, "upper"))});
  }
  if (auto it = v.find("critical"); it != v.end()) {
    const auto cpath = detail::join(path, "critical");
    const auto& crit = detail::as_array(*it, cpath);
    for (std::size_t i = 0; i < crit.size(); ++i) m.critical.push_back(detail::as_string(crit[i], detail::join(cpath, i)));
  }
  return m;
}

inline json basis_to_json(const CochainBasis& basis) {
  json blocks = json::array();
  for (const auto& b : basis.blocks) blocks.push_back({{"id", b.id}, {"rank", b.rank}});
  return blocks;
}

template <Field F>
json equivalence_to_json(const Equivalence<F>& eq) {
  json degrees = json::array();
  for (std::size_t n = 0; n < eq.project.size(); ++n) {
    degrees.push_back({{"degree", n},
                       {"original_basis", basis_to_json(eq.original_bases[n])},
                       {"reduced_basis", basis_to_json(n < eq.current_bases.size() ? eq.current_bases[n] : CochainBasis{})},
                       {"project", matrix_to_json(eq.project[n])},
                       {"lift", matrix_to_json(eq.lift[n])},
                       {"homotopy", matrix_to_json(eq.homotopy[n])}});
  }
  return degrees;
}

template <Field F>
json profile_to_json(const CohomologyProfile<F>& profile) {
  json doc = json::object();
  doc["betti"] = profile.betti;
  if (profile.generators) {
    json gens = json::array();
    for (const auto& g : *profile.generators) gens.push_back(matrix_to_json(g));
    doc["generators"] = std::move(gens);
  }
  return doc;
}

template <Field F>
CohomologyProfile<F> profile_from_json(const F& field, const json& v, const std::string& path = "") {
  CohomologyProfile<F> profile;
  const auto bpath = detail::join(path, "betti");
  const auto& b = detail::as_array(detail::require(v, "betti", path), bpath);
  for (std::size_t i = 0; i < b.size(); ++i) {
    const long x = detail::as_int(b[i], detail::join(bpath, i));
    if (x < 0) throw ParseError(detail::join(bpath, i), "Betti numbers are nonnegative");
    profile.betti.push_back(static_cast<std::size_t>(x));
  }
  if (auto it = v.find("generators"); it != v.end()) {
    const auto gpath = detail::join(path, "generators");
    const auto& gens = detail::as_array(*it, gpath);
    std::vector<Matrix<F>> out;
    for (std::size_t n = 0; n < gens.size(); ++n) {
      const auto mpath = detail::join(gpath, n);
      const auto& rows = detail::as_array(gens[n], mpath);
      const std::size_t r = rows.size();
      const std::size_t c = r == 0 ? 0 : detail::as_array(rows[0], detail::join(mpath, 0)).size();
      out.push_back(matrix_from_json(field, rows, r, c, mpath));
    }
    profile.generators = std::move(out);
  }
  return profile;
}

/// Reduced parametrization plus its matching (and equivalence, when tracked).
template <Field F>
json morse_to_json(const MorseData<F>& data, bool with_equivalence) {
  json doc = parametrization_to_json(data.reduced);
  doc["matching"] = matching_to_json(data.matching);
  if (with_equivalence) doc["equivalence"] = equivalence_to_json(data.materialize_equivalence());
  return doc;
}

// ---------------------------------------------------------------------------
// Cover and fiber documents

inline std::vector<CoverPiece> pieces_from_json(const json& v, const std::string& path = "") {
  const auto ppath = detail::join(path, "pieces");
  const auto& pieces = detail::as_array(detail::require(v, "pieces", path), ppath);
  std::vector<CoverPiece> out;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const auto p = detail::join(ppath, i);
    CoverPiece piece;
    piece.name = detail::as_string(detail::require(pieces[i], "name", p), detail::join(p, "name"));
    const auto cpath = detail::join(p, "cells");
    const auto& cells = detail::as_array(detail::require(pieces[i], "cells", p), cpath);
    for (std::size_t k = 0; k < cells.size(); ++k) piece.cells.push_back(detail::as_string(cells[k], detail::join(cpath, k)));
    out.push_back(std::move(piece));
  }
  return out;
}

inline json pieces_to_json(const Cover& cover) {
  json pieces = json::array();
  for (const auto& piece : cover.pieces()) {
    json cells = json::array();
    for (Index c : piece.cells) cells.push_back(cover.base().poset().id(c));
    pieces.push_back({{"name", piece.name}, {"cells", std::move(cells)}});
  }
  return {{"pieces", std::move(pieces)}};
}

inline FiberMap fibers_from_json(const json& v, const std::string& path = "") {
  FiberMap fm;
  const auto gpath = detail::join(path, "graph");
  fm.graph = complex_from_document(parse_document(detail::require(v, "graph", path), gpath));
  const auto fpath = detail::join(path, "fibers");
  const auto& fibers = detail::require(v, "fibers", path);
  if (!fibers.is_object()) throw ParseError(fpath, "expected an object keyed by graph cell id");
  for (const auto& [key, cells] : fibers.items()) {
    const auto kpath = detail::join(fpath, key);
    const auto& arr = detail::as_array(cells, kpath);
    std::vector<CellId> ids;
    for (std::size_t k = 0; k < arr.size(); ++k) ids.push_back(detail::as_string(arr[k], detail::join(kpath, k)));
    fm.fibers.emplace(key, std::move(ids));
  }
  return fm;
}

inline json fibers_to_json(const FiberMap& fm) {
  json fibers = json::object();
  for (const auto& [id, cells] : fm.fibers) fibers[id] = cells;
  return {{"graph", complex_to_json(fm.graph)}, {"fibers", std::move(fibers)}};
}

}  // namespace cellsheaf::io
