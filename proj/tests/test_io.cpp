#include <gtest/gtest.h>

#include "test_support.hpp"

using namespace cellsheaf;
namespace ts = testing_support;

namespace {

io::json triangle_json() { return io::read_json_file(ts::data_path("triangle.json")); }

}  // namespace

TEST(Parse, CircleFixture) {
  auto cw = ts::load_complex("circle.json");
  EXPECT_EQ(cw.size(), 4u);
  EXPECT_EQ(cw.incidence("b", "e"), -1);
}

TEST(Parse, NonPrimeCharacteristic) {
  auto doc = io::parse_json_text(R"({"field": {"kind": "fp", "p": 4}, "cells": [{"id": "p", "dim": 0}]})", "x");
  try {
    io::parse_document(doc);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("/field/p"), std::string::npos) << e.what();
  }
}

TEST(Parse, PathPreciseErrors) {
  auto bad_dim = io::parse_json_text(R"({"cells": [{"id": "p", "dim": "zero"}]})", "x");
  try {
    io::parse_document(bad_dim);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("/cells/0/dim"), std::string::npos) << e.what();
  }
  EXPECT_THROW(io::parse_json_text("{ not json", "x"), ParseError);
  EXPECT_THROW(io::parse_document(io::parse_json_text(R"({"covers": []})", "x")), ParseError);
  EXPECT_THROW(io::read_json_file(ts::data_path("does_not_exist.json")), ValidationError);
}

TEST(Parse, CorruptedTriangleNamesThePair) {
  auto j = triangle_json();
  // flip the sign of one (edge, 2-cell) incidence
  for (auto& c : j["covers"]) {
    if (c["from"] == "a,b" && c["to"] == "a,b,c") c["incidence"] = -c["incidence"].get<int>();
  }
  try {
    io::complex_from_document(io::parse_document(j));
    FAIL() << "expected IncidenceIdentityViolation";
  } catch (const IncidenceIdentityViolation& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("(a, a,b,c)"), std::string::npos) << what;
    EXPECT_NE(what.find("(b, a,b,c)"), std::string::npos) << what;
  }
}

TEST(Parse, ParametrizationWithoutIncidencesChecksDSquared) {
  auto j = io::parse_json_text(R"({
    "field": "rational",
    "cells": [{"id": "v", "dim": 0, "rank": 1}, {"id": "e", "dim": 1, "rank": 1}, {"id": "f", "dim": 2, "rank": 1}],
    "covers": [{"from": "v", "to": "e", "map": [["1"]]}, {"from": "e", "to": "f", "map": [["1"]]}]
  })", "x");
  EXPECT_THROW(io::parametrization_from_document(io::parse_document(j), Rationals{}), NotAComplex);
}

TEST(Parse, MapShapeMismatch) {
  auto j = io::parse_json_text(R"({
    "cells": [{"id": "v", "dim": 0, "rank": 2}, {"id": "e", "dim": 1, "rank": 1}],
    "covers": [{"from": "v", "to": "e", "incidence": 1, "map": [["1"]]}]
  })", "x");
  EXPECT_THROW(io::parametrization_from_document(io::parse_document(j), Rationals{}), ParseError);
}

TEST(RoundTrip, ComplexSheafParametrization) {
  ts::Rng rng(79);
  for (int trial = 0; trial < 20; ++trial) {
    auto cw = ts::random_complex(rng);
    auto again = io::complex_from_document(io::parse_document(io::parse_json_text(io::dump(io::complex_to_json(cw)), "rt")));
    EXPECT_EQ(again, cw);

    PrimeField f5(5);
    auto sheaf = ts::random_sheaf(rng, cw, f5);
    auto sdoc = io::parse_document(io::parse_json_text(io::dump(io::sheaf_to_json(sheaf)), "rt"));
    auto base = io::complex_from_document(sdoc);
    auto sheaf2 = io::sheaf_from_document(sdoc, base, f5);
    EXPECT_EQ(sheaf2.stalk_ranks(), sheaf.stalk_ranks());
    EXPECT_EQ(sheaf2.restrictions(), sheaf.restrictions());

    auto param = compile(ts::random_sheaf(rng, cw, Rationals{}));
    auto reduced = scythe(param).reduced;
    auto pdoc = io::parse_document(io::parse_json_text(io::dump(io::parametrization_to_json(reduced)), "rt"));
    auto reparsed = io::parametrization_from_document(pdoc, Rationals{});
    EXPECT_EQ(reparsed.live_cells(), reduced.live_cells());
    EXPECT_EQ(reparsed.top_dim(), reduced.top_dim());
    EXPECT_EQ(cover_blocks(reparsed), cover_blocks(reduced));
  }
}

TEST(RoundTrip, MatchingProfileFieldPiecesFibers) {
  Matching m{{{"a", "e"}, {"b", "f"}}, {"c"}};
  auto m2 = io::matching_from_json(io::parse_json_text(io::dump(io::matching_to_json(m)), "rt"), "");
  EXPECT_EQ(m2.pairs, m.pairs);
  EXPECT_EQ(m2.critical, m.critical);

  auto cx = assemble(compile(constant_sheaf(ts::load_complex("torus.json"), 1, Rationals{})));
  auto prof = betti(cx, true);
  auto prof2 = io::profile_from_json(Rationals{}, io::parse_json_text(io::dump(io::profile_to_json(prof)), "rt"));
  EXPECT_EQ(prof2.betti, prof.betti);
  EXPECT_EQ(*prof2.generators, *prof.generators);

  for (const auto& spec : {FieldSpec::rationals(), FieldSpec::prime(7)}) {
    EXPECT_EQ(io::field_from_json(io::field_to_json(spec), "").to_string(), spec.to_string());
  }

  auto pieces_json = io::read_json_file(ts::data_path("hexagon_cover3.json"));
  auto pieces = io::pieces_from_json(pieces_json);
  auto again = io::pieces_from_json(io::parse_json_text(io::dump(io::pieces_to_json(Cover::build(ts::load_complex("hexagon.json"), pieces))), "rt"));
  ASSERT_EQ(again.size(), pieces.size());
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    EXPECT_EQ(again[i].name, pieces[i].name);
    EXPECT_EQ(std::set<CellId>(again[i].cells.begin(), again[i].cells.end()),
              std::set<CellId>(pieces[i].cells.begin(), pieces[i].cells.end()));
  }

  auto fm = ts::load_fibers("torus_fibers.json");
  auto fm2 = io::fibers_from_json(io::parse_json_text(io::dump(io::fibers_to_json(fm)), "rt"));
  EXPECT_EQ(fm2.graph, fm.graph);
  EXPECT_EQ(fm2.fibers, fm.fibers);
}

TEST(Serialize, RationalEntriesAreCanonicalStrings) {
  Rationals q;
  auto m = Matrix<Rationals>::from_rows(q, {{mpq_class(2, 4), mpq_class(-3)}});
  auto j = io::matrix_to_json(m);
  EXPECT_EQ(j[0][0], "1/2");
  EXPECT_EQ(j[0][1], "-3");
  EXPECT_EQ(io::matrix_from_json(q, j, 1, 2, ""), m);
  PrimeField f7(7);
  EXPECT_EQ(io::matrix_to_json(Matrix<PrimeField>::from_ints(f7, {{-1}}))[0][0], "6");
}

TEST(Report, CircleConstantSheaf) {
  auto p = compile(constant_sheaf(ts::load_complex("circle.json"), 1, Rationals{}));
  auto data = scythe(p);
  auto r = ComplexityReport::measure(p, data);
  EXPECT_EQ(r.n, 4u);
  EXPECT_EQ(r.p, 2u);
  EXPECT_EQ(r.d, 1u);
  EXPECT_EQ(r.m_k, (std::vector<std::size_t>{1, 1}));
  EXPECT_EQ(r.m_tilde, 2u);
  EXPECT_EQ(r.omega, 3);
  auto j = r.to_json(false);
  EXPECT_FALSE(j.contains("timings"));
  EXPECT_NE(r.table().find("m~"), std::string::npos);
}

TEST(Report, SkyscraperReducesNothing) {
  auto tri = ts::load_complex("triangle.json");
  auto p = compile(skyscraper_sheaf(tri, "a,b", Rationals{}));
  auto r = ComplexityReport::measure(p, scythe(p));
  EXPECT_EQ(r.m_k, (std::vector<std::size_t>{3, 3, 1}));
  EXPECT_EQ(r.pairs, 0u);
}

TEST(Report, IteratedIntervalCollapses) {
  auto p = compile(constant_sheaf(subdivided_interval(64), 1, Rationals{}));
  auto r = ComplexityReport::measure(p, iterate_scythe(p));
  EXPECT_EQ(r.m_tilde, 1u);
}

TEST(MorseJson, ListsPairsInRemovalOrder) {
  auto p = compile(constant_sheaf(ts::load_complex("torus.json"), 1, Rationals{}));
  ScytheOptions o;
  o.tracking = Tracking::dense;
  auto data = scythe(p, o);
  auto j = io::morse_to_json(data, true);
  ASSERT_TRUE(j.contains("matching"));
  ASSERT_EQ(j["matching"]["pairs"].size(), data.matching.pairs.size());
  EXPECT_EQ(j["matching"]["pairs"][0]["lower"], data.matching.pairs[0].lower);
  EXPECT_TRUE(j.contains("equivalence"));
  auto reparsed = io::parametrization_from_document(io::parse_document(j), Rationals{});
  EXPECT_EQ(cover_blocks(reparsed), cover_blocks(data.reduced));
}
