// cellsheaf: command-line front end.
//
//   cellsheaf compute  <input.json> [--sheaf ...] [--no-reduce] [--iterate] [--generators] [--lift]
//   cellsheaf reduce   <input.json> [-o out.json] [--report report.json] [--equivalence] [--iterate] [--dual]
//   cellsheaf nerve    <complex.json> <cover.json>
//   cellsheaf cech     <complex.json> <cover.json> [--workers k]
//   cellsheaf leray    <complex.json> <fibers.json> [--workers k]
//   cellsheaf bench    [--family interval|torus|random] [--max n] [--reps r] [--seed s]
//   cellsheaf validate <input.json>
//
// Exit status: 0 ok, 1 usage or internal error, 2 invalid input, 3 unmet precondition.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <type_traits>
#include <vector>

#include <CLI11.hpp>

#include "cellsheaf/cellsheaf.hpp"

namespace {

using namespace cellsheaf;
using io::json;

struct Options {
  std::string field;
  std::size_t workers = 1;
  bool iterate = false;
  bool no_reduce = false;
  bool equivalence = false;
  bool generators = false;
  bool lift = false;
  bool dual = false;
  std::uint64_t seed = 0;
  std::string policy = "strict";
  std::string sheaf = "constant";
  std::string output;
  std::string report;
  std::vector<std::string> inputs;
  std::string family = "interval";
  std::size_t bench_max = 4096;
  std::size_t bench_min = 256;
  std::size_t reps = 3;
};

class Stopwatch {
 public:
  double lap() {
    auto now = std::chrono::steady_clock::now();
    double secs = std::chrono::duration<double>(now - start_).count();
    start_ = now;
    return secs;
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

void emit(const Options& opts, const json& doc) {
  const std::string text = io::dump(doc);
  if (opts.output.empty()) {
    std::cout << text;
  } else {
    io::write_text_file(opts.output, text);
  }
}

FieldSpec choose_field(const Options& opts, const io::Document& doc) {
  if (!opts.field.empty()) return FieldSpec::parse(opts.field);
  return doc.field.value_or(FieldSpec::rationals());
}

/// Sheaf named by --sheaf on a bare complex; documents that carry ranks keep their own data.
template <Field F>
Parametrization<F> load_parametrization(const Options& opts, const io::Document& doc, const F& field) {
  if (!doc.has_incidences() || doc.has_ranks()) {
    if (opts.sheaf != "constant") throw ValidationError("--sheaf applies only to bare complexes");
    return io::parametrization_from_document(doc, field);
  }
  CWComplex base = io::complex_from_document(doc);
  const std::string& spec = opts.sheaf;
  auto arg = [&](const std::string& prefix) -> std::optional<std::string> {
    if (spec.rfind(prefix, 0) == 0) return spec.substr(prefix.size());
    return std::nullopt;
  };
  if (spec == "constant") return compile(constant_sheaf(base, 1, field));
  if (auto k = arg("constant:")) {
    std::size_t rank = 0;
    try {
      rank = std::stoul(*k);
    } catch (const std::exception&) {
      throw ValidationError("bad rank in --sheaf " + spec);
    }
    return compile(constant_sheaf(base, rank, field));
  }
  if (auto cell = arg("skyscraper:")) return compile(skyscraper_sheaf(base, *cell, field));
  if (auto cells = arg("pushforward:")) {
    std::vector<CellId> ids;
    std::stringstream in(*cells);
    for (std::string id; std::getline(in, id, '+');) {
      if (!id.empty()) ids.push_back(id);
    }
    // the subcomplex generated by the listed cells
    std::vector<CellId> closed;
    for (Index i : base.closure(ids)) closed.push_back(base.poset().id(i));
    return compile(pushforward_constant(base, closed, field));
  }
  throw ValidationError("unknown --sheaf '" + spec + "'");
}

ScytheOptions scythe_options(const Options& opts, bool track) {
  ScytheOptions so;
  so.policy = opts.policy == "unique" ? MatchPolicy::unique_invertible : MatchPolicy::strict;
  so.tracking = track ? Tracking::dense : Tracking::off;
  return so;
}

template <Field F>
MorseData<F> run_morse(const Options& opts, Parametrization<F> param, bool track) {
  auto so = scythe_options(opts, track);
  if (opts.dual) return coscythe(std::move(param), so);
  if (opts.iterate) return iterate_scythe(std::move(param), so);
  return scythe(std::move(param), so);
}

int cmd_compute(const Options& opts) {
  auto doc = io::parse_document(io::read_json_file(opts.inputs.at(0)));
  return visit_field(choose_field(opts, doc), [&](const auto& field) {
    using F = std::decay_t<decltype(field)>;
    auto param = load_parametrization(opts, doc, field);
    const auto original = assemble(param);
    json out = json::object();
    out["field"] = io::field_to_json(field.spec());
    if (opts.no_reduce) {
      out["cohomology"] = io::profile_to_json(betti(original, opts.generators));
      out["reduced"] = false;
    } else {
      auto data = run_morse(opts, param, opts.lift);
      const auto reduced = assemble(data.reduced);
      auto profile = betti(reduced, opts.generators || opts.lift);
      out["reduced"] = true;
      out["critical_cells"] = data.matching.critical.size();
      out["cohomology"] = io::profile_to_json(profile);
      if (opts.lift) {
        const auto& eq = *data.equivalence;
        json lifted = json::array();
        for (std::size_t n = 0; n < profile.generators->size(); ++n) {
          lifted.push_back(io::matrix_to_json(lift_cocycle<F>(eq, reduced, (*profile.generators)[n], static_cast<int>(n))));
        }
        out["lifted_generators"] = std::move(lifted);
        json bases = json::array();
        for (const auto& b : original.bases()) bases.push_back(io::basis_to_json(b));
        out["original_bases"] = std::move(bases);
      }
    }
    emit(opts, out);
    return 0;
  });
}

int cmd_reduce(const Options& opts) {
  Stopwatch clock;
  auto doc = io::parse_document(io::read_json_file(opts.inputs.at(0)));
  return visit_field(choose_field(opts, doc), [&](const auto& field) {
    auto param = load_parametrization(opts, doc, field);
    const double t_parse = clock.lap();
    auto data = run_morse(opts, param, opts.equivalence);
    const double t_reduce = clock.lap();
    auto report = ComplexityReport::measure(param, data);
    report.timings["parse"] = t_parse;
    report.timings["reduce"] = t_reduce;
    emit(opts, io::morse_to_json(data, opts.equivalence));
    if (!opts.report.empty()) io::write_text_file(opts.report, io::dump(report.to_json()));
    // keep stdout clean for the reduced document when it goes there
    (opts.output.empty() ? std::cerr : std::cout) << report.table();
    return 0;
  });
}

CWComplex load_complex(const std::string& path) {
  return io::complex_from_document(io::parse_document(io::read_json_file(path)));
}

json estimate_to_json(const ComplexityEstimate& e) {
  return {{"N", e.N}, {"g", e.g}, {"K", e.K}, {"d", e.d}, {"local", e.local}, {"direct", e.direct}, {"ratio", e.ratio}};
}

int cmd_nerve(const Options& opts) {
  auto base = load_complex(opts.inputs.at(0));
  auto cover = Cover::build(base, io::pieces_from_json(io::read_json_file(opts.inputs.at(1))));
  auto nv = nerve(cover);
  auto check = nerve_theorem_check(cover);
  json out = json::object();
  out["nerve"] = io::complex_to_json(nv.complex);
  out["dimension"] = nv.dimension();
  json supports = json::object();
  for (Index i = 0; i < nv.supports.size(); ++i) supports[nv.complex.poset().id(i)] = nv.supports[i].size();
  out["support_sizes"] = std::move(supports);
  out["nerve_theorem"] = {{"supports_acyclic", check.supports_acyclic},
                          {"non_acyclic", check.witnesses},
                          {"checked", check.checked},
                          {"agrees", check.agrees},
                          {"betti_nerve", check.betti_nerve},
                          {"betti_base", check.betti_base}};
  emit(opts, out);
  return 0;
}

int cmd_cech(const Options& opts) {
  auto base = load_complex(opts.inputs.at(0));
  auto cover = Cover::build(base, io::pieces_from_json(io::read_json_file(opts.inputs.at(1))));
  const PipelineOptions po{opts.workers, !opts.no_reduce};
  return visit_field(opts.field.empty() ? FieldSpec::rationals() : FieldSpec::parse(opts.field), [&](const auto& field) {
    auto profile = cohomology_via_cech(cover, field, po);
    json out = json::object();
    out["field"] = io::field_to_json(field.spec());
    out["cohomology"] = io::profile_to_json(profile);
    out["estimate"] = estimate_to_json(complexity_estimate(cover));
    emit(opts, out);
    return 0;
  });
}

int cmd_leray(const Options& opts) {
  auto base = load_complex(opts.inputs.at(0));
  auto fibers = io::fibers_from_json(io::read_json_file(opts.inputs.at(1)));
  const PipelineOptions po{opts.workers, !opts.no_reduce};
  return visit_field(opts.field.empty() ? FieldSpec::rationals() : FieldSpec::parse(opts.field), [&](const auto& field) {
    auto profile = cohomology_via_leray(base, fibers, field, po);
    json out = json::object();
    out["field"] = io::field_to_json(field.spec());
    out["cohomology"] = io::profile_to_json(profile);
    out["estimate"] = estimate_to_json(complexity_estimate(base, fibers));
    emit(opts, out);
    return 0;
  });
}

// Random 2-dimensional simplicial complex with roughly `cells` cells.
CWComplex random_surface_like(std::size_t cells, std::mt19937_64& rng) {
  const std::size_t verts = std::max<std::size_t>(4, cells / 6);
  std::vector<std::string> names;
  for (std::size_t i = 0; i < verts; ++i) names.push_back("r" + std::to_string(i));
  std::uniform_int_distribution<std::size_t> pick(0, verts - 1);
  std::set<std::vector<std::size_t>> tris;
  // triangles on nearby vertices so the complex stays sparse
  while (tris.size() * 3 < cells) {
    const std::size_t a = pick(rng);
    const std::size_t b = (a + 1 + pick(rng) % 3) % verts;
    const std::size_t c = (a + 1 + pick(rng) % 5) % verts;
    if (a == b || b == c || a == c) continue;
    std::vector<std::size_t> t{a, b, c};
    std::sort(t.begin(), t.end());
    tris.insert(t);
  }
  return simplicial_complex({tris.begin(), tris.end()}, names);
}

int cmd_bench(const Options& opts) {
  if (opts.family != "interval" && opts.family != "torus" && opts.family != "random") {
    throw ValidationError("unknown family '" + opts.family + "'");
  }
  std::mt19937_64 rng(opts.seed);
  json rows = json::array();
  return visit_field(opts.field.empty() ? FieldSpec::rationals() : FieldSpec::parse(opts.field), [&](const auto& field) {
    for (std::size_t size = opts.bench_min; size <= opts.bench_max; size *= 2) {
      CWComplex base;
      if (opts.family == "interval") {
        base = subdivided_interval(size);
      } else if (opts.family == "random") {
        base = random_surface_like(size, rng);
      } else {
        const auto side = static_cast<std::size_t>(std::max(3.0, std::sqrt(double(size) / 6.0)));
        base = torus_grid(side, side);
      }
      auto param = compile(constant_sheaf(base, 1, field));
      double best = -1;
      std::size_t critical = 0;
      for (std::size_t r = 0; r < std::max<std::size_t>(1, opts.reps); ++r) {
        Stopwatch clock;
        auto so = scythe_options(opts, false);
        auto data = opts.iterate ? iterate_scythe(param, so) : scythe(param, so);
        const double t = clock.lap();
        critical = data.reduced.size();
        if (best < 0 || t < best) best = t;
      }
      rows.push_back({{"n", param.size()}, {"seconds", best}, {"critical", critical}});
    }
    json out = {{"family", opts.family}, {"field", field.spec().to_string()}, {"omega", 3}, {"runs", rows}};
    emit(opts, out);
    return 0;
  });
}

int cmd_validate(const Options& opts) {
  auto doc = io::parse_document(io::read_json_file(opts.inputs.at(0)));
  return visit_field(choose_field(opts, doc), [&](const auto& field) {
    json out = json::object();
    if (doc.has_incidences()) {
      auto cw = io::complex_from_document(doc);
      out["kind"] = doc.has_ranks() ? "sheaf" : "complex";
      out["cells"] = cw.size();
      out["dimension"] = cw.dimension();
    } else {
      out["kind"] = "parametrization";
    }
    auto param = load_parametrization(opts, doc, field);
    out["elements"] = param.size();
    out["covers"] = param.cover_count();
    out["valid"] = true;
    emit(opts, out);
    return 0;
  });
}

}  // namespace

int main(int argc, char** argv) {
  Options opts;
  CLI::App app{"cellsheaf: cellular sheaf cohomology through discrete Morse reduction"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--field", opts.field, "coefficient field: rational | fp:<p>");
  app.add_option("--workers", opts.workers, "worker threads for stalk computations")->check(CLI::PositiveNumber);
  app.add_flag("--iterate", opts.iterate, "repeat scythe passes until the complex stops shrinking");
  app.add_flag("--no-reduce", opts.no_reduce, "skip Morse reduction");
  app.add_flag("--equivalence", opts.equivalence, "track and write the cochain equivalence");
  app.add_flag("--generators", opts.generators, "emit cocycle representatives");
  app.add_option("--seed", opts.seed, "seed for the random bench family");
  app.add_option("--policy", opts.policy, "pair selection: strict | unique")
      ->check(CLI::IsMember({"strict", "unique"}));
  app.add_option("-o,--output", opts.output, "output file (default: stdout)");

  auto* compute = app.add_subcommand("compute", "cohomology of a complex, sheaf or parametrization");
  compute->add_option("input", opts.inputs, "input JSON")->required()->expected(1);
  compute->add_option("--sheaf", opts.sheaf, "constant[:k] | skyscraper:<cell> | pushforward:<cell+cell+...>");
  compute->add_flag("--lift", opts.lift, "transport reduced generators back to the original complex");
  compute->add_flag("--dual", opts.dual, "use the top-down variant");

  auto* reduce = app.add_subcommand("reduce", "Morse reduction with a complexity report");
  reduce->add_option("input", opts.inputs, "input JSON")->required()->expected(1);
  reduce->add_option("--sheaf", opts.sheaf, "constant[:k] | skyscraper:<cell> | pushforward:<cell+cell+...>");
  reduce->add_option("--report", opts.report, "write the report as JSON");
  reduce->add_flag("--dual", opts.dual, "use the top-down variant");

  auto* nerve_cmd = app.add_subcommand("nerve", "nerve of a cover and the nerve theorem check");
  nerve_cmd->add_option("inputs", opts.inputs, "complex.json cover.json")->required()->expected(2);

  auto* cech = app.add_subcommand("cech", "cohomology through the Cech sheaves of a cover");
  cech->add_option("inputs", opts.inputs, "complex.json cover.json")->required()->expected(2);

  auto* leray = app.add_subcommand("leray", "cohomology through the Leray sheaves over a graph");
  leray->add_option("inputs", opts.inputs, "complex.json fibers.json")->required()->expected(2);

  auto* bench = app.add_subcommand("bench", "timing of scythe on synthetic families");
  bench->add_option("--family", opts.family, "interval | torus | random");
  bench->add_option("--min", opts.bench_min, "smallest size")->check(CLI::PositiveNumber);
  bench->add_option("--max", opts.bench_max, "largest size");
  bench->add_option("--reps", opts.reps, "repetitions per size (minimum is reported)");

  auto* validate = app.add_subcommand("validate", "parse and validate an input file");
  validate->add_option("input", opts.inputs, "input JSON")->required()->expected(1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*compute) return cmd_compute(opts);
    if (*reduce) return cmd_reduce(opts);
    if (*nerve_cmd) return cmd_nerve(opts);
    if (*cech) return cmd_cech(opts);
    if (*leray) return cmd_leray(opts);
    if (*bench) return cmd_bench(opts);
    if (*validate) return cmd_validate(opts);
  } catch (const NerveTooBig& e) {
    std::cerr << "error: " << e.what() << "\n"
              << "the decomposition H^n = H^0(N; S^n) + H^1(N; S^(n-1)) only holds when the nerve (or graph)\n"
              << "has no 2-simplices; refine or coarsen the cover so that no three pieces share a cell.\n";
    return 3;
  } catch (const PreconditionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const ValidationError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
