#pragma once

#include <cstddef>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "cellsheaf/io.hpp"
#include "cellsheaf/morse.hpp"
#include "cellsheaf/parametrization.hpp"

namespace cellsheaf {

/// Size parameters of a reduction run. n, p, d describe the input; m_k and m_tilde the output.
struct ComplexityReport {
  std::size_t n = 0;
  std::size_t p = 0;
  std::size_t d = 0;
  std::vector<std::size_t> m_k;
  std::size_t m_tilde = 0;
  int omega = 3;
  /// n^2 p d^2, the worst-case storage bound in matrix entries.
  std::size_t space_bound = 0;
  std::size_t peak_map_entries = 0;
  std::size_t pairs = 0;
  std::size_t passes = 0;
  /// Seconds per phase; excluded from reproducibility comparisons.
  std::map<std::string, double> timings;

  template <Field F>
  static ComplexityReport measure(const Parametrization<F>& input, const MorseData<F>& output) {
    ComplexityReport r;
    r.n = input.size();
    r.p = input.max_up_degree();
    r.d = input.max_rank();
    r.m_k = output.m_k;
    for (auto m : r.m_k) r.m_tilde += m * m;
    r.space_bound = r.n * r.n * r.p * r.d * r.d;
    r.peak_map_entries = output.peak_map_entries;
    r.pairs = output.matching.pairs.size();
    r.passes = output.passes.size();
    return r;
  }

  io::json to_json(bool with_timings = true) const {
    io::json doc = io::json::object();
    doc["n"] = n;
    doc["p"] = p;
    doc["d"] = d;
    doc["m_k"] = m_k;
    doc["m_tilde"] = m_tilde;
    doc["omega"] = omega;
    doc["space_bound"] = space_bound;
    doc["peak_map_entries"] = peak_map_entries;
    doc["pairs"] = pairs;
    doc["passes"] = passes;
    if (with_timings) {
      io::json t = io::json::object();
      for (const auto& [phase, secs] : timings) t[phase] = secs;
      doc["timings"] = std::move(t);
    }
    return doc;
  }

  std::string table() const {
    std::ostringstream out;
    auto row = [&](const std::string& key, const std::string& value) {
      out << "  " << key << std::string(key.size() < 18 ? 18 - key.size() : 1, ' ') << value << "\n";
    };
    std::string mk = "[";
    for (std::size_t k = 0; k < m_k.size(); ++k) mk += (k ? ", " : "") + std::to_string(m_k[k]);
    mk += "]";
    out << "complexity report\n";
    row("n (input size)", std::to_string(n));
    row("p (max |x+|)", std::to_string(p));
    row("d (max rank)", std::to_string(d));
    row("m_k", mk);
    row("m~", std::to_string(m_tilde));
    row("omega", std::to_string(omega));
    row("pairs reduced", std::to_string(pairs));
    row("passes", std::to_string(passes));
    row("n^2 p d^2", std::to_string(space_bound));
    row("peak entries", std::to_string(peak_map_entries));
    for (const auto& [phase, secs] : timings) {
      std::ostringstream s;
      s.precision(6);
      s << std::fixed << secs << " s";
      row("time " + phase, s.str());
    }
    return out.str();
  }
};

}  // namespace cellsheaf
