#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "cellsheaf/cw_complex.hpp"

namespace cellsheaf {

/// Path with `vertices` vertices (at least 1).
inline CWComplex subdivided_interval(std::size_t vertices) {
  std::vector<std::string> names;
  std::vector<std::vector<std::size_t>> simplices;
  for (std::size_t i = 0; i < vertices; ++i) {
    names.push_back("v" + std::to_string(i));
    if (i + 1 < vertices) simplices.push_back({i, i + 1});
  }
  if (vertices == 1) simplices.push_back({0});
  return simplicial_complex(simplices, names);
}

/// Torus from an a x b grid (a, b >= 3), each square split along its diagonal.
inline CWComplex torus_grid(std::size_t a, std::size_t b) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < a; ++i) {
    for (std::size_t j = 0; j < b; ++j) names.push_back("t" + std::to_string(i) + "_" + std::to_string(j));
  }
  auto v = [&](std::size_t i, std::size_t j) { return (i % a) * b + (j % b); };
  std::vector<std::vector<std::size_t>> simplices;
  for (std::size_t i = 0; i < a; ++i) {
    for (std::size_t j = 0; j < b; ++j) {
      simplices.push_back({v(i, j), v(i + 1, j), v(i + 1, j + 1)});
      simplices.push_back({v(i, j), v(i, j + 1), v(i + 1, j + 1)});
    }
  }
  return simplicial_complex(simplices, names);
}

}  // namespace cellsheaf
