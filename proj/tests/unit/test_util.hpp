#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "goalnet/tensor.hpp"

namespace testutil {

inline std::filesystem::path source_dir() { return GOALNET_SOURCE_DIR; }
inline std::filesystem::path fixture_dir() { return source_dir() / "data" / "fixture"; }

// Fresh, empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("goalnet_test_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline goalnet::Matrix random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c,
                                     double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  goalnet::Matrix m(r, c);
  for (double& x : m.data()) x = u(rng);
  return m;
}

inline double rel_error(double a, double b, double floor = 1e-8) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

// Central difference of f at entry i of `m` (restored afterwards).
inline double central_difference(goalnet::Matrix& m, std::size_t i, const std::function<double()>& f,
                                 double h = 1e-5) {
  const double old = m.data()[i];
  m.data()[i] = old + h;
  const double plus = f();
  m.data()[i] = old - h;
  const double minus = f();
  m.data()[i] = old;
  return (plus - minus) / (2 * h);
}

}  // namespace testutil
