// Synthetic motif collections with planted structure.
#ifndef MOTIFCLUST_TESTS_SYNTHETIC_HPP
#define MOTIFCLUST_TESTS_SYNTHETIC_HPP

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "motifclust/matrix.hpp"

namespace synthetic {

using motifclust::Column;
using motifclust::CountMatrix;

using Profile = std::vector<std::array<double, 4>>;

/// Frequency profile that puts `strength` on the base named at each
/// position of `consensus` and spreads the rest evenly.
inline Profile strong_profile(const std::string& consensus, double strength = 0.85) {
  Profile p;
  for (char c : consensus) {
    const int k = c == 'A' ? 0 : c == 'C' ? 1 : c == 'G' ? 2 : 3;
    std::array<double, 4> f{};
    f.fill((1.0 - strength) / 3.0);
    f[k] = strength;
    p.push_back(f);
  }
  return p;
}

inline Column draw_column(const std::array<double, 4>& f, int sites, std::mt19937_64& gen) {
  std::discrete_distribution<int> base({f[0], f[1], f[2], f[3]});
  Column c{};
  for (int s = 0; s < sites; ++s) ++c[base(gen)];
  return c;
}

struct PlantedMotif {
  CountMatrix matrix;
  int offset;  ///< 0-based start of the planted core
};

/// Raw matrix of `raw_width` columns: the profile's columns at `offset`,
/// uniform background everywhere else, `sites` observations per column.
inline PlantedMotif embed(const Profile& core, int raw_width, int offset, int sites, std::mt19937_64& gen) {
  std::vector<Column> cols;
  const std::array<double, 4> uniform{0.25, 0.25, 0.25, 0.25};
  for (int j = 0; j < raw_width; ++j) {
    const bool inside = j >= offset && j < offset + static_cast<int>(core.size());
    cols.push_back(draw_column(inside ? core[j - offset] : uniform, sites, gen));
  }
  return {CountMatrix(std::move(cols)), offset};
}

/// Matrix whose columns are exactly the given counts.
inline CountMatrix columns(std::vector<Column> cols) { return CountMatrix(std::move(cols)); }

}  // namespace synthetic

#endif  // MOTIFCLUST_TESTS_SYNTHETIC_HPP
