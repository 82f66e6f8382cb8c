#ifndef MOTIFCLUST_MATRIX_HPP
#define MOTIFCLUST_MATRIX_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace motifclust {

/// Nucleotide index. The order A < C < G < T is relied on for tie-breaking.
enum class Base : int { A = 0, C = 1, G = 2, T = 3 };

inline constexpr std::array<char, 4> kBaseLetters{'A', 'C', 'G', 'T'};

/// Counts of A, C, G, T at one motif position.
using Column = std::array<std::int64_t, 4>;

inline std::int64_t column_total(const Column& c) { return c[0] + c[1] + c[2] + c[3]; }

inline Column& operator+=(Column& lhs, const Column& rhs) {
  for (int k = 0; k < 4; ++k) lhs[k] += rhs[k];
  return lhs;
}

inline Column& operator-=(Column& lhs, const Column& rhs) {
  for (int k = 0; k < 4; ++k) lhs[k] -= rhs[k];
  return lhs;
}

/// A 4 x width table of non-negative nucleotide counts, stored position-major.
///
/// Column totals may differ between positions; real databases are not
/// consistent about this. Use `has_equal_column_sums()` for strict checks.
class CountMatrix {
 public:
  /// Throws std::invalid_argument on an empty table or a negative count.
  explicit CountMatrix(std::vector<Column> columns);

  std::size_t width() const { return columns_.size(); }
  std::span<const Column> columns() const { return columns_; }
  const Column& column(std::size_t j) const { return columns_.at(j); }
  const Column& operator[](std::size_t j) const { return columns_[j]; }

  /// Contiguous core slice [offset, offset + width). Throws std::out_of_range.
  std::span<const Column> slice(std::size_t offset, std::size_t width) const;

  /// Row-major view: counts of one base across all positions.
  std::vector<std::int64_t> row(Base base) const;

  /// Per-base sum over all positions.
  Column totals() const;

  bool has_equal_column_sums() const;

  friend bool operator==(const CountMatrix&, const CountMatrix&) = default;

 private:
  std::vector<Column> columns_;
};

/// Builds a matrix from four base rows given in A, C, G, T order.
CountMatrix from_rows(const std::array<std::vector<std::int64_t>, 4>& rows);

struct MotifRecord {
  std::string id;
  std::string name;
  std::string family;
  std::string species;
  CountMatrix matrix;

  friend bool operator==(const MotifRecord&, const MotifRecord&) = default;
};

/// Position x base frequencies; every column sums to 1.
using FrequencyColumn = std::array<double, 4>;
using FrequencyMatrix = std::vector<FrequencyColumn>;

}  // namespace motifclust

#endif  // MOTIFCLUST_MATRIX_HPP
