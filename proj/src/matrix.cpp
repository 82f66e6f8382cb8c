#include "motifclust/matrix.hpp"

#include <stdexcept>

namespace motifclust {

CountMatrix::CountMatrix(std::vector<Column> columns) : columns_(std::move(columns)) {
  if (columns_.empty()) throw std::invalid_argument("count matrix must have width >= 1");
  for (std::size_t j = 0; j < columns_.size(); ++j) {
    for (auto v : columns_[j]) {
      if (v < 0) {
        throw std::invalid_argument("negative count at position " + std::to_string(j + 1));
      }
    }
  }
}

std::span<const Column> CountMatrix::slice(std::size_t offset, std::size_t width) const {
  if (width == 0 || offset + width > columns_.size()) {
    throw std::out_of_range("core [" + std::to_string(offset) + ", " +
                            std::to_string(offset + width) + ") outside matrix of width " +
                            std::to_string(columns_.size()));
  }
  return std::span<const Column>(columns_).subspan(offset, width);
}

std::vector<std::int64_t> CountMatrix::row(Base base) const {
  std::vector<std::int64_t> out;
  out.reserve(columns_.size());
  for (const auto& c : columns_) out.push_back(c[static_cast<int>(base)]);
  return out;
}

Column CountMatrix::totals() const {
  Column t{};
  for (const auto& c : columns_) t += c;
  return t;
}

bool CountMatrix::has_equal_column_sums() const {
  const auto first = column_total(columns_.front());
  for (const auto& c : columns_) {
    if (column_total(c) != first) return false;
  }
  return true;
}

CountMatrix from_rows(const std::array<std::vector<std::int64_t>, 4>& rows) {
  const auto width = rows[0].size();
  for (const auto& r : rows) {
    if (r.size() != width) throw std::invalid_argument("unequal row lengths");
  }
  std::vector<Column> columns(width);
  for (std::size_t j = 0; j < width; ++j) {
    for (int k = 0; k < 4; ++k) columns[j][k] = rows[k][j];
  }
  return CountMatrix(std::move(columns));
}

}  // namespace motifclust
