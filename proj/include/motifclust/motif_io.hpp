#ifndef MOTIFCLUST_MOTIF_IO_HPP
#define MOTIFCLUST_MOTIF_IO_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "motifclust/matrix.hpp"

namespace motifclust {

/// Malformed motif input. `line()` is 1-based; 0 when not tied to a line.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::string record_id, const std::string& message);

  std::size_t line() const { return line_; }
  const std::string& record_id() const { return record_id_; }

 private:
  std::size_t line_;
  std::string record_id_;
};

enum class MotifFormat { Jaspar, Transfac };

struct ParseOptions {
  /// Reject matrices whose positions do not all have the same total.
  bool strict_column_sums = false;
  /// TRANSFAC only: round decimal counts half-up instead of rejecting them.
  bool integerize = true;
  /// Record id used for a headerless four-row JASPAR matrix.
  std::string fallback_id = "motif";
};

struct ParseResult {
  std::vector<MotifRecord> records;
  std::vector<std::string> warnings;
};

/// JASPAR flat format: `>ID name` headers followed by four `X [ counts ]`
/// rows. A single headerless four-row matrix (A, C, G, T order when the rows
/// carry no base letter) is also accepted.
ParseResult parse_jaspar(std::string_view text, const ParseOptions& options = {});

/// TRANSFAC flat format: `//`-delimited blocks with AC/ID lines and a P0
/// table. Blocks without a P0 table are skipped with a warning.
ParseResult parse_transfac(std::string_view text, const ParseOptions& options = {});

/// Sniffs the format: a `>` header means JASPAR, AC/ID/P0-style lines mean
/// TRANSFAC, bare numeric rows mean JASPAR.
MotifFormat detect_format(std::string_view text);

ParseResult parse_motifs(std::string_view text, MotifFormat format,
                         const ParseOptions& options = {});

std::string write_jaspar(const std::vector<MotifRecord>& records);
std::string write_transfac(const std::vector<MotifRecord>& records);

/// Versioned structured-text (JSON) document carrying ids, metadata and the
/// full integer grid of every record.
std::string to_canonical_document(const std::vector<MotifRecord>& records);
std::vector<MotifRecord> from_canonical_document(std::string_view text);

/// Throws std::invalid_argument naming the position of a zero-total column.
FrequencyMatrix frequency_matrix(const CountMatrix& m);

/// Relative entropy of one column against the background, in bits.
double information_content(const FrequencyColumn& f, const std::array<double, 4>& theta0);

std::vector<double> information_content_profile(const CountMatrix& m,
                                                const std::array<double, 4>& theta0);

/// Majority base per position, uppercase only when its frequency is
/// strictly above 0.75. Ties go to the earlier base in A, C, G, T order.
std::string consensus_string(const CountMatrix& m);

struct DroppedRecord {
  std::string id;
  std::size_t width;
  std::string reason;
};

struct WidthFilterResult {
  std::vector<MotifRecord> kept;
  std::vector<DroppedRecord> dropped;
};

WidthFilterResult filter_min_width(const std::vector<MotifRecord>& records, int min_width);

}  // namespace motifclust

#endif  // MOTIFCLUST_MOTIF_IO_HPP
