#ifndef MOTIFCLUST_TRACE_IO_HPP
#define MOTIFCLUST_TRACE_IO_HPP

#include <stdexcept>
#include <string>
#include <string_view>

#include "motifclust/sampler.hpp"

namespace motifclust {

enum class TraceFormat { Text, Binary };

std::string to_string(TraceFormat format);
TraceFormat trace_format_from_string(const std::string& name);  // "text" | "binary"

class TraceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Text trace, version 1. Tab-separated, one record per line:
///
///   #motifclust-trace  1
///   #motifs            n
///   #burn_in           B
///   #thin              t
///   H  iter  log_joint  clusters          (every iteration)
///   S  iter  log_joint  z  a  w           (recorded snapshots)
///   B  iter  log_joint  z  a  w           (best snapshot; the last one wins)
///
/// z, a and w are comma-separated lists; a holds 0-based offsets and w the
/// width of each cluster label. Doubles are printed with 17 significant
/// digits, so a trace re-read is bit-identical.
std::string trace_to_text(const RunTrace& trace);

/// Little-endian binary encoding of the same content, magic "MCTRACE\0".
std::string trace_to_binary(const RunTrace& trace);

std::string encode_trace(const RunTrace& trace, TraceFormat format);

/// Decodes either encoding, chosen by the leading bytes. Throws TraceError.
RunTrace decode_trace(std::string_view bytes);

}  // namespace motifclust

#endif  // MOTIFCLUST_TRACE_IO_HPP
