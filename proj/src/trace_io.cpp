#include "motifclust/trace_io.hpp"

#include <bit>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <vector>

namespace motifclust {

namespace {

constexpr std::string_view kTextMagic = "#motifclust-trace";
constexpr char kBinaryMagic[8] = {'M', 'C', 'T', 'R', 'A', 'C', 'E', '\0'};
constexpr int kVersion = 1;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <typename T>
void append_list(std::string& out, const std::vector<T>& values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(values[i]);
  }
}

void append_snapshot(std::string& out, char tag, const Snapshot& s) {
  out += tag;
  out += '\t';
  out += std::to_string(s.iteration);
  out += '\t';
  out += format_double(s.log_joint);
  out += '\t';
  append_list(out, s.assignment);
  out += '\t';
  append_list(out, s.offset);
  out += '\t';
  append_list(out, s.width);
  out += '\n';
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    if (pos == std::string_view::npos) {
      parts.push_back(text.substr(start));
      return parts;
    }
    parts.push_back(text.substr(start, pos - start));
    start = pos + 1;
  }
}

[[noreturn]] void fail(std::size_t line, const std::string& message) {
  throw TraceError("trace line " + std::to_string(line) + ": " + message);
}

template <typename T>
T parse_int(std::string_view token, std::size_t line) {
  T value{};
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size()) {
    fail(line, "bad integer '" + std::string(token) + "'");
  }
  return value;
}

double parse_double(std::string_view token, std::size_t line) {
  const std::string copy(token);
  char* end = nullptr;
  const double v = std::strtod(copy.c_str(), &end);
  if (copy.empty() || end != copy.c_str() + copy.size()) fail(line, "bad number '" + copy + "'");
  return v;
}

std::vector<int> parse_list(std::string_view token, std::size_t line) {
  std::vector<int> values;
  if (token.empty()) return values;
  for (auto part : split(token, ',')) values.push_back(parse_int<int>(part, line));
  return values;
}

Snapshot parse_snapshot(const std::vector<std::string_view>& fields, std::size_t line,
                        std::size_t motifs) {
  if (fields.size() != 6) fail(line, "snapshot rows need 6 fields");
  Snapshot s;
  s.iteration = parse_int<std::int64_t>(fields[1], line);
  s.log_joint = parse_double(fields[2], line);
  s.assignment = parse_list(fields[3], line);
  s.offset = parse_list(fields[4], line);
  s.width = parse_list(fields[5], line);
  if (s.assignment.size() != motifs || s.offset.size() != motifs) {
    fail(line, "snapshot does not cover " + std::to_string(motifs) + " motifs");
  }
  for (int z : s.assignment) {
    if (z < 0 || z >= s.cluster_count()) fail(line, "cluster label out of range");
  }
  return s;
}

RunTrace decode_text(std::string_view text) {
  RunTrace trace;
  bool have_motifs = false;
  bool have_best = false;
  std::size_t line_no = 0;
  for (auto line : split(text, '\n')) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    const auto fields = split(line, '\t');
    const auto key = fields[0];
    if (line_no == 1) {
      if (key != kTextMagic || fields.size() != 2) fail(line_no, "not a motifclust trace");
      if (parse_int<int>(fields[1], line_no) != kVersion) fail(line_no, "unsupported trace version");
      continue;
    }
    if (key == "#motifs" && fields.size() == 2) {
      trace.motif_count = parse_int<std::size_t>(fields[1], line_no);
      have_motifs = true;
    } else if (key == "#burn_in" && fields.size() == 2) {
      trace.burn_in = parse_int<std::int64_t>(fields[1], line_no);
    } else if (key == "#thin" && fields.size() == 2) {
      trace.thin = parse_int<int>(fields[1], line_no);
    } else if (!key.empty() && key[0] == '#') {
      continue;
    } else if (!have_motifs) {
      fail(line_no, "record before #motifs header");
    } else if (key == "H") {
      if (fields.size() != 4) fail(line_no, "history rows need 4 fields");
      trace.history.push_back({parse_int<std::int64_t>(fields[1], line_no),
                               parse_double(fields[2], line_no),
                               parse_int<int>(fields[3], line_no)});
    } else if (key == "S") {
      trace.samples.push_back(parse_snapshot(fields, line_no, trace.motif_count));
    } else if (key == "B") {
      trace.best = parse_snapshot(fields, line_no, trace.motif_count);
      have_best = true;
    } else {
      fail(line_no, "unknown record '" + std::string(key) + "'");
    }
  }
  if (line_no == 0 || !have_motifs) throw TraceError("trace is missing its header");
  if (!have_best) throw TraceError("trace has no best snapshot");
  return trace;
}

class Writer {
 public:
  void u8(std::uint8_t v) { out_.push_back(static_cast<char>(v)); }
  void u32(std::uint32_t v) {
    for (int k = 0; k < 4; ++k) u8(static_cast<std::uint8_t>(v >> (8 * k)));
  }
  void u64(std::uint64_t v) {
    for (int k = 0; k < 8; ++k) u8(static_cast<std::uint8_t>(v >> (8 * k)));
  }
  void i32(std::int32_t v) { u32(static_cast<std::uint32_t>(v)); }
  void i64(std::int64_t v) { u64(static_cast<std::uint64_t>(v)); }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void bytes(const char* p, std::size_t n) { out_.append(p, n); }
  std::string take() { return std::move(out_); }

 private:
  std::string out_;
};

class Reader {
 public:
  explicit Reader(std::string_view in) : in_(in) {}
  std::uint8_t u8() {
    if (pos_ >= in_.size()) throw TraceError("binary trace is truncated");
    return static_cast<std::uint8_t>(in_[pos_++]);
  }
  std::uint32_t u32() {
    std::uint32_t v = 0;
    for (int k = 0; k < 4; ++k) v |= static_cast<std::uint32_t>(u8()) << (8 * k);
    return v;
  }
  std::uint64_t u64() {
    std::uint64_t v = 0;
    for (int k = 0; k < 8; ++k) v |= static_cast<std::uint64_t>(u8()) << (8 * k);
    return v;
  }
  std::int32_t i32() { return static_cast<std::int32_t>(u32()); }
  std::int64_t i64() { return static_cast<std::int64_t>(u64()); }
  double f64() { return std::bit_cast<double>(u64()); }
  std::size_t remaining() const { return in_.size() - pos_; }
  void skip(std::size_t n) {
    if (remaining() < n) throw TraceError("binary trace is truncated");
    pos_ += n;
  }

 private:
  std::string_view in_;
  std::size_t pos_ = 0;
};

void write_snapshot(Writer& w, const Snapshot& s) {
  w.i64(s.iteration);
  w.f64(s.log_joint);
  w.u32(static_cast<std::uint32_t>(s.width.size()));
  for (int z : s.assignment) w.i32(z);
  for (int a : s.offset) w.i32(a);
  for (int c : s.width) w.i32(c);
}

Snapshot read_snapshot(Reader& r, std::size_t motifs) {
  Snapshot s;
  s.iteration = r.i64();
  s.log_joint = r.f64();
  const auto clusters = r.u32();
  if (clusters > motifs) throw TraceError("binary snapshot has more clusters than motifs");
  if (r.remaining() < 4 * (2 * motifs + clusters)) throw TraceError("binary trace is truncated");
  s.assignment.resize(motifs);
  s.offset.resize(motifs);
  s.width.resize(clusters);
  for (auto& z : s.assignment) {
    z = r.i32();
    if (z < 0 || z >= static_cast<int>(clusters)) throw TraceError("cluster label out of range");
  }
  for (auto& a : s.offset) a = r.i32();
  for (auto& c : s.width) c = r.i32();
  return s;
}

RunTrace decode_binary(std::string_view bytes) {
  Reader r(bytes);
  r.skip(sizeof kBinaryMagic);
  if (r.u32() != kVersion) throw TraceError("unsupported binary trace version");
  RunTrace trace;
  trace.motif_count = r.u64();
  trace.burn_in = r.i64();
  trace.thin = r.i32();
  const auto history = r.u64();
  if (history > r.remaining() / 20) throw TraceError("binary trace is truncated");
  trace.history.resize(history);
  for (auto& h : trace.history) {
    h.iteration = r.i64();
    h.log_joint = r.f64();
    h.clusters = r.i32();
  }
  const auto samples = r.u64();
  if (samples > r.remaining() / 20) throw TraceError("binary trace is truncated");
  trace.samples.reserve(samples);
  for (std::uint64_t k = 0; k < samples; ++k) trace.samples.push_back(read_snapshot(r, trace.motif_count));
  trace.best = read_snapshot(r, trace.motif_count);
  if (r.remaining() != 0) throw TraceError("trailing bytes after binary trace");
  return trace;
}

}  // namespace

std::string to_string(TraceFormat format) {
  return format == TraceFormat::Text ? "text" : "binary";
}

TraceFormat trace_format_from_string(const std::string& name) {
  if (name == "text") return TraceFormat::Text;
  if (name == "binary") return TraceFormat::Binary;
  throw std::invalid_argument("unknown trace format '" + name + "' (expected text or binary)");
}

std::string trace_to_text(const RunTrace& trace) {
  std::string out;
  out += std::string(kTextMagic) + '\t' + std::to_string(kVersion) + '\n';
  out += "#motifs\t" + std::to_string(trace.motif_count) + '\n';
  out += "#burn_in\t" + std::to_string(trace.burn_in) + '\n';
  out += "#thin\t" + std::to_string(trace.thin) + '\n';
  for (const auto& h : trace.history) {
    out += "H\t" + std::to_string(h.iteration) + '\t' + format_double(h.log_joint) + '\t' +
           std::to_string(h.clusters) + '\n';
  }
  for (const auto& s : trace.samples) append_snapshot(out, 'S', s);
  append_snapshot(out, 'B', trace.best);
  return out;
}

std::string trace_to_binary(const RunTrace& trace) {
  Writer w;
  w.bytes(kBinaryMagic, sizeof kBinaryMagic);
  w.u32(kVersion);
  w.u64(trace.motif_count);
  w.i64(trace.burn_in);
  w.i32(trace.thin);
  w.u64(trace.history.size());
  for (const auto& h : trace.history) {
    w.i64(h.iteration);
    w.f64(h.log_joint);
    w.i32(h.clusters);
  }
  w.u64(trace.samples.size());
  for (const auto& s : trace.samples) write_snapshot(w, s);
  write_snapshot(w, trace.best);
  return w.take();
}

std::string encode_trace(const RunTrace& trace, TraceFormat format) {
  return format == TraceFormat::Text ? trace_to_text(trace) : trace_to_binary(trace);
}

RunTrace decode_trace(std::string_view bytes) {
  if (bytes.size() >= sizeof kBinaryMagic &&
      std::memcmp(bytes.data(), kBinaryMagic, sizeof kBinaryMagic) == 0) {
    return decode_binary(bytes);
  }
  if (bytes.substr(0, kTextMagic.size()) == kTextMagic) return decode_text(bytes);
  throw TraceError("unrecognised trace encoding");
}

}  // namespace motifclust
