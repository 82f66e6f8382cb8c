#include "motifclust/motif_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <optional>
#include <set>
#include <sstream>

#include <json.hpp>

namespace motifclust {

namespace {

constexpr int kCanonicalVersion = 1;
constexpr std::string_view kCanonicalFormat = "motifclust.motifs";

struct Line {
  std::size_t number;
  std::string_view text;
};

std::vector<Line> split_lines(std::string_view text) {
  // UTF-8 byte order mark
  if (text.size() >= 3 && text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);
  std::vector<Line> lines;
  std::size_t number = 1;
  while (!text.empty()) {
    auto end = text.find('\n');
    auto line = text.substr(0, end);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back({number++, line});
    if (end == std::string_view::npos) break;
    text.remove_prefix(end + 1);
  }
  return lines;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> tokens(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    auto start = i;
    while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

std::optional<double> to_real(std::string_view tok) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size() || !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

// Accepts "12" and integer-valued decimals such as "12.0".
std::optional<std::int64_t> to_count(std::string_view tok) {
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec == std::errc() && ptr == tok.data() + tok.size()) return value;
  auto real = to_real(tok);
  if (real && *real == std::floor(*real) && std::abs(*real) < 9.0e15) {
    return static_cast<std::int64_t>(*real);
  }
  return std::nullopt;
}

int base_index(char c) {
  switch (std::toupper(static_cast<unsigned char>(c))) {
    case 'A': return 0;
    case 'C': return 1;
    case 'G': return 2;
    case 'T': return 3;
    default: return -1;
  }
}

struct JasparRow {
  int base = -1;  // -1 when the row carries no base letter
  std::vector<std::int64_t> counts;
};

JasparRow parse_jaspar_row(const Line& line, const std::string& record_id) {
  auto s = trim(line.text);
  JasparRow row;
  if (!s.empty() && std::isalpha(static_cast<unsigned char>(s.front()))) {
    row.base = base_index(s.front());
    if (row.base < 0 || (s.size() > 1 && std::isalnum(static_cast<unsigned char>(s[1])))) {
      throw ParseError(line.number, record_id, "unrecognised row label");
    }
    s.remove_prefix(1);
  }
  std::string body(s);
  std::replace(body.begin(), body.end(), '[', ' ');
  std::replace(body.begin(), body.end(), ']', ' ');
  std::replace(body.begin(), body.end(), ':', ' ');
  for (auto tok : tokens(body)) {
    auto value = to_count(tok);
    if (!value) {
      throw ParseError(line.number, record_id, "non-integer token '" + std::string(tok) + "'");
    }
    if (*value < 0) throw ParseError(line.number, record_id, "negative count");
    row.counts.push_back(*value);
  }
  if (row.counts.empty()) throw ParseError(line.number, record_id, "row has no counts");
  return row;
}

struct PendingMatrix {
  std::string id;
  std::string name;
  std::size_t header_line = 0;
  std::array<std::vector<std::int64_t>, 4> rows;
  std::array<bool, 4> seen{};
  int rows_read = 0;
  bool labelled = false;
  std::size_t width = 0;

  void add(const Line& line, JasparRow row) {
    if (rows_read == 0) {
      labelled = row.base >= 0;
    } else if (labelled != (row.base >= 0)) {
      throw ParseError(line.number, id, "mixed labelled and unlabelled rows");
    }
    int k = row.base >= 0 ? row.base : rows_read;
    if (k > 3) throw ParseError(line.number, id, "more than four base rows");
    if (seen[k]) {
      throw ParseError(line.number, id, std::string("duplicate base row ") + kBaseLetters[k]);
    }
    if (rows_read > 0 && row.counts.size() != width) {
      throw ParseError(line.number, id, "unequal row lengths");
    }
    width = row.counts.size();
    rows[k] = std::move(row.counts);
    seen[k] = true;
    ++rows_read;
  }

  MotifRecord finish(const ParseOptions& options) {
    for (int k = 0; k < 4; ++k) {
      if (!seen[k]) {
        throw ParseError(header_line, id, std::string("missing base row ") + kBaseLetters[k]);
      }
    }
    MotifRecord rec{id, name, "", "", from_rows(rows)};
    if (options.strict_column_sums && !rec.matrix.has_equal_column_sums()) {
      throw ParseError(header_line, id, "column sums differ across positions");
    }
    return rec;
  }
};

void check_unique(std::set<std::string>& ids, const std::string& id, std::size_t line) {
  if (!ids.insert(id).second) throw ParseError(line, id, "duplicate id");
}

std::string format_count(std::int64_t v) { return std::to_string(v); }

}  // namespace

ParseError::ParseError(std::size_t line, std::string record_id, const std::string& message)
    : std::runtime_error([&] {
        std::string where;
        if (line > 0) where = "line " + std::to_string(line);
        if (!record_id.empty()) {
          where += (where.empty() ? "" : " ") + std::string("(record ") + record_id + ")";
        }
        return where.empty() ? message : where + ": " + message;
      }()),
      line_(line),
      record_id_(std::move(record_id)) {}

ParseResult parse_jaspar(std::string_view text, const ParseOptions& options) {
  ParseResult result;
  const auto lines = split_lines(text);
  auto is_content = [](const Line& l) {
    auto t = trim(l.text);
    return !t.empty() && t.front() != '#';
  };
  const bool has_header = std::any_of(lines.begin(), lines.end(), [&](const Line& l) {
    return is_content(l) && trim(l.text).front() == '>';
  });

  std::set<std::string> ids;
  if (!has_header) {
    PendingMatrix pending;
    pending.id = options.fallback_id;
    for (const auto& line : lines) {
      if (!is_content(line)) continue;
      if (pending.header_line == 0) pending.header_line = line.number;
      pending.add(line, parse_jaspar_row(line, pending.id));
    }
    if (pending.rows_read == 0) return result;
    result.records.push_back(pending.finish(options));
    return result;
  }

  std::optional<PendingMatrix> pending;
  for (const auto& line : lines) {
    if (!is_content(line)) continue;
    auto t = trim(line.text);
    if (t.front() == '>') {
      if (pending) result.records.push_back(pending->finish(options));
      pending.emplace();
      auto header = trim(t.substr(1));
      auto split = std::find_if(header.begin(), header.end(),
                                [](char c) { return std::isspace(static_cast<unsigned char>(c)); });
      pending->id = std::string(header.begin(), split);
      pending->name = std::string(trim(std::string_view(split, header.end())));
      pending->header_line = line.number;
      if (pending->id.empty()) throw ParseError(line.number, "", "header without id");
      check_unique(ids, pending->id, line.number);
      continue;
    }
    if (!pending) throw ParseError(line.number, "", "matrix row before any header");
    pending->add(line, parse_jaspar_row(line, pending->id));
  }
  if (pending) result.records.push_back(pending->finish(options));
  return result;
}

ParseResult parse_transfac(std::string_view text, const ParseOptions& options) {
  ParseResult result;
  std::set<std::string> ids;

  struct Block {
    std::size_t first_line = 0;
    std::string ac, id_line, na, hc, os;
    std::optional<std::size_t> p0_line;
    std::array<int, 4> order{};
    std::vector<Column> columns;
    bool table_closed = false;
    bool rounded = false;
  };
  std::optional<Block> block;

  auto flush = [&]() {
    if (!block) return;
    Block b = std::move(*block);
    block.reset();
    std::string id = !b.ac.empty() ? b.ac : b.id_line;
    if (!b.p0_line) {
      result.warnings.push_back("line " + std::to_string(b.first_line) + ": block" +
                                (id.empty() ? std::string() : " " + id) +
                                " has no P0 matrix; skipped");
      return;
    }
    if (id.empty()) throw ParseError(*b.p0_line, "", "matrix block without AC or ID");
    if (b.columns.empty()) throw ParseError(*b.p0_line, id, "P0 table has no rows");
    check_unique(ids, id, b.first_line);
    std::string name = !b.na.empty() ? b.na : (!b.ac.empty() ? b.id_line : std::string());
    MotifRecord rec{id, name, b.hc, b.os, CountMatrix(std::move(b.columns))};
    if (options.strict_column_sums && !rec.matrix.has_equal_column_sums()) {
      throw ParseError(*b.p0_line, id, "column sums differ across positions");
    }
    if (b.rounded) {
      result.warnings.push_back("record " + id + ": decimal counts rounded half-up to integers");
    }
    result.records.push_back(std::move(rec));
  };

  for (const auto& line : split_lines(text)) {
    auto t = trim(line.text);
    if (t.empty()) continue;
    if (t.substr(0, 2) == "//") {
      flush();
      continue;
    }
    if (!block) {
      block.emplace();
      block->first_line = line.number;
    }
    auto toks = tokens(t);
    auto code = toks.front();
    auto rest = [&] {
      auto r = trim(t.substr(code.size()));
      return std::string(r);
    };
    const std::string current_id = !block->ac.empty() ? block->ac : block->id_line;

    const bool numeric_code =
        std::all_of(code.begin(), code.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
    if (numeric_code) {
      if (!block->p0_line || block->table_closed) {
        throw ParseError(line.number, current_id, "matrix row outside a P0 table");
      }
      std::size_t index = 0;
      std::from_chars(code.data(), code.data() + code.size(), index);
      if (index != block->columns.size() + 1) {
        throw ParseError(line.number, current_id,
                         "row index gap: expected " + std::to_string(block->columns.size() + 1) +
                             ", found " + std::string(code));
      }
      if (toks.size() < 5) throw ParseError(line.number, current_id, "row has fewer than 4 counts");
      Column col{};
      for (int c = 0; c < 4; ++c) {
        auto value = to_real(toks[1 + c]);
        if (!value) {
          throw ParseError(line.number, current_id,
                           "non-numeric count '" + std::string(toks[1 + c]) + "'");
        }
        if (*value < 0) throw ParseError(line.number, current_id, "negative count");
        double rounded = std::floor(*value + 0.5);
        if (rounded != *value) {
          if (!options.integerize) {
            throw ParseError(line.number, current_id, "non-integer count (integerization disabled)");
          }
          block->rounded = true;
        }
        col[block->order[c]] = static_cast<std::int64_t>(rounded);
      }
      block->columns.push_back(col);
      continue;
    }

    if (block->p0_line) block->table_closed = true;
    if (code == "AC") {
      block->ac = rest();
    } else if (code == "ID") {
      block->id_line = rest();
    } else if (code == "NA") {
      block->na = rest();
    } else if (code == "HC") {
      block->hc = rest();
    } else if (code == "OS") {
      block->os = rest();
    } else if (code == "P0" || code == "PO") {
      if (block->p0_line) throw ParseError(line.number, current_id, "second P0 table in block");
      if (toks.size() < 5) throw ParseError(line.number, current_id, "fewer than 4 base columns");
      if (toks.size() > 5) throw ParseError(line.number, current_id, "unsupported extra base columns");
      std::array<bool, 4> seen{};
      for (int c = 0; c < 4; ++c) {
        int k = toks[1 + c].size() == 1 ? base_index(toks[1 + c][0]) : -1;
        if (k < 0 || seen[k]) {
          throw ParseError(line.number, current_id, "P0 line must name each of A, C, G, T once");
        }
        seen[k] = true;
        block->order[c] = k;
      }
      block->p0_line = line.number;
      block->table_closed = false;
    }
  }
  flush();
  return result;
}

MotifFormat detect_format(std::string_view text) {
  for (const auto& line : split_lines(text)) {
    auto t = trim(line.text);
    if (t.empty() || t.front() == '#') continue;
    if (t.front() == '>') return MotifFormat::Jaspar;
    auto code = tokens(t).front();
    static const std::set<std::string_view> transfac_codes{"AC", "ID", "P0", "PO", "XX", "VV",
                                                           "NA", "DE", "BF", "//"};
    if (transfac_codes.count(code.substr(0, 2)) && (code.size() == 2 || code == "//")) {
      return MotifFormat::Transfac;
    }
    return MotifFormat::Jaspar;
  }
  return MotifFormat::Jaspar;
}

ParseResult parse_motifs(std::string_view text, MotifFormat format, const ParseOptions& options) {
  return format == MotifFormat::Jaspar ? parse_jaspar(text, options)
                                       : parse_transfac(text, options);
}

std::string write_jaspar(const std::vector<MotifRecord>& records) {
  std::ostringstream out;
  for (const auto& rec : records) {
    out << '>' << rec.id;
    if (!rec.name.empty()) out << ' ' << rec.name;
    out << '\n';
    for (int k = 0; k < 4; ++k) {
      out << kBaseLetters[k] << "  [";
      for (auto v : rec.matrix.row(static_cast<Base>(k))) out << ' ' << format_count(v);
      out << " ]\n";
    }
  }
  return out.str();
}

std::string write_transfac(const std::vector<MotifRecord>& records) {
  std::ostringstream out;
  for (const auto& rec : records) {
    out << "AC  " << rec.id << "\nXX\n";
    if (!rec.name.empty()) out << "NA  " << rec.name << '\n';
    if (!rec.family.empty()) out << "HC  " << rec.family << '\n';
    if (!rec.species.empty()) out << "OS  " << rec.species << '\n';
    out << "P0      A      C      G      T\n";
    const auto consensus = consensus_string(rec.matrix);
    for (std::size_t j = 0; j < rec.matrix.width(); ++j) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%02zu", j + 1);
      out << buf;
      for (auto v : rec.matrix[j]) {
        std::snprintf(buf, sizeof buf, " %6lld", static_cast<long long>(v));
        out << buf;
      }
      out << "      " << static_cast<char>(std::toupper(static_cast<unsigned char>(consensus[j]))) << '\n';
    }
    out << "XX\n//\n";
  }
  return out.str();
}

std::string to_canonical_document(const std::vector<MotifRecord>& records) {
  nlohmann::ordered_json doc;
  doc["format"] = kCanonicalFormat;
  doc["version"] = kCanonicalVersion;
  doc["records"] = nlohmann::ordered_json::array();
  for (const auto& rec : records) {
    nlohmann::ordered_json r;
    r["id"] = rec.id;
    r["name"] = rec.name;
    r["family"] = rec.family;
    r["species"] = rec.species;
    nlohmann::ordered_json counts;
    for (int k = 0; k < 4; ++k) {
      counts[std::string(1, kBaseLetters[k])] = rec.matrix.row(static_cast<Base>(k));
    }
    r["counts"] = counts;
    doc["records"].push_back(r);
  }
  return doc.dump(1) + "\n";
}

std::vector<MotifRecord> from_canonical_document(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(0, "", std::string("invalid motif document: ") + e.what());
  }
  if (doc.value("format", "") != kCanonicalFormat) {
    throw ParseError(0, "", "not a motifclust motif document");
  }
  if (doc.value("version", 0) != kCanonicalVersion) {
    throw ParseError(0, "", "unsupported motif document version");
  }
  std::vector<MotifRecord> records;
  std::set<std::string> ids;
  for (const auto& r : doc.at("records")) {
    const auto id = r.at("id").get<std::string>();
    check_unique(ids, id, 0);
    std::array<std::vector<std::int64_t>, 4> rows;
    for (int k = 0; k < 4; ++k) {
      rows[k] = r.at("counts").at(std::string(1, kBaseLetters[k])).get<std::vector<std::int64_t>>();
    }
    try {
      records.push_back({id, r.value("name", ""), r.value("family", ""), r.value("species", ""),
                         from_rows(rows)});
    } catch (const std::invalid_argument& e) {
      throw ParseError(0, id, e.what());
    }
  }
  return records;
}

FrequencyMatrix frequency_matrix(const CountMatrix& m) {
  FrequencyMatrix f(m.width());
  for (std::size_t j = 0; j < m.width(); ++j) {
    const auto total = column_total(m[j]);
    if (total <= 0) {
      throw std::invalid_argument("zero-total column at position " + std::to_string(j + 1));
    }
    for (int k = 0; k < 4; ++k) f[j][k] = static_cast<double>(m[j][k]) / static_cast<double>(total);
  }
  return f;
}

double information_content(const FrequencyColumn& f, const std::array<double, 4>& theta0) {
  double bits = 0.0;
  for (int k = 0; k < 4; ++k) {
    if (theta0[k] <= 0.0) throw std::invalid_argument("background frequencies must be positive");
    if (f[k] > 0.0) bits += f[k] * std::log2(f[k] / theta0[k]);
  }
  return bits;
}

std::vector<double> information_content_profile(const CountMatrix& m,
                                                const std::array<double, 4>& theta0) {
  std::vector<double> out;
  for (const auto& col : frequency_matrix(m)) out.push_back(information_content(col, theta0));
  return out;
}

std::string consensus_string(const CountMatrix& m) {
  std::string out;
  out.reserve(m.width());
  for (std::size_t j = 0; j < m.width(); ++j) {
    const auto& col = m[j];
    const auto total = column_total(col);
    if (total <= 0) {
      throw std::invalid_argument("zero-total column at position " + std::to_string(j + 1));
    }
    int best = 0;
    for (int k = 1; k < 4; ++k) {
      if (col[k] > col[best]) best = k;
    }
    // frequency > 0.75  <=>  4 * count > 3 * total, exact in integers
    const bool upper = 4 * col[best] > 3 * total;
    out.push_back(upper ? kBaseLetters[best]
                        : static_cast<char>(std::tolower(static_cast<unsigned char>(kBaseLetters[best]))));
  }
  return out;
}

WidthFilterResult filter_min_width(const std::vector<MotifRecord>& records, int min_width) {
  if (min_width < 1) throw std::invalid_argument("min_width must be >= 1");
  WidthFilterResult result;
  for (const auto& rec : records) {
    if (rec.matrix.width() >= static_cast<std::size_t>(min_width)) {
      result.kept.push_back(rec);
    } else {
      result.dropped.push_back({rec.id, rec.matrix.width(),
                                "width " + std::to_string(rec.matrix.width()) +
                                    " below minimum " + std::to_string(min_width)});
    }
  }
  return result;
}

}  // namespace motifclust
