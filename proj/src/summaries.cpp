#include "motifclust/summaries.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

#include "motifclust/motif_io.hpp"

namespace motifclust {

namespace {

std::string format_double(double v, const char* spec = "%.17g") {
  char buf[40];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::size_t sample_count(std::span<const RunTrace> traces) {
  std::size_t total = 0;
  for (const auto& t : traces) total += t.samples.size();
  return total;
}

}  // namespace

// --- Pairwise -------------------------------------------------------------

PairwiseMatrix::PairwiseMatrix(std::size_t n) : n_(n), p_(n * n, 0.0) {
  for (std::size_t i = 0; i < n; ++i) p_[i * n + i] = 1.0;
}

void PairwiseMatrix::set(std::size_t i, std::size_t j, double value) {
  p_[i * n_ + j] = value;
  p_[j * n_ + i] = value;
}

std::vector<std::vector<double>> PairwiseMatrix::distances() const {
  std::vector<std::vector<double>> d(n_, std::vector<double>(n_, 0.0));
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < n_; ++j) d[i][j] = i == j ? 0.0 : distance(i, j);
  }
  return d;
}

PairwiseMatrix pairwise_probabilities(std::span<const RunTrace> traces) {
  const auto total = sample_count(traces);
  if (traces.empty() || total == 0) {
    throw std::invalid_argument("pairwise probabilities need at least one recorded snapshot");
  }
  const auto n = traces.front().motif_count;
  std::vector<std::size_t> together(n * n, 0);
  for (const auto& t : traces) {
    if (t.motif_count != n) throw std::invalid_argument("chains disagree on the number of motifs");
    for (const auto& s : t.samples) {
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
          if (s.assignment[i] == s.assignment[j]) ++together[i * n + j];
        }
      }
    }
  }
  PairwiseMatrix p(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      p.set(i, j, static_cast<double>(together[i * n + j]) / static_cast<double>(total));
    }
  }
  return p;
}

PairwiseMatrix pairwise_probabilities(const RunTrace& trace) {
  return pairwise_probabilities(std::span<const RunTrace>(&trace, 1));
}

double max_abs_difference(const PairwiseMatrix& a, const PairwiseMatrix& b) {
  if (a.size() != b.size()) throw std::invalid_argument("pairwise matrices differ in size");
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = i + 1; j < a.size(); ++j) {
      worst = std::max(worst, std::abs(a.at(i, j) - b.at(i, j)));
    }
  }
  return worst;
}

std::string pairwise_tsv(const PairwiseMatrix& p, const std::vector<std::string>& ids) {
  if (ids.size() != p.size()) throw std::invalid_argument("one id per motif required");
  std::string out = "id";
  for (const auto& id : ids) out += '\t' + id;
  out += '\n';
  for (std::size_t i = 0; i < p.size(); ++i) {
    out += ids[i];
    for (std::size_t j = 0; j < p.size(); ++j) out += '\t' + format_double(p.at(i, j), "%.6f");
    out += '\n';
  }
  return out;
}

// --- Tree -----------------------------------------------------------------

LinkageTree average_linkage_tree(const std::vector<std::vector<double>>& d) {
  const auto n = d.size();
  if (n < 2) throw std::invalid_argument("average linkage needs at least two leaves");
  for (std::size_t i = 0; i < n; ++i) {
    if (d[i].size() != n) throw std::invalid_argument("distance matrix must be square");
    for (std::size_t j = 0; j < n; ++j) {
      if (d[i][j] != d[j][i]) throw std::invalid_argument("distance matrix must be symmetric");
      if (!std::isfinite(d[i][j])) throw std::invalid_argument("distances must be finite");
    }
  }
  std::vector<std::vector<double>> dist = d;
  std::vector<int> node(n), size(n, 1);
  std::vector<bool> active(n, true);
  std::iota(node.begin(), node.end(), 0);

  LinkageTree tree;
  tree.leaves = n;
  for (std::size_t step = 0; step + 1 < n; ++step) {
    std::size_t best_a = 0, best_b = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < n; ++a) {
      if (!active[a]) continue;
      for (std::size_t b = a + 1; b < n; ++b) {
        if (active[b] && dist[a][b] < best) {
          best = dist[a][b];
          best_a = a;
          best_b = b;
        }
      }
    }
    const int sa = size[best_a], sb = size[best_b];
    tree.merges.push_back({node[best_a], node[best_b], best, sa + sb});
    for (std::size_t k = 0; k < n; ++k) {
      if (!active[k] || k == best_a || k == best_b) continue;
      const double merged = (sa * dist[best_a][k] + sb * dist[best_b][k]) / (sa + sb);
      dist[best_a][k] = dist[k][best_a] = merged;
    }
    active[best_b] = false;
    size[best_a] = sa + sb;
    node[best_a] = static_cast<int>(n + step);
  }
  return tree;
}

namespace {

std::string newick_label(const std::string& label) {
  if (label.find_first_of(" \t()[]':;,") == std::string::npos && !label.empty()) return label;
  std::string quoted = "'";
  for (char c : label) {
    quoted += c;
    if (c == '\'') quoted += '\'';
  }
  return quoted + "'";
}

}  // namespace

std::string to_newick(const LinkageTree& tree, const std::vector<std::string>& labels) {
  const auto n = tree.leaves;
  if (labels.size() != n) throw std::invalid_argument("one label per leaf required");
  if (tree.merges.size() + 1 != n) throw std::invalid_argument("tree is incomplete");
  std::vector<double> height(n + tree.merges.size(), 0.0);
  for (std::size_t k = 0; k < tree.merges.size(); ++k) height[n + k] = tree.merges[k].height;

  std::function<std::string(int)> emit = [&](int id) -> std::string {
    if (static_cast<std::size_t>(id) < n) return newick_label(labels[id]);
    const auto& m = tree.merges[id - n];
    return "(" + emit(m.left) + ":" + format_double(m.height - height[m.left]) + "," +
           emit(m.right) + ":" + format_double(m.height - height[m.right]) + ")";
  };
  return emit(static_cast<int>(n + tree.merges.size() - 1)) + ";";
}

std::vector<double> newick_merge_heights(std::string_view text) {
  std::size_t pos = 0;
  std::vector<double> heights;
  auto fail = [&](const std::string& what) {
    throw std::invalid_argument("newick position " + std::to_string(pos) + ": " + what);
  };
  auto skip_label = [&] {
    if (pos < text.size() && text[pos] == '\'') {
      ++pos;
      while (pos < text.size()) {
        if (text[pos] == '\'') {
          if (pos + 1 < text.size() && text[pos + 1] == '\'') {
            pos += 2;
            continue;
          }
          ++pos;
          return;
        }
        ++pos;
      }
      fail("unterminated quoted label");
    }
    while (pos < text.size() && std::string_view("():,;").find(text[pos]) == std::string_view::npos) {
      ++pos;
    }
  };
  auto branch = [&]() -> double {
    if (pos >= text.size() || text[pos] != ':') return 0.0;
    ++pos;
    const auto end = text.find_first_of(",);", pos);
    const std::string token(text.substr(pos, end - pos));
    char* stop = nullptr;
    const double v = std::strtod(token.c_str(), &stop);
    if (token.empty() || stop != token.c_str() + token.size()) fail("bad branch length");
    pos = end;
    return v;
  };
  // returns the height of the parsed subtree
  std::function<double()> subtree = [&]() -> double {
    if (pos < text.size() && text[pos] == '(') {
      ++pos;
      double h = std::numeric_limits<double>::quiet_NaN();
      while (true) {
        const double child = subtree();
        const double len = branch();
        if (std::isnan(h)) h = child + len;
        if (pos >= text.size()) fail("unbalanced parentheses");
        if (text[pos] == ',') {
          ++pos;
          continue;
        }
        if (text[pos] != ')') fail("expected ',' or ')'");
        ++pos;
        break;
      }
      skip_label();
      heights.push_back(h);
      return h;
    }
    skip_label();
    return 0.0;
  };
  subtree();
  branch();
  if (pos >= text.size() || text[pos] != ';') fail("missing ';'");
  std::sort(heights.begin(), heights.end());
  return heights;
}

// --- Best partition -------------------------------------------------------

PartitionReport best_partition_report(const ClusterModel& model, const Snapshot& best,
                                      const std::vector<MotifRecord>& records) {
  if (records.size() != model.size()) throw std::invalid_argument("one record per motif required");
  const auto state = model.restore(best);
  PartitionReport report;
  report.log_joint = model.log_joint(state);

  for (int label = 0; label < best.cluster_count(); ++label) {
    const auto& stats = state.clusters.at(label);
    std::vector<std::span<const Column>> cores;
    ClusterReport cluster{label, stats.width, 0.0, "", CountMatrix(stats.core_counts), {}};
    for (std::size_t i = 0; i < model.size(); ++i) {
      if (best.assignment[i] != label) continue;
      cores.push_back(model.motif(i).slice(best.offset[i], stats.width));
      const auto membership = model.membership_probability(best, i);
      const auto& r = records[i];
      cluster.members.push_back({i, r.id, r.name, r.family, r.species, best.offset[i], membership.own});
    }
    cluster.consensus = consensus_string(cluster.super_matrix);
    if (cores.size() > 1) {
      cluster.strength = cluster_strength(cores, stats, model.hyper());
      report.clusters.push_back(std::move(cluster));
    } else {
      report.singletons.push_back(std::move(cluster));
    }
  }
  std::stable_sort(report.clusters.begin(), report.clusters.end(),
                   [](const ClusterReport& a, const ClusterReport& b) {
                     if (a.strength != b.strength) return a.strength > b.strength;
                     if (a.members.size() != b.members.size()) return a.members.size() > b.members.size();
                     return a.members.front().index < b.members.front().index;
                   });
  std::stable_sort(report.singletons.begin(), report.singletons.end(),
                   [](const ClusterReport& a, const ClusterReport& b) {
                     return a.members.front().index < b.members.front().index;
                   });
  return report;
}

namespace {

std::string joined_unique(const ClusterReport& c, std::string MemberReport::*field) {
  std::vector<std::string> seen;
  for (const auto& m : c.members) {
    const auto& v = m.*field;
    if (!v.empty() && std::find(seen.begin(), seen.end(), v) == seen.end()) seen.push_back(v);
  }
  std::string out;
  for (const auto& v : seen) out += (out.empty() ? "" : ";") + v;
  return out.empty() ? "-" : out;
}

void append_cluster_row(std::string& out, const std::string& rank, const ClusterReport& c) {
  out += rank + '\t' + std::to_string(c.members.size()) + '\t' + format_double(c.strength, "%.4f") +
         '\t' + std::to_string(c.width) + '\t' + c.consensus + '\t' +
         joined_unique(c, &MemberReport::family) + '\t' + joined_unique(c, &MemberReport::species) + '\t';
  for (std::size_t k = 0; k < c.members.size(); ++k) {
    const auto& m = c.members[k];
    out += (k ? "," : "") + m.id + ':' + format_double(m.probability, "%.4f");
  }
  out += '\n';
}

}  // namespace

std::string report_tsv(const PartitionReport& report, bool include_singletons) {
  std::string out = "# log_joint\t" + format_double(report.log_joint) + '\n';
  out += "cluster\tsize\tstrength\twidth\tconsensus\tfamilies\tspecies\tmembers\n";
  for (std::size_t k = 0; k < report.clusters.size(); ++k) {
    append_cluster_row(out, std::to_string(k + 1), report.clusters[k]);
  }
  if (include_singletons) {
    for (const auto& c : report.singletons) append_cluster_row(out, "-", c);
  }
  return out;
}

std::string report_json(const PartitionReport& report) {
  using nlohmann::json;
  auto encode = [](const ClusterReport& c, int rank) {
    json members = json::array();
    for (const auto& m : c.members) {
      members.push_back({{"index", m.index}, {"id", m.id}, {"name", m.name}, {"family", m.family},
                         {"species", m.species}, {"offset", m.offset},
                         {"probability", m.probability}});
    }
    json counts = json::object();
    for (int k = 0; k < 4; ++k) counts[std::string(1, kBaseLetters[k])] = c.super_matrix.row(static_cast<Base>(k));
    json out = {{"size", c.members.size()}, {"width", c.width},   {"strength", c.strength},
                {"consensus", c.consensus},  {"members", members}, {"super_matrix", counts}};
    if (rank > 0) out["rank"] = rank;
    return out;
  };
  json doc;
  doc["format"] = "motifclust.partition";
  doc["version"] = 1;
  doc["log_joint"] = report.log_joint;
  doc["clusters"] = json::array();
  for (std::size_t k = 0; k < report.clusters.size(); ++k) {
    doc["clusters"].push_back(encode(report.clusters[k], static_cast<int>(k + 1)));
  }
  doc["singletons"] = json::array();
  for (const auto& c : report.singletons) doc["singletons"].push_back(encode(c, 0));
  return doc.dump(2) + "\n";
}

std::string export_super_matrices(const PartitionReport& report) {
  std::vector<MotifRecord> records;
  for (std::size_t k = 0; k < report.clusters.size(); ++k) {
    const auto& c = report.clusters[k];
    records.push_back({"cluster_" + std::to_string(k + 1), c.consensus, "", "", c.super_matrix});
  }
  return write_jaspar(records);
}

std::string super_matrix_ic_tsv(const PartitionReport& report, const std::array<double, 4>& theta0) {
  std::string out = "cluster\tposition\tA\tC\tG\tT\tic_bits\n";
  for (std::size_t k = 0; k < report.clusters.size(); ++k) {
    const auto& m = report.clusters[k].super_matrix;
    const auto freq = frequency_matrix(m);
    const auto ic = information_content_profile(m, theta0);
    for (std::size_t j = 0; j < m.width(); ++j) {
      out += "cluster_" + std::to_string(k + 1) + '\t' + std::to_string(j + 1);
      for (double f : freq[j]) out += '\t' + format_double(f, "%.6f");
      out += '\t' + format_double(ic[j], "%.6f") + '\n';
    }
  }
  return out;
}

// --- Width intervals --------------------------------------------------------

WidthIntervalSummary width_intervals(std::span<const RunTrace> traces, double level) {
  if (!(level > 0.0 && level < 1.0)) throw std::invalid_argument("level must lie strictly between 0 and 1");
  const auto total = sample_count(traces);
  if (traces.empty() || total == 0) throw std::invalid_argument("width intervals need recorded snapshots");
  const auto n = traces.front().motif_count;

  WidthIntervalSummary summary;
  summary.level = level;
  const double lower_p = (1.0 - level) / 2.0;
  const double upper_p = (1.0 + level) / 2.0;
  std::size_t points = 0;
  for (std::size_t i = 0; i < n; ++i) {
    std::map<int, std::size_t> counts;
    for (const auto& t : traces) {
      for (const auto& s : t.samples) ++counts[s.width_of(i)];
    }
    // smallest width whose empirical CDF reaches p; compared in counts to avoid rounding
    auto quantile = [&](double p) {
      const double need = p * static_cast<double>(total);
      std::size_t acc = 0;
      for (const auto& [w, c] : counts) {
        acc += c;
        if (static_cast<double>(acc) >= need * (1.0 - 1e-12)) return w;
      }
      return counts.rbegin()->first;
    };
    WidthInterval interval{quantile(lower_p), quantile(upper_p)};
    if (interval.is_point()) ++points;
    summary.intervals.push_back(interval);
  }
  summary.point_fraction = n ? static_cast<double>(points) / static_cast<double>(n) : 0.0;
  return summary;
}

WidthIntervalSummary width_intervals(const RunTrace& trace, double level) {
  return width_intervals(std::span<const RunTrace>(&trace, 1), level);
}

std::string width_intervals_tsv(const WidthIntervalSummary& summary, const std::vector<std::string>& ids) {
  if (ids.size() != summary.intervals.size()) throw std::invalid_argument("one id per motif required");
  std::string out = "# level\t" + format_double(summary.level, "%g") + '\n';
  out += "# point_fraction\t" + format_double(summary.point_fraction, "%.6f") + '\n';
  out += "id\tlower\tupper\n";
  for (std::size_t i = 0; i < ids.size(); ++i) {
    out += ids[i] + '\t' + std::to_string(summary.intervals[i].lo) + '\t' +
           std::to_string(summary.intervals[i].hi) + '\n';
  }
  return out;
}

// --- Diagnostics ------------------------------------------------------------

double autocorrelation(std::span<const double> x, std::size_t lag) {
  const auto n = x.size();
  if (n < 2 || lag >= n) return std::numeric_limits<double>::quiet_NaN();
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
  double den = 0.0;
  for (double v : x) den += (v - mean) * (v - mean);
  if (den == 0.0) return std::numeric_limits<double>::quiet_NaN();
  double num = 0.0;
  for (std::size_t t = 0; t + lag < n; ++t) num += (x[t] - mean) * (x[t + lag] - mean);
  return num / den;
}

ChainDiagnostics chain_diagnostics(const RunTrace& trace, const std::vector<std::size_t>& lags) {
  std::vector<double> lj, clusters;
  for (const auto& h : trace.history) {
    if (h.iteration <= trace.burn_in) continue;
    lj.push_back(h.log_joint);
    clusters.push_back(h.clusters);
  }
  ChainDiagnostics out;
  out.lags = lags;
  for (auto lag : lags) {
    out.log_joint_acf.push_back(autocorrelation(lj, lag));
    out.cluster_count_acf.push_back(autocorrelation(clusters, lag));
  }
  if (!clusters.empty()) {
    out.mean_clusters = std::accumulate(clusters.begin(), clusters.end(), 0.0) /
                        static_cast<double>(clusters.size());
  }
  return out;
}

std::string diagnostics_tsv(std::span<const RunTrace> traces, const std::vector<std::size_t>& lags) {
  std::string out = "chain\tstatistic\tlag\tvalue\n";
  for (std::size_t c = 0; c < traces.size(); ++c) {
    const auto d = chain_diagnostics(traces[c], lags);
    const auto chain = std::to_string(c);
    for (std::size_t k = 0; k < lags.size(); ++k) {
      out += chain + "\tacf_log_joint\t" + std::to_string(lags[k]) + '\t' +
             format_double(d.log_joint_acf[k], "%.6f") + '\n';
      out += chain + "\tacf_clusters\t" + std::to_string(lags[k]) + '\t' +
             format_double(d.cluster_count_acf[k], "%.6f") + '\n';
    }
    out += chain + "\tmean_clusters\t-\t" + format_double(d.mean_clusters, "%.6f") + '\n';
  }
  if (traces.size() > 1) {
    std::vector<PairwiseMatrix> per_chain;
    for (const auto& t : traces) per_chain.push_back(pairwise_probabilities(t));
    double worst = 0.0;
    for (std::size_t a = 0; a < per_chain.size(); ++a) {
      for (std::size_t b = a + 1; b < per_chain.size(); ++b) {
        worst = std::max(worst, max_abs_difference(per_chain[a], per_chain[b]));
      }
    }
    out += "all\tmax_pairwise_difference\t-\t" + format_double(worst, "%.6f") + '\n';
  }
  return out;
}

}  // namespace motifclust
