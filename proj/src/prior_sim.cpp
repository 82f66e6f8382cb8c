#include "motifclust/prior_sim.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>

namespace motifclust {

void PriorSimConfig::validate() const {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  if (!(b > 0.0)) throw std::invalid_argument("b must be > 0");
  if (replicates < 1) throw std::invalid_argument("replicates must be >= 1");
}

Partition simulate_partition(const PriorSimConfig& config, Rng& rng) {
  config.validate();
  Hyperparameters hyper;
  hyper.b = config.b;
  hyper.prior = config.prior;

  Partition z(config.n);
  std::vector<int> sizes;
  for (int i = 0; i < config.n; ++i) {
    const auto w = seq_prior_weights(sizes, hyper);
    double total = w.new_cluster;
    for (double v : w.join) total += v;
    double u = rng.uniform() * total;
    std::size_t pick = sizes.size();
    for (std::size_t c = 0; c < w.join.size(); ++c) {
      if (u < w.join[c]) {
        pick = c;
        break;
      }
      u -= w.join[c];
    }
    if (pick == sizes.size()) sizes.push_back(0);
    ++sizes[pick];
    z[i] = static_cast<int>(pick);
  }
  return z;
}

std::vector<Partition> simulate_partitions(const PriorSimConfig& config) {
  config.validate();
  std::vector<Partition> out;
  out.reserve(config.replicates);
  for (int r = 0; r < config.replicates; ++r) {
    Rng rng(Rng::derive_seed(config.seed, static_cast<std::uint64_t>(r)));
    out.push_back(simulate_partition(config, rng));
  }
  return out;
}

int PartitionStats::median_multi_member() const {
  if (replicates == 0) throw std::logic_error("median of an empty sample");
  const auto target = (replicates + 1) / 2;
  std::size_t acc = 0;
  for (const auto& [value, count] : multi_member_count) {
    acc += count;
    if (acc >= target) return value;
  }
  return multi_member_count.rbegin()->first;
}

PartitionStats partition_stats(const std::vector<Partition>& partitions) {
  if (partitions.empty()) throw std::invalid_argument("partition_stats needs a non-empty sample");
  PartitionStats stats;
  stats.replicates = partitions.size();
  double clusters_sum = 0.0, multi_sum = 0.0;
  for (const auto& z : partitions) {
    std::vector<int> sizes;
    for (int label : z) {
      if (label < 0) throw std::invalid_argument("negative cluster label");
      if (static_cast<std::size_t>(label) >= sizes.size()) sizes.resize(label + 1, 0);
      ++sizes[label];
    }
    sizes.erase(std::remove(sizes.begin(), sizes.end(), 0), sizes.end());
    int multi = 0, largest = 0;
    for (int s : sizes) {
      largest = std::max(largest, s);
      if (s > 1) {
        ++multi;
        ++stats.multi_member_size[s];
      }
    }
    ++stats.cluster_count[static_cast<int>(sizes.size())];
    ++stats.multi_member_count[multi];
    ++stats.max_cluster_size[largest];
    stats.max_observed_size = std::max(stats.max_observed_size, largest);
    clusters_sum += static_cast<double>(sizes.size());
    multi_sum += multi;
  }
  stats.mean_clusters = clusters_sum / static_cast<double>(partitions.size());
  stats.mean_multi_member = multi_sum / static_cast<double>(partitions.size());
  return stats;
}

std::string partition_stats_tsv(const PartitionStats& stats) {
  char buf[64];
  std::string out = "statistic\tvalue\tcount\n";
  out += "replicates\t-\t" + std::to_string(stats.replicates) + '\n';
  std::snprintf(buf, sizeof buf, "%.6f", stats.mean_clusters);
  out += std::string("mean_clusters\t") + buf + "\t-\n";
  std::snprintf(buf, sizeof buf, "%.6f", stats.mean_multi_member);
  out += std::string("mean_multi_member_clusters\t") + buf + "\t-\n";
  out += "median_multi_member_clusters\t" + std::to_string(stats.median_multi_member()) + "\t-\n";
  out += "max_observed_cluster_size\t" + std::to_string(stats.max_observed_size) + "\t-\n";
  auto table = [&](const char* name, const std::map<int, std::size_t>& m) {
    for (const auto& [value, count] : m) {
      out += std::string(name) + '\t' + std::to_string(value) + '\t' + std::to_string(count) + '\n';
    }
  };
  table("cluster_count", stats.cluster_count);
  table("multi_member_count", stats.multi_member_count);
  table("multi_member_size", stats.multi_member_size);
  table("max_cluster_size", stats.max_cluster_size);
  return out;
}

}  // namespace motifclust
