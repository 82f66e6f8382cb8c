#ifndef MOTIFCLUST_PRIOR_SIM_HPP
#define MOTIFCLUST_PRIOR_SIM_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "motifclust/model.hpp"
#include "motifclust/rng.hpp"

namespace motifclust {

struct PriorSimConfig {
  int n = 106;
  double b = 1.0;
  PriorKind prior = PriorKind::DirichletProcess;
  int replicates = 1000;
  std::uint64_t seed = 1;

  void validate() const;  ///< throws std::invalid_argument
};

/// Cluster labels 0..C-1 in order of first appearance.
using Partition = std::vector<int>;

/// Sequential construction: observation 1 opens cluster 0, each later one
/// joins or opens a cluster with the seq_prior_weights probabilities.
Partition simulate_partition(const PriorSimConfig& config, Rng& rng);

/// Replicate r is drawn from its own stream Rng::derive_seed(seed, r), so
/// results do not depend on evaluation order.
std::vector<Partition> simulate_partitions(const PriorSimConfig& config);

/// Exact count tables; keys are values, entries are occurrence counts.
struct PartitionStats {
  std::size_t replicates = 0;
  std::map<int, std::size_t> cluster_count;       ///< C per replicate
  std::map<int, std::size_t> multi_member_count;  ///< clusters with n_c > 1 per replicate
  std::map<int, std::size_t> multi_member_size;   ///< sizes of n_c > 1 clusters, pooled
  std::map<int, std::size_t> max_cluster_size;    ///< largest n_c per replicate
  int max_observed_size = 0;
  double mean_clusters = 0.0;
  double mean_multi_member = 0.0;

  /// Lower median of the multi-member cluster count.
  int median_multi_member() const;
};

/// Throws std::invalid_argument on an empty sample.
PartitionStats partition_stats(const std::vector<Partition>& partitions);

/// Long-format table: statistic, value, count; summary rows first.
std::string partition_stats_tsv(const PartitionStats& stats);

}  // namespace motifclust

#endif  // MOTIFCLUST_PRIOR_SIM_HPP
