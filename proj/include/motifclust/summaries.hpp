#ifndef MOTIFCLUST_SUMMARIES_HPP
#define MOTIFCLUST_SUMMARIES_HPP

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "motifclust/matrix.hpp"
#include "motifclust/sampler.hpp"

namespace motifclust {

// --- Pairwise clustering probabilities -----------------------------------

/// Symmetric n x n co-clustering proportions with unit diagonal.
class PairwiseMatrix {
 public:
  explicit PairwiseMatrix(std::size_t n = 0);

  std::size_t size() const { return n_; }
  double at(std::size_t i, std::size_t j) const { return p_[i * n_ + j]; }
  double distance(std::size_t i, std::size_t j) const { return 1.0 - at(i, j); }

  /// Dissimilarity view d_ij = 1 - p_ij as nested rows.
  std::vector<std::vector<double>> distances() const;

  void set(std::size_t i, std::size_t j, double value);

 private:
  std::size_t n_;
  std::vector<double> p_;
};

/// Proportion of recorded post-burn-in snapshots with z_i = z_j. Throws
/// std::invalid_argument when the trace holds no snapshots.
PairwiseMatrix pairwise_probabilities(const RunTrace& trace);

/// Pooled over chains, every snapshot weighted equally.
PairwiseMatrix pairwise_probabilities(std::span<const RunTrace> traces);

double max_abs_difference(const PairwiseMatrix& a, const PairwiseMatrix& b);

/// Tab-separated matrix with a header row and first column of motif ids.
std::string pairwise_tsv(const PairwiseMatrix& p, const std::vector<std::string>& ids);

// --- Average-linkage tree -------------------------------------------------

/// One agglomeration. Node ids 0..n-1 are leaves; merge k creates node n + k.
struct Merge {
  int left = 0;
  int right = 0;
  double height = 0.0;
  int size = 0;
};

struct LinkageTree {
  std::size_t leaves = 0;
  std::vector<Merge> merges;  ///< in merge order, n - 1 entries
};

/// Agglomerative average linkage on an arbitrary symmetric dissimilarity
/// with zero diagonal. The closest pair merges first; ties go to the
/// smallest (i, j) by current cluster position. Throws std::invalid_argument
/// for fewer than two leaves or an asymmetric input.
LinkageTree average_linkage_tree(const std::vector<std::vector<double>>& distances);

/// Newick text; each branch length is the parent merge height minus the
/// child's height. Labels containing Newick punctuation are single-quoted.
std::string to_newick(const LinkageTree& tree, const std::vector<std::string>& labels);

/// Heights of the internal nodes of a Newick tree whose leaves sit at
/// height 0, sorted ascending.
std::vector<double> newick_merge_heights(std::string_view newick);

// --- Best-partition report ------------------------------------------------

struct MemberReport {
  std::size_t index = 0;
  std::string id;
  std::string name;
  std::string family;
  std::string species;
  int offset = 0;              ///< 0-based core start in the raw matrix
  double probability = 0.0;    ///< p(z_i | z_-i, Y) of the assigned cluster
};

struct ClusterReport {
  int label = 0;               ///< cluster label in the snapshot
  int width = 0;
  double strength = 0.0;       ///< 0 for singletons
  std::string consensus;
  CountMatrix super_matrix;    ///< sum of the aligned member cores
  std::vector<MemberReport> members;
};

struct PartitionReport {
  double log_joint = 0.0;
  std::vector<ClusterReport> clusters;    ///< multi-member, strongest first
  std::vector<ClusterReport> singletons;  ///< in motif order
};

/// Ranks the multi-member clusters of `best` by strength (descending), then
/// size (descending), then first member index.
PartitionReport best_partition_report(const ClusterModel& model, const Snapshot& best,
                                      const std::vector<MotifRecord>& records);

/// Table with columns rank, size, strength, width, consensus, families,
/// species and members (id:probability). Singletons follow when asked.
std::string report_tsv(const PartitionReport& report, bool include_singletons = true);
std::string report_json(const PartitionReport& report);

/// One JASPAR record per multi-member cluster, id "cluster_<rank>".
std::string export_super_matrices(const PartitionReport& report);

/// Per-column information content of every super-matrix, in bits.
std::string super_matrix_ic_tsv(const PartitionReport& report, const std::array<double, 4>& theta0);

// --- Width posterior intervals --------------------------------------------

struct WidthInterval {
  int lo = 0;
  int hi = 0;

  bool is_point() const { return lo == hi; }
  friend bool operator==(const WidthInterval&, const WidthInterval&) = default;
};

struct WidthIntervalSummary {
  double level = 0.0;
  std::vector<WidthInterval> intervals;  ///< per motif
  double point_fraction = 0.0;           ///< share of motifs with lo == hi
};

/// Equal-tailed interval of the empirical distribution of w_{z_i} over the
/// recorded snapshots: lo is the smallest width whose CDF reaches
/// (1 - level) / 2, hi the smallest whose CDF reaches (1 + level) / 2.
/// Throws std::invalid_argument unless 0 < level < 1 or when the trace is
/// empty.
WidthIntervalSummary width_intervals(std::span<const RunTrace> traces, double level);
WidthIntervalSummary width_intervals(const RunTrace& trace, double level);

std::string width_intervals_tsv(const WidthIntervalSummary& summary,
                                const std::vector<std::string>& ids);

// --- Convergence diagnostics ----------------------------------------------

/// Sample autocorrelation at `lag`; NaN when the series is constant or too
/// short.
double autocorrelation(std::span<const double> series, std::size_t lag);

struct ChainDiagnostics {
  std::vector<std::size_t> lags;
  std::vector<double> log_joint_acf;
  std::vector<double> cluster_count_acf;
  double mean_clusters = 0.0;
};

/// Uses post-burn-in history only.
ChainDiagnostics chain_diagnostics(const RunTrace& trace, const std::vector<std::size_t>& lags);

/// Per-chain autocorrelations plus the maximum absolute difference in
/// pairwise probabilities over every pair of chains.
std::string diagnostics_tsv(std::span<const RunTrace> traces, const std::vector<std::size_t>& lags);

}  // namespace motifclust

#endif  // MOTIFCLUST_SUMMARIES_HPP
