#ifndef MOTIFCLUST_MODEL_HPP
#define MOTIFCLUST_MODEL_HPP

#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "motifclust/matrix.hpp"

namespace motifclust {

enum class PriorKind { DirichletProcess, Uniform };

std::string to_string(PriorKind kind);
PriorKind prior_kind_from_string(const std::string& name);  // "dp" | "uniform"

/// Model constants. Defaults are the JASPAR analysis settings: alpha = b = 1,
/// expected core width 8, minimum core width 6, uniform background.
struct Hyperparameters {
  double alpha = 1.0;    ///< Dirichlet pseudo-count per base
  double b = 1.0;        ///< new-cluster weight
  double lambda = 8.0;   ///< expected core width
  int min_width = 6;
  std::array<double, 4> theta0{0.25, 0.25, 0.25, 0.25};
  PriorKind prior = PriorKind::DirichletProcess;

  /// Throws std::invalid_argument. Background frequencies must be strictly
  /// positive and sum to 1 within 1e-12.
  void validate() const;
};

/// Sufficient statistics of one cluster: the summed aligned cores.
struct ClusterStats {
  int width = 0;
  std::vector<Column> core_counts;  ///< width columns
  int member_count = 0;
};

/// Per-base totals over every raw column that lies outside its motif's core.
struct BackgroundCounts {
  Column counts{};
};

// --- Dirichlet-multinomial kernels --------------------------------------

/// log of prod_k Gamma(Y_k + a) / Gamma(sum_k Y_k + 4a) * Gamma(4a) / Gamma(a)^4.
double log_dm_column(const Column& counts, double alpha);

/// Sum of log_dm_column over the given columns.
double log_dm_columns(std::span<const Column> columns, double alpha);

double log_marginal_cluster(const ClusterStats& stats, double alpha);

/// Likelihood factor for a core forming a new cluster (prior factor excluded).
double log_pred_new(std::span<const Column> core, const Hyperparameters& hyper);

/// Likelihood factor for a core joining `stats` (prior factor excluded).
/// Throws std::invalid_argument on a width mismatch.
double log_pred_join(std::span<const Column> core, const ClusterStats& stats,
                     const Hyperparameters& hyper);

/// log Bayes factor of "all members together" against "all members apart",
/// including the partition-prior ratio (m - 1)! / b^(m - 1).
double cluster_strength(const std::vector<std::span<const Column>>& members,
                        const ClusterStats& stats, const Hyperparameters& hyper);

/// Dirichlet-multinomial column marginal backed by precomputed log-Gamma
/// tables for integer counts up to `max_total`. Beyond the table it falls
/// back to direct evaluation, so results are valid for any counts.
class DmKernel {
 public:
  DmKernel(double alpha, std::int64_t max_total);

  double log_column(const Column& counts) const;

  /// log_column(core + cluster) - log_column(cluster) for one position.
  double log_join_column(const Column& core, const Column& cluster) const;

 private:
  double lg_alpha(std::int64_t n) const;
  double lg_4alpha(std::int64_t n) const;

  double alpha_;
  double constant_;  // log Gamma(4a) - 4 log Gamma(a)
  std::vector<double> lg_alpha_;
  std::vector<double> lg_4alpha_;
};

// --- Partition priors ----------------------------------------------------

struct PriorWeights {
  double new_cluster = 0.0;
  std::vector<double> join;
};

/// Unnormalised sequential allocation weights given the sizes of the
/// existing clusters: DP gives (b, n_c), uniform gives (b, 1).
PriorWeights seq_prior_weights(std::span<const int> cluster_sizes, const Hyperparameters& hyper);

/// Normalised log prior density of the partition given by `labels` (any
/// integer labels; equal labels share a cluster).
///
/// DP: b^C prod (n_c - 1)! / prod_{i=1..n} (b + i - 1).
/// Uniform: the sequential density of the partition with its clusters laid
/// out largest first, times the constant that makes the density over set
/// partitions sum to one (see log_uniform_normalizer).
double log_partition_prior(std::span<const int> labels, const Hyperparameters& hyper);

/// Same as log_partition_prior, from cluster sizes. `log_uniform_norm` can
/// carry a precomputed log_uniform_normalizer(n, b).
double log_partition_prior_from_sizes(std::span<const int> sizes, const Hyperparameters& hyper,
                                      std::optional<double> log_uniform_norm = std::nullopt);

/// b^(C-1) (b + C) / prod_{c=1..C} (b + c)^(n_c) with clusters ordered from
/// largest to smallest. Not normalised over set partitions.
double log_uniform_signature_density(std::span<const int> labels, double b);
double log_uniform_signature_density_from_sizes(std::span<const int> sizes, double b);

/// log k_n with k_n = 1 / sum over set partitions of {1..n} of the signature
/// density. Computed by dynamic programming over integer partitions.
double log_uniform_normalizer(int n, double b);

// --- Width prior and background -----------------------------------------

inline constexpr int kUnboundedWidth = std::numeric_limits<int>::max();

struct WidthSupport {
  int lo = 1;
  int hi = kUnboundedWidth;
};

/// log(lambda^w e^-lambda / Gamma(w)), unnormalised. Throws when w < min_width.
double log_width_prior(int w, const Hyperparameters& hyper);

/// Width prior renormalised over `support` (hi may be kUnboundedWidth).
double log_width_prior(int w, const Hyperparameters& hyper, WidthSupport support);

/// log of the normalising sum of the unnormalised width prior over `support`.
double log_width_prior_normalizer(const Hyperparameters& hyper, WidthSupport support);

/// sum_k B_k log theta0_k. Throws when B_k > 0 while theta0_k = 0.
double log_background(const BackgroundCounts& bg, const Hyperparameters& hyper);

}  // namespace motifclust

#endif  // MOTIFCLUST_MODEL_HPP
