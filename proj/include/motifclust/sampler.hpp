#ifndef MOTIFCLUST_SAMPLER_HPP
#define MOTIFCLUST_SAMPLER_HPP

#include <atomic>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "motifclust/matrix.hpp"
#include "motifclust/model.hpp"
#include "motifclust/rng.hpp"

namespace motifclust {

enum class InitMode { Singletons, SingleCluster, Random };

std::string to_string(InitMode mode);
InitMode init_mode_from_string(const std::string& name);  // "singletons" | "single" | "random"

/// Full Gibbs state. Offsets are 0-based: motif i's core is raw columns
/// [offset[i], offset[i] + w) where w is the width of its cluster.
struct SamplerState {
  std::vector<int> assignment;  ///< cluster id per motif
  std::vector<int> offset;
  std::map<int, ClusterStats> clusters;
  BackgroundCounts background;
  std::int64_t iteration = 0;

  int width_of(std::size_t motif) const { return clusters.at(assignment[motif]).width; }
};

/// Label-canonical copy of a state: clusters are numbered 0..C-1 in order of
/// their first member.
struct Snapshot {
  std::int64_t iteration = 0;
  double log_joint = 0.0;
  std::vector<int> assignment;
  std::vector<int> offset;
  std::vector<int> width;  ///< indexed by cluster label

  int cluster_count() const { return static_cast<int>(width.size()); }
  int width_of(std::size_t motif) const { return width[assignment[motif]]; }

  friend bool operator==(const Snapshot&, const Snapshot&) = default;
};

struct RunConfig {
  std::int64_t iterations = 1000;
  std::optional<std::int64_t> burn_in;  ///< defaults to 20% of iterations
  int align_every = 10;
  int thin = 1;
  std::uint64_t seed = 1;
  InitMode init = InitMode::Singletons;
  bool record_trace = true;
  bool update_alignments = true;  ///< off pins every offset at its initial value
  bool update_widths = true;      ///< off pins every cluster width

  void validate() const;
  std::int64_t effective_burn_in() const;
};

struct HistoryEntry {
  std::int64_t iteration = 0;
  double log_joint = 0.0;
  int clusters = 0;

  friend bool operator==(const HistoryEntry&, const HistoryEntry&) = default;
};

struct RunTrace {
  std::size_t motif_count = 0;
  std::int64_t burn_in = 0;
  int thin = 1;
  std::vector<HistoryEntry> history;  ///< every iteration, burn-in included
  std::vector<Snapshot> samples;      ///< thinned post-burn-in snapshots
  Snapshot best;                      ///< highest log joint after burn-in (initial state if none)

  friend bool operator==(const RunTrace&, const RunTrace&) = default;
};

struct AssignmentCandidate {
  int cluster_id = -1;  ///< -1 for a new cluster
  double log_weight = 0.0;
};

/// One joint (offset, cluster) choice of the alignment step.
struct AlignmentCandidate {
  int offset = 0;
  int cluster_id = -1;  ///< -1 for a new cluster
  double log_weight = 0.0;
};

struct MembershipProbabilities {
  std::vector<int> labels;  ///< snapshot cluster label per candidate, -1 = new cluster
  std::vector<double> probabilities;
  double own = 0.0;  ///< probability of the cluster the motif holds in the snapshot
};

struct WidthPosterior {
  int lo = 0;
  std::vector<double> log_weights;  ///< entry k is width lo + k
};

/// Width weights of one cluster for every common shift of its members'
/// offsets that keeps all cores inside their raw matrices.
struct WindowPosterior {
  int min_shift = 0;
  std::vector<WidthPosterior> by_shift;  ///< entry k is shift min_shift + k
};

/// Collapsed Gibbs sampler over cluster assignments, core offsets and cluster
/// widths for a fixed collection of count matrices.
///
/// The target density is the one reported by `log_joint`: Dirichlet-
/// multinomial marginals of every cluster's summed cores, background counts
/// under theta0, the partition prior and an independent width prior per
/// cluster normalised over {min_width, ...}. Offsets carry a flat prior.
///
/// All member functions are const and reentrant; chains with their own
/// SamplerState and Rng may share one model across threads.
class ClusterModel {
 public:
  /// Throws std::invalid_argument when the hyperparameters are invalid, the
  /// collection is empty, or a matrix is narrower than min_width.
  ClusterModel(std::vector<CountMatrix> data, Hyperparameters hyper);

  std::size_t size() const { return data_.size(); }
  const Hyperparameters& hyper() const { return hyper_; }
  const CountMatrix& motif(std::size_t i) const { return data_[i]; }
  std::span<const CountMatrix> data() const { return data_; }

  SamplerState init_state(InitMode mode, Rng& rng) const;

  /// Removes motif i and redraws its cluster with the offset held fixed.
  /// A new cluster's width is drawn jointly with the decision.
  void resample_assignment(SamplerState& state, std::size_t i, Rng& rng) const;

  /// Redraws motif i's core offset with its cluster label integrated out:
  /// offset and label are drawn jointly from their conditional given the
  /// other motifs, over every existing cluster and a new one.
  void resample_alignment(SamplerState& state, std::size_t i, Rng& rng) const;

  /// Redraws the width of one cluster jointly with a common shift of its
  /// members' offsets; relative alignments within the cluster are kept.
  void resample_width(SamplerState& state, int cluster_id, Rng& rng) const;

  /// Candidate log weights for motif i, which must already be detached.
  /// `new_widths` receives the log weights of each width for a new cluster.
  std::vector<AssignmentCandidate> assignment_candidates(const SamplerState& state, std::size_t i,
                                                         WidthPosterior* new_widths = nullptr) const;

  /// Joint log weights over every feasible (offset, cluster) pair for motif
  /// i, which must already be detached. Offsets run over 0..(n_i - min_width);
  /// `new_widths[o]` receives the new-cluster width weights at offset o.
  std::vector<AlignmentCandidate> alignment_candidates(const SamplerState& state, std::size_t i,
                                                       std::vector<WidthPosterior>* new_widths = nullptr) const;

  /// Width weights with the members' offsets held where they are.
  WidthPosterior width_posterior(const SamplerState& state, int cluster_id) const;
  WindowPosterior window_posterior(const SamplerState& state, int cluster_id) const;

  double log_joint(const SamplerState& state) const;

  Snapshot snapshot(const SamplerState& state) const;

  /// Rebuilds a state from a snapshot. Throws std::invalid_argument when
  /// the snapshot does not fit the data.
  SamplerState restore(const Snapshot& snap) const;

  /// Rebuilds every sufficient statistic from assignments, offsets and
  /// widths and compares with the incremental copies. Throws
  /// std::logic_error describing the first mismatch or broken invariant.
  void audit(const SamplerState& state) const;

  /// Normalised single-site conditional of motif i at the snapshot, using
  /// the same weights as the assignment update.
  MembershipProbabilities membership_probability(const Snapshot& snap, std::size_t i) const;

  /// Detaches motif i (its cluster is removed if it empties).
  void detach(SamplerState& state, std::size_t i) const;
  void attach(SamplerState& state, std::size_t i, int cluster_id) const;

 private:
  std::vector<AssignmentCandidate> candidates_at(const SamplerState& state, std::size_t i, int offset,
                                                 const PriorWeights& prior, WidthPosterior* new_widths) const;
  std::vector<std::size_t> members_of(const SamplerState& state, int cluster_id) const;
  WidthPosterior shifted_width_posterior(const SamplerState& state, const std::vector<std::size_t>& members,
                                         int shift) const;
  std::span<const Column> core(std::size_t i, int offset, int width) const;
  double log_core_background(std::size_t i, int offset, int width) const;
  void set_width(SamplerState& state, int cluster_id, int width) const;

  std::vector<CountMatrix> data_;
  Hyperparameters hyper_;
  DmKernel kernel_;
  std::array<double, 4> log_theta_{};
  std::vector<Column> totals_;
  std::vector<std::vector<double>> bg_prefix_;  // prefix sums of per-column sum_k N_jk log theta_k
  std::vector<double> log_width_prior_;         // normalised, indexed by width
  std::optional<double> log_uniform_norm_;
};

/// Recomputes the joint log density of (assignment, offset, widths) from the
/// raw matrices with the uncached kernels. Independent of ClusterModel.
double log_joint(std::span<const int> assignment, std::span<const int> offset,
                 const std::map<int, int>& widths, std::span<const CountMatrix> data,
                 const Hyperparameters& hyper);

double log_joint(const SamplerState& state, std::span<const CountMatrix> data,
                 const Hyperparameters& hyper);

/// Runs one chain. Per iteration: assignment sweep in motif order, an
/// alignment sweep every `align_every` iterations, then a width update for
/// every cluster. Setting `*stop` ends the run early with the trace so far.
RunTrace run(const ClusterModel& model, const RunConfig& config, Rng& rng,
             const std::atomic<bool>* stop = nullptr);

/// Same, seeded from config.seed.
RunTrace run(const ClusterModel& model, const RunConfig& config);

}  // namespace motifclust

#endif  // MOTIFCLUST_SAMPLER_HPP
