#include "motifclust/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "motifclust/numeric.hpp"

namespace motifclust {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

int lowest_free_id(const std::map<int, ClusterStats>& clusters) {
  int id = 0;
  for (const auto& entry : clusters) {
    if (entry.first != id) break;
    ++id;
  }
  return id;
}

int initial_width(const Hyperparameters& hyper, std::size_t feasible_max) {
  long w = std::lround(hyper.lambda);
  w = std::min<long>(w, static_cast<long>(feasible_max));
  return static_cast<int>(std::max<long>(w, hyper.min_width));
}

std::vector<int> cluster_sizes(const SamplerState& state) {
  std::vector<int> sizes;
  sizes.reserve(state.clusters.size());
  for (const auto& [id, stats] : state.clusters) sizes.push_back(stats.member_count);
  return sizes;
}

}  // namespace

std::string to_string(InitMode mode) {
  switch (mode) {
    case InitMode::Singletons: return "singletons";
    case InitMode::SingleCluster: return "single";
    case InitMode::Random: return "random";
  }
  return "singletons";
}

InitMode init_mode_from_string(const std::string& name) {
  if (name == "singletons") return InitMode::Singletons;
  if (name == "single") return InitMode::SingleCluster;
  if (name == "random") return InitMode::Random;
  throw std::invalid_argument("unknown init mode '" + name + "'");
}

void RunConfig::validate() const {
  if (iterations < 0) throw std::invalid_argument("iterations must be >= 0");
  const auto burn = effective_burn_in();
  if (burn < 0) throw std::invalid_argument("burn-in must be >= 0");
  if (iterations > 0 && burn >= iterations) {
    throw std::invalid_argument("iterations must exceed burn-in");
  }
  if (align_every < 1) throw std::invalid_argument("align_every must be >= 1");
  if (thin < 1) throw std::invalid_argument("thin must be >= 1");
}

std::int64_t RunConfig::effective_burn_in() const {
  return burn_in ? *burn_in : iterations / 5;
}

ClusterModel::ClusterModel(std::vector<CountMatrix> data, Hyperparameters hyper)
    : data_(std::move(data)),
      hyper_(hyper),
      kernel_(hyper.alpha, [&] {
        std::int64_t total = 0;
        for (const auto& m : data_) {
          std::int64_t widest = 0;
          for (const auto& c : m.columns()) widest = std::max(widest, column_total(c));
          total += widest;
        }
        return total;
      }()) {
  hyper_.validate();
  if (data_.empty()) throw std::invalid_argument("no motifs to cluster");
  std::size_t widest = 0;
  for (std::size_t i = 0; i < data_.size(); ++i) {
    if (data_[i].width() < static_cast<std::size_t>(hyper_.min_width)) {
      throw std::invalid_argument("motif " + std::to_string(i) + " has width " +
                                  std::to_string(data_[i].width()) + " below the minimum " +
                                  std::to_string(hyper_.min_width));
    }
    widest = std::max(widest, data_[i].width());
  }
  for (int k = 0; k < 4; ++k) log_theta_[k] = std::log(hyper_.theta0[k]);
  for (const auto& m : data_) {
    totals_.push_back(m.totals());
    std::vector<double> prefix(m.width() + 1, 0.0);
    for (std::size_t j = 0; j < m.width(); ++j) {
      double v = 0.0;
      for (int k = 0; k < 4; ++k) v += static_cast<double>(m[j][k]) * log_theta_[k];
      prefix[j + 1] = prefix[j] + v;
    }
    bg_prefix_.push_back(std::move(prefix));
  }
  const double norm = log_width_prior_normalizer(hyper_, {hyper_.min_width, kUnboundedWidth});
  log_width_prior_.assign(widest + 1, kNegInf);
  for (std::size_t w = hyper_.min_width; w <= widest; ++w) {
    log_width_prior_[w] = log_width_prior(static_cast<int>(w), hyper_) - norm;
  }
  if (hyper_.prior == PriorKind::Uniform) {
    log_uniform_norm_ = log_uniform_normalizer(static_cast<int>(data_.size()), hyper_.b);
  }
}

std::span<const Column> ClusterModel::core(std::size_t i, int offset, int width) const {
  return data_[i].slice(static_cast<std::size_t>(offset), static_cast<std::size_t>(width));
}

double ClusterModel::log_core_background(std::size_t i, int offset, int width) const {
  const auto& prefix = bg_prefix_[i];
  return prefix.back() - (prefix[offset + width] - prefix[offset]);
}

SamplerState ClusterModel::init_state(InitMode mode, Rng& rng) const {
  const auto n = data_.size();
  SamplerState state;
  state.assignment.assign(n, -1);
  state.offset.assign(n, 0);
  for (const auto& t : totals_) state.background.counts += t;

  std::vector<int> labels(n, 0);
  switch (mode) {
    case InitMode::Singletons:
      for (std::size_t i = 0; i < n; ++i) labels[i] = static_cast<int>(i);
      break;
    case InitMode::SingleCluster:
      break;
    case InitMode::Random: {
      std::vector<int> sizes;
      for (std::size_t i = 0; i < n; ++i) {
        const auto weights = seq_prior_weights(sizes, hyper_);
        std::vector<double> logw;
        for (double w : weights.join) logw.push_back(std::log(w));
        logw.push_back(std::log(weights.new_cluster));
        const auto pick = rng.categorical_log(logw);
        if (pick == sizes.size()) sizes.push_back(0);
        ++sizes[pick];
        labels[i] = static_cast<int>(pick);
      }
      break;
    }
  }

  std::map<int, std::size_t> narrowest;
  for (std::size_t i = 0; i < n; ++i) {
    auto [it, inserted] = narrowest.try_emplace(labels[i], data_[i].width());
    if (!inserted) it->second = std::min(it->second, data_[i].width());
  }
  for (const auto& [label, raw] : narrowest) {
    const int w = initial_width(hyper_, raw);
    state.clusters[label] = ClusterStats{w, std::vector<Column>(w, Column{}), 0};
  }
  for (std::size_t i = 0; i < n; ++i) {
    const int w = state.clusters[labels[i]].width;
    state.offset[i] = static_cast<int>(rng.uniform_index(data_[i].width() - w + 1));
    attach(state, i, labels[i]);
  }
  return state;
}

void ClusterModel::detach(SamplerState& state, std::size_t i) const {
  const int id = state.assignment[i];
  auto it = state.clusters.find(id);
  if (it == state.clusters.end()) throw std::logic_error("motif is not attached");
  auto& stats = it->second;
  const auto slice = core(i, state.offset[i], stats.width);
  for (std::size_t j = 0; j < slice.size(); ++j) {
    stats.core_counts[j] -= slice[j];
    state.background.counts += slice[j];
  }
  if (--stats.member_count == 0) state.clusters.erase(it);
  state.assignment[i] = -1;
}

void ClusterModel::attach(SamplerState& state, std::size_t i, int cluster_id) const {
  auto& stats = state.clusters.at(cluster_id);
  const auto slice = core(i, state.offset[i], stats.width);
  for (std::size_t j = 0; j < slice.size(); ++j) {
    stats.core_counts[j] += slice[j];
    state.background.counts -= slice[j];
  }
  ++stats.member_count;
  state.assignment[i] = cluster_id;
}

std::vector<AssignmentCandidate> ClusterModel::candidates_at(const SamplerState& state, std::size_t i,
                                                             int offset, const PriorWeights& prior,
                                                             WidthPosterior* new_widths) const {
  const int room = static_cast<int>(data_[i].width()) - offset;
  const auto& raw = data_[i];

  std::vector<AssignmentCandidate> out;
  out.reserve(state.clusters.size() + 1);
  std::size_t c = 0;
  for (const auto& [id, stats] : state.clusters) {
    const double join_prior = prior.join[c++];
    if (stats.width > room) continue;  // infeasible at this offset
    double value = std::log(join_prior) + log_core_background(i, offset, stats.width);
    for (int j = 0; j < stats.width; ++j) {
      value += kernel_.log_join_column(raw[offset + j], stats.core_counts[j]);
    }
    out.push_back({id, value});
  }

  // new cluster: marginalise the width over its prior
  WidthPosterior widths;
  widths.lo = hyper_.min_width;
  double core_value = 0.0;
  for (int w = 1; w <= room; ++w) {
    core_value += kernel_.log_column(raw[offset + w - 1]);
    if (w < hyper_.min_width) continue;
    widths.log_weights.push_back(log_width_prior_[w] + core_value +
                                 log_core_background(i, offset, w));
  }
  out.push_back({-1, std::log(prior.new_cluster) + log_sum_exp(widths.log_weights)});
  if (new_widths) *new_widths = std::move(widths);
  return out;
}

std::vector<AssignmentCandidate> ClusterModel::assignment_candidates(const SamplerState& state,
                                                                     std::size_t i,
                                                                     WidthPosterior* new_widths) const {
  if (state.assignment[i] != -1) throw std::logic_error("motif must be detached first");
  const auto prior = seq_prior_weights(cluster_sizes(state), hyper_);
  return candidates_at(state, i, state.offset[i], prior, new_widths);
}

std::vector<AlignmentCandidate> ClusterModel::alignment_candidates(
    const SamplerState& state, std::size_t i, std::vector<WidthPosterior>* new_widths) const {
  if (state.assignment[i] != -1) throw std::logic_error("motif must be detached first");
  const auto prior = seq_prior_weights(cluster_sizes(state), hyper_);
  const int positions = static_cast<int>(data_[i].width()) - hyper_.min_width + 1;
  std::vector<AlignmentCandidate> out;
  if (new_widths) new_widths->assign(positions, {});
  for (int o = 0; o < positions; ++o) {
    for (const auto& c : candidates_at(state, i, o, prior, new_widths ? &(*new_widths)[o] : nullptr)) {
      out.push_back({o, c.cluster_id, c.log_weight});
    }
  }
  return out;
}

void ClusterModel::resample_assignment(SamplerState& state, std::size_t i, Rng& rng) const {
  detach(state, i);
  WidthPosterior widths;
  const auto candidates = assignment_candidates(state, i, &widths);
  std::vector<double> logw;
  logw.reserve(candidates.size());
  for (const auto& c : candidates) logw.push_back(c.log_weight);
  const auto& pick = candidates[rng.categorical_log(logw)];
  int id = pick.cluster_id;
  if (id < 0) {
    const int w = widths.lo + static_cast<int>(rng.categorical_log(widths.log_weights));
    id = lowest_free_id(state.clusters);
    state.clusters[id] = ClusterStats{w, std::vector<Column>(w, Column{}), 0};
  }
  attach(state, i, id);
}

void ClusterModel::resample_alignment(SamplerState& state, std::size_t i, Rng& rng) const {
  detach(state, i);
  std::vector<WidthPosterior> widths;
  const auto candidates = alignment_candidates(state, i, &widths);
  std::vector<double> logw;
  logw.reserve(candidates.size());
  for (const auto& c : candidates) logw.push_back(c.log_weight);
  const auto& pick = candidates[rng.categorical_log(logw)];
  state.offset[i] = pick.offset;
  int id = pick.cluster_id;
  if (id < 0) {
    const auto& post = widths[pick.offset];
    const int w = post.lo + static_cast<int>(rng.categorical_log(post.log_weights));
    id = lowest_free_id(state.clusters);
    state.clusters[id] = ClusterStats{w, std::vector<Column>(w, Column{}), 0};
  }
  attach(state, i, id);
}

std::vector<std::size_t> ClusterModel::members_of(const SamplerState& state, int cluster_id) const {
  const auto& stats = state.clusters.at(cluster_id);
  std::vector<std::size_t> members;
  for (std::size_t i = 0; i < data_.size(); ++i) {
    if (state.assignment[i] == cluster_id) members.push_back(i);
  }
  if (members.empty() || static_cast<int>(members.size()) != stats.member_count) {
    throw std::logic_error("cluster membership does not match its statistics");
  }
  return members;
}

WidthPosterior ClusterModel::shifted_width_posterior(const SamplerState& state,
                                                     const std::vector<std::size_t>& members,
                                                     int shift) const {
  int room = std::numeric_limits<int>::max();
  for (auto i : members) room = std::min(room, static_cast<int>(data_[i].width()) - state.offset[i] - shift);
  WidthPosterior post;
  post.lo = hyper_.min_width;
  double background = 0.0;
  for (auto i : members) background += bg_prefix_[i].back();
  double core_value = 0.0;
  for (int w = 1; w <= room; ++w) {
    Column col{};
    for (auto i : members) col += data_[i][state.offset[i] + shift + w - 1];
    core_value += kernel_.log_column(col);
    for (int k = 0; k < 4; ++k) background -= static_cast<double>(col[k]) * log_theta_[k];
    if (w < hyper_.min_width) continue;
    post.log_weights.push_back(core_value + background + log_width_prior_[w]);
  }
  return post;
}

WidthPosterior ClusterModel::width_posterior(const SamplerState& state, int cluster_id) const {
  auto post = shifted_width_posterior(state, members_of(state, cluster_id), 0);
  if (post.log_weights.empty()) throw std::logic_error("no feasible width for cluster");
  return post;
}

WindowPosterior ClusterModel::window_posterior(const SamplerState& state, int cluster_id) const {
  const auto members = members_of(state, cluster_id);
  int lowest = std::numeric_limits<int>::max(), room = std::numeric_limits<int>::max();
  for (auto i : members) {
    lowest = std::min(lowest, state.offset[i]);
    room = std::min(room, static_cast<int>(data_[i].width()) - state.offset[i]);
  }
  if (room < hyper_.min_width) throw std::logic_error("no feasible width for cluster");
  WindowPosterior post;
  post.min_shift = -lowest;
  for (int shift = -lowest; shift <= room - hyper_.min_width; ++shift) {
    post.by_shift.push_back(shifted_width_posterior(state, members, shift));
  }
  return post;
}

void ClusterModel::set_width(SamplerState& state, int cluster_id, int width) const {
  auto& stats = state.clusters.at(cluster_id);
  for (const auto& c : stats.core_counts) state.background.counts += c;
  stats.width = width;
  stats.core_counts.assign(width, Column{});
  for (std::size_t i = 0; i < data_.size(); ++i) {
    if (state.assignment[i] != cluster_id) continue;
    const auto slice = core(i, state.offset[i], width);
    for (int j = 0; j < width; ++j) stats.core_counts[j] += slice[j];
  }
  for (const auto& c : stats.core_counts) state.background.counts -= c;
}

void ClusterModel::resample_width(SamplerState& state, int cluster_id, Rng& rng) const {
  const auto post = window_posterior(state, cluster_id);
  std::vector<double> logw;
  std::vector<std::pair<int, int>> choices;  // (shift, width)
  for (std::size_t k = 0; k < post.by_shift.size(); ++k) {
    const auto& widths = post.by_shift[k];
    for (std::size_t m = 0; m < widths.log_weights.size(); ++m) {
      logw.push_back(widths.log_weights[m]);
      choices.emplace_back(post.min_shift + static_cast<int>(k), widths.lo + static_cast<int>(m));
    }
  }
  const auto [shift, w] = choices[rng.categorical_log(logw)];
  if (shift == 0 && w == state.clusters.at(cluster_id).width) return;
  if (shift != 0) {
    for (std::size_t i = 0; i < data_.size(); ++i) {
      if (state.assignment[i] == cluster_id) state.offset[i] += shift;
    }
  }
  set_width(state, cluster_id, w);  // rebuilds the cores at the new offsets
}

double ClusterModel::log_joint(const SamplerState& state) const {
  double value = 0.0;
  std::vector<int> sizes;
  sizes.reserve(state.clusters.size());
  for (const auto& [id, stats] : state.clusters) {
    for (const auto& c : stats.core_counts) value += kernel_.log_column(c);
    value += log_width_prior_.at(stats.width);
    sizes.push_back(stats.member_count);
  }
  for (int k = 0; k < 4; ++k) value += static_cast<double>(state.background.counts[k]) * log_theta_[k];
  return value + log_partition_prior_from_sizes(sizes, hyper_, log_uniform_norm_);
}

Snapshot ClusterModel::snapshot(const SamplerState& state) const {
  Snapshot snap;
  snap.iteration = state.iteration;
  snap.log_joint = log_joint(state);
  snap.offset = state.offset;
  snap.assignment.resize(state.assignment.size());
  std::map<int, int> relabel;
  for (std::size_t i = 0; i < state.assignment.size(); ++i) {
    auto [it, inserted] = relabel.try_emplace(state.assignment[i], static_cast<int>(relabel.size()));
    if (inserted) snap.width.push_back(state.clusters.at(state.assignment[i]).width);
    snap.assignment[i] = it->second;
  }
  return snap;
}

SamplerState ClusterModel::restore(const Snapshot& snap) const {
  const auto n = data_.size();
  if (snap.assignment.size() != n || snap.offset.size() != n) {
    throw std::invalid_argument("snapshot has " + std::to_string(snap.assignment.size()) +
                                " motifs, model has " + std::to_string(n));
  }
  SamplerState state;
  state.iteration = snap.iteration;
  state.assignment.assign(n, -1);
  state.offset = snap.offset;
  for (const auto& t : totals_) state.background.counts += t;
  for (std::size_t c = 0; c < snap.width.size(); ++c) {
    const int w = snap.width[c];
    if (w < hyper_.min_width) throw std::invalid_argument("snapshot width below minimum");
    state.clusters[static_cast<int>(c)] = ClusterStats{w, std::vector<Column>(w, Column{}), 0};
  }
  for (std::size_t i = 0; i < n; ++i) {
    const int label = snap.assignment[i];
    if (label < 0 || label >= snap.cluster_count()) {
      throw std::invalid_argument("snapshot label out of range for motif " + std::to_string(i));
    }
    const int w = snap.width[label];
    if (snap.offset[i] < 0 || snap.offset[i] + w > static_cast<int>(data_[i].width())) {
      throw std::invalid_argument("snapshot core outside motif " + std::to_string(i));
    }
    attach(state, i, label);
  }
  for (const auto& [id, stats] : state.clusters) {
    if (stats.member_count == 0) throw std::invalid_argument("snapshot has an empty cluster");
  }
  return state;
}

void ClusterModel::audit(const SamplerState& state) const {
  const auto n = data_.size();
  if (state.assignment.size() != n || state.offset.size() != n) {
    throw std::logic_error("state size does not match data");
  }
  std::map<int, ClusterStats> rebuilt;
  for (const auto& [id, stats] : state.clusters) {
    if (stats.width < hyper_.min_width) throw std::logic_error("cluster width below minimum");
    if (static_cast<int>(stats.core_counts.size()) != stats.width) {
      throw std::logic_error("cluster core table does not match its width");
    }
    rebuilt[id] = ClusterStats{stats.width, std::vector<Column>(stats.width, Column{}), 0};
  }
  Column background{};
  for (std::size_t i = 0; i < n; ++i) {
    auto it = rebuilt.find(state.assignment[i]);
    if (it == rebuilt.end()) {
      throw std::logic_error("motif " + std::to_string(i) + " assigned to a missing cluster");
    }
    auto& stats = it->second;
    if (state.offset[i] < 0 || state.offset[i] + stats.width > static_cast<int>(data_[i].width())) {
      throw std::logic_error("core of motif " + std::to_string(i) + " exceeds its matrix");
    }
    background += totals_[i];
    const auto slice = core(i, state.offset[i], stats.width);
    for (int j = 0; j < stats.width; ++j) {
      stats.core_counts[j] += slice[j];
      background -= slice[j];
    }
    ++stats.member_count;
  }
  for (const auto& [id, stats] : rebuilt) {
    const auto& kept = state.clusters.at(id);
    if (stats.member_count == 0) throw std::logic_error("empty cluster " + std::to_string(id));
    if (stats.member_count != kept.member_count || stats.core_counts != kept.core_counts) {
      throw std::logic_error("statistics of cluster " + std::to_string(id) + " are stale");
    }
  }
  if (background != state.background.counts) throw std::logic_error("background counts are stale");
}

MembershipProbabilities ClusterModel::membership_probability(const Snapshot& snap,
                                                             std::size_t i) const {
  auto state = restore(snap);
  const int own = state.assignment[i];
  detach(state, i);
  const auto candidates = assignment_candidates(state, i);
  const bool singleton = !state.clusters.count(own);

  std::vector<double> logw;
  for (const auto& c : candidates) logw.push_back(c.log_weight);
  const double total = log_sum_exp(logw);
  MembershipProbabilities out;
  for (const auto& c : candidates) {
    const double p = std::exp(c.log_weight - total);
    out.labels.push_back(c.cluster_id);
    out.probabilities.push_back(p);
    if ((singleton && c.cluster_id == -1) || (!singleton && c.cluster_id == own)) out.own = p;
  }
  return out;
}

double log_joint(std::span<const int> assignment, std::span<const int> offset,
                 const std::map<int, int>& widths, std::span<const CountMatrix> data,
                 const Hyperparameters& hyper) {
  if (assignment.size() != data.size() || offset.size() != data.size()) {
    throw std::invalid_argument("state size does not match data");
  }
  std::map<int, ClusterStats> clusters;
  BackgroundCounts background;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const int w = widths.at(assignment[i]);
    auto& stats = clusters[assignment[i]];
    if (stats.core_counts.empty()) {
      stats.width = w;
      stats.core_counts.assign(w, Column{});
    }
    const auto slice = data[i].slice(static_cast<std::size_t>(offset[i]), static_cast<std::size_t>(w));
    for (std::size_t j = 0; j < data[i].width(); ++j) background.counts += data[i][j];
    for (int j = 0; j < w; ++j) {
      stats.core_counts[j] += slice[j];
      background.counts -= slice[j];
    }
    ++stats.member_count;
  }
  double value = log_background(background, hyper) + log_partition_prior(assignment, hyper);
  const WidthSupport support{hyper.min_width, kUnboundedWidth};
  for (const auto& [id, stats] : clusters) {
    value += log_marginal_cluster(stats, hyper.alpha) + log_width_prior(stats.width, hyper, support);
  }
  return value;
}

double log_joint(const SamplerState& state, std::span<const CountMatrix> data,
                 const Hyperparameters& hyper) {
  std::map<int, int> widths;
  for (const auto& [id, stats] : state.clusters) widths[id] = stats.width;
  return log_joint(state.assignment, state.offset, widths, data, hyper);
}

RunTrace run(const ClusterModel& model, const RunConfig& config, Rng& rng,
             const std::atomic<bool>* stop) {
  config.validate();
  const auto burn_in = config.effective_burn_in();
  RunTrace trace;
  trace.motif_count = model.size();
  trace.burn_in = burn_in;
  trace.thin = config.thin;

  auto state = model.init_state(config.init, rng);
  trace.best = model.snapshot(state);
  bool have_post_burn_in_best = false;

  std::vector<int> ids;
  for (std::int64_t it = 1; it <= config.iterations; ++it) {
    if (stop && stop->load(std::memory_order_relaxed)) break;
    state.iteration = it;
    for (std::size_t i = 0; i < model.size(); ++i) model.resample_assignment(state, i, rng);
    if (config.update_alignments && it % config.align_every == 0) {
      for (std::size_t i = 0; i < model.size(); ++i) model.resample_alignment(state, i, rng);
    }
    if (config.update_widths) {
      ids.clear();
      for (const auto& entry : state.clusters) ids.push_back(entry.first);
      for (int id : ids) model.resample_width(state, id, rng);
    }

    const double lj = model.log_joint(state);
    trace.history.push_back({it, lj, static_cast<int>(state.clusters.size())});
    if (it <= burn_in) continue;
    const bool record = config.record_trace && (it - burn_in) % config.thin == 0;
    const bool improved = !have_post_burn_in_best || lj > trace.best.log_joint;
    if (record || improved) {
      auto snap = model.snapshot(state);
      if (improved) {
        trace.best = snap;
        have_post_burn_in_best = true;
      }
      if (record) trace.samples.push_back(std::move(snap));
    }
  }
  return trace;
}

RunTrace run(const ClusterModel& model, const RunConfig& config) {
  Rng rng(config.seed);
  return run(model, config, rng);
}

}  // namespace motifclust
