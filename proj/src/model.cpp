#include "motifclust/model.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <stdexcept>

#include "motifclust/numeric.hpp"

namespace motifclust {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

std::vector<int> sizes_of(std::span<const int> labels) {
  std::map<int, int> counts;
  for (int z : labels) ++counts[z];
  std::vector<int> sizes;
  sizes.reserve(counts.size());
  for (const auto& [label, size] : counts) sizes.push_back(size);
  return sizes;
}

}  // namespace

std::string to_string(PriorKind kind) {
  return kind == PriorKind::DirichletProcess ? "dp" : "uniform";
}

PriorKind prior_kind_from_string(const std::string& name) {
  if (name == "dp") return PriorKind::DirichletProcess;
  if (name == "uniform") return PriorKind::Uniform;
  throw std::invalid_argument("unknown prior '" + name + "' (expected dp or uniform)");
}

void Hyperparameters::validate() const {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw std::invalid_argument("alpha must be > 0");
  if (!(b > 0.0) || !std::isfinite(b)) throw std::invalid_argument("b must be > 0");
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw std::invalid_argument("lambda must be > 0");
  if (min_width < 1) throw std::invalid_argument("min_width must be >= 1");
  double sum = 0.0;
  for (double t : theta0) {
    if (!(t > 0.0) || !std::isfinite(t)) {
      throw std::invalid_argument("background frequencies must be positive");
    }
    sum += t;
  }
  if (std::abs(sum - 1.0) > 1e-12) throw std::invalid_argument("background frequencies must sum to 1");
}

double log_dm_column(const Column& counts, double alpha) {
  double value = log_gamma(4.0 * alpha) - 4.0 * log_gamma(alpha);
  std::int64_t total = 0;
  for (auto y : counts) {
    value += log_gamma(static_cast<double>(y) + alpha);
    total += y;
  }
  return value - log_gamma(static_cast<double>(total) + 4.0 * alpha);
}

double log_dm_columns(std::span<const Column> columns, double alpha) {
  double value = 0.0;
  for (const auto& c : columns) value += log_dm_column(c, alpha);
  return value;
}

double log_marginal_cluster(const ClusterStats& stats, double alpha) {
  return log_dm_columns(stats.core_counts, alpha);
}

double log_pred_new(std::span<const Column> core, const Hyperparameters& hyper) {
  return log_dm_columns(core, hyper.alpha);
}

double log_pred_join(std::span<const Column> core, const ClusterStats& stats,
                     const Hyperparameters& hyper) {
  if (core.size() != stats.core_counts.size()) {
    throw std::invalid_argument("core width " + std::to_string(core.size()) +
                                " does not match cluster width " +
                                std::to_string(stats.core_counts.size()));
  }
  double value = 0.0;
  for (std::size_t j = 0; j < core.size(); ++j) {
    Column merged = stats.core_counts[j];
    merged += core[j];
    value += log_dm_column(merged, hyper.alpha) - log_dm_column(stats.core_counts[j], hyper.alpha);
  }
  return value;
}

double cluster_strength(const std::vector<std::span<const Column>>& members,
                        const ClusterStats& stats, const Hyperparameters& hyper) {
  const auto m = members.size();
  if (m == 0) throw std::invalid_argument("cluster_strength needs at least one member");
  double separate = 0.0;
  for (const auto& core : members) {
    if (core.size() != stats.core_counts.size()) {
      throw std::invalid_argument("member core width does not match cluster width");
    }
    separate += log_dm_columns(core, hyper.alpha);
  }
  const double prior_ratio =
      log_gamma(static_cast<double>(m)) - static_cast<double>(m - 1) * std::log(hyper.b);
  return log_marginal_cluster(stats, hyper.alpha) - separate + prior_ratio;
}

DmKernel::DmKernel(double alpha, std::int64_t max_total)
    : alpha_(alpha), constant_(log_gamma(4.0 * alpha) - 4.0 * log_gamma(alpha)) {
  const auto size = static_cast<std::size_t>(std::max<std::int64_t>(0, max_total) + 1);
  lg_alpha_.resize(size);
  lg_4alpha_.resize(size);
  for (std::size_t n = 0; n < size; ++n) {
    lg_alpha_[n] = log_gamma(static_cast<double>(n) + alpha);
    lg_4alpha_[n] = log_gamma(static_cast<double>(n) + 4.0 * alpha);
  }
}

double DmKernel::lg_alpha(std::int64_t n) const {
  return static_cast<std::size_t>(n) < lg_alpha_.size() ? lg_alpha_[n]
                                                        : log_gamma(static_cast<double>(n) + alpha_);
}

double DmKernel::lg_4alpha(std::int64_t n) const {
  return static_cast<std::size_t>(n) < lg_4alpha_.size()
             ? lg_4alpha_[n]
             : log_gamma(static_cast<double>(n) + 4.0 * alpha_);
}

double DmKernel::log_column(const Column& counts) const {
  return constant_ + lg_alpha(counts[0]) + lg_alpha(counts[1]) + lg_alpha(counts[2]) +
         lg_alpha(counts[3]) - lg_4alpha(column_total(counts));
}

double DmKernel::log_join_column(const Column& core, const Column& cluster) const {
  double value = 0.0;
  for (int k = 0; k < 4; ++k) value += lg_alpha(core[k] + cluster[k]) - lg_alpha(cluster[k]);
  const auto cluster_total = column_total(cluster);
  return value - lg_4alpha(cluster_total + column_total(core)) + lg_4alpha(cluster_total);
}

PriorWeights seq_prior_weights(std::span<const int> cluster_sizes, const Hyperparameters& hyper) {
  PriorWeights w;
  w.new_cluster = hyper.b;
  w.join.reserve(cluster_sizes.size());
  for (int n_c : cluster_sizes) {
    if (n_c <= 0) throw std::invalid_argument("cluster sizes must be positive");
    w.join.push_back(hyper.prior == PriorKind::DirichletProcess ? static_cast<double>(n_c) : 1.0);
  }
  return w;
}

double log_uniform_signature_density_from_sizes(std::span<const int> sizes, double b) {
  std::vector<int> sorted(sizes.begin(), sizes.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  const auto C = static_cast<double>(sorted.size());
  double value = (C - 1.0) * std::log(b) + std::log(b + C);
  for (std::size_t c = 0; c < sorted.size(); ++c) {
    value -= static_cast<double>(sorted[c]) * std::log(b + static_cast<double>(c + 1));
  }
  return value;
}

double log_uniform_signature_density(std::span<const int> labels, double b) {
  const auto sizes = sizes_of(labels);
  return log_uniform_signature_density_from_sizes(sizes, b);
}

double log_uniform_normalizer(int n, double b) {
  if (n < 1) throw std::invalid_argument("normalizer needs n >= 1");
  const auto N = static_cast<std::size_t>(n);
  // prefix[c] = sum_{c'=1..c} log(b + c')
  std::vector<double> prefix(N + 1, 0.0);
  for (std::size_t c = 1; c <= N; ++c) prefix[c] = prefix[c - 1] + std::log(b + static_cast<double>(c));
  std::vector<double> lfact(N + 2, 0.0);
  for (std::size_t k = 1; k < lfact.size(); ++k) lfact[k] = lfact[k - 1] + std::log(static_cast<double>(k));

  // f[r][C]: log of sum over the larger block sizes already placed, leaving r
  // elements and C blocks, of prod 1/(s!^m m!) * prod (b + c)^-s. Blocks are
  // placed in decreasing size so the c-th block has the c-th largest size.
  const std::size_t stride = N + 1;
  std::vector<double> f(stride * stride, kNegInf);
  f[N * stride + 0] = 0.0;
  for (std::size_t s = N; s >= 1; --s) {
    // ascending r: writes only go to smaller r, which has already been read
    for (std::size_t r = s; r <= N; ++r) {
      const std::size_t max_c = (N - r) / (s + 1);
      for (std::size_t C = 0; C <= max_c; ++C) {
        const double base = f[r * stride + C];
        if (base == kNegInf) continue;
        for (std::size_t m = 1; m * s <= r; ++m) {
          const double term = base - static_cast<double>(m) * lfact[s] - lfact[m] -
                              static_cast<double>(s) * (prefix[C + m] - prefix[C]);
          double& slot = f[(r - m * s) * stride + C + m];
          slot = log_add(slot, term);
        }
      }
    }
  }
  double total = kNegInf;
  for (std::size_t C = 1; C <= N; ++C) {
    const double v = f[C];
    if (v == kNegInf) continue;
    total = log_add(total, v + (static_cast<double>(C) - 1.0) * std::log(b) +
                               std::log(b + static_cast<double>(C)));
  }
  return -(lfact[N] + total);
}

double log_partition_prior_from_sizes(std::span<const int> sizes, const Hyperparameters& hyper,
                                      std::optional<double> log_uniform_norm) {
  int n = 0;
  for (int s : sizes) {
    if (s <= 0) throw std::invalid_argument("cluster sizes must be positive");
    n += s;
  }
  if (n == 0) return 0.0;
  if (hyper.prior == PriorKind::DirichletProcess) {
    double value = static_cast<double>(sizes.size()) * std::log(hyper.b);
    for (int s : sizes) value += log_gamma(static_cast<double>(s));
    for (int i = 1; i <= n; ++i) value -= std::log(hyper.b + static_cast<double>(i - 1));
    return value;
  }
  const double norm = log_uniform_norm ? *log_uniform_norm : log_uniform_normalizer(n, hyper.b);
  return norm + log_uniform_signature_density_from_sizes(sizes, hyper.b);
}

double log_partition_prior(std::span<const int> labels, const Hyperparameters& hyper) {
  const auto sizes = sizes_of(labels);
  return log_partition_prior_from_sizes(sizes, hyper);
}

double log_width_prior(int w, const Hyperparameters& hyper) {
  if (w < hyper.min_width || w < 1) {
    throw std::invalid_argument("width " + std::to_string(w) + " below minimum " +
                                std::to_string(hyper.min_width));
  }
  return static_cast<double>(w) * std::log(hyper.lambda) - hyper.lambda -
         log_gamma(static_cast<double>(w));
}

double log_width_prior_normalizer(const Hyperparameters& hyper, WidthSupport support) {
  const int lo = std::max(support.lo, hyper.min_width);
  if (support.hi < lo) throw std::invalid_argument("empty width support");
  double total = kNegInf;
  double peak = kNegInf;
  for (int w = lo; w <= support.hi; ++w) {
    const double term = log_width_prior(w, hyper);
    total = log_add(total, term);
    peak = std::max(peak, term);
    // past the mode the terms decay faster than geometrically
    if (support.hi == kUnboundedWidth && w > hyper.lambda + 1.0 && term < peak - 60.0) break;
  }
  return total;
}

double log_width_prior(int w, const Hyperparameters& hyper, WidthSupport support) {
  if (w < support.lo || w > support.hi) {
    throw std::invalid_argument("width " + std::to_string(w) + " outside support");
  }
  return log_width_prior(w, hyper) - log_width_prior_normalizer(hyper, support);
}

double log_background(const BackgroundCounts& bg, const Hyperparameters& hyper) {
  double value = 0.0;
  for (int k = 0; k < 4; ++k) {
    if (bg.counts[k] == 0) continue;
    if (!(hyper.theta0[k] > 0.0)) {
      throw std::invalid_argument(std::string("background count for base ") + kBaseLetters[k] +
                                  " with zero background frequency");
    }
    value += static_cast<double>(bg.counts[k]) * std::log(hyper.theta0[k]);
  }
  return value;
}

}  // namespace motifclust
