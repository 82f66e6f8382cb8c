#include <doctest.h>

#include <cmath>
#include <numeric>

#include "motifclust/model.hpp"
#include "motifclust/numeric.hpp"
#include "oracles.hpp"

using namespace motifclust;

TEST_CASE("Dirichlet-multinomial column spot values") {
  CHECK(log_dm_column({0, 0, 0, 0}, 1.0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(std::abs(log_dm_column({2, 0, 0, 0}, 1.0) - std::log(0.1)) < 1e-12);
  CHECK(std::abs(log_dm_column({1, 1, 1, 1}, 1.0) - std::log(1.0 / 840.0)) < 1e-12);
  CHECK(std::abs(log_dm_column({4, 0, 0, 0}, 1.0) - std::log(1.0 / 35.0)) < 1e-12);
  for (Column c : {Column{3, 1, 1, 7}, Column{0, 12, 0, 0}, Column{1000000, 3, 0, 0}}) {
    CHECK(std::abs(log_dm_column(c, 0.7) - oracle::dm_column(c, 0.7)) < 1e-8);
    CHECK(std::isfinite(log_dm_column(c, 1.0)));
  }
}

TEST_CASE("cached kernel agrees with direct evaluation") {
  const DmKernel kernel(1.3, 50);
  for (Column c : {Column{0, 0, 0, 0}, Column{3, 1, 1, 7}, Column{40, 30, 2, 0}}) {
    CHECK(std::abs(kernel.log_column(c) - log_dm_column(c, 1.3)) < 1e-10);
    const Column other{2, 5, 1, 0};
    Column merged = c;
    merged += other;
    CHECK(std::abs(kernel.log_join_column(other, c) - (log_dm_column(merged, 1.3) - log_dm_column(c, 1.3))) <
          1e-10);
  }
}

TEST_CASE("predictive kernels") {
  const Hyperparameters hyper;
  const std::vector<Column> core{{2, 0, 0, 0}};
  ClusterStats cluster{1, {{2, 0, 0, 0}}, 1};
  CHECK(std::abs(log_pred_join(core, cluster, hyper) - std::log(2.0 / 7.0)) < 1e-12);
  ClusterStats empty{1, {{0, 0, 0, 0}}, 0};
  CHECK(std::abs(log_pred_join(core, empty, hyper) - log_pred_new(core, hyper)) < 1e-14);
  ClusterStats wide{2, {{0, 0, 0, 0}, {0, 0, 0, 0}}, 0};
  CHECK_THROWS_AS(log_pred_join(core, wide, hyper), std::invalid_argument);

  // MA0011 columns 1-6 as one core
  const std::vector<Column> ma{{3, 1, 1, 7}, {5, 2, 1, 4}, {0, 10, 0, 2}, {0, 1, 0, 11}, {12, 0, 0, 0}, {1, 1, 2, 8}};
  double expected = 0.0;
  for (const auto& c : ma) expected += oracle::dm_column(c, 1.0);
  CHECK(log_pred_new(ma, hyper) < 0.0);
  CHECK(std::abs(log_pred_new(ma, hyper) - expected) < 1e-10);

  // telescoping: insertions in any order sum to the final marginal
  const std::vector<std::vector<Column>> members{{{3, 1, 1, 7}}, {{0, 5, 5, 2}}, {{9, 0, 0, 3}}};
  for (auto order : std::vector<std::vector<int>>{{0, 1, 2}, {2, 0, 1}, {1, 2, 0}}) {
    ClusterStats stats{1, {{0, 0, 0, 0}}, 0};
    double total = 0.0;
    for (int m : order) {
      total += log_pred_join(members[m], stats, hyper);
      stats.core_counts[0] += members[m][0];
    }
    CHECK(std::abs(total - log_marginal_cluster(stats, 1.0)) < 1e-10);
  }
}

TEST_CASE("cluster strength") {
  const Hyperparameters hyper;
  const std::vector<Column> a{{2, 0, 0, 0}}, b{{2, 0, 0, 0}};
  ClusterStats merged{1, {{4, 0, 0, 0}}, 2};
  const double expected = std::log(1.0 / 35.0) - 2.0 * std::log(0.1);
  CHECK(std::abs(cluster_strength({a, b}, merged, hyper) - expected) < 1e-12);
  CHECK(std::abs(expected - 1.049822) < 1e-6);
  ClusterStats single{1, {{2, 0, 0, 0}}, 1};
  CHECK(cluster_strength({a}, single, hyper) == doctest::Approx(0.0).epsilon(1e-15));
  const std::vector<Column> c{{0, 3, 1, 0}};
  ClusterStats three{1, {{4, 3, 1, 0}}, 3};
  CHECK(cluster_strength({a, b, c}, three, hyper) == doctest::Approx(cluster_strength({c, a, b}, three, hyper)));
}

TEST_CASE("sequential prior weights") {
  Hyperparameters dp;
  auto w = seq_prior_weights(std::vector<int>{1}, dp);
  CHECK(w.new_cluster == 1.0);
  CHECK(w.join == std::vector<double>{1.0});
  w = seq_prior_weights(std::vector<int>{2}, dp);
  CHECK(w.join == std::vector<double>{2.0});
  Hyperparameters uni;
  uni.prior = PriorKind::Uniform;
  w = seq_prior_weights(std::vector<int>{5, 1}, uni);
  CHECK(w.new_cluster == 1.0);
  CHECK(w.join == std::vector<double>{1.0, 1.0});
  CHECK_THROWS_AS(seq_prior_weights(std::vector<int>{0}, dp), std::invalid_argument);
}

TEST_CASE("partition prior spot values") {
  Hyperparameters dp;
  CHECK(std::abs(log_partition_prior(std::vector<int>{0, 0, 0}, dp) - std::log(1.0 / 3.0)) < 1e-12);
  CHECK(std::abs(log_partition_prior(std::vector<int>{0, 1, 2}, dp) - std::log(1.0 / 6.0)) < 1e-12);
  CHECK(std::abs(log_uniform_signature_density(std::vector<int>{0, 0, 0}, 1.0) - std::log(0.25)) < 1e-12);
  // exchangeability and label invariance
  CHECK(log_partition_prior(std::vector<int>{0, 0, 1, 2, 2}, dp) ==
        doctest::Approx(log_partition_prior(std::vector<int>{7, 3, 3, 9, 9}, dp)));
}

TEST_CASE("partition priors against enumeration") {
  for (double b : {1.0, 0.5, 2.5}) {
    for (int n = 1; n <= 7; ++n) {
      Hyperparameters dp;
      dp.b = b;
      Hyperparameters uni = dp;
      uni.prior = PriorKind::Uniform;
      const double k_n = oracle::uniform_norm(n, b);
      CHECK(std::abs(log_uniform_normalizer(n, b) - std::log(k_n)) < 1e-10);
      double dp_total = 0.0, uni_total = 0.0;
      for (const auto& z : oracle::set_partitions(n)) {
        const double dp_log = log_partition_prior(z, dp);
        CHECK(std::abs(dp_log - std::log(oracle::dp_prior(z, b))) < 1e-10);
        CHECK(std::abs(std::exp(dp_log) - oracle::sequential_prob(z, b, true)) < 1e-13);
        const double sig = log_uniform_signature_density(z, b);
        CHECK(std::abs(std::exp(sig) - oracle::sequential_prob(oracle::signature_sequence(z), b, false)) < 1e-13);
        dp_total += std::exp(dp_log);
        uni_total += std::exp(log_partition_prior(z, uni));
      }
      CHECK(std::abs(dp_total - 1.0) < 1e-10);
      CHECK(std::abs(uni_total - 1.0) < 1e-10);
    }
  }
  // the signature density alone is not a distribution over set partitions
  double raw = 0.0;
  for (const auto& z : oracle::set_partitions(3)) raw += std::exp(log_uniform_signature_density(z, 1.0));
  CHECK(raw == doctest::Approx(7.0 / 6.0).epsilon(1e-12));
}

TEST_CASE("width prior") {
  Hyperparameters hyper;
  const double diff = log_width_prior(8, hyper) - log_width_prior(6, hyper);
  CHECK(std::abs(diff - (2.0 * std::log(8.0) - std::log(42.0))) < 1e-12);
  CHECK(std::abs(diff - 0.421213) < 1e-6);
  for (int w = 6; w < 20; ++w) {
    CHECK(std::abs(log_width_prior(w + 1, hyper) - log_width_prior(w, hyper) - std::log(8.0 / w)) < 1e-12);
  }
  CHECK(log_width_prior(6, hyper, {6, 6}) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK_THROWS_AS(log_width_prior(5, hyper), std::invalid_argument);
  double total = 0.0;
  for (int w = 6; w < 200; ++w) total += std::exp(log_width_prior(w, hyper, {6, kUnboundedWidth}));
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(log_width_prior(9, hyper, {6, kUnboundedWidth}) - oracle::log_width_prior(9, 8.0, 6)) < 1e-12);
}

TEST_CASE("background term") {
  Hyperparameters hyper;
  CHECK(log_background({{0, 0, 0, 0}}, hyper) == 0.0);
  CHECK(std::abs(log_background({{3, 3, 3, 3}}, hyper) - 12.0 * std::log(0.25)) < 1e-12);
  hyper.theta0 = {0.4, 0.1, 0.1, 0.4};
  CHECK(std::abs(log_background({{1, 0, 0, 1}}, hyper) - std::log(0.16)) < 1e-12);
}

TEST_CASE("hyperparameter validation") {
  Hyperparameters h;
  CHECK_NOTHROW(h.validate());
  h.theta0 = {0.3, 0.3, 0.3, 0.3};
  CHECK_THROWS_AS(h.validate(), std::invalid_argument);
  h = {};
  h.alpha = 0.0;
  CHECK_THROWS_AS(h.validate(), std::invalid_argument);
  h = {};
  h.theta0 = {0.5, 0.5, 0.0, 0.0};
  CHECK_THROWS_AS(h.validate(), std::invalid_argument);
  CHECK(prior_kind_from_string("uniform") == PriorKind::Uniform);
  CHECK_THROWS_AS(prior_kind_from_string("pitman-yor"), std::invalid_argument);
}

TEST_CASE("log-sum-exp") {
  const std::vector<double> v{-1000.0, -1000.0};
  CHECK(log_sum_exp(v) == doctest::Approx(-1000.0 + std::log(2.0)));
  const double ninf = -std::numeric_limits<double>::infinity();
  CHECK(log_sum_exp(std::vector<double>{ninf}) == ninf);
}
