#include <doctest.h>

#include <cmath>
#include <numeric>

#ifdef HCVIZ_HAVE_BOOST_MATH
#include <boost/math/special_functions/gamma.hpp>
#endif

#include "fixtures.hpp"
#include "hcviz/error.hpp"
#include "hcviz/stats.hpp"

using namespace hcviz;

namespace {

double chi2_density(double t, int dof) {
  const double h = dof / 2.0;
  return std::exp((h - 1) * std::log(t) - t / 2 - h * std::log(2.0) - std::lgamma(h));
}

// Upper tail by composite Simpson on t = x e^v, which keeps the integrand
// smooth near 0.
double tail_by_quadrature(double x, int dof) {
  const double top = std::log((x + 400.0) / x);
  const int intervals = 40000;
  const double h = top / intervals;
  double sum = 0;
  for (int i = 0; i <= intervals; ++i) {
    const double v = i * h;
    const double t = x * std::exp(v);
    const double f = chi2_density(t, dof) * t;
    const double w = (i == 0 || i == intervals) ? 1 : (i % 2 ? 4 : 2);
    sum += w * f;
  }
  return sum * h / 3;
}

Graph labelled(std::vector<std::string> labels) {
  const Graph g = Graph::from_edges(labels.size(), {});
  return g.with_attribute({"group", std::move(labels)});
}

}  // namespace

TEST_SUITE("stats") {
  TEST_CASE("chi-squared tail reference value") {
    CHECK(std::abs(chi2_upper_tail(10.0 / 3.0, 1) - 0.0678891548618290) <= 1e-12);
    CHECK(std::abs(chi2_upper_tail(8.219084296106118, 1) - 0.00414521119677192) <= 1e-12);
    CHECK(std::abs(chi2_upper_tail(0.36215538847117784, 1) - 0.547311617959892) <= 1e-12);
    CHECK(chi2_upper_tail(0.0, 3) == 1.0);
  }

  TEST_CASE("chi-squared tail matches numerical integration") {
    int checked = 0;
    for (int dof = 1; dof <= 5; ++dof) {
      for (int i = 0; i < 10; ++i) {
        const double x = 0.05 + 3.0 * i * (1 + dof / 5.0);
        const double expected = tail_by_quadrature(x, dof);
        CHECK(std::abs(chi2_upper_tail(x, dof) - expected) <= 1e-8);
        ++checked;
      }
    }
    CHECK(checked == 50);
  }

#ifdef HCVIZ_HAVE_BOOST_MATH
  TEST_CASE("incomplete gamma matches boost") {
    for (double a : {0.5, 1.0, 1.5, 2.0, 3.5, 10.0, 40.0}) {
      for (double x : {0.01, 0.3, 1.0, 2.5, 7.0, 15.0, 60.0}) {
        CHECK(std::abs(regularized_gamma_q(a, x) - boost::math::gamma_q(a, x)) <= 1e-12);
        CHECK(std::abs(regularized_gamma_p(a, x) - boost::math::gamma_p(a, x)) <= 1e-12);
      }
    }
  }
#endif

  TEST_CASE("incomplete gamma halves sum to one") {
    for (double a : {0.5, 2.0, 7.5}) {
      for (double x : {0.1, 1.0, 5.0, 20.0}) {
        CHECK(regularized_gamma_p(a, x) + regularized_gamma_q(a, x) == doctest::Approx(1.0).epsilon(1e-14));
      }
    }
    CHECK_THROWS_AS(regularized_gamma_q(-1.0, 1.0), Error);
  }

  TEST_CASE("two-category example") {
    // 60 nodes, half A; cluster 0 holds 10 A and 20 B
    std::vector<std::string> labels;
    std::vector<ClusterId> assignment;
    for (int i = 0; i < 60; ++i) {
      const bool in_cluster = i < 30;
      const bool is_a = in_cluster ? i < 10 : i < 50;
      labels.push_back(is_a ? "A" : "B");
      assignment.push_back(in_cluster ? 0 : 1);
    }
    const auto stats = cluster_chi2(labelled(labels), assignment, "group");
    REQUIRE(stats.categories == std::vector<std::string>{"A", "B"});
    const auto& c = stats.clusters[0];
    CHECK(c.chi2 == doctest::Approx(10.0 / 3.0).epsilon(1e-14));
    CHECK(c.dof == 1);
    CHECK(std::abs(c.p - 0.0678891548618290) <= 1e-12);
    CHECK(pearson_residual(stats, 0, "A") == doctest::Approx(-5.0 / std::sqrt(15.0)).epsilon(1e-14));
    CHECK(pearson_residual(stats, 0, "B") == doctest::Approx(5.0 / std::sqrt(15.0)).epsilon(1e-14));
    CHECK(pearson_residual(stats, 1, "A") > 0);
    CHECK_FALSE(c.low_confidence);
    CHECK_FALSE(c.degenerate);
    CHECK_THROWS_AS(pearson_residual(stats, 2, "A"), Error);
    CHECK_THROWS_AS(pearson_residual(stats, 0, "C"), Error);
  }

  TEST_CASE("enriched cluster of 41") {
    std::vector<std::string> labels(400, "HT");
    std::vector<ClusterId> assignment(400, 1);
    for (int i = 0; i < 41; ++i) assignment[static_cast<std::size_t>(i)] = 0;
    for (int i = 0; i < 39; ++i) labels[static_cast<std::size_t>(i)] = "BM";
    for (int i = 41; i < 41 + 265; ++i) labels[static_cast<std::size_t>(i)] = "BM";
    const auto stats = cluster_chi2(labelled(labels), assignment, "group");
    CHECK(stats.global_counts[stats.category_index("BM")] == 304);
    CHECK(std::abs(stats.clusters[0].chi2 - 8.219084296106118) <= 1e-12);
    CHECK(std::abs(stats.clusters[0].p - 0.00414521119677192) <= 1e-12);
    CHECK(pearson_residual(stats, 0, "BM") > 0);
    CHECK(pearson_residual(stats, 0, "HT") < 0);
  }

  TEST_CASE("counts and residuals are conserved") {
    std::mt19937_64 rng(12);
    const char* names[] = {"x", "y", "z", "w"};
    for (int trial = 0; trial < 30; ++trial) {
      const int n = 20 + trial;
      std::vector<std::string> labels;
      std::uniform_int_distribution<int> pick(0, 3);
      for (int i = 0; i < n; ++i) labels.push_back(names[pick(rng)]);
      const auto assignment = fixtures::random_labels(static_cast<std::size_t>(n), 1 + trial % 5, rng);
      const auto stats = cluster_chi2(labelled(labels), assignment, "group");
      for (std::size_t k = 0; k < stats.categories.size(); ++k) {
        std::int64_t count = 0;
        double expected = 0;
        for (const auto& c : stats.clusters) {
          count += c.counts[k];
          expected += c.expected[k];
        }
        CHECK(count == stats.global_counts[k]);
        CHECK(expected == doctest::Approx(static_cast<double>(stats.global_counts[k])).epsilon(1e-12));
      }
      for (const auto& c : stats.clusters) {
        double weighted = 0;
        double chi2 = 0;
        for (std::size_t k = 0; k < stats.categories.size(); ++k) {
          weighted += c.residuals[k] * std::sqrt(c.expected[k]);
          chi2 += c.residuals[k] * c.residuals[k];
        }
        CHECK(std::abs(weighted) <= 1e-9);
        CHECK(chi2 == doctest::Approx(c.chi2).epsilon(1e-12));
        CHECK(c.p >= 0.0);
        CHECK(c.p <= 1.0);
      }
    }
  }

  TEST_CASE("degenerate and low-confidence clusters") {
    const auto one = cluster_chi2(labelled({"A", "A", "A"}), std::vector<ClusterId>{0, 0, 1}, "group");
    CHECK(one.clusters[0].degenerate);
    CHECK(one.clusters[0].dof == 0);
    CHECK(one.clusters[0].p == 1.0);

    const auto small = cluster_chi2(labelled({"A", "B", "A", "B", "A", "B"}), std::vector<ClusterId>{0, 1, 1, 1, 1, 1}, "group");
    CHECK(small.clusters[0].low_confidence);
    CHECK_FALSE(small.clusters[1].low_confidence);

    CHECK_THROWS_AS(cluster_chi2(labelled({"A"}), std::vector<ClusterId>{0}, "nope"), Error);
    CHECK_THROWS_AS(cluster_chi2(labelled({"A", "B"}), std::vector<ClusterId>{0}, "group"), Error);
  }

  TEST_CASE("barbell orientation and tsv") {
    const Graph g = load_attributes(fixtures::read_data("barbell_attributes.csv"), fixtures::barbell()).graph;
    std::vector<ClusterId> two{0, 0, 0, 1, 1, 1};
    const auto stats = cluster_chi2(g, two, "orientation");
    CHECK(stats.clusters[0].chi2 == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(pearson_residual(stats, 0, "BM") > 0);
    CHECK(pearson_residual(stats, 1, "BM") < 0);
    std::vector<std::int64_t> ids{4, 9};
    const std::string tsv = format_stats_tsv(stats, ids);
    CHECK(tsv.rfind("# attribute=orientation test=goodness-of-fit reference=global\ncluster\tn\tchi2\tdof\tp\tflag\n", 0) == 0);
    CHECK(tsv.find("\n4\t3\t3\t1\t") != std::string::npos);
    CHECK(tsv.find("# residuals\ncluster\tBM\tHT\n") != std::string::npos);
    CHECK(tsv.find("\n9\t") != std::string::npos);
  }
}
