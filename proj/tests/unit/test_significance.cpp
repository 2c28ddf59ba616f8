#include <doctest.h>

#include <algorithm>

#include "fixtures.hpp"
#include "hcviz/error.hpp"
#include "hcviz/random.hpp"
#include "hcviz/significance.hpp"

using namespace hcviz;

namespace {

NullDistribution manual_null(std::vector<double> samples) {
  NullDistribution null;
  null.trials = samples.size();
  null.threshold = *std::max_element(samples.begin(), samples.end());
  null.samples = std::move(samples);
  return null;
}

bool is_simple(const Graph& g) {
  for (const auto& e : g.edges()) {
    if (e.u >= e.v) return false;
  }
  for (std::size_t i = 1; i < g.edge_count(); ++i) {
    if (g.edges()[i - 1] == g.edges()[i]) return false;
  }
  return true;
}

}  // namespace

TEST_SUITE("significance") {
  TEST_CASE("swaps preserve degrees and simplicity") {
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 20; ++trial) {
      const Graph g = fixtures::random_connected(10 + trial, 0.2, rng);
      const Graph s = sample_configuration_graph(g.degree_sequence(), derive_seed(9, trial), g);
      CHECK(s.degree_sequence() == g.degree_sequence());
      CHECK(s.edge_count() == g.edge_count());
      CHECK(is_simple(s));
    }
  }

  TEST_CASE("swaps actually move edges") {
    const Graph g = fixtures::planted();
    const Graph s = sample_configuration_graph(g.degree_sequence(), 3, g);
    std::vector<Edge> a(g.edges().begin(), g.edges().end());
    std::vector<Edge> b(s.edges().begin(), s.edges().end());
    CHECK(a != b);
  }

  TEST_CASE("triangle admits no swap") {
    const Graph g = fixtures::clique(3);
    const Graph s = sample_configuration_graph(g.degree_sequence(), 5, g);
    std::vector<Edge> a(g.edges().begin(), g.edges().end());
    std::vector<Edge> b(s.edges().begin(), s.edges().end());
    CHECK(a == b);
  }

  TEST_CASE("mismatched degree sequence throws") {
    const Graph g = fixtures::barbell();
    DegreeSequence wrong = g.degree_sequence();
    wrong.degrees[0] += 1;
    CHECK_THROWS_AS(sample_configuration_graph(wrong, 1, g), Error);
  }

  TEST_CASE("sampler is deterministic per seed") {
    const Graph g = fixtures::planted();
    const Graph a = sample_configuration_graph(g.degree_sequence(), 17, g);
    const Graph b = sample_configuration_graph(g.degree_sequence(), 17, g);
    CHECK(std::vector<Edge>(a.edges().begin(), a.edges().end()) ==
          std::vector<Edge>(b.edges().begin(), b.edges().end()));
  }

  TEST_CASE("p-value examples") {
    std::vector<double> below(50, 0.3);
    CHECK(p_value(manual_null(below), 0.5) == doctest::Approx(1.0 / 51.0).epsilon(1e-15));
    CHECK(p_value(manual_null(below), 0.1) == 1.0);
    CHECK(p_value(manual_null(below), 0.3) == 1.0);

    std::vector<double> hundred(99, 0.2);
    CHECK(p_value(manual_null(hundred), 0.25) == doctest::Approx(0.01).epsilon(1e-15));

    std::vector<double> mixed{0.1, 0.2, 0.3, 0.4};
    CHECK(p_value(manual_null(mixed), 0.25) == doctest::Approx(3.0 / 5.0).epsilon(1e-15));
  }

  TEST_CASE("significance decision") {
    std::vector<double> hundred(99, 0.2);
    const NullDistribution null = manual_null(hundred);
    CHECK(is_significant(null, 0.25, 0.01));
    CHECK_FALSE(is_significant(null, 0.2, 0.01));
    CHECK_FALSE(is_significant(null, 0.1, 0.01));

    // 50 trials cannot reach 0.01; the effective level is 1/50
    std::vector<double> fifty(50, 0.3);
    const NullDistribution small = manual_null(fifty);
    CHECK(effective_alpha(small, 0.01) == doctest::Approx(0.02));
    CHECK(is_significant(small, 0.31, 0.01));
    CHECK(effective_alpha(null, 0.05) == 0.05);

    std::vector<double> ten{0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.4, 0.1};
    const NullDistribution spread = manual_null(ten);
    CHECK_FALSE(is_significant(spread, 0.3, 0.5));
    CHECK(is_significant(spread, 0.41, 0.5));
  }

  TEST_CASE("external null compares against the threshold only") {
    const NullDistribution null = external_null(0.3);
    CHECK(null.external);
    CHECK(is_significant(null, 0.31, 0.01));
    CHECK_FALSE(is_significant(null, 0.3, 0.01));
  }

  TEST_CASE("null distribution does not depend on jobs") {
    const Graph g = fixtures::planted();
    const auto one = null_distribution(g, 12, {}, 77, 1);
    const auto four = null_distribution(g, 12, {}, 77, 4);
    CHECK(one.samples == four.samples);
    CHECK(one.threshold == four.threshold);
    CHECK(one.trials == 12);
    CHECK(one.threshold == *std::max_element(one.samples.begin(), one.samples.end()));
    const auto other = null_distribution(g, 12, {}, 78, 1);
    CHECK(other.samples != one.samples);
  }

  TEST_CASE("planted cliques beat their null") {
    const Graph g = fixtures::planted();
    const auto null = null_distribution(g, 50, {}, 1);
    const double q = greedy_maximize(g).modularity;
    CHECK(p_value(null, q) == doctest::Approx(1.0 / 51.0));
    CHECK(is_significant(null, q, 0.01));
  }

  TEST_CASE("null export round trip") {
    const auto null = null_distribution(fixtures::barbell(), 5, {}, 3, 1);
    const std::string text = format_null_distribution(null);
    CHECK(text.rfind("# trials=5\n# seed=3\n", 0) == 0);
    const auto back = parse_null_distribution(text);
    CHECK(back.samples == null.samples);
    CHECK(back.threshold == null.threshold);
    CHECK(back.seed == 3);
    CHECK(back.trials == 5);
    CHECK_FALSE(back.external);

    const auto ext = parse_null_distribution(format_null_distribution(external_null(0.25)));
    CHECK(ext.external);
    CHECK(ext.threshold == 0.25);

    CHECK_THROWS_AS(parse_null_distribution("0.1\nabc\n"), ParseError);
  }
}
