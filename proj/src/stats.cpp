#include "hcviz/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "hcviz/error.hpp"
#include "text.hpp"

namespace hcviz {

namespace {

constexpr int kMaxIterations = 10000;
constexpr double kEpsilon = 1e-16;

// P(a, x) by its power series; converges quickly for x < a + 1.
double gamma_p_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  for (int n = 1; n < kMaxIterations; ++n) {
    term *= x / (a + n);
    sum += term;
    if (std::abs(term) < std::abs(sum) * kEpsilon) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Q(a, x) by the Legendre continued fraction (modified Lentz).
double gamma_q_fraction(double a, double x) {
  constexpr double tiny = std::numeric_limits<double>::min() / kEpsilon;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxIterations; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEpsilon) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

void check_gamma_args(double a, double x) {
  if (!(a > 0.0) || !(x >= 0.0)) {
    throw Error(ErrorKind::invalid_argument, "incomplete gamma needs a > 0 and x >= 0");
  }
}

}  // namespace

double regularized_gamma_p(double a, double x) {
  check_gamma_args(a, x);
  if (x == 0.0) return 0.0;
  if (x < a + 1.0) return gamma_p_series(a, x);
  return 1.0 - gamma_q_fraction(a, x);
}

double regularized_gamma_q(double a, double x) {
  check_gamma_args(a, x);
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_fraction(a, x);
}

double chi2_upper_tail(double chi2, int dof) {
  if (dof <= 0) throw Error(ErrorKind::invalid_argument, "chi-squared needs dof >= 1");
  if (chi2 <= 0.0) return 1.0;
  return regularized_gamma_q(0.5 * dof, 0.5 * chi2);
}

std::size_t AttributeStats::category_index(std::string_view category) const {
  auto it = std::lower_bound(categories.begin(), categories.end(), category);
  if (it == categories.end() || *it != category) {
    throw Error(ErrorKind::not_found, "category '" + std::string(category) + "' has no expected count");
  }
  return static_cast<std::size_t>(it - categories.begin());
}

AttributeStats cluster_chi2(const Graph& graph, std::span<const ClusterId> assignment,
                            std::string_view attribute) {
  const Attribute* attr = graph.attribute(attribute);
  if (!attr) throw Error(ErrorKind::not_found, "unknown attribute '" + std::string(attribute) + "'");
  if (assignment.size() != graph.node_count()) {
    throw Error(ErrorKind::invalid_argument, "partition does not cover the graph");
  }

  AttributeStats stats;
  stats.attribute = attr->name;
  std::map<std::string, std::int64_t> global;
  for (const auto& label : attr->labels) ++global[label];
  for (const auto& [label, count] : global) {
    if (count == 0) continue;
    stats.categories.push_back(label);
    stats.global_counts.push_back(count);
  }
  const std::size_t categories = stats.categories.size();
  const auto total = static_cast<double>(graph.node_count());

  ClusterId k = 0;
  for (ClusterId c : assignment) {
    if (c < 0) throw Error(ErrorKind::invalid_argument, "negative cluster label");
    k = std::max(k, c + 1);
  }
  stats.clusters.resize(static_cast<std::size_t>(k));
  for (std::size_t c = 0; c < stats.clusters.size(); ++c) {
    stats.clusters[c].cluster = static_cast<ClusterId>(c);
    stats.clusters[c].counts.assign(categories, 0);
  }
  for (std::size_t v = 0; v < assignment.size(); ++v) {
    auto& cluster = stats.clusters[static_cast<std::size_t>(assignment[v])];
    ++cluster.size;
    ++cluster.counts[stats.category_index(attr->labels[v])];
  }

  const int dof = static_cast<int>(categories) - 1;
  for (auto& cluster : stats.clusters) {
    cluster.dof = dof;
    cluster.expected.resize(categories);
    cluster.residuals.resize(categories);
    cluster.chi2 = 0.0;
    for (std::size_t i = 0; i < categories; ++i) {
      const double e = static_cast<double>(cluster.size) * static_cast<double>(stats.global_counts[i]) / total;
      const double diff = static_cast<double>(cluster.counts[i]) - e;
      cluster.expected[i] = e;
      cluster.residuals[i] = diff / std::sqrt(e);
      cluster.chi2 += diff * diff / e;
      if (e < 1.0) cluster.low_confidence = true;
    }
    if (dof <= 0) {
      cluster.degenerate = true;
      cluster.p = 1.0;
    } else {
      cluster.p = chi2_upper_tail(cluster.chi2, dof);
    }
  }
  return stats;
}

double pearson_residual(const AttributeStats& stats, ClusterId cluster, std::string_view category) {
  if (cluster < 0 || static_cast<std::size_t>(cluster) >= stats.clusters.size()) {
    throw Error(ErrorKind::not_found, "unknown cluster " + std::to_string(cluster));
  }
  const auto i = stats.category_index(category);
  const auto& c = stats.clusters[static_cast<std::size_t>(cluster)];
  if (!(c.expected[i] > 0.0)) {
    throw Error(ErrorKind::invalid_argument, "expected count is zero for '" + std::string(category) + "'");
  }
  return c.residuals[i];
}

std::string format_stats_tsv(const AttributeStats& stats, std::span<const std::int64_t> cluster_ids) {
  auto id_of = [&](const ClusterChi2& c) {
    return cluster_ids.empty() ? static_cast<std::int64_t>(c.cluster) : cluster_ids[static_cast<std::size_t>(c.cluster)];
  };
  std::string out;
  out += "# attribute=" + stats.attribute + " test=goodness-of-fit reference=global\n";
  out += "cluster\tn\tchi2\tdof\tp\tflag\n";
  for (const auto& c : stats.clusters) {
    std::string flag = c.degenerate ? "degenerate" : (c.low_confidence ? "low_confidence" : "ok");
    out += std::to_string(id_of(c)) + "\t" + std::to_string(c.size) + "\t" + detail::format_exact(c.chi2) + "\t" +
           std::to_string(c.dof) + "\t" + detail::format_exact(c.p) + "\t" + flag + "\n";
  }
  out += "\n# residuals\ncluster";
  for (const auto& name : stats.categories) out += "\t" + name;
  out += "\n";
  for (const auto& c : stats.clusters) {
    out += std::to_string(id_of(c));
    for (double r : c.residuals) out += "\t" + detail::format_exact(r);
    out += "\n";
  }
  return out;
}

}  // namespace hcviz
