#include "dtagraph/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "dtagraph/error.hpp"

namespace dtagraph::metrics {

namespace {

void check_pair(std::span<const double> p, std::span<const double> y, std::size_t min_n, const char* name) {
  if (p.size() != y.size()) {
    throw InvalidArgument(std::string(name) + ": length mismatch (" + std::to_string(p.size()) + " vs " +
                          std::to_string(y.size()) + ")");
  }
  if (p.size() < min_n) {
    throw InvalidArgument(std::string(name) + ": needs at least " + std::to_string(min_n) + " values");
  }
}

double mean(std::span<const double> v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

std::vector<double> average_ranks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

// Fenwick tree over compressed prediction ranks.
class CountTree {
 public:
  explicit CountTree(std::size_t n) : tree_(n + 1, 0) {}
  void add(std::size_t i) {
    for (++i; i < tree_.size(); i += i & (~i + 1)) ++tree_[i];
  }
  // count of inserted values with index < i
  std::uint64_t prefix(std::size_t i) const {
    std::uint64_t s = 0;
    for (; i > 0; i -= i & (~i + 1)) s += tree_[i];
    return s;
  }

 private:
  std::vector<std::uint64_t> tree_;
};

}  // namespace

double mse(std::span<const double> p, std::span<const double> y) {
  check_pair(p, y, 1, "mse");
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double d = p[i] - y[i];
    sum += d * d;
  }
  return sum / static_cast<double>(p.size());
}

double rmse(std::span<const double> p, std::span<const double> y) { return std::sqrt(mse(p, y)); }

double concordance_index(std::span<const double> p, std::span<const double> y) {
  check_pair(p, y, 2, "concordance_index");
  const std::size_t n = p.size();

  std::vector<double> sorted_p(p.begin(), p.end());
  std::sort(sorted_p.begin(), sorted_p.end());
  sorted_p.erase(std::unique(sorted_p.begin(), sorted_p.end()), sorted_p.end());
  auto p_rank = [&](double v) {
    return static_cast<std::size_t>(std::lower_bound(sorted_p.begin(), sorted_p.end(), v) - sorted_p.begin());
  };

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return y[a] < y[b]; });

  // Walk targets in increasing order; each group of equal targets is compared
  // against all strictly smaller targets already in the tree.
  CountTree tree(sorted_p.size());
  std::uint64_t concordant = 0, tied = 0, pairs = 0, inserted = 0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j < n && y[order[j]] == y[order[i]]) ++j;
    for (std::size_t k = i; k < j; ++k) {
      const std::size_t r = p_rank(p[order[k]]);
      const std::uint64_t below = tree.prefix(r);
      const std::uint64_t at_or_below = tree.prefix(r + 1);
      concordant += below;
      tied += at_or_below - below;
      pairs += inserted;
    }
    for (std::size_t k = i; k < j; ++k) tree.add(p_rank(p[order[k]]));
    inserted += j - i;
    i = j;
  }
  if (pairs == 0) throw UndefinedMetric("concordance_index: all targets are equal");
  return (static_cast<double>(concordant) + 0.5 * static_cast<double>(tied)) / static_cast<double>(pairs);
}

double pearson(std::span<const double> p, std::span<const double> y) {
  check_pair(p, y, 2, "pearson");
  const double mp = mean(p), my = mean(y);
  double cov = 0.0, vp = 0.0, vy = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double dp = p[i] - mp, dy = y[i] - my;
    cov += dp * dy;
    vp += dp * dp;
    vy += dy * dy;
  }
  if (vp == 0.0 || vy == 0.0) throw UndefinedMetric("pearson: zero variance");
  return std::clamp(cov / std::sqrt(vp * vy), -1.0, 1.0);
}

double spearman(std::span<const double> p, std::span<const double> y) {
  check_pair(p, y, 2, "spearman");
  const auto rp = average_ranks(p);
  const auto ry = average_ranks(y);
  try {
    return pearson(rp, ry);
  } catch (const UndefinedMetric&) {
    throw UndefinedMetric("spearman: zero rank variance");
  }
}

double rm2(std::span<const double> p, std::span<const double> y) {
  check_pair(p, y, 2, "rm2");
  const double r = pearson(p, y);
  const double r2 = r * r;
  double spy = 0.0, spp = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    spy += p[i] * y[i];
    spp += p[i] * p[i];
    syy += y[i] * y[i];
  }
  const double r02 = (spy * spy) / (spp * syy);
  return r2 * (1.0 - std::sqrt(std::abs(r2 - r02)));
}

MetricsReport evaluate_all(std::span<const double> p, std::span<const double> y) {
  check_pair(p, y, 2, "evaluate");
  MetricsReport r;
  r.n = p.size();
  r.mse = mse(p, y);
  r.rmse = std::sqrt(r.mse);
  // Undefined correlations (constant inputs) are reported as NaN.
  auto guarded = [&](double (*metric)(std::span<const double>, std::span<const double>)) {
    try {
      return metric(p, y);
    } catch (const UndefinedMetric&) {
      return std::numeric_limits<double>::quiet_NaN();
    }
  };
  r.ci = guarded(concordance_index);
  r.rm2 = guarded(rm2);
  r.spearman = guarded(spearman);
  r.pearson = guarded(pearson);
  return r;
}

}  // namespace dtagraph::metrics
