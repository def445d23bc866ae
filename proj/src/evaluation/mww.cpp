#include "aam/evaluation/mww.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>

namespace aam::evaluation {
namespace {

void check(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("mww_test: both samples must be non-empty");
}

struct Ranked {
  std::vector<std::int64_t> doubled;  // 2 * midrank of every pooled value, a first then b
  std::vector<std::size_t> tie_sizes;
};

Ranked doubled_midranks(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = a.size() + b.size();
  std::vector<double> pooled(a.begin(), a.end());
  pooled.insert(pooled.end(), b.begin(), b.end());
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return pooled[x] < pooled[y]; });
  Ranked r;
  r.doubled.assign(n, 0);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && pooled[order[j + 1]] == pooled[order[i]]) ++j;
    // ranks i+1 .. j+1, doubled midrank = i + j + 2
    for (std::size_t t = i; t <= j; ++t) r.doubled[order[t]] = static_cast<std::int64_t>(i + j + 2);
    r.tie_sizes.push_back(j - i + 1);
    i = j + 1;
  }
  return r;
}

}  // namespace

double mww_u(std::span<const double> a, std::span<const double> b) {
  double u = 0.0;
  for (double x : a) {
    for (double y : b) u += x > y ? 1.0 : (x == y ? 0.5 : 0.0);
  }
  return u;
}

double mww_exact(std::span<const double> a, std::span<const double> b) {
  check(a, b);
  const auto r = doubled_midranks(a, b);
  const std::size_t n = r.doubled.size();
  const std::size_t na = a.size();
  const std::int64_t total = std::accumulate(r.doubled.begin(), r.doubled.end(), std::int64_t{0});
  const auto max_sum = static_cast<std::size_t>(total);

  // ways[j][s]: subsets of size j among the values seen so far with doubled rank sum s.
  std::vector<std::vector<double>> ways(na + 1, std::vector<double>(max_sum + 1, 0.0));
  ways[0][0] = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto w = static_cast<std::size_t>(r.doubled[i]);
    for (std::size_t j = std::min(na, i + 1); j >= 1; --j) {
      auto& dst = ways[j];
      const auto& src = ways[j - 1];
      for (std::size_t s = max_sum; s >= w; --s) {
        dst[s] += src[s - w];
        if (s == w) break;
      }
    }
  }

  // E[W] in doubled units is na * (n + 1); compare doubled deviations exactly.
  const auto expected2 = static_cast<std::int64_t>(na * (n + 1));
  std::int64_t observed = 0;
  for (std::size_t i = 0; i < na; ++i) observed += r.doubled[i];
  const std::int64_t dev = std::llabs(observed - expected2);
  double extreme = 0.0, all = 0.0;
  for (std::size_t s = 0; s <= max_sum; ++s) {
    const double c = ways[na][s];
    if (c == 0.0) continue;
    all += c;
    if (std::llabs(static_cast<std::int64_t>(s) - expected2) >= dev) extreme += c;
  }
  return std::min(1.0, extreme / all);
}

double mww_normal(std::span<const double> a, std::span<const double> b) {
  check(a, b);
  const auto r = doubled_midranks(a, b);
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double n = na + nb;
  double rank_sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) rank_sum += 0.5 * static_cast<double>(r.doubled[i]);
  const double u = rank_sum - na * (na + 1.0) / 2.0;
  const double mean = na * nb / 2.0;
  double tie_term = 0.0;
  for (auto t : r.tie_sizes) {
    const double td = static_cast<double>(t);
    tie_term += td * td * td - td;
  }
  const double var = na * nb / 12.0 * ((n + 1.0) - tie_term / (n * (n - 1.0)));
  if (!(var > 0.0)) return 1.0;
  const double z = std::max(0.0, std::abs(u - mean) - 0.5) / std::sqrt(var);
  return std::min(1.0, std::erfc(z / std::sqrt(2.0)));
}

double mww_test(std::span<const double> a, std::span<const double> b) {
  if (a.size() < kMwwExactLimit && b.size() < kMwwExactLimit) return mww_exact(a, b);
  return mww_normal(a, b);
}

std::vector<double> bonferroni(std::span<const double> p_values) {
  const double m = static_cast<double>(p_values.size());
  std::vector<double> out;
  out.reserve(p_values.size());
  for (double p : p_values) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("bonferroni: p-values must lie in [0, 1]");
    out.push_back(std::min(1.0, p * m));
  }
  return out;
}

}  // namespace aam::evaluation
