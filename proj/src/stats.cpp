#include "spinlab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/distributions/binomial.hpp>
#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/students_t.hpp>

#include "spinlab/error.hpp"

namespace spinlab::stats {

MeanSe mean_se(std::span<const double> v) {
  if (v.empty()) return {};
  const double n = static_cast<double>(v.size());
  const double m = std::accumulate(v.begin(), v.end(), 0.0) / n;
  if (v.size() < 2) return {m, 0.0};
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return {m, std::sqrt(ss / (n - 1.0) / n)};
}

MeanSe batch_means(std::span<const double> series, std::size_t batches) {
  if (series.size() < 2 * batches) return mean_se(series);
  const std::size_t len = series.size() / batches;
  std::vector<double> means(batches);
  for (std::size_t b = 0; b < batches; ++b) {
    auto part = series.subspan(b * len, len);
    means[b] = std::accumulate(part.begin(), part.end(), 0.0) / static_cast<double>(len);
  }
  MeanSe out = mean_se(means);
  out.mean = std::accumulate(series.begin(), series.end(), 0.0) / static_cast<double>(series.size());
  return out;
}

MeanSe proportion(std::size_t successes, std::size_t trials) {
  if (trials == 0) return {};
  const double p = static_cast<double>(successes) / static_cast<double>(trials);
  return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(trials))};
}

LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw DegenerateError("linear fit needs at least two points");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t a = 0; a < x.size(); ++a) {
    sxx += (x[a] - mx) * (x[a] - mx);
    sxy += (x[a] - mx) * (y[a] - my);
    syy += (y[a] - my) * (y[a] - my);
  }
  if (sxx == 0.0) throw DegenerateError("linear fit needs distinct abscissae");
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  const double sse = std::max(0.0, syy - f.slope * sxy);
  f.r2 = syy > 0.0 ? 1.0 - sse / syy : 1.0;
  f.slope_se = x.size() > 2 ? std::sqrt(sse / (n - 2.0) / sxx) : 0.0;
  return f;
}

namespace {

std::vector<double> ranks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> r(v.size());
  for (std::size_t a = 0; a < order.size();) {
    std::size_t b = a;
    while (b + 1 < order.size() && v[order[b + 1]] == v[order[a]]) ++b;
    const double avg = 0.5 * static_cast<double>(a + b) + 1.0;
    for (std::size_t c = a; c <= b; ++c) r[order[c]] = avg;
    a = b + 1;
  }
  return r;
}

}  // namespace

RankCorrelation spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 3) throw DegenerateError("spearman needs at least three pairs");
  auto rx = ranks(x);
  auto ry = ranks(y);
  const double n = static_cast<double>(x.size());
  const double mean = (n + 1.0) / 2.0;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t a = 0; a < rx.size(); ++a) {
    sxy += (rx[a] - mean) * (ry[a] - mean);
    sxx += (rx[a] - mean) * (rx[a] - mean);
    syy += (ry[a] - mean) * (ry[a] - mean);
  }
  RankCorrelation out;
  if (sxx == 0.0 || syy == 0.0) return out;
  out.rho = sxy / std::sqrt(sxx * syy);
  if (std::abs(out.rho) >= 1.0) {
    out.p_value = 0.0;
    return out;
  }
  const double t = out.rho * std::sqrt((n - 2.0) / (1.0 - out.rho * out.rho));
  boost::math::students_t dist(n - 2.0);
  out.p_value = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
  return out;
}

double binomial_cdf(std::size_t n, double p, double k) {
  if (k < 0.0) return 0.0;
  if (k >= static_cast<double>(n)) return 1.0;
  boost::math::binomial dist(static_cast<double>(n), p);
  return boost::math::cdf(dist, std::floor(k));
}

double binomial_upper_tail(std::size_t n, double p, double k) { return 1.0 - binomial_cdf(n, p, k); }

double chi_square_sf(double statistic, double dof) {
  if (dof <= 0.0) return 1.0;
  boost::math::chi_squared dist(dof);
  return boost::math::cdf(boost::math::complement(dist, std::max(0.0, statistic)));
}

ChiSquare chi_square_gof(std::span<const std::size_t> observed, std::span<const double> probs, double min_expected) {
  if (observed.size() != probs.size() || observed.empty()) throw ParameterError("chi-square: size mismatch");
  const double total = static_cast<double>(std::accumulate(observed.begin(), observed.end(), std::size_t{0}));
  std::vector<double> obs, exp;
  double o_acc = 0.0, e_acc = 0.0;
  for (std::size_t a = 0; a < observed.size(); ++a) {
    o_acc += static_cast<double>(observed[a]);
    e_acc += probs[a] * total;
    if (e_acc >= min_expected) {
      obs.push_back(o_acc);
      exp.push_back(e_acc);
      o_acc = e_acc = 0.0;
    }
  }
  if (!exp.empty()) {
    obs.back() += o_acc;
    exp.back() += e_acc;
  }
  ChiSquare out;
  for (std::size_t a = 0; a < obs.size(); ++a) out.statistic += (obs[a] - exp[a]) * (obs[a] - exp[a]) / exp[a];
  out.dof = static_cast<double>(obs.size()) - 1.0;
  out.p_value = chi_square_sf(out.statistic, out.dof);
  return out;
}

}  // namespace spinlab::stats
