#include "canonica/lattices.hpp"

#include <algorithm>
#include <cmath>

#include "canonica/common.hpp"

namespace canonica {
namespace {

constexpr double kE = 2.718281828459045235;

// Signed square-root ladder 0, +-s, +-s sqrt(2), ..., +-s sqrt(K), ascending.
std::vector<double> sqrt_ladder(double s, int K) {
  std::vector<double> out;
  out.reserve(2 * static_cast<std::size_t>(K) + 1);
  for (int k = K; k >= 1; --k) out.push_back(-s * std::sqrt(double(k)));
  out.push_back(0.0);
  for (int k = 1; k <= K; ++k) out.push_back(s * std::sqrt(double(k)));
  return out;
}

SamplingSet cross(SamplingSet set, const std::vector<double>& xs,
                  const std::vector<double>& mus) {
  set.points.reserve(xs.size() * mus.size());
  for (double x : xs)
    for (double mu : mus) set.points.push_back({x, mu});
  return set;
}

}  // namespace

SamplingSet sqrt_lattice(double tau, double v, int K) {
  if (!(tau > 0.0) || !(v > 0.0) || K < 1)
    throw input_error("sqrt_lattice: need tau > 0, v > 0, K >= 1");
  SamplingSet set;
  set.kind = SamplingSet::Kind::Sqrt;
  set.tau = tau;
  set.v = v;
  set.K = K;
  return cross(std::move(set), sqrt_ladder(tau, K), sqrt_ladder(v, K));
}

SamplingSet counterexample_lines(double b, double u, int x_count,
                                 const Grid& mu_grid) {
  if (b == 0.0 || !(u > 0.0) || x_count < 1)
    throw input_error("counterexample_lines: need b != 0, u > 0, x_count >= 1");
  const double step = std::acos(-1.0) * std::abs(b) / u;
  std::vector<double> xs;
  xs.reserve(2 * static_cast<std::size_t>(x_count) + 1);
  for (int k = -x_count; k <= x_count; ++k) xs.push_back(step * k);
  std::vector<double> mus(mu_grid.n);
  for (std::size_t j = 0; j < mu_grid.n; ++j) mus[j] = mu_grid.point(j);
  std::sort(mus.begin(), mus.end());
  SamplingSet set;
  set.kind = SamplingSet::Kind::Lines;
  set.b = b;
  set.u = u;
  set.x_count = x_count;
  return cross(std::move(set), xs, mus);
}

SamplingSet bandlimited_lattice(double B, double m, double b, int x_max,
                                int mu_count) {
  if (!(B > 0.0) || b == 0.0 || x_max < 1 || mu_count < 1)
    throw input_error(
        "bandlimited_lattice: need B > 0, b != 0, x_max >= 1, mu_count >= 1");
  if (!(m > 0.0) || !(m < 1.0 / (4.0 * B)))
    throw parameter_error(
        "bandlimited_lattice: frequency step m must lie strictly inside "
        "(0, 1/(4B))");
  std::vector<double> xs;
  xs.reserve(static_cast<std::size_t>(x_max) + 1);
  for (int k = 0; k <= x_max; ++k) xs.push_back(double(k));
  std::vector<double> mus;
  mus.reserve(2 * static_cast<std::size_t>(mu_count) + 1);
  for (int j = -mu_count; j <= mu_count; ++j) mus.push_back(j * m * b);
  std::sort(mus.begin(), mus.end());
  SamplingSet set;
  set.kind = SamplingSet::Kind::Bandlimited;
  set.band = B;
  set.m = m;
  set.b = b;
  set.x_max = x_max;
  set.mu_count = mu_count;
  return cross(std::move(set), xs, mus);
}

SamplingSet explicit_set(std::vector<TfPoint> points) {
  std::sort(points.begin(), points.end(), [](const TfPoint& p, const TfPoint& q) {
    return p.x != q.x ? p.x < q.x : p.mu < q.mu;
  });
  points.erase(std::unique(points.begin(), points.end(),
                           [](const TfPoint& p, const TfPoint& q) {
                             return p.x == q.x && p.mu == q.mu;
                           }),
               points.end());
  SamplingSet set;
  set.kind = SamplingSet::Kind::Explicit;
  set.points = std::move(points);
  return set;
}

bool sqrt_admissible(double m, double n, double b, double tau, double v,
                     bool strict) {
  if (!(m > 0.0) || !(n > 0.0) || b == 0.0)
    throw input_error("sqrt_admissible: need m > 0, n > 0, b != 0");
  if (!(tau > 0.0) || !(v > 0.0)) return false;
  double tau_bound = 1.0 / std::sqrt(2.0 * n * kE);
  if (strict) tau_bound = std::min(tau_bound, 1.0 / (std::sqrt(2.0 * n) * kE));
  const double v_bound = std::abs(b) * std::sqrt(2.0 * m / kE);
  return tau < tau_bound && v < v_bound;
}

double density_margin(double tau, double n, int K) {
  if (!(n > 0.0) || !(tau > 0.0) || K < 1)
    throw input_error("density_margin: need tau > 0, n > 0, K >= 1");
  // min over k <= K of (tau sqrt(k))/sqrt(k): the generator's ratio to
  // sqrt(k) is constant, so the truncation K never moves the minimum.
  return 1.0 / std::sqrt(n * kE) - tau;
}

}  // namespace canonica
