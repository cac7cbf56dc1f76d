#include "canonica/signal.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <mutex>
#include <numbers>
#include <sstream>

namespace canonica {

namespace {

std::mutex g_warn_mutex;
warning_handler g_warn_handler;

}  // namespace

void set_warning_handler(warning_handler h) {
  std::lock_guard<std::mutex> lock(g_warn_mutex);
  g_warn_handler = std::move(h);
}

void warn(const std::string& msg) {
  warning_handler h;
  {
    std::lock_guard<std::mutex> lock(g_warn_mutex);
    h = g_warn_handler;
  }
  if (h) {
    h(msg);
  } else {
    std::cerr << "W: " << msg << "\n";
  }
}

Grid make_centered_grid(double half_width, std::size_t n) {
  if (n == 0) throw input_error("grid needs at least one sample");
  Grid g;
  g.dt = 2.0 * half_width / static_cast<double>(n);
  g.t0 = -half_width;
  g.n = n;
  return g;
}

Signal make_signal(const Grid& g) {
  Signal f;
  f.grid = g;
  f.v.assign(g.n, cdouble{0.0, 0.0});
  return f;
}

void require_consistent(const Signal& f) {
  if (f.grid.n != f.v.size())
    throw input_error("signal sample count disagrees with its grid");
  if (!(f.grid.dt > 0.0)) throw input_error("grid step must be positive");
}

void require_same_grid(const Signal& f, const Signal& g) {
  if (!(f.grid == g.grid))
    throw input_error("operands live on different grids");
}

double l2_norm(const Signal& f) {
  require_consistent(f);
  double acc = 0.0;
  for (const cdouble& z : f.v) acc += std::norm(z);
  return std::sqrt(f.grid.dt * acc);
}

cdouble inner_product(const Signal& f, const Signal& g) {
  require_consistent(f);
  require_consistent(g);
  require_same_grid(f, g);
  cdouble acc{0.0, 0.0};
  for (std::size_t k = 0; k < f.v.size(); ++k) acc += f.v[k] * std::conj(g.v[k]);
  return f.grid.dt * acc;
}

double global_phase_distance(const Signal& f, const Signal& g) {
  const double nf = l2_norm(f);
  const double ng = l2_norm(g);
  const double ip = std::abs(inner_product(f, g));
  const double sq = nf * nf + ng * ng - 2.0 * ip;
  return std::sqrt(std::max(0.0, sq));
}

bool is_equivalent(const Signal& f, const Signal& g, double tol) {
  const double scale = std::max({l2_norm(f), l2_norm(g), kNormFloor});
  return global_phase_distance(f, g) <= tol * scale;
}

long aligned_steps(const Grid& g, double tau, double align_tol) {
  const double steps = tau / g.dt;
  const double nearest = std::round(steps);
  if (std::abs(steps - nearest) > align_tol * std::max(1.0, std::abs(steps))) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "shift " << tau << " is not grid-aligned; nearest aligned value is "
        << nearest * g.dt;
    throw parameter_error(msg.str());
  }
  return static_cast<long>(nearest);
}

Signal translate(const Signal& f, double tau) {
  require_consistent(f);
  const long s = aligned_steps(f.grid, tau);
  Signal out = make_signal(f.grid);
  const long n = static_cast<long>(f.v.size());
  for (long k = 0; k < n; ++k) {
    const long src = k - s;
    if (src >= 0 && src < n) out.v[static_cast<std::size_t>(k)] = f.v[static_cast<std::size_t>(src)];
  }
  return out;
}

Signal modulate(const Signal& f, double omega) {
  require_consistent(f);
  Signal out = f;
  for (std::size_t k = 0; k < out.v.size(); ++k)
    out.v[k] *= std::polar(1.0, omega * f.grid.point(k));
  return out;
}

Signal reflect(const Signal& f) {
  require_consistent(f);
  Signal out = make_signal(f.grid);
  const double inv_dt = 1.0 / f.grid.dt;
  const long n = static_cast<long>(f.v.size());
  for (long k = 0; k < n; ++k) {
    // -t_k = t0 + m*dt  =>  m = -(2 t0/dt) - k; centered grids make m integral.
    const double m_real = -2.0 * f.grid.t0 * inv_dt - static_cast<double>(k);
    const double m_round = std::round(m_real);
    if (std::abs(m_real - m_round) > 1e-6)
      throw parameter_error("reflection needs a grid symmetric about zero");
    const long m = static_cast<long>(m_round);
    if (m >= 0 && m < n) out.v[static_cast<std::size_t>(k)] = f.v[static_cast<std::size_t>(m)];
  }
  return out;
}

cdouble sinc_interpolate(const Signal& f, double t) {
  const double pos = (t - f.grid.t0) / f.grid.dt;
  const double nearest = std::round(pos);
  if (std::abs(pos - nearest) < 1e-12) {
    const long k = static_cast<long>(nearest);
    if (k >= 0 && k < static_cast<long>(f.v.size())) return f.v[static_cast<std::size_t>(k)];
    return cdouble{0.0, 0.0};
  }
  // sin(pi(pos-k)) = sin(pi pos)(-1)^k, so one sine serves every term.
  const double s = std::sin(std::numbers::pi * pos) / std::numbers::pi;
  cdouble acc{0.0, 0.0};
  double alt = 1.0;
  for (std::size_t k = 0; k < f.v.size(); ++k) {
    acc += alt * f.v[k] / (pos - static_cast<double>(k));
    alt = -alt;
  }
  return s * acc;
}

Signal dilate(const Signal& f, double s) {
  require_consistent(f);
  if (s == 0.0) throw parameter_error("dilation factor must be nonzero");
  Signal out = make_signal(f.grid);
  const double amp = 1.0 / std::sqrt(std::abs(s));
  for (std::size_t k = 0; k < out.v.size(); ++k)
    out.v[k] = amp * sinc_interpolate(f, f.grid.point(k) / s);
  return out;
}

Signal add(const Signal& f, const Signal& g) {
  require_same_grid(f, g);
  Signal out = f;
  for (std::size_t k = 0; k < out.v.size(); ++k) out.v[k] += g.v[k];
  return out;
}

Signal scale(const Signal& f, cdouble c) {
  Signal out = f;
  for (cdouble& z : out.v) z *= c;
  return out;
}

Signal conjugate(const Signal& f) {
  Signal out = f;
  for (cdouble& z : out.v) z = std::conj(z);
  return out;
}

Signal pointwise_multiply(const Signal& f, const Signal& g) {
  require_same_grid(f, g);
  Signal out = f;
  for (std::size_t k = 0; k < out.v.size(); ++k) out.v[k] *= g.v[k];
  return out;
}

double max_abs(const Signal& f) {
  double m = 0.0;
  for (const cdouble& z : f.v) m = std::max(m, std::abs(z));
  return m;
}

double rel_l2_error(const Signal& f, const Signal& g) {
  require_same_grid(f, g);
  double num = 0.0;
  for (std::size_t k = 0; k < f.v.size(); ++k) num += std::norm(f.v[k] - g.v[k]);
  num = std::sqrt(f.grid.dt * num);
  const double den = std::max({l2_norm(f), l2_norm(g), kNormFloor});
  return num / den;
}

double peak_relative_gap(const std::vector<cdouble>& lhs,
                         const std::vector<cdouble>& rhs) {
  if (lhs.size() != rhs.size())
    throw input_error("peak_relative_gap: length mismatch");
  double peak = 0.0, gap = 0.0;
  for (std::size_t i = 0; i < lhs.size(); ++i) {
    peak = std::max({peak, std::abs(lhs[i]), std::abs(rhs[i])});
    gap = std::max(gap, std::abs(lhs[i] - rhs[i]));
  }
  return gap / std::max(peak, kNormFloor);
}

double masked_relative_residual(const std::vector<cdouble>& lhs,
                                const std::vector<cdouble>& rhs) {
  if (lhs.size() != rhs.size())
    throw input_error("masked_relative_residual: length mismatch");
  double peak = 0.0;
  for (const cdouble& z : rhs) peak = std::max(peak, std::abs(z));
  const double cutoff = 1e-9 * peak;
  double worst = 0.0;
  for (std::size_t i = 0; i < lhs.size(); ++i) {
    const double ref = std::abs(rhs[i]);
    if (ref > cutoff && ref > 0.0)
      worst = std::max(worst, std::abs(lhs[i] - rhs[i]) / ref);
  }
  return worst;
}

}  // namespace canonica
