#include "canonica/windows.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "canonica/lct.hpp"

namespace canonica {

namespace {

constexpr int kHermiteCap = 32;
constexpr double kAmplitudeFloor = 1e-14;
// Relative cut separating a computed transform's decay tail from the FFT
// noise sea beneath it. High enough that windowing truncation error (about
// 3e-8 of peak for the widest supported rate on an 8-half-width grid) stays
// two decades under the dimmest kept sample.
constexpr double kTransformNoiseCut = 1e-6;

double hermite_value(int k, double t) {
  const double pi = std::numbers::pi;
  double h_prev = 0.0;
  double h = std::pow(2.0, 0.25) * std::exp(-pi * t * t);
  for (int j = 1; j <= k; ++j) {
    const double jd = static_cast<double>(j);
    const double h_next = 2.0 * std::sqrt(pi / jd) * t * h -
                          std::sqrt((jd - 1.0) / jd) * h_prev;
    h_prev = h;
    h = h_next;
  }
  return h;
}

double poly_value(const std::vector<double>& coeffs, double t) {
  double acc = 0.0;
  for (std::size_t i = coeffs.size(); i-- > 0;) acc = acc * t + coeffs[i];
  return acc;
}

// Solves the 3x3 normal equations of y ~ c + q*ln(u) - m*u by Gaussian
// elimination with partial pivoting.
std::array<double, 3> solve3(std::array<std::array<double, 4>, 3> m) {
  for (int col = 0; col < 3; ++col) {
    int pivot = col;
    for (int r = col + 1; r < 3; ++r)
      if (std::abs(m[r][col]) > std::abs(m[pivot][col])) pivot = r;
    std::swap(m[col], m[pivot]);
    if (m[col][col] == 0.0)
      throw parameter_error("degenerate envelope fit system");
    for (int r = 0; r < 3; ++r) {
      if (r == col) continue;
      const double fac = m[r][col] / m[col][col];
      for (int cc = col; cc < 4; ++cc) m[r][cc] -= fac * m[col][cc];
    }
  }
  return {m[0][3] / m[0][0], m[1][3] / m[1][1], m[2][3] / m[2][2]};
}

}  // namespace

double evaluate_window(const WindowSpec& w, double t) {
  switch (w.kind) {
    case WindowSpec::Kind::Gaussian:
      return std::exp(-w.gamma * t * t);
    case WindowSpec::Kind::Hermite:
      if (w.k < 0 || w.k > kHermiteCap)
        throw parameter_error("Hermite index out of range 0..32");
      return hermite_value(w.k, t);
    case WindowSpec::Kind::PolyGaussian:
      return poly_value(w.coeffs, t) * std::exp(-w.gamma * t * t);
  }
  throw parameter_error("unknown window kind");
}

Signal realize_window(const WindowSpec& w, const Grid& g) {
  if (w.kind != WindowSpec::Kind::Hermite && !(w.gamma > 0.0))
    throw parameter_error("window rate gamma must be positive");
  if (w.kind == WindowSpec::Kind::Hermite && (w.k < 0 || w.k > kHermiteCap))
    throw parameter_error("Hermite index out of range 0..32");
  Signal out = make_signal(g);
  for (std::size_t i = 0; i < g.n; ++i)
    out.v[i] = evaluate_window(w, g.point(i));
  return out;
}

Signal make_gaussian(double gamma, const Grid& g) {
  WindowSpec w;
  w.kind = WindowSpec::Kind::Gaussian;
  w.gamma = gamma;
  return realize_window(w, g);
}

Signal make_hermite(int k, const Grid& g) {
  WindowSpec w;
  w.kind = WindowSpec::Kind::Hermite;
  w.k = k;
  return realize_window(w, g);
}

Signal make_poly_gaussian(const std::vector<double>& coeffs, double gamma,
                          const Grid& g) {
  WindowSpec w;
  w.kind = WindowSpec::Kind::PolyGaussian;
  w.gamma = gamma;
  w.coeffs = coeffs;
  return realize_window(w, g);
}

EnvelopeFit envelope_fit(const Signal& f) {
  require_consistent(f);
  std::vector<double> u, y;
  double peak = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) {
    const double mag = std::abs(f.v[k]);
    if (mag > kAmplitudeFloor) peak = std::max(peak, mag);
  }
  if (peak == 0.0)
    throw parameter_error("envelope fit needs samples above the 1e-14 floor");
  for (std::size_t k = 0; k < f.size(); ++k) {
    const double mag = std::abs(f.v[k]);
    const double t = f.grid.point(k);
    if (mag <= kAmplitudeFloor || t == 0.0) continue;
    if (mag > 1e-2 * peak) continue;  // tail only; the bulk carries no rate
    u.push_back(t * t);
    y.push_back(std::log(mag));
  }
  if (u.size() < 8) {
    u.clear();
    y.clear();
    for (std::size_t k = 0; k < f.size(); ++k) {
      const double mag = std::abs(f.v[k]);
      const double t = f.grid.point(k);
      if (mag <= kAmplitudeFloor || t == 0.0) continue;
      u.push_back(t * t);
      y.push_back(std::log(mag));
    }
  }
  if (u.size() < 3)
    throw parameter_error("envelope fit needs at least three usable samples");

  std::array<std::array<double, 4>, 3> nm{};
  for (std::size_t i = 0; i < u.size(); ++i) {
    const std::array<double, 3> row{1.0, std::log(u[i]), -u[i]};
    for (int r = 0; r < 3; ++r) {
      for (int cc = 0; cc < 3; ++cc) nm[r][cc] += row[r] * row[cc];
      nm[r][3] += row[r] * y[i];
    }
  }
  const std::array<double, 3> sol = solve3(nm);
  const double m_hat = sol[2];

  double log_c = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < f.size(); ++k) {
    const double mag = std::abs(f.v[k]);
    if (mag <= kAmplitudeFloor) continue;
    const double t = f.grid.point(k);
    log_c = std::max(log_c, std::log(mag) + m_hat * t * t);
  }
  return {m_hat, log_c};
}

double check_fourier_decay(const Signal& f, double n) {
  require_consistent(f);
  if (!(n > 0.0)) throw parameter_error("claimed growth rate must be positive");
  if (max_abs(f) == 0.0) return 0.0;
  Signal F = lct_fast(fourier_params(), NormalizationMode::PaperKernel, f);
  // The FFT leaves a flat rounding/truncation sea far below the transform's
  // genuine tail. Those samples carry no rate information but sit above the
  // fitter's absolute floor, so they are zeroed out before fitting.
  const double peak = max_abs(F);
  for (cdouble& z : F.v)
    if (std::abs(z) <= kTransformNoiseCut * peak) z = 0.0;
  const EnvelopeFit fit = envelope_fit(F);
  const double claimed = 1.0 / (4.0 * n);
  return (claimed - fit.m_hat) / claimed;
}

}  // namespace canonica
