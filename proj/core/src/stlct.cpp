#include "canonica/stlct.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "canonica/common.hpp"

namespace canonica {
namespace {

// Columns below this size pay more for an FFT than for direct sums.
constexpr std::size_t kFastPathMin = 16;

struct Column {
  double x = 0.0;
  std::vector<std::size_t> idx;
};

// Group point indices by identical x, preserving first-appearance order.
// Generators emit repeated x bit-identically, so exact comparison is right.
std::vector<Column> group_by_x(const std::vector<TfPoint>& points) {
  std::vector<Column> cols;
  for (std::size_t i = 0; i < points.size(); ++i) {
    Column* col = nullptr;
    for (auto it = cols.rbegin(); it != cols.rend(); ++it) {
      if (it->x == points[i].x) {
        col = &*it;
        break;
      }
    }
    if (!col) {
      cols.push_back({points[i].x, {}});
      col = &cols.back();
    }
    col->idx.push_back(i);
  }
  return cols;
}

// True when every mu of the column sits on a node of ig; fills bins.
bool column_on_induced_grid(const Column& col,
                            const std::vector<TfPoint>& points, const Grid& ig,
                            std::vector<std::size_t>& bins) {
  bins.clear();
  bins.reserve(col.idx.size());
  for (std::size_t i : col.idx) {
    const double pos = (points[i].mu - ig.t0) / ig.dt;
    const double j = std::round(pos);
    if (std::abs(pos - j) > 1e-9 || j < 0.0 ||
        j >= static_cast<double>(ig.n))
      return false;
    bins.push_back(static_cast<std::size_t>(j));
  }
  return true;
}

// Shared column driver. fill_conj_window(x, w) must fill w[k] with the
// conjugated window value at t_k - x.
template <typename FillConjWindow>
SpectrogramSamples windowed_transform(const LctParams& A,
                                      NormalizationMode mode, const Signal& f,
                                      const std::vector<TfPoint>& points,
                                      FillConjWindow&& fill_conj_window) {
  require_unit_det(A);
  require_consistent(f);
  if (A.b == 0.0)
    throw input_error("windowed transform requires b != 0");
  SpectrogramSamples out;
  out.params = A;
  out.points = points;
  out.values.assign(points.size(), cdouble(0.0, 0.0));

  const Grid& tg = f.grid;
  const Grid ig = induced_grid(A, tg);
  const cdouble pref = kernel_prefactor(A.b, mode);
  const double half_chirp = A.a / (2.0 * A.b);

  std::vector<cdouble> wconj(tg.n);
  std::vector<cdouble> windowed(tg.n);
  std::vector<std::size_t> bins;
  for (const Column& col : group_by_x(points)) {
    fill_conj_window(col.x, wconj);
    for (std::size_t k = 0; k < tg.n; ++k) windowed[k] = f.v[k] * wconj[k];

    if (col.idx.size() >= kFastPathMin &&
        column_on_induced_grid(col, points, ig, bins)) {
      Signal w;
      w.grid = tg;
      w.v = windowed;
      const Signal W = lct_fast(A, mode, w);
      for (std::size_t r = 0; r < col.idx.size(); ++r)
        out.values[col.idx[r]] = W.v[bins[r]];
      continue;
    }

    // Direct quadrature: fold dt and the input chirp into the samples once,
    // then one oscillatory sum per mu.
    for (std::size_t k = 0; k < tg.n; ++k) {
      const double t = tg.point(k);
      windowed[k] *= tg.dt * std::polar(1.0, half_chirp * t * t);
    }
    for (std::size_t i : col.idx) {
      const double mu = points[i].mu;
      cdouble acc(0.0, 0.0);
      for (std::size_t k = 0; k < tg.n; ++k)
        acc += windowed[k] * std::polar(1.0, -tg.point(k) * mu / A.b);
      out.values[i] =
          pref * std::polar(1.0, A.d * mu * mu / (2.0 * A.b)) * acc;
    }
  }
  return out;
}

}  // namespace

SpectrogramSamples stlct(const LctParams& A, const Signal& g, const Signal& f,
                         const std::vector<TfPoint>& points,
                         NormalizationMode mode) {
  require_same_grid(g, f);
  const Grid& tg = f.grid;
  return windowed_transform(
      A, mode, f, points, [&](double x, std::vector<cdouble>& w) {
        const long s = aligned_steps(tg, x);
        for (std::size_t k = 0; k < tg.n; ++k) {
          const long src = static_cast<long>(k) - s;
          w[k] = (src >= 0 && src < static_cast<long>(tg.n))
                     ? std::conj(g.v[static_cast<std::size_t>(src)])
                     : cdouble(0.0, 0.0);
        }
      });
}

SpectrogramSamples stlct_analytic(const LctParams& A, const WindowSpec& w,
                                  const Signal& f,
                                  const std::vector<TfPoint>& points,
                                  NormalizationMode mode) {
  const Grid& tg = f.grid;
  return windowed_transform(A, mode, f, points,
                            [&](double x, std::vector<cdouble>& buf) {
                              for (std::size_t k = 0; k < tg.n; ++k)
                                buf[k] = evaluate_window(w, tg.point(k) - x);
                            });
}

std::vector<cdouble> stft_direct(const Signal& g, const Signal& f,
                                 const std::vector<TfPoint>& points) {
  require_same_grid(g, f);
  const Grid& tg = f.grid;
  std::vector<cdouble> out(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const long s = aligned_steps(tg, points[i].x);
    const double omega = points[i].mu;
    cdouble acc(0.0, 0.0);
    for (std::size_t k = 0; k < tg.n; ++k) {
      const long src = static_cast<long>(k) - s;
      if (src < 0 || src >= static_cast<long>(tg.n)) continue;
      const double t = tg.point(k);
      acc += f.v[k] * std::conj(g.v[static_cast<std::size_t>(src)]) *
             std::polar(1.0, -t * omega);
    }
    out[i] = tg.dt * acc;
  }
  return out;
}

cdouble gaussian_gabor_closed_form(double x, double omega) {
  const double pi = std::acos(-1.0);
  return std::sqrt(pi / 2.0) *
         std::exp(-x * x / 2.0 - omega * omega / 8.0) *
         std::polar(1.0, -x * omega / 2.0);
}

SpectrogramSamples magnitudes(const SpectrogramSamples& s) {
  SpectrogramSamples out = s;
  for (cdouble& z : out.values) z = cdouble(std::abs(z), 0.0);
  return out;
}

double check_fundamental_identity(const LctParams& A, const Signal& g,
                                  const Signal& f,
                                  const std::vector<TfPoint>& points) {
  const auto lhs =
      stlct(A, g, f, points, NormalizationMode::Unitary).values;

  const LctParams C{0.0, A.b, -1.0 / A.b, A.d};
  const LctParams B{0.0, A.b, -1.0 / A.b, 0.0};
  const Signal F = lct_fast(A, NormalizationMode::Unitary, f);
  const Signal Phi = lct_fast(C, NormalizationMode::Unitary, g);

  std::vector<TfPoint> mapped(points.size());
  for (std::size_t i = 0; i < points.size(); ++i)
    mapped[i] = {points[i].mu, A.d * points[i].mu - points[i].x};
  const auto raw =
      stlct(B, Phi, F, mapped, NormalizationMode::Unitary).values;

  std::vector<cdouble> rhs(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double mu = points[i].mu;
    rhs[i] =
        std::polar(1.0, mu * (A.d * mu - points[i].x) / A.b) * raw[i];
  }
  return masked_relative_residual(lhs, rhs);
}

double check_covariance(const LctParams& A, const Signal& g, const Signal& f,
                        double u, double tau,
                        const std::vector<TfPoint>& points) {
  const Signal shifted = generalized_modulation(A, u, translate(f, tau));
  const auto lhs =
      stlct(A, g, shifted, points, NormalizationMode::PaperKernel).values;

  std::vector<TfPoint> mapped(points.size());
  for (std::size_t i = 0; i < points.size(); ++i)
    mapped[i] = {points[i].x - tau, (points[i].mu - u) / A.b};
  const auto stft = stft_direct(g, f, mapped);

  const cdouble pref = kernel_prefactor(A.b, NormalizationMode::PaperKernel);
  std::vector<cdouble> rhs(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double mu = points[i].mu;
    const double phase = -A.d * (u * u - mu * mu) / (2.0 * A.b) +
                         tau * (u - mu) / A.b;
    rhs[i] = pref * std::polar(1.0, phase) * stft[i];
  }
  return masked_relative_residual(lhs, rhs);
}

}  // namespace canonica
