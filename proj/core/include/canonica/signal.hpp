#pragma once

#include <cstddef>
#include <vector>

#include "canonica/common.hpp"

namespace canonica {

// Uniform sampling grid t_k = t0 + k*dt, k = 0..n-1.
struct Grid {
  double t0 = 0.0;
  double dt = 1.0;
  std::size_t n = 0;

  double point(std::size_t k) const { return t0 + static_cast<double>(k) * dt; }
  bool operator==(const Grid&) const = default;
};

// Complex samples on a Grid. Discrete integrals over a Signal are
// left-endpoint Riemann sums weighted by dt.
struct Signal {
  Grid grid;
  std::vector<cdouble> v;

  std::size_t size() const { return v.size(); }
};

Grid make_centered_grid(double half_width, std::size_t n);
Signal make_signal(const Grid& g);

void require_consistent(const Signal& f);
void require_same_grid(const Signal& f, const Signal& g);

// sqrt(dt * sum |f_k|^2).
double l2_norm(const Signal& f);

// dt * sum f_k conj(g_k); grids must match.
cdouble inner_product(const Signal& f, const Signal& g);

// min over alpha of ||f - e^{i alpha} g||, in closed form
// sqrt(max(0, ||f||^2 + ||g||^2 - 2|<f,g>|)).
double global_phase_distance(const Signal& f, const Signal& g);

// True when the global-phase distance is within tol relative to the larger
// norm (floored to keep the zero-signal case well defined).
bool is_equivalent(const Signal& f, const Signal& g, double tol);

// Nearest grid step count for a shift; throws parameter_error naming the
// nearest aligned value when tau is not within align_tol steps of the grid.
long aligned_steps(const Grid& g, double tau, double align_tol = 1e-9);

// f(t - tau) for grid-aligned tau, zero-filled at the exposed edge.
Signal translate(const Signal& f, double tau);

// e^{i omega t} f(t).
Signal modulate(const Signal& f, double omega);

// f(-t); on a centered grid the reflection lands back on the grid except for
// the single exposed left-edge sample, which is zero-filled.
Signal reflect(const Signal& f);

// s^{-1/2} f(t/s) resampled onto the same grid by band-limited (sinc)
// interpolation. s must be nonzero.
Signal dilate(const Signal& f, double s);

// Band-limited interpolation of f at an arbitrary time.
cdouble sinc_interpolate(const Signal& f, double t);

Signal add(const Signal& f, const Signal& g);
Signal scale(const Signal& f, cdouble c);
Signal conjugate(const Signal& f);
Signal pointwise_multiply(const Signal& f, const Signal& g);

double max_abs(const Signal& f);

// Relative L2 distance ||f - g|| / max(||f||, ||g||, floor).
double rel_l2_error(const Signal& f, const Signal& g);

// Sup distance between two value lists of equal length, relative to the
// larger peak magnitude (floored for the all-zero case).
double peak_relative_gap(const std::vector<cdouble>& lhs,
                         const std::vector<cdouble>& rhs);

// Max pointwise |lhs - rhs|/|rhs| over entries whose reference magnitude
// exceeds 1e-9 of the reference peak; relative error is meaningless at the
// zeros of rhs. 0 when nothing clears the cutoff.
double masked_relative_residual(const std::vector<cdouble>& lhs,
                                const std::vector<cdouble>& rhs);

inline constexpr double kNormFloor = 1e-300;

}  // namespace canonica
