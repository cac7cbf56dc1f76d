#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "canonica/lattices.hpp"
#include "canonica/lct.hpp"
#include "canonica/signal.hpp"
#include "canonica/stlct.hpp"
#include "canonica/windows.hpp"

namespace canonica {

// Phaseless windowed-transform samples |V_g^{(A)} f| on a sampling set.
struct MeasurementSet {
  LctParams params;
  WindowSpec window;
  SamplingSet sampling;
  std::vector<double> magnitudes;
};

// Magnitudes of the windowed transform at the sampling nodes, order-aligned
// with sampling.points. Unitary normalization throughout; the analytic
// window keeps off-grid x evaluable.
MeasurementSet measure(const Signal& f, const LctParams& A,
                       const WindowSpec& g, const SamplingSet& sampling);

// Sup distance between two order-aligned magnitude sets, normalized by the
// larger peak magnitude.
double measurement_gap(const MeasurementSet& p, const MeasurementSet& q);

// f_pm = (1 pm i) M_u^{(A)} phi + (1 mp i) M_{-u}^{(A)} phi with
// phi(t) = e^{-t^2}: distinct signals whose windowed-transform magnitudes
// coincide on the uniform line family x in (pi b/u) Z.
struct AmbiguousPair {
  Signal f_plus;
  Signal f_minus;
  double u = 0.0;
  LctParams params;
};

// Requires the Gaussian envelope to decay at the grid edges: above 1e-12
// warns, above 1e-8 throws. u = 0 degenerates to f_plus = f_minus.
AmbiguousPair counterexample_pair(double u, const LctParams& A,
                                  const Grid& grid);

struct AmbiguityReport {
  double max_gap = 0.0;         // max | |V f+| - |V f-| | over peak magnitude
  double phase_distance = 0.0;  // global_phase_distance(f+, f-) / ||f+||
};

// Measures both members with the e^{-t^2} window on the sampling set.
AmbiguityReport verify_ambiguity(const AmbiguousPair& pair,
                                 const SamplingSet& sampling);

struct SolverConfig {
  int restarts = 8;
  int max_iters = 500;
  double step = 0.5;
  double grad_tol = 1e-12;
  std::uint64_t seed = 0;
};

struct SolverResult {
  Signal estimate;
  double residual = 0.0;  // loss at the estimate, recomputed via measure
  int iterations_used = 0;
  int restart_index = -1;
};

// Thrown when no restart produces a finite loss; carries the best partial
// state so callers can inspect what was reached.
struct solver_failure : std::runtime_error {
  solver_failure(const std::string& msg, SolverResult partial)
      : std::runtime_error(msg), best_partial(std::move(partial)) {}
  SolverResult best_partial;
};

// Minimizes L(h) = sum_l (|V_g^{(A)} h(l)|^2 - m_l^2)^2 / sum_l m_l^4 by
// gradient descent with Armijo backtracking, restarted from seeded random
// Gaussian-mixture initializations scaled to the measured energy. Restarts
// run sequentially; the winner is the (residual, restart_index)
// lexicographic minimum, so the result is deterministic given cfg.seed.
SolverResult solve(const MeasurementSet& meas, const Grid& grid,
                   const SolverConfig& cfg = {});

// Loss and its Wirtinger gradient dL/d conj(h), exposed for
// finite-difference validation: perturbing h_k by a real da moves L by
// Re(G_k) da; by i db moves it Im(G_k) db.
double pr_loss(const MeasurementSet& meas, const Signal& h);
Signal pr_loss_gradient(const MeasurementSet& meas, const Signal& h);

// |L_A(P f)|, |L_A(Q P f)|, |L_A((I+Q) P f)| on the induced grid, with P
// multiplication by e^{-gamma t^2} and Q multiplication by t.
std::array<Signal, 3> lct_pr_triplet(const Signal& f, const LctParams& A,
                                     double gamma);

// |L_A(P f)|, |L_A(P1 f)|, |L_A(P2 f)| with P1 = sin(alpha1 pi t) P and
// P2 = sin(alpha2 pi t) P. The underlying uniqueness statement wants
// alpha1/alpha2 irrational; a ratio within 1e-9 of a rational p/q with
// q <= 100 draws a warning.
std::array<Signal, 3> lct_pr_sin_pair(const Signal& f, const LctParams& A,
                                      double gamma, double alpha1,
                                      double alpha2);

// |L_A(P f)| and |L_A(D1 f)| with
// D1(t) = a1^{-1/2} phi(t/a1) - a1^{1/2} phi(t), phi = e^{-gamma t^2},
// applied multiplicatively. a1 = 1 makes D1 vanish identically and is
// rejected.
std::array<Signal, 2> lct_pr_dilation(const Signal& f, const LctParams& A,
                                      double gamma, double a1);

// Seeded sum of Gaussian bumps with random complex amplitudes, centers,
// widths, and modulation frequencies; the solver's restart family and the
// test suites' generic smooth signal.
Signal random_gaussian_mixture(const Grid& grid, std::uint64_t seed,
                               int components = 3);

// Trigonometric polynomial with 33 equispaced modes spanning [-B, B] and
// seeded complex Gaussian coefficients.
Signal random_bandlimited(const Grid& grid, double B, std::uint64_t seed);

struct BandlimitedTrial {
  int trial = 0;
  double equivalent_gap = 0.0;    // (f, e^{i alpha} f)
  double equivalent_phase = 0.0;
  double distinct_gap = 0.0;      // (f, f + 0.1 h), ||h|| = ||f||
  double distinct_phase = 0.0;
};

struct BandlimitedReport {
  std::vector<BandlimitedTrial> trials;
  double equal_rate = 0.0;        // equivalent pairs with gap <= 1e-10
  double distinguish_rate = 0.0;  // distinct pairs with gap >= 1e-6
  bool all_pass = false;          // every pair on the right side of its bound
};

// Seeded pairs of band-limited signals measured on the truncated
// {0..15} x m b Z lattice with the e^{-t^2} window. The time step m must
// lie strictly inside (0, 1/(4B)).
BandlimitedReport bandlimited_experiment(double B, double m,
                                         const LctParams& A, int trials,
                                         std::uint64_t seed);

}  // namespace canonica
