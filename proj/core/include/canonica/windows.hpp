#pragma once

#include <vector>

#include "canonica/signal.hpp"

namespace canonica {

// Analytic window family. Kept evaluable at arbitrary shifts so sampling sets
// need not align with the signal grid.
struct WindowSpec {
  enum class Kind { Gaussian, Hermite, PolyGaussian };
  Kind kind = Kind::Gaussian;
  double gamma = 1.0;               // Gaussian / PolyGaussian rate
  int k = 0;                        // Hermite index, 0..32
  std::vector<double> coeffs;       // PolyGaussian, ascending powers
};

// Pointwise value; all supported windows are real-valued.
double evaluate_window(const WindowSpec& w, double t);

Signal realize_window(const WindowSpec& w, const Grid& g);

// e^{-gamma t^2}, gamma > 0.
Signal make_gaussian(double gamma, const Grid& g);

// Orthonormal Hermite family for the pi-weighted Gaussian; h_0 = 2^{1/4}
// e^{-pi t^2}, three-term recurrence h_k = 2 sqrt(pi/k) t h_{k-1}
// - sqrt((k-1)/k) h_{k-2}. k capped at 32.
Signal make_hermite(int k, const Grid& g);

// p(t) e^{-gamma t^2} with real coefficients in ascending powers.
Signal make_poly_gaussian(const std::vector<double>& coeffs, double gamma,
                          const Grid& g);

// Gaussian decay-rate estimate: the largest m with |f(t)| <= C e^{-m t^2}
// across the kept samples (|f| > 1e-14), with m taken from a least-squares
// fit of log|f| on the decay tail (samples below 1% of peak). The fit model
// carries a log t^2 term so polynomial factors cost the constant, not the
// rate; for pure Gaussians the fit is exact. C is the smallest constant
// validating the bound on the kept grid. Throws when every sample is under
// the floor.
struct EnvelopeFit {
  double m_hat = 0.0;
  double log_c = 0.0;
};
EnvelopeFit envelope_fit(const Signal& f);

// Measures the decay rate of the Fourier transform of f and returns the
// relative shortfall against the claimed rate 1/(4n): <= 0 means the
// transform decays at least as fast as claimed. Transform samples under
// 1e-6 of the transform peak are treated as FFT noise and excluded from
// the rate measurement. All-zero input passes vacuously with 0.
double check_fourier_decay(const Signal& f, double n);

}  // namespace canonica
