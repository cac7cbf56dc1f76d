#pragma once

#include <optional>

#include "canonica/signal.hpp"

namespace canonica {

// Parameter matrix (a b; c d) with unit determinant.
struct LctParams {
  double a = 0.0;
  double b = 1.0;
  double c = -1.0;
  double d = 0.0;

  double det() const { return a * d - b * c; }
};

// Prefactor of the b != 0 kernel. Unitary uses 1/sqrt(2 pi b) so that the
// discrete transform preserves the L2 norm; PaperKernel uses the literal
// 1/sqrt(b). Negative b takes the principal branch of the square root.
enum class NormalizationMode { Unitary, PaperKernel };

cdouble kernel_prefactor(double b, NormalizationMode mode);

// Throws parameter_error naming the determinant when |det - 1| > 1e-12.
void require_unit_det(const LctParams& A);

inline LctParams fourier_params() { return {0.0, 1.0, -1.0, 0.0}; }

// Output grid of lct_fast: mu_j = b * omega_j where omega_j are the signed
// Fourier frequencies 2 pi j/(n dt), reordered to ascend when b < 0.
Grid induced_grid(const LctParams& A, const Grid& time_grid);

// Chirp-factorized transform evaluated on the induced grid:
//   L_A f(mu) = pref(b) e^{i d mu^2/(2b)} F(f e^{i a t^2/(2b)})(mu/b),
// with F the 2pi-free Fourier transform realized by an FFT. Requires b != 0.
Signal lct_fast(const LctParams& A, NormalizationMode mode, const Signal& f);

// Direct O(n*m) quadrature of the same kernel on an arbitrary output grid.
// Serves as the independent oracle for lct_fast. Warns when the input fails
// to decay at the grid edges (|f| > 1e-10 * max at either end).
Signal lct_direct(const LctParams& A, NormalizationMode mode, const Signal& f,
                  const Grid& out_grid);

// Inverse of lct_fast. F must live on an induced grid; the time grid is not
// recoverable from F alone, so the caller may pass it (t0 is honored, dt and
// n are validated). Default reconstructs onto the FFT-centered grid
// t0 = -floor(n/2) dt. Exact round trip in both modes.
Signal lct_inverse(const LctParams& A, NormalizationMode mode, const Signal& F,
                   std::optional<Grid> time_grid = std::nullopt);

// b = 0 branch: L_A f(mu) = sqrt(d) e^{i c d mu^2/2} f(d mu), resampled onto
// the input grid by band-limited interpolation. The unit determinant forces
// a d = 1, so d != 0.
Signal lct_b_zero(const LctParams& A, const Signal& f);

// Generalized modulation
//   M_mu^{(A)} f(t) = e^{-i(a t^2/(2b) - t mu/b + d mu^2/(2b))} f(t);
// reduces to e^{i mu t} f(t) at the Fourier parameters. Requires b != 0.
Signal generalized_modulation(const LctParams& A, double mu, const Signal& f);

// Chirp convolution (f *_A g)(t) = conj(lambda_A)(t) kappa (f_A * g_A)(t)
// with lambda_A(t) = e^{i a t^2/(2b)}, f_A = lambda_A f, and kappa fixed to
// the Unitary prefactor 1/sqrt(2 pi b) so the convolution theorem
//   L_A(f *_A g) = e^{-i d mu^2/(2b)} L_A f . L_A g
// holds exactly in Unitary mode. Grids must match and be zero-anchored
// (t0/dt integral) so the discrete convolution lands back on the grid.
Signal chirp_convolve(const LctParams& A, const Signal& f, const Signal& g);

// Relative residual of the operator identities tying together translation,
// modulation, reflection, the transform, and the generalized modulation.
// Relations:
//   1: F T_tau = M_{-tau} F;  F M_mu = T_mu F (mu aligned to the induced
//      grid);  F R = R F.
//   2: T_tau M_mu = e^{-i mu tau} M_mu T_tau (pointwise).
//   3: V_g(T_tau M_mu f)(x,w) = e^{-i tau w} V_g f(x-tau, w-mu) for the
//      short-time transform with an internally fixed Gaussian window.
//   4: R L_A = L_A R  and  T_tau R = R T_{-tau}.
//   5: T_tau M_mu^{(A)} = e^{-i mu tau/b + i a t tau/b - i a tau^2/(2b)}
//      M_mu^{(A)} T_tau (pointwise in t).
//   6: L_A(M_{-a tau/b} T_tau f)(mu) = e^{-i(a tau^2/(2b) + mu tau/b)}
//      L_A f(mu).
// tau must be grid-aligned where it names a time shift.
double check_lemma22(int relation, const LctParams& A, const Signal& f,
                     double tau, double mu);

// Relative residual of the factorization
//   L_A(M_mu^{(A)} f) = M_mu^{(D)} T_mu L_C f,
// C = (0, b, -1/b, d) and D = (0, b/d, -d/b, 2) for d != 0; the D-modulation
// degenerates to the identity when d = 0. mu must align to the induced grid.
// Both kernel prefactors depend on b alone, so the identity is
// mode-independent; the default is checked in Unitary.
double check_lemma26(const LctParams& A, double mu, const Signal& f,
                     NormalizationMode mode = NormalizationMode::Unitary);

// Relative residual of the convolution theorem in Unitary mode.
double check_convolution_theorem(const LctParams& A, const Signal& f,
                                 const Signal& g);

}  // namespace canonica
