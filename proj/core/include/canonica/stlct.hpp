#pragma once

#include <vector>

#include "canonica/lattices.hpp"
#include "canonica/lct.hpp"
#include "canonica/signal.hpp"
#include "canonica/windows.hpp"

namespace canonica {

// Values of a windowed transform at scattered time-frequency nodes, in the
// same order as the requesting point list.
struct SpectrogramSamples {
  LctParams params;
  std::vector<TfPoint> points;
  std::vector<cdouble> values;
};

// Windowed canonical transform V_g f(x, mu): the canonical transform of
// f(t) conj(g(t - x)) evaluated at mu. Window given as samples on the same
// grid as f; every x must be a whole number of grid steps. mu is
// unrestricted: columns whose mu values all lie on the induced grid go
// through the fast transform, anything else through direct quadrature.
SpectrogramSamples stlct(const LctParams& A, const Signal& g, const Signal& f,
                         const std::vector<TfPoint>& points,
                         NormalizationMode mode = NormalizationMode::Unitary);

// Same transform with the window evaluated analytically, so x needs no grid
// alignment. This is the evaluation path for scattered sampling sets.
SpectrogramSamples stlct_analytic(
    const LctParams& A, const WindowSpec& w, const Signal& f,
    const std::vector<TfPoint>& points,
    NormalizationMode mode = NormalizationMode::Unitary);

// Classical short-time Fourier transform, dt * sum f conj(g(t-x)) e^{-i t w},
// computed by plain direct summation with no prefactor. Independent of the
// canonical-transform code paths; used as a cross-check oracle.
std::vector<cdouble> stft_direct(const Signal& g, const Signal& f,
                                 const std::vector<TfPoint>& points);

// Closed form of the Gaussian self-spectrogram: for g = f = e^{-t^2},
// V_g f(x, w) = sqrt(pi/2) e^{-i x w / 2} e^{-x^2/2} e^{-w^2/8}.
cdouble gaussian_gabor_closed_form(double x, double omega);

// Pointwise modulus of the values; idempotent.
SpectrogramSamples magnitudes(const SpectrogramSamples& s);

// Residual of the reduction of V_g^{(A)} f to a windowed transform of the
// transformed pair: with F = L_A f, Phi = L_C g, C = (0, b, -1/b, d) and
// B = (0, b, -1/b, 0),
//   V_g^{(A)} f(x, mu) = e^{i mu (d mu - x)/b} V^{(B)}_Phi F(mu, d mu - x).
// Unitary normalization; x must be f-grid aligned and mu induced-grid
// aligned. Returns the masked max relative residual over the points.
double check_fundamental_identity(const LctParams& A, const Signal& g,
                                  const Signal& f,
                                  const std::vector<TfPoint>& points);

// Residual of shift-modulation covariance in the 1/sqrt(b) normalization:
//   V_g^{(A)}(M_u^{(A)} T_tau f)(x, mu)
//     = (1/b)^{1/2} e^{-i d (u^2 - mu^2)/(2b) + i tau (u - mu)/b}
//       V_g f(x - tau, (mu - u)/b)
// with V_g f the classical short-time Fourier transform. Returns the
// masked max relative residual over the points.
double check_covariance(const LctParams& A, const Signal& g, const Signal& f,
                        double u, double tau,
                        const std::vector<TfPoint>& points);

}  // namespace canonica
