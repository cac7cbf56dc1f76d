#include "canonica/lct.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "fft.hpp"

namespace canonica {

namespace {

constexpr double kDetTol = 1e-12;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_b_nonzero(const LctParams& A) {
  if (A.b == 0.0)
    throw parameter_error("b = 0 parameters take the lct_b_zero branch");
}

// Signed DFT index range; j runs jmin..jmin+n-1 with omega_j = j * domega.
long j_min(std::size_t n) { return -static_cast<long>(n / 2); }

void check_edge_decay(const Signal& f, const char* who) {
  const double peak = max_abs(f);
  if (peak == 0.0) return;
  const double edge = std::max(std::abs(f.v.front()), std::abs(f.v.back()));
  if (edge > 1e-10 * peak) {
    std::ostringstream msg;
    msg << who << ": input does not decay at the grid edges (edge/peak = "
        << edge / peak << "); quadrature may be inaccurate";
    warn(msg.str());
  }
}

// Inverse-transform prefactor making the round trip exact in either mode:
// q * p * 2 pi |b| = 1.
cdouble inverse_prefactor(double b, NormalizationMode mode) {
  return 1.0 / (kTwoPi * std::abs(b) * kernel_prefactor(b, mode));
}

}  // namespace

cdouble kernel_prefactor(double b, NormalizationMode mode) {
  const double arg = mode == NormalizationMode::Unitary ? kTwoPi * b : b;
  return 1.0 / std::sqrt(cdouble(arg, 0.0));
}

void require_unit_det(const LctParams& A) {
  const double det = A.det();
  if (std::abs(det - 1.0) > kDetTol) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "parameter matrix must have unit determinant, got det = " << det;
    throw parameter_error(msg.str());
  }
}

Grid induced_grid(const LctParams& A, const Grid& time_grid) {
  require_unit_det(A);
  const std::size_t n = time_grid.n;
  if (n == 0) throw input_error("empty grid");
  const double domega = kTwoPi / (static_cast<double>(n) * time_grid.dt);
  const double dmu = std::abs(A.b) * domega;
  Grid out;
  out.n = n;
  out.dt = dmu;
  const long jmin = j_min(n);
  const long jmax = jmin + static_cast<long>(n) - 1;
  // Ascending mu: b > 0 starts at b*omega_min, b < 0 at b*omega_max.
  out.t0 = A.b * domega * static_cast<double>(A.b > 0.0 ? jmin : jmax);
  return out;
}

Signal lct_fast(const LctParams& A, NormalizationMode mode, const Signal& f) {
  require_consistent(f);
  require_unit_det(A);
  require_b_nonzero(A);
  const std::size_t n = f.size();
  const double a = A.a, b = A.b, d = A.d;
  const double dt = f.grid.dt, t0 = f.grid.t0;
  const double domega = kTwoPi / (static_cast<double>(n) * dt);

  std::vector<cdouble> chirped(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = f.grid.point(k);
    chirped[k] = f.v[k] * std::polar(1.0, a * t * t / (2.0 * b));
  }
  std::vector<cdouble> spectrum;
  detail::dft(chirped, spectrum, -1);

  const cdouble pref = kernel_prefactor(b, mode);
  Signal out = make_signal(induced_grid(A, f.grid));
  const long jmin = j_min(n);
  for (long idx = 0; idx < static_cast<long>(n); ++idx) {
    const long j = jmin + idx;
    const double omega = domega * static_cast<double>(j);
    const double mu = b * omega;
    const std::size_t bin = static_cast<std::size_t>((j % static_cast<long>(n) +
                                                      static_cast<long>(n)) %
                                                     static_cast<long>(n));
    const cdouble val = pref * std::polar(1.0, d * mu * mu / (2.0 * b)) * dt *
                        std::polar(1.0, -omega * t0) * spectrum[bin];
    // Ascending-mu storage: b > 0 keeps j order, b < 0 reverses it.
    const std::size_t slot =
        b > 0.0 ? static_cast<std::size_t>(idx)
                : static_cast<std::size_t>(static_cast<long>(n) - 1 - idx);
    out.v[slot] = val;
  }
  return out;
}

Signal lct_direct(const LctParams& A, NormalizationMode mode, const Signal& f,
                  const Grid& out_grid) {
  require_consistent(f);
  require_unit_det(A);
  require_b_nonzero(A);
  check_edge_decay(f, "lct_direct");
  const double a = A.a, b = A.b, d = A.d;
  const double dt = f.grid.dt;
  const cdouble pref = kernel_prefactor(b, mode);

  Signal out = make_signal(out_grid);
  for (std::size_t j = 0; j < out_grid.n; ++j) {
    const double mu = out_grid.point(j);
    cdouble acc{0.0, 0.0};
    for (std::size_t k = 0; k < f.size(); ++k) {
      const double t = f.grid.point(k);
      const double phase =
          a * t * t / (2.0 * b) - t * mu / b + d * mu * mu / (2.0 * b);
      acc += f.v[k] * std::polar(1.0, phase);
    }
    out.v[j] = pref * dt * acc;
  }
  return out;
}

Signal lct_inverse(const LctParams& A, NormalizationMode mode, const Signal& F,
                   std::optional<Grid> time_grid) {
  require_consistent(F);
  require_unit_det(A);
  require_b_nonzero(A);
  const std::size_t n = F.size();
  const double a = A.a, b = A.b, d = A.d;
  const double dmu = F.grid.dt;
  const double domega = dmu / std::abs(b);
  const double dt = kTwoPi / (static_cast<double>(n) * domega);

  Grid tg;
  if (time_grid) {
    tg = *time_grid;
    if (tg.n != n) throw input_error("target grid size disagrees with input");
    if (std::abs(tg.dt - dt) > 1e-9 * dt)
      throw input_error("target grid step is inconsistent with the mu grid");
  } else {
    tg.n = n;
    tg.dt = dt;
    tg.t0 = -static_cast<double>(n / 2) * dt;
  }

  // Undo the ascending-mu storage back to signed-j order, strip the output
  // chirp, then run an inverse DFT against e^{i omega_j t}.
  const long jmin = j_min(n);
  std::vector<cdouble> packed(n);
  for (long idx = 0; idx < static_cast<long>(n); ++idx) {
    const long j = jmin + idx;
    const double omega = domega * static_cast<double>(j);
    const double mu = b * omega;
    const std::size_t slot =
        b > 0.0 ? static_cast<std::size_t>(idx)
                : static_cast<std::size_t>(static_cast<long>(n) - 1 - idx);
    const std::size_t bin = static_cast<std::size_t>((j % static_cast<long>(n) +
                                                      static_cast<long>(n)) %
                                                     static_cast<long>(n));
    packed[bin] = F.v[slot] * std::polar(1.0, -d * mu * mu / (2.0 * b)) *
                  std::polar(1.0, omega * tg.t0);
  }
  std::vector<cdouble> synth;
  detail::dft(packed, synth, +1);

  const cdouble pref = inverse_prefactor(b, mode);
  Signal out = make_signal(tg);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = tg.point(k);
    out.v[k] = pref * dmu * std::polar(1.0, -a * t * t / (2.0 * b)) * synth[k];
  }
  return out;
}

Signal lct_b_zero(const LctParams& A, const Signal& f) {
  require_consistent(f);
  if (A.b != 0.0) throw parameter_error("lct_b_zero requires b = 0");
  require_unit_det(A);
  const double c = A.c, d = A.d;
  const cdouble amp = std::sqrt(cdouble(d, 0.0));
  Signal out = make_signal(f.grid);
  for (std::size_t k = 0; k < out.v.size(); ++k) {
    const double mu = f.grid.point(k);
    out.v[k] = amp * std::polar(1.0, c * d * mu * mu / 2.0) *
               sinc_interpolate(f, d * mu);
  }
  return out;
}

Signal generalized_modulation(const LctParams& A, double mu, const Signal& f) {
  require_consistent(f);
  require_unit_det(A);
  require_b_nonzero(A);
  const double a = A.a, b = A.b, d = A.d;
  Signal out = f;
  for (std::size_t k = 0; k < out.v.size(); ++k) {
    const double t = f.grid.point(k);
    const double phase =
        a * t * t / (2.0 * b) - t * mu / b + d * mu * mu / (2.0 * b);
    out.v[k] *= std::polar(1.0, -phase);
  }
  return out;
}

Signal chirp_convolve(const LctParams& A, const Signal& f, const Signal& g) {
  require_consistent(f);
  require_consistent(g);
  require_same_grid(f, g);
  require_unit_det(A);
  require_b_nonzero(A);
  const std::size_t n = f.size();
  const double a = A.a, b = A.b;
  const double dt = f.grid.dt;
  const double anchor = f.grid.t0 / dt;
  const double s0_real = std::round(anchor);
  if (std::abs(anchor - s0_real) > 1e-9 * std::max(1.0, std::abs(anchor)))
    throw parameter_error(
        "chirp convolution needs a zero-anchored grid (t0/dt integral)");
  const long s0 = static_cast<long>(s0_real);

  std::vector<cdouble> fa(2 * n, cdouble{0.0, 0.0});
  std::vector<cdouble> ga(2 * n, cdouble{0.0, 0.0});
  for (std::size_t k = 0; k < n; ++k) {
    const double t = f.grid.point(k);
    const cdouble lam = std::polar(1.0, a * t * t / (2.0 * b));
    fa[k] = lam * f.v[k];
    ga[k] = lam * g.v[k];
  }
  std::vector<cdouble> fa_hat, ga_hat;
  detail::dft(fa, fa_hat, -1);
  detail::dft(ga, ga_hat, -1);
  for (std::size_t k = 0; k < fa_hat.size(); ++k) fa_hat[k] *= ga_hat[k];
  std::vector<cdouble> full;
  detail::dft(fa_hat, full, +1);
  const double inv_len = 1.0 / static_cast<double>(2 * n);

  // Linear convolution index r pairs with output time 2 t0 + r dt, so the
  // output sample j reads r = j - t0/dt.
  const cdouble kappa = kernel_prefactor(b, NormalizationMode::Unitary);
  Signal out = make_signal(f.grid);
  for (std::size_t j = 0; j < n; ++j) {
    const long r = static_cast<long>(j) - s0;
    cdouble val{0.0, 0.0};
    if (r >= 0 && r < static_cast<long>(full.size()))
      val = full[static_cast<std::size_t>(r)] * inv_len;
    const double t = f.grid.point(j);
    out.v[j] = std::polar(1.0, -a * t * t / (2.0 * b)) * kappa * dt * val;
  }
  return out;
}

namespace {

// Plain 2pi-free Fourier transform of f at an arbitrary frequency.
cdouble fourier_at(const Signal& f, double omega) {
  cdouble acc{0.0, 0.0};
  for (std::size_t k = 0; k < f.size(); ++k)
    acc += f.v[k] * std::polar(1.0, -omega * f.grid.point(k));
  return f.grid.dt * acc;
}

// Short-time transform value with explicit window samples, arbitrary x
// handled by analytic Gaussian evaluation below when needed.
cdouble stft_at(const Signal& f, const Signal& g, double x, double omega) {
  const long s = aligned_steps(f.grid, x);
  cdouble acc{0.0, 0.0};
  const long n = static_cast<long>(f.size());
  for (long k = 0; k < n; ++k) {
    const long src = k - s;
    if (src < 0 || src >= n) continue;
    acc += f.v[static_cast<std::size_t>(k)] *
           std::conj(g.v[static_cast<std::size_t>(src)]) *
           std::polar(1.0, -omega * f.grid.point(static_cast<std::size_t>(k)));
  }
  return f.grid.dt * acc;
}

}  // namespace

double check_lemma22(int relation, const LctParams& A, const Signal& f,
                     double tau, double mu) {
  require_consistent(f);
  const LctParams fourier = fourier_params();
  switch (relation) {
    case 1: {
      // F T_tau = M_{-tau} F on the induced grid; F M_mu = T_mu F for mu on
      // the induced grid; F R = R F.
      const Signal F = lct_fast(fourier, NormalizationMode::PaperKernel, f);
      const Signal lhs_t =
          lct_fast(fourier, NormalizationMode::PaperKernel, translate(f, tau));
      const Signal rhs_t = modulate(F, -tau);
      double r = rel_l2_error(lhs_t, rhs_t);

      const Signal lhs_m =
          lct_fast(fourier, NormalizationMode::PaperKernel, modulate(f, mu));
      const Signal rhs_m = translate(F, mu);
      r = std::max(r, rel_l2_error(lhs_m, rhs_m));

      const Signal lhs_r =
          lct_fast(fourier, NormalizationMode::PaperKernel, reflect(f));
      const Signal rhs_r = reflect(F);
      return std::max(r, rel_l2_error(lhs_r, rhs_r));
    }
    case 2: {
      const Signal lhs = translate(modulate(f, mu), tau);
      const Signal rhs =
          scale(modulate(translate(f, tau), mu), std::polar(1.0, -mu * tau));
      return rel_l2_error(lhs, rhs);
    }
    case 3: {
      // Covariance of the short-time transform under T_tau M_mu, checked on a
      // small interior point set against a fixed Gaussian window.
      Signal g = make_signal(f.grid);
      for (std::size_t k = 0; k < g.v.size(); ++k) {
        const double t = f.grid.point(k);
        g.v[k] = std::exp(-t * t);
      }
      const Signal shifted = translate(modulate(f, mu), tau);
      std::vector<cdouble> lhs, rhs;
      for (int ix = -2; ix <= 2; ++ix) {
        const double x = static_cast<double>(ix) * 8.0 * f.grid.dt;
        for (int iw = -2; iw <= 2; ++iw) {
          const double w = static_cast<double>(iw) * 0.7;
          lhs.push_back(stft_at(shifted, g, x, w));
          rhs.push_back(std::polar(1.0, -tau * w) *
                        stft_at(f, g, x - tau, w - mu));
        }
      }
      return peak_relative_gap(lhs, rhs);
    }
    case 4: {
      const Signal lhs_l = lct_fast(A, NormalizationMode::Unitary, reflect(f));
      const Signal rhs_l = reflect(lct_fast(A, NormalizationMode::Unitary, f));
      double r = rel_l2_error(lhs_l, rhs_l);
      const Signal lhs_t = translate(reflect(f), tau);
      const Signal rhs_t = reflect(translate(f, -tau));
      return std::max(r, rel_l2_error(lhs_t, rhs_t));
    }
    case 5: {
      require_unit_det(A);
      require_b_nonzero(A);
      const Signal lhs = translate(generalized_modulation(A, mu, f), tau);
      Signal rhs = generalized_modulation(A, mu, translate(f, tau));
      const double a = A.a, b = A.b;
      for (std::size_t k = 0; k < rhs.v.size(); ++k) {
        const double t = f.grid.point(k);
        const double phase =
            -mu * tau / b + a * t * tau / b - a * tau * tau / (2.0 * b);
        rhs.v[k] *= std::polar(1.0, phase);
      }
      return rel_l2_error(lhs, rhs);
    }
    case 6: {
      require_unit_det(A);
      require_b_nonzero(A);
      const double a = A.a, b = A.b;
      const Signal shifted = modulate(translate(f, tau), -a * tau / b);
      const Signal lhs = lct_fast(A, NormalizationMode::Unitary, shifted);
      Signal rhs = lct_fast(A, NormalizationMode::Unitary, f);
      for (std::size_t k = 0; k < rhs.v.size(); ++k) {
        const double m = rhs.grid.point(k);
        rhs.v[k] *=
            std::polar(1.0, -(a * tau * tau / (2.0 * b) + m * tau / b));
      }
      return rel_l2_error(lhs, rhs);
    }
    default:
      throw parameter_error("relation id must be in 1..6");
  }
}

double check_lemma26(const LctParams& A, double mu, const Signal& f,
                     NormalizationMode mode) {
  require_consistent(f);
  require_unit_det(A);
  require_b_nonzero(A);
  const double b = A.b, d = A.d;
  const Signal lhs = lct_fast(A, mode, generalized_modulation(A, mu, f));
  const LctParams C{0.0, b, -1.0 / b, d};
  Signal rhs = translate(lct_fast(C, mode, f), mu);
  if (d != 0.0) {
    const LctParams D{0.0, b / d, -d / b, 2.0};
    rhs = generalized_modulation(D, mu, rhs);
  }
  return rel_l2_error(lhs, rhs);
}

double check_convolution_theorem(const LctParams& A, const Signal& f,
                                 const Signal& g) {
  const Signal lhs =
      lct_fast(A, NormalizationMode::Unitary, chirp_convolve(A, f, g));
  const Signal Ff = lct_fast(A, NormalizationMode::Unitary, f);
  const Signal Fg = lct_fast(A, NormalizationMode::Unitary, g);
  Signal rhs = pointwise_multiply(Ff, Fg);
  const double b = A.b, d = A.d;
  for (std::size_t k = 0; k < rhs.v.size(); ++k) {
    const double mu = rhs.grid.point(k);
    rhs.v[k] *= std::polar(1.0, -d * mu * mu / (2.0 * b));
  }
  return rel_l2_error(lhs, rhs);
}

}  // namespace canonica
