#include <doctest.h>

#include <canonica/common.hpp>
#include <canonica/signal.hpp>
#include <canonica/windows.hpp>

#include <cmath>

using namespace canonica;

namespace {
const Grid kGrid = make_centered_grid(8.0, 512);
}

TEST_CASE("gaussian window evaluates to its closed form") {
  WindowSpec w;
  w.gamma = 0.7;
  for (double t : {-2.0, -0.5, 0.0, 1.3, 3.1})
    CHECK(evaluate_window(w, t) ==
          doctest::Approx(std::exp(-0.7 * t * t)).epsilon(1e-15));
  const Signal g = make_gaussian(0.7, kGrid);
  const Signal r = realize_window(w, kGrid);
  for (std::size_t k = 0; k < kGrid.n; k += 61) CHECK(g.v[k] == r.v[k]);
  CHECK_THROWS_AS(make_gaussian(0.0, kGrid), parameter_error);
}

TEST_CASE("poly gaussian multiplies the polynomial in") {
  WindowSpec w;
  w.kind = WindowSpec::Kind::PolyGaussian;
  w.gamma = 1.0;
  w.coeffs = {1.0, 0.0, -2.0};  // 1 - 2 t^2
  for (double t : {-1.5, 0.0, 0.25, 2.0}) {
    const double want = (1.0 - 2.0 * t * t) * std::exp(-t * t);
    CHECK(evaluate_window(w, t) == doctest::Approx(want).epsilon(1e-14));
  }
  const Signal p = make_poly_gaussian({1.0, 0.0, -2.0}, 1.0, kGrid);
  CHECK(p.v[256] == cdouble(1.0, 0.0));
}

TEST_CASE("hermite family is orthonormal under the grid inner product") {
  // continuum-orthonormal; the grid sum only adds quadrature error
  const Signal h0 = make_hermite(0, kGrid);
  const Signal h1 = make_hermite(1, kGrid);
  const Signal h4 = make_hermite(4, kGrid);
  CHECK(l2_norm(h0) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(l2_norm(h1) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(l2_norm(h4) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(std::abs(inner_product(h0, h1)) <= 1e-10);
  CHECK(std::abs(inner_product(h1, h4)) <= 1e-10);
  CHECK(std::abs(inner_product(h0, h4)) <= 1e-10);
  // ground state is the normalized pi-rate Gaussian
  const double t = kGrid.point(300);
  CHECK(h0.v[300].real() ==
        doctest::Approx(std::pow(2.0, 0.25) *
                        std::exp(-std::acos(-1.0) * t * t))
            .epsilon(1e-12));
  CHECK_THROWS_AS(make_hermite(33, kGrid), parameter_error);
  CHECK_THROWS_AS(make_hermite(-1, kGrid), parameter_error);
}

TEST_CASE("envelope fit recovers the gaussian rate") {
  for (double gamma : {0.25, 0.5, 1.0, 2.0}) {
    const EnvelopeFit fit = envelope_fit(make_gaussian(gamma, kGrid));
    CHECK(fit.m_hat >= gamma - 1e-6);
    CHECK(fit.m_hat <= gamma + 1e-6);
  }
  CHECK_THROWS_AS(envelope_fit(make_signal(kGrid)), parameter_error);
}

TEST_CASE("envelope fit tolerates polynomial factors") {
  // polynomial factors cost the constant, not the rate; slack stays
  // one-sided since off-center zeros leave deep log outliers in the tail
  const double pi = std::acos(-1.0);
  CHECK(envelope_fit(make_hermite(3, kGrid)).m_hat >= pi - 0.1);
  CHECK(envelope_fit(make_poly_gaussian({0.0, 0.0, 1.0}, 2.0, kGrid)).m_hat >=
        2.0 - 0.1);
  const EnvelopeFit fit =
      envelope_fit(make_poly_gaussian({0.0, 1.0, 0.5}, 0.5, kGrid));
  CHECK(fit.m_hat >= 0.5 - 0.1);
  CHECK(fit.m_hat <= 0.7);
}

TEST_CASE("transform decay rate is reciprocal to the window rate") {
  for (double gamma : {0.25, 0.5, 1.0, 2.0}) {
    // returns relative shortfall against rate 1/(4 gamma); <= 0 passes,
    // and for a pure Gaussian the rate must sit within 2% either way
    const double shortfall = check_fourier_decay(make_gaussian(gamma, kGrid), gamma);
    CHECK(shortfall <= 0.02);
    CHECK(shortfall >= -0.02);
  }
  // away from the truncation-limited widest rate the match is nearly exact
  CHECK(std::abs(check_fourier_decay(make_gaussian(1.0, kGrid), 1.0)) <= 1e-6);
  // a Hermite window decays no slower than its Gaussian weight predicts
  CHECK(check_fourier_decay(make_hermite(2, kGrid), std::acos(-1.0)) <= 0.05);
  CHECK(check_fourier_decay(make_signal(kGrid), 1.0) == 0.0);
}
