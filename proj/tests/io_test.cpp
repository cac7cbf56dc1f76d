#include <doctest.h>

#include <canonica/common.hpp>
#include <canonica/io.hpp>
#include <canonica/lattices.hpp>
#include <canonica/lct.hpp>
#include <canonica/phase_retrieval.hpp>
#include <canonica/signal.hpp>
#include <canonica/windows.hpp>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <limits>
#include <string>
#include <vector>

using namespace canonica;

namespace {
bool same_points(const std::vector<TfPoint>& a, const std::vector<TfPoint>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].x != b[i].x || a[i].mu != b[i].mu) return false;
  return true;
}
}  // namespace

TEST_CASE("format_real survives a parse round trip bit for bit") {
  for (double x : {0.0, -0.0, 1.0, 1.0 / 3.0, 6.02e23, -2.2250738585072014e-308,
                   0.1, 256.0, std::acos(-1.0)}) {
    const double back = std::stod(format_real(x));
    CHECK(std::memcmp(&back, &x, sizeof x) == 0);
  }
  CHECK_THROWS_AS(format_real(std::numeric_limits<double>::infinity()),
                  input_error);
  CHECK_THROWS_AS(format_real(std::numeric_limits<double>::quiet_NaN()),
                  input_error);
}

TEST_CASE("grid round trip and validation") {
  const Grid g{-8.0, 1.0 / 16.0, 256};
  CHECK(parse_grid(format_grid(g)) == g);
  CHECK_THROWS_AS(parse_grid("{\"t0\":0,\"dt\":0,\"n\":4}"), input_error);
  CHECK_THROWS_AS(parse_grid("{\"t0\":0,\"dt\":1}"), input_error);
  CHECK_THROWS_AS(parse_grid("not json"), input_error);
}

TEST_CASE("signal round trip is exact") {
  const Grid g = make_centered_grid(4.0, 64);
  const Signal f = random_gaussian_mixture(g, 30);
  const Signal back = parse_signal(format_signal(f));
  REQUIRE(back.grid == f.grid);
  REQUIRE(back.v.size() == f.v.size());
  CHECK(std::memcmp(back.v.data(), f.v.data(),
                    f.v.size() * sizeof(cdouble)) == 0);
  CHECK_THROWS_AS(
      parse_signal(
          "{\"grid\":{\"t0\":0,\"dt\":1,\"n\":3},\"re\":[1,2],\"im\":[0,0]}"),
      input_error);
}

TEST_CASE("transform parameters round trip") {
  const LctParams A{2.0, 0.5, -2.0, 0.0};
  const LctParams back = parse_params(format_params(A));
  CHECK(back.a == A.a);
  CHECK(back.b == A.b);
  CHECK(back.c == A.c);
  CHECK(back.d == A.d);
}

TEST_CASE("every window kind round trips") {
  WindowSpec g;
  g.gamma = 0.7;
  const WindowSpec g2 = parse_window(format_window(g));
  CHECK(g2.kind == WindowSpec::Kind::Gaussian);
  CHECK(g2.gamma == 0.7);

  WindowSpec h;
  h.kind = WindowSpec::Kind::Hermite;
  h.k = 3;
  const WindowSpec h2 = parse_window(format_window(h));
  CHECK(h2.kind == WindowSpec::Kind::Hermite);
  CHECK(h2.k == 3);

  WindowSpec p;
  p.kind = WindowSpec::Kind::PolyGaussian;
  p.gamma = 1.2;
  p.coeffs = {1.0, 0.0, -2.0};
  const WindowSpec p2 = parse_window(format_window(p));
  CHECK(p2.kind == WindowSpec::Kind::PolyGaussian);
  CHECK(p2.gamma == 1.2);
  CHECK(p2.coeffs == p.coeffs);

  CHECK_THROWS_AS(parse_window("{\"kind\":\"hann\"}"), input_error);
}

TEST_CASE("sampling sets round trip through their generators") {
  const SamplingSet sq = sqrt_lattice(0.4, 0.4, 5);
  const SamplingSet sq2 = parse_sampling(format_sampling(sq));
  CHECK(sq2.kind == SamplingSet::Kind::Sqrt);
  CHECK(same_points(sq2.points, sq.points));

  const SamplingSet bl = bandlimited_lattice(1.0, 0.2, 1.0, 15, 16);
  const SamplingSet bl2 = parse_sampling(format_sampling(bl));
  CHECK(bl2.kind == SamplingSet::Kind::Bandlimited);
  CHECK(same_points(bl2.points, bl.points));

  // line families lose their generator on the wire and come back explicit
  const SamplingSet ln =
      counterexample_lines(1.0, 2.0, 2, Grid{-4.0, 0.5, 17});
  const SamplingSet ln2 = parse_sampling(format_sampling(ln));
  CHECK(ln2.kind == SamplingSet::Kind::Explicit);
  CHECK(same_points(ln2.points, ln.points));

  const SamplingSet ex = explicit_set({{0.5, -1.0}, {0.0, 0.0}});
  const SamplingSet ex2 = parse_sampling(format_sampling(ex));
  CHECK(ex2.kind == SamplingSet::Kind::Explicit);
  CHECK(same_points(ex2.points, ex.points));
}

TEST_CASE("parsed sampling sets revalidate their parameters") {
  CHECK_THROWS_AS(
      parse_sampling("{\"kind\":\"bandlimited\",\"B\":1,\"m\":0.25,\"b\":1,"
                     "\"x_max\":15,\"mu_count\":16}"),
      parameter_error);
  CHECK_THROWS_AS(parse_sampling("{\"kind\":\"sqrt\",\"tau\":0,\"v\":0.5,"
                                 "\"K\":3}"),
                  input_error);
  CHECK_THROWS_AS(parse_sampling("{\"kind\":\"moire\"}"), input_error);
}

TEST_CASE("measurement sets round trip with their magnitudes") {
  const Grid g = make_centered_grid(4.0, 64);
  const Signal f = random_gaussian_mixture(g, 31);
  const MeasurementSet m = measure(f, LctParams{1.0, 1.0, 0.0, 1.0},
                                   WindowSpec{}, sqrt_lattice(0.5, 0.5, 3));
  const MeasurementSet back = parse_measurement(format_measurement(m));
  CHECK(back.params.b == m.params.b);
  CHECK(back.window.kind == m.window.kind);
  CHECK(same_points(back.sampling.points, m.sampling.points));
  REQUIRE(back.magnitudes.size() == m.magnitudes.size());
  CHECK(std::memcmp(back.magnitudes.data(), m.magnitudes.data(),
                    m.magnitudes.size() * sizeof(double)) == 0);

  std::string doctored = format_measurement(m);
  const auto pos = doctored.rfind(']');
  doctored.insert(pos, ",-1");
  CHECK_THROWS_AS(parse_measurement(doctored), input_error);
}

TEST_CASE("csv exports carry the documented headers") {
  const SamplingSet s = sqrt_lattice(0.5, 0.5, 2);
  const std::string pts = format_points_csv(s);
  CHECK(pts.rfind("x,mu\n", 0) == 0);

  const Grid g = make_centered_grid(4.0, 64);
  const Signal f = random_gaussian_mixture(g, 32);
  const SpectrogramSamples v = stlct_analytic(
      LctParams{1.0, 1.0, 0.0, 1.0}, WindowSpec{}, f, s.points);
  const std::string spec = format_spectrogram_csv(v);
  CHECK(spec.rfind("x,mu,re,im,mag\n", 0) == 0);
  // one data row per point
  std::size_t rows = 0;
  for (char c : spec)
    if (c == '\n') ++rows;
  CHECK(rows == s.points.size() + 1);
}

TEST_CASE("text files write and read back verbatim") {
  const std::string path = "/tmp/canonica_io_test.txt";
  const std::string text = "line one\nline two\n";
  write_text_file(path, text);
  CHECK(read_text_file(path) == text);
  std::remove(path.c_str());
  CHECK_THROWS_AS(read_text_file("/tmp/canonica_io_missing.txt"), input_error);
}
