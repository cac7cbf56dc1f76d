// Acceptance gate: one line per criterion, [PASS] or [FAIL], with the
// measured quantity and wall time. Exit code is the number of failures, so
// the harness needs no output parsing.

#include <canonica/io.hpp>
#include <canonica/lattices.hpp>
#include <canonica/lct.hpp>
#include <canonica/phase_retrieval.hpp>
#include <canonica/rng.hpp>
#include <canonica/signal.hpp>
#include <canonica/stlct.hpp>
#include <canonica/windows.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "oracles.hpp"

using namespace canonica;
namespace fs = std::filesystem;

#ifndef CANONICA_BIN
#error "CANONICA_BIN must be defined"
#endif

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

double now_seconds() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

int run_tool(const std::string& args) {
  const std::string cmd =
      std::string("\"") + CANONICA_BIN + "\" " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "canonica_acceptance" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

const std::array<LctParams, 3> kFamily = {
    LctParams{0.0, 1.0, -1.0, 0.0},
    LctParams{1.0, 1.0, 0.0, 1.0},
    LctParams{2.0, 0.5, -2.0, 0.0},
};

// 1. fast transform against direct quadrature, 3 parameter sets x 5 signals
Outcome criterion_fast_vs_direct() {
  const double t0 = now_seconds();
  const Grid grid = make_centered_grid(8.0, 512);
  double worst = 0.0;
  for (const LctParams& A : kFamily) {
    for (std::uint64_t s = 0; s < 5; ++s) {
      const Signal f = random_gaussian_mixture(grid, s);
      const Signal fast = lct_fast(A, NormalizationMode::Unitary, f);
      const Signal direct =
          lct_direct(A, NormalizationMode::Unitary, f, fast.grid);
      worst = std::max(worst, rel_l2_error(fast, direct));
    }
  }
  const double secs = now_seconds() - t0;
  return {worst <= 1e-6 && secs < 5.0,
          "max rel l2 " + fmt(worst) + ", " + fmt(secs) + " s"};
}

// 2. Fourier-parameter windowed transform against an independent STFT sum
Outcome criterion_fourier_degeneration() {
  const Grid grid{-8.0, 1.0 / 16.0, 256};
  const Signal f = random_gaussian_mixture(grid, 7);
  const WindowSpec w;
  const Signal g = realize_window(w, grid);
  std::vector<TfPoint> pts;
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j)
      pts.push_back({-2.0 + 0.25 * i, -2.0 + 0.25 * j});
  const SpectrogramSamples got = stlct_analytic(
      fourier_params(), w, f, pts, NormalizationMode::PaperKernel);
  long double num = 0.0L, den = 0.0L;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const oracle::cldouble want =
        oracle::stft_sum(g, f, pts[i].x, pts[i].mu);
    num += std::norm(oracle::cldouble(got.values[i]) - want);
    den += std::norm(want);
  }
  const double rel = static_cast<double>(std::sqrt(num / den));
  return {rel <= 1e-10, "rel l2 " + fmt(rel)};
}

// 3. operator identity suites at their shared tolerance
Outcome criterion_identity_suites() {
  const Grid grid{-8.0, 1.0 / 16.0, 256};
  std::uint64_t idx = 0;
  auto mix = [&] { return random_gaussian_mixture(grid, derive_seed(1, idx++)); };
  bool pass = true;
  std::string detail;
  const auto record = [&](const char* name, double worst, double secs) {
    const bool ok = worst <= 1e-5 && secs < 10.0;
    pass = pass && ok;
    if (!detail.empty()) detail += ", ";
    detail += std::string(name) + " " + fmt(worst) + (ok ? "" : " FAIL");
  };

  {
    const double t0 = now_seconds();
    double worst = 0.0;
    for (const LctParams& A : kFamily)
      for (int rel : {2, 5, 6})
        worst = std::max(worst, check_lemma22(rel, A, mix(), 0.5, 1.3));
    record("modulation", worst, now_seconds() - t0);
  }
  {
    const double t0 = now_seconds();
    double worst = 0.0;
    for (const LctParams& A : kFamily) {
      const double mu = 4.0 * induced_grid(A, grid).dt;
      worst = std::max(worst, check_lemma26(A, mu, mix()));
    }
    record("mod-transform", worst, now_seconds() - t0);
  }
  {
    const double t0 = now_seconds();
    double worst = 0.0;
    const Signal gauss = make_gaussian(1.0, grid);
    for (int ai = 0; ai < 2; ++ai) {
      const Signal m1 = mix(), m2 = mix();
      worst = std::max(worst,
                       check_convolution_theorem(kFamily[ai], gauss, m1));
      worst = std::max(worst, check_convolution_theorem(kFamily[ai], m1, m2));
    }
    record("convolution", worst, now_seconds() - t0);
  }
  {
    const double t0 = now_seconds();
    double worst = 0.0;
    const Signal win = make_gaussian(1.0, grid);
    for (const LctParams& A : kFamily) {
      const Grid ind = induced_grid(A, grid);
      std::vector<TfPoint> pts;
      for (int ix = 0; ix < 8; ++ix)
        for (int j = -4; j < 4; ++j)
          pts.push_back({-1.5 + 0.5 * ix, ind.point(grid.n / 2 + j)});
      worst = std::max(worst, check_fundamental_identity(A, win, mix(), pts));
    }
    record("fundamental", worst, now_seconds() - t0);
  }
  {
    const double t0 = now_seconds();
    double worst = 0.0;
    const Signal win = make_gaussian(1.0, grid);
    std::vector<TfPoint> pts;
    for (int ix = 0; ix < 8; ++ix)
      for (int im = 0; im < 8; ++im)
        pts.push_back({-1.5 + 0.5 * ix, -1.4 + 0.4 * im});
    for (int ai = 0; ai < 2; ++ai)
      for (const auto& [u, tau] : std::array<std::pair<double, double>, 3>{
               std::pair<double, double>{0.0, 0.0}, {1.0, 0.5}, {2.0, 1.0}})
        worst = std::max(
            worst, check_covariance(kFamily[ai], win, mix(), u, tau, pts));
    record("covariance", worst, now_seconds() - t0);
  }
  return {pass, detail};
}

// 4. uniform line family: magnitudes coincide, signals do not
Outcome criterion_counterexample_lines() {
  bool pass = true;
  std::string detail;
  const Grid pair_grid{-12.0, 1.0 / 32.0, 768};
  const WindowSpec w;
  for (const auto& [u, b] : std::array<std::pair<double, double>, 3>{
           std::pair<double, double>{1.0, 0.5}, {2.0, 1.0}, {4.0, 2.0}}) {
    const double t0 = now_seconds();
    double worst_gap = 0.0, worst_phase = 2.0, worst_off = 1.0;
    for (double a : {0.0, 1.0}) {
      const LctParams A = a == 0.0 ? LctParams{0.0, b, -1.0 / b, 0.0}
                                   : LctParams{1.0, b, 0.0, 1.0};
      const AmbiguousPair pair = counterexample_pair(u, A, pair_grid);
      const double M = u + 6.0 * std::abs(b);
      const Grid mu{-M, 2.0 * M / 256.0, 257};
      const SamplingSet lines = counterexample_lines(b, u, 4, mu);
      const AmbiguityReport rep = verify_ambiguity(pair, lines);
      worst_gap = std::max(worst_gap, rep.max_gap);
      worst_phase = std::min(worst_phase, rep.phase_distance);
      const double x_off = std::acos(-1.0) * b / (2.0 * u);
      std::vector<TfPoint> off;
      for (std::size_t j = 0; j < mu.n; ++j)
        off.push_back({x_off, mu.point(j)});
      const SamplingSet off_set = explicit_set(off);
      worst_off = std::min(
          worst_off, measurement_gap(measure(pair.f_plus, A, w, off_set),
                                     measure(pair.f_minus, A, w, off_set)));
    }
    const double secs = now_seconds() - t0;
    const bool ok = worst_gap <= 1e-8 && worst_phase >= 0.5 &&
                    worst_off >= 1e-3 && secs < 10.0;
    pass = pass && ok;
    if (!detail.empty()) detail += ", ";
    detail += "u=" + fmt(u) + ": gap " + fmt(worst_gap) + " phase " +
              fmt(worst_phase) + " off " + fmt(worst_off) +
              (ok ? "" : " FAIL");
  }
  return {pass, detail};
}

// 5. square-root lattice separates the pair the uniform lines cannot
Outcome criterion_sqrt_separation() {
  const double t0 = now_seconds();
  const Grid pair_grid{-12.0, 1.0 / 32.0, 768};
  const LctParams A{1.0, 1.0, 0.0, 1.0};
  const double u = 2.0;
  const AmbiguousPair pair = counterexample_pair(u, A, pair_grid);

  WindowSpec half;
  half.gamma = 0.5;
  if (!sqrt_admissible(half.gamma, half.gamma, A.b, 0.4, 0.4))
    return {false, "lattice unexpectedly inadmissible"};
  const SamplingSet lat = sqrt_lattice(0.4, 0.4, 20);
  const double sqrt_gap =
      measurement_gap(measure(pair.f_plus, A, half, lat),
                      measure(pair.f_minus, A, half, lat));

  const WindowSpec unit;  // the window the pair construction is tuned to
  const double M = u + 6.0 * std::abs(A.b);
  const Grid mu{-M, 2.0 * M / 256.0, 257};
  const SamplingSet lines = counterexample_lines(A.b, u, 4, mu);
  const double line_gap =
      measurement_gap(measure(pair.f_plus, A, unit, lines),
                      measure(pair.f_minus, A, unit, lines));
  const double secs = now_seconds() - t0;
  return {sqrt_gap >= 1e-3 && line_gap < 1e-3 && secs < 20.0,
          "sqrt gap " + fmt(sqrt_gap) + ", line gap " + fmt(line_gap) + ", " +
              fmt(secs) + " s"};
}

// 6. solver recovery rate plus the gradient cross-check
Outcome criterion_solver_recovery() {
  const double t0 = now_seconds();
  const LctParams A{1.0, 1.0, 0.0, 1.0};
  WindowSpec w;
  w.gamma = 0.5;
  const SamplingSet lattice = sqrt_lattice(0.4, 0.4, 20);
  const Grid grid{-2.56, 0.02, 256};
  int successes = 0;
  for (int t = 0; t < 10; ++t) {
    const Signal f = random_gaussian_mixture(grid, derive_seed(3, 2 * t));
    const MeasurementSet meas = measure(f, A, w, lattice);
    SolverConfig cfg;
    cfg.restarts = 8;
    cfg.max_iters = 500;
    cfg.seed = derive_seed(3, 2 * t + 1);
    try {
      const SolverResult res = solve(meas, grid, cfg);
      const double phase = global_phase_distance(res.estimate, f) /
                           std::max(l2_norm(f), 1e-300);
      successes += phase <= 1e-2 ? 1 : 0;
    } catch (const solver_failure&) {
    }
  }
  const double secs = now_seconds() - t0;

  const Grid small = make_centered_grid(4.0, 64);
  const Signal f = random_gaussian_mixture(small, 74);
  const MeasurementSet meas =
      measure(f, A, WindowSpec{}, sqrt_lattice(0.5, 0.5, 8));
  const Signal h = random_gaussian_mixture(small, 75);
  const Signal G = pr_loss_gradient(meas, h);
  double gmax = 0.0;
  for (const cdouble& z : G.v) gmax = std::max(gmax, std::abs(z));
  Rng rng(76);
  double worst_rel = 0.0;
  for (int i = 0; i < 32; ++i) {
    const std::size_t k =
        static_cast<std::size_t>(rng.uniform(0.0, double(small.n)));
    const double re = oracle::central_diff(meas, h, k, false, 1e-6);
    const double im = oracle::central_diff(meas, h, k, true, 1e-6);
    worst_rel = std::max(
        worst_rel, std::abs(G.v[k].real() - re) /
                       std::max(std::abs(re), 1e-3 * gmax));
    worst_rel = std::max(
        worst_rel, std::abs(G.v[k].imag() - im) /
                       std::max(std::abs(im), 1e-3 * gmax));
  }
  const bool ok = successes >= 8 && secs < 120.0 && worst_rel <= 1e-4;
  return {ok, std::to_string(successes) + "/10 recovered, grad rel " +
                  fmt(worst_rel) + ", " + fmt(secs) + " s"};
}

// 7. band-limited uniform lattice: equivalence detected, distinctness kept
Outcome criterion_bandlimited() {
  const double t0 = now_seconds();
  const BandlimitedReport rep =
      bandlimited_experiment(1.0, 0.2, fourier_params(), 100, 0);
  const double secs = now_seconds() - t0;
  const int rejected = run_tool("experiment bandlimited --m 0.25 --trials 3");
  const bool ok = rep.equal_rate == 1.0 && rep.distinguish_rate >= 0.99 &&
                  secs < 60.0 && rejected == 3;
  return {ok, "equal " + fmt(rep.equal_rate) + ", distinguish " +
                  fmt(rep.distinguish_rate) + ", m=0.25 exit " +
                  std::to_string(rejected) + ", " + fmt(secs) + " s"};
}

// 8. forward measurement families: phase invariant, signal sensitive
Outcome criterion_forward_families() {
  const Grid grid{-8.0, 1.0 / 16.0, 256};
  const LctParams A{1.0, 1.0, 0.0, 1.0};
  const double gamma = 0.5, alpha1 = std::sqrt(2.0), alpha2 = 1.0, a1 = 1.5;
  double max_inv = 0.0;
  int trip_ok = 0, sin_ok = 0, dil_ok = 0;
  const int trials = 100;
  for (int t = 0; t < trials; ++t) {
    const Signal f = random_gaussian_mixture(grid, derive_seed(0, 2 * t));
    const Signal h = random_gaussian_mixture(grid, derive_seed(0, 2 * t + 1));
    Rng alpha_rng(derive_seed(0, 1000000 + static_cast<std::uint64_t>(t)));
    const double alpha = alpha_rng.uniform(0.0, 2.0 * std::acos(-1.0));
    const Signal fp = scale(f, std::polar(1.0, alpha));

    const auto trip_f = lct_pr_triplet(f, A, gamma);
    const auto trip_h = lct_pr_triplet(h, A, gamma);
    const auto trip_p = lct_pr_triplet(fp, A, gamma);
    const auto sin_f = lct_pr_sin_pair(f, A, gamma, alpha1, alpha2);
    const auto sin_h = lct_pr_sin_pair(h, A, gamma, alpha1, alpha2);
    const auto sin_p = lct_pr_sin_pair(fp, A, gamma, alpha1, alpha2);
    const auto dil_f = lct_pr_dilation(f, A, gamma, a1);
    const auto dil_h = lct_pr_dilation(h, A, gamma, a1);
    const auto dil_p = lct_pr_dilation(fp, A, gamma, a1);

    double tg = 0.0, sg = 0.0, dg = 0.0;
    for (int k = 0; k < 3; ++k) {
      max_inv = std::max(max_inv, peak_relative_gap(trip_f[k].v, trip_p[k].v));
      max_inv = std::max(max_inv, peak_relative_gap(sin_f[k].v, sin_p[k].v));
      tg = std::max(tg, peak_relative_gap(trip_f[k].v, trip_h[k].v));
      sg = std::max(sg, peak_relative_gap(sin_f[k].v, sin_h[k].v));
    }
    for (int k = 0; k < 2; ++k) {
      max_inv = std::max(max_inv, peak_relative_gap(dil_f[k].v, dil_p[k].v));
      dg = std::max(dg, peak_relative_gap(dil_f[k].v, dil_h[k].v));
    }
    trip_ok += tg >= 1e-4 ? 1 : 0;
    sin_ok += sg >= 1e-4 ? 1 : 0;
    dil_ok += dg >= 1e-4 ? 1 : 0;
  }
  const bool ok = max_inv <= 1e-12 && trip_ok >= 99 && sin_ok >= 99 &&
                  dil_ok >= 99;
  return {ok, "invariance " + fmt(max_inv) + ", rates " +
                  std::to_string(trip_ok) + "/" + std::to_string(sin_ok) +
                  "/" + std::to_string(dil_ok) + " of 100"};
}

// 9. byte-identical reruns of a verify suite and an experiment
Outcome criterion_reproducibility() {
  const auto rerun_identical =
      [](const std::string& args,
         const std::vector<std::string>& files) -> bool {
    const fs::path d1 = scratch("rep1");
    const fs::path d2 = scratch("rep2");
    if (run_tool("--seed 5 --out-dir \"" + d1.string() + "\" " + args) != 0)
      return false;
    if (run_tool("--seed 5 --out-dir \"" + d2.string() + "\" " + args) != 0)
      return false;
    for (const std::string& f : files) {
      const std::string a = read_text_file((d1 / f).string());
      const std::string b = read_text_file((d2 / f).string());
      if (a != b || a.empty()) return false;
    }
    return true;
  };
  const bool verify_ok = rerun_identical("verify lemma26", {"residuals.csv"});
  const bool exp_ok = rerun_identical("experiment prop24 --trials 5",
                                      {"trials.csv", "summary.json"});
  return {verify_ok && exp_ok,
          std::string("verify ") + (verify_ok ? "identical" : "DIFFERS") +
              ", experiment " + (exp_ok ? "identical" : "DIFFERS")};
}

}  // namespace

int main() {
  struct Entry {
    int id;
    const char* name;
    std::function<Outcome()> fn;
  };
  const std::vector<Entry> criteria = {
      {1, "fast transform vs direct quadrature", criterion_fast_vs_direct},
      {2, "fourier degeneration vs independent stft",
       criterion_fourier_degeneration},
      {3, "operator identity suites", criterion_identity_suites},
      {4, "uniform-line ambiguity", criterion_counterexample_lines},
      {5, "sqrt lattice separation", criterion_sqrt_separation},
      {6, "solver recovery", criterion_solver_recovery},
      {7, "bandlimited lattice rates", criterion_bandlimited},
      {8, "forward measurement families", criterion_forward_families},
      {9, "seeded rerun reproducibility", criterion_reproducibility},
  };
  int failures = 0;
  for (const Entry& e : criteria) {
    const double t0 = now_seconds();
    Outcome o;
    try {
      o = e.fn();
    } catch (const std::exception& ex) {
      o = {false, std::string("exception: ") + ex.what()};
    }
    const double secs = now_seconds() - t0;
    std::printf("[%s] criterion %d: %s (%s; %.1f s)\n",
                o.pass ? "PASS" : "FAIL", e.id, e.name, o.detail.c_str(),
                secs);
    std::fflush(stdout);
    failures += o.pass ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n",
              static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures;
}
