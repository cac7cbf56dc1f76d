#include "canonica/phase_retrieval.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <utility>

#include "canonica/rng.hpp"

namespace canonica {
namespace {

// A restart whose independently recomputed residual reaches this is good
// enough to skip the remaining restarts.
constexpr double kSuccessResidual = 1e-10;
constexpr double kArmijo = 1e-4;
constexpr int kMaxHalvings = 30;
constexpr int kPlateauIters = 10;
constexpr double kPlateauRel = 1e-14;

Signal abs_signal(const Signal& f) {
  Signal out = f;
  for (cdouble& z : out.v) z = cdouble(std::abs(z), 0.0);
  return out;
}

Signal window_multiply(const Signal& f, const WindowSpec& w) {
  Signal out = f;
  for (std::size_t k = 0; k < out.size(); ++k)
    out.v[k] *= evaluate_window(w, out.grid.point(k));
  return out;
}

double magnitude_gap(const std::vector<double>& a,
                     const std::vector<double>& b) {
  double peak = 0.0, gap = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    peak = std::max({peak, a[i], b[i]});
    gap = std::max(gap, std::abs(a[i] - b[i]));
  }
  return gap / std::max(peak, kNormFloor);
}

// Dense measurement operator V = M h with rows matching stlct_analytic.
struct PrProblem {
  Grid grid;
  std::size_t rows = 0;
  std::vector<cdouble> M;   // row-major rows x grid.n
  std::vector<double> m2;   // squared target magnitudes
  double S = 1.0;           // sum m^4, floored to 1 when all-zero

  void forward(const std::vector<cdouble>& h, std::vector<cdouble>& V) const {
    V.assign(rows, cdouble(0.0, 0.0));
    for (std::size_t l = 0; l < rows; ++l) {
      const cdouble* row = &M[l * grid.n];
      cdouble acc(0.0, 0.0);
      for (std::size_t k = 0; k < grid.n; ++k) acc += row[k] * h[k];
      V[l] = acc;
    }
  }

  double loss(const std::vector<cdouble>& V) const {
    double acc = 0.0;
    for (std::size_t l = 0; l < rows; ++l) {
      const double r = std::norm(V[l]) - m2[l];
      acc += r * r;
    }
    return acc / S;
  }

  // G = (4/S) M^H((|V|^2 - m^2) . V), the Wirtinger gradient dL/d conj(h).
  void gradient(const std::vector<cdouble>& V, std::vector<cdouble>& G) const {
    G.assign(grid.n, cdouble(0.0, 0.0));
    for (std::size_t l = 0; l < rows; ++l) {
      const cdouble w = (std::norm(V[l]) - m2[l]) * V[l];
      const cdouble* row = &M[l * grid.n];
      for (std::size_t k = 0; k < grid.n; ++k) G[k] += std::conj(row[k]) * w;
    }
    const double s = 4.0 / S;
    for (cdouble& z : G) z *= s;
  }
};

PrProblem build_problem(const MeasurementSet& meas, const Grid& grid) {
  if (grid.n == 0 || !(grid.dt > 0.0))
    throw input_error("solve: grid must have n >= 1 and dt > 0");
  const std::size_t rows = meas.sampling.points.size();
  if (rows == 0) throw input_error("solve: empty sampling set");
  if (meas.magnitudes.size() != rows)
    throw input_error("solve: magnitudes and sampling points disagree");
  for (double m : meas.magnitudes)
    if (!(m >= 0.0)) throw input_error("solve: magnitudes must be >= 0");
  const LctParams& A = meas.params;
  require_unit_det(A);
  if (A.b == 0.0) throw input_error("solve: measurement requires b != 0");

  PrProblem P;
  P.grid = grid;
  P.rows = rows;
  P.M.resize(rows * grid.n);
  const cdouble pref = kernel_prefactor(A.b, NormalizationMode::Unitary);
  const double half_chirp = A.a / (2.0 * A.b);
  for (std::size_t l = 0; l < rows; ++l) {
    const double x = meas.sampling.points[l].x;
    const double mu = meas.sampling.points[l].mu;
    const cdouble row_factor =
        pref * std::polar(1.0, A.d * mu * mu / (2.0 * A.b)) * grid.dt;
    cdouble* row = &P.M[l * grid.n];
    for (std::size_t k = 0; k < grid.n; ++k) {
      const double t = grid.point(k);
      row[k] = row_factor * evaluate_window(meas.window, t - x) *
               std::polar(1.0, half_chirp * t * t - t * mu / A.b);
    }
  }
  P.m2.resize(rows);
  double S = 0.0;
  for (std::size_t l = 0; l < rows; ++l) {
    P.m2[l] = meas.magnitudes[l] * meas.magnitudes[l];
    S += P.m2[l] * P.m2[l];
  }
  P.S = S > 0.0 ? S : 1.0;
  return P;
}

}  // namespace

MeasurementSet measure(const Signal& f, const LctParams& A,
                       const WindowSpec& g, const SamplingSet& sampling) {
  const auto samples =
      stlct_analytic(A, g, f, sampling.points, NormalizationMode::Unitary);
  MeasurementSet meas;
  meas.params = A;
  meas.window = g;
  meas.sampling = sampling;
  meas.magnitudes.resize(samples.values.size());
  for (std::size_t i = 0; i < samples.values.size(); ++i)
    meas.magnitudes[i] = std::abs(samples.values[i]);
  return meas;
}

double measurement_gap(const MeasurementSet& p, const MeasurementSet& q) {
  if (p.magnitudes.size() != q.magnitudes.size())
    throw input_error("measurement_gap: size mismatch");
  return magnitude_gap(p.magnitudes, q.magnitudes);
}

AmbiguousPair counterexample_pair(double u, const LctParams& A,
                                  const Grid& grid) {
  if (!(u >= 0.0)) throw input_error("counterexample_pair: need u >= 0");
  require_unit_det(A);
  if (A.b == 0.0) throw input_error("counterexample_pair: need b != 0");
  if (grid.n == 0 || !(grid.dt > 0.0))
    throw input_error("counterexample_pair: empty grid");

  const double left = grid.point(0), right = grid.point(grid.n - 1);
  const double edge =
      std::max(std::exp(-left * left), std::exp(-right * right));
  if (edge > 1e-8)
    throw parameter_error(
        "counterexample_pair: grid too narrow, Gaussian edge value above "
        "1e-8");
  if (edge > 1e-12)
    warn("counterexample_pair: Gaussian edge value above 1e-12");

  const Signal phi = make_gaussian(1.0, grid);
  const Signal mp = generalized_modulation(A, u, phi);
  const Signal mm = generalized_modulation(A, -u, phi);
  AmbiguousPair pair;
  pair.u = u;
  pair.params = A;
  pair.f_plus =
      add(scale(mp, cdouble(1.0, 1.0)), scale(mm, cdouble(1.0, -1.0)));
  pair.f_minus =
      add(scale(mp, cdouble(1.0, -1.0)), scale(mm, cdouble(1.0, 1.0)));
  return pair;
}

AmbiguityReport verify_ambiguity(const AmbiguousPair& pair,
                                 const SamplingSet& sampling) {
  WindowSpec phi;
  phi.kind = WindowSpec::Kind::Gaussian;
  phi.gamma = 1.0;
  const MeasurementSet mp =
      measure(pair.f_plus, pair.params, phi, sampling);
  const MeasurementSet mm =
      measure(pair.f_minus, pair.params, phi, sampling);
  AmbiguityReport rep;
  rep.max_gap = magnitude_gap(mp.magnitudes, mm.magnitudes);
  rep.phase_distance = global_phase_distance(pair.f_plus, pair.f_minus) /
                       std::max(l2_norm(pair.f_plus), kNormFloor);
  return rep;
}

double pr_loss(const MeasurementSet& meas, const Signal& h) {
  require_consistent(h);
  const PrProblem P = build_problem(meas, h.grid);
  std::vector<cdouble> V;
  P.forward(h.v, V);
  return P.loss(V);
}

Signal pr_loss_gradient(const MeasurementSet& meas, const Signal& h) {
  require_consistent(h);
  const PrProblem P = build_problem(meas, h.grid);
  std::vector<cdouble> V;
  P.forward(h.v, V);
  Signal G = make_signal(h.grid);
  P.gradient(V, G.v);
  return G;
}

SolverResult solve(const MeasurementSet& meas, const Grid& grid,
                   const SolverConfig& cfg) {
  if (cfg.restarts < 1 || cfg.max_iters < 1 || !(cfg.step > 0.0) ||
      !(cfg.grad_tol > 0.0))
    throw input_error("solve: restarts, max_iters, step, grad_tol must be "
                      "positive");
  const PrProblem P = build_problem(meas, grid);
  if (P.rows < 2 * grid.n)
    warn("solve: fewer than 2n measurements, recovery may be "
         "underdetermined");
  double measured_energy = 0.0;
  for (double m2 : P.m2) measured_energy += m2;

  bool have_best = false;
  SolverResult best;
  std::vector<cdouble> V, Vtry, G;
  // Each restart screens a handful of seeded mixture draws by initial loss
  // and descends from the cheapest one. A screening pass costs one forward
  // apply per candidate, which is noise next to the descent itself.
  constexpr int kInitCandidates = 6;
  for (int r = 0; r < cfg.restarts; ++r) {
    Signal h = make_signal(grid);
    double L = std::numeric_limits<double>::infinity();
    std::vector<cdouble> Vc;
    for (int j = 0; j < kInitCandidates; ++j) {
      Signal c = random_gaussian_mixture(
          grid, derive_seed(cfg.seed, r * kInitCandidates + j));
      P.forward(c.v, Vc);
      double init_energy = 0.0;
      for (const cdouble& z : Vc) init_energy += std::norm(z);
      const double s =
          init_energy > 0.0 ? std::sqrt(measured_energy / init_energy) : 0.0;
      for (std::size_t k = 0; k < grid.n; ++k) c.v[k] *= s;
      for (cdouble& z : Vc) z *= s;
      const double Lc = P.loss(Vc);
      if (std::isfinite(Lc) && Lc < L) {
        L = Lc;
        h = std::move(c);
        V.swap(Vc);
      }
    }
    if (!std::isfinite(L)) {
      warn("solve: restart " + std::to_string(r) +
           " aborted, non-finite initial loss");
      continue;
    }
    double eta = cfg.step;
    int iters = 0;
    int plateau = 0;
    std::vector<cdouble> htry(grid.n);
    std::vector<cdouble> hprev, gprev;
    // Non-monotone acceptance window; spectral steps oscillate slightly and
    // a strict Armijo test would reject most of them.
    std::array<double, 10> recent;
    recent.fill(L);
    std::size_t recent_pos = 0;
    for (int it = 0; it < cfg.max_iters; ++it) {
      P.gradient(V, G);
      double gmax = 0.0, gn2 = 0.0;
      for (const cdouble& z : G) {
        gmax = std::max(gmax, std::abs(z));
        gn2 += std::norm(z);
      }
      if (gmax <= cfg.grad_tol) break;

      if (!hprev.empty()) {
        // Barzilai-Borwein spectral step from the last accepted move,
        // alternating the long and short variants to damp zigzag.
        double ss = 0.0, sy = 0.0, yy = 0.0;
        for (std::size_t k = 0; k < grid.n; ++k) {
          const cdouble ds = h.v[k] - hprev[k];
          const cdouble dg = G[k] - gprev[k];
          ss += std::norm(ds);
          sy += (std::conj(ds) * dg).real();
          yy += std::norm(dg);
        }
        if (std::isfinite(ss) && std::isfinite(sy) && std::isfinite(yy) &&
            sy > 0.0 && ss > 0.0 && yy > 0.0) {
          const double bb = it % 2 == 0 ? ss / sy : sy / yy;
          eta = std::min(std::max(bb, 1e-12), 1e6);
        } else {
          eta = std::min(eta * 1.5, 1e6);
        }
      }

      const double lref = *std::max_element(recent.begin(), recent.end());
      bool accepted = false;
      double improvement = 0.0;
      for (int bt = 0; bt <= kMaxHalvings; ++bt) {
        for (std::size_t k = 0; k < grid.n; ++k)
          htry[k] = h.v[k] - eta * G[k];
        P.forward(htry, Vtry);
        const double Lt = P.loss(Vtry);
        if (std::isfinite(Lt) && Lt <= lref - kArmijo * eta * gn2) {
          improvement = (L - Lt) / std::max(L, kNormFloor);
          hprev = h.v;
          gprev = G;
          h.v.swap(htry);
          V.swap(Vtry);
          L = Lt;
          accepted = true;
          break;
        }
        eta *= 0.5;
      }
      if (!accepted) break;
      recent[recent_pos] = L;
      recent_pos = (recent_pos + 1) % recent.size();
      iters = it + 1;
      if (std::abs(improvement) < kPlateauRel) {
        if (++plateau >= kPlateauIters) break;
      } else {
        plateau = 0;
      }
    }

    // Residual through the public measurement path, independent of the
    // solver's cached operator.
    const MeasurementSet re =
        measure(h, meas.params, meas.window, meas.sampling);
    double res = 0.0;
    for (std::size_t l = 0; l < P.rows; ++l) {
      const double d = re.magnitudes[l] * re.magnitudes[l] - P.m2[l];
      res += d * d;
    }
    res /= P.S;
    if (!std::isfinite(res)) {
      warn("solve: restart " + std::to_string(r) +
           " aborted, non-finite residual");
      continue;
    }
    if (!have_best || res < best.residual) {
      best.estimate = std::move(h);
      best.residual = res;
      best.iterations_used = iters;
      best.restart_index = r;
      have_best = true;
    }
    if (best.residual <= kSuccessResidual) break;
  }
  if (!have_best) {
    SolverResult partial;
    partial.estimate = make_signal(grid);
    throw solver_failure("solve: every restart aborted on a non-finite loss",
                         partial);
  }
  return best;
}

std::array<Signal, 3> lct_pr_triplet(const Signal& f, const LctParams& A,
                                     double gamma) {
  require_consistent(f);
  if (!(gamma > 0.0)) throw input_error("lct_pr_triplet: need gamma > 0");
  WindowSpec P;
  P.kind = WindowSpec::Kind::Gaussian;
  P.gamma = gamma;
  const Signal Pf = window_multiply(f, P);
  Signal QPf = Pf;
  for (std::size_t k = 0; k < QPf.size(); ++k)
    QPf.v[k] *= QPf.grid.point(k);
  const Signal IQPf = add(Pf, QPf);
  const auto mode = NormalizationMode::Unitary;
  return {abs_signal(lct_fast(A, mode, Pf)),
          abs_signal(lct_fast(A, mode, QPf)),
          abs_signal(lct_fast(A, mode, IQPf))};
}

std::array<Signal, 3> lct_pr_sin_pair(const Signal& f, const LctParams& A,
                                      double gamma, double alpha1,
                                      double alpha2) {
  require_consistent(f);
  if (!(gamma > 0.0) || alpha1 < 0.0 || alpha2 < 0.0)
    throw input_error("lct_pr_sin_pair: need gamma > 0, alphas >= 0");
  if (alpha1 > 0.0 && alpha2 > 0.0) {
    const double ratio = alpha1 / alpha2;
    for (int q = 1; q <= 100; ++q) {
      const double p = std::round(ratio * q);
      if (std::abs(ratio - p / q) < 1e-9) {
        char buf[96];
        std::snprintf(buf, sizeof buf,
                      "lct_pr_sin_pair: alpha1/alpha2 is close to %g/%d",
                      p, q);
        warn(buf);
        break;
      }
    }
  }
  const double pi = std::acos(-1.0);
  Signal Pf = f, P1f = f, P2f = f;
  for (std::size_t k = 0; k < f.size(); ++k) {
    const double t = f.grid.point(k);
    const double gauss = std::exp(-gamma * t * t);
    Pf.v[k] *= gauss;
    P1f.v[k] *= std::sin(alpha1 * pi * t) * gauss;
    P2f.v[k] *= std::sin(alpha2 * pi * t) * gauss;
  }
  const auto mode = NormalizationMode::Unitary;
  return {abs_signal(lct_fast(A, mode, Pf)),
          abs_signal(lct_fast(A, mode, P1f)),
          abs_signal(lct_fast(A, mode, P2f))};
}

std::array<Signal, 2> lct_pr_dilation(const Signal& f, const LctParams& A,
                                      double gamma, double a1) {
  require_consistent(f);
  if (!(gamma > 0.0) || !(a1 > 0.0))
    throw input_error("lct_pr_dilation: need gamma > 0, a1 > 0");
  if (std::abs(a1 - 1.0) < 1e-12)
    throw parameter_error(
        "lct_pr_dilation: a1 = 1 degenerates the difference window to zero");
  const double rs = std::sqrt(a1);
  Signal Pf = f, Df = f;
  for (std::size_t k = 0; k < f.size(); ++k) {
    const double t = f.grid.point(k);
    Pf.v[k] *= std::exp(-gamma * t * t);
    Df.v[k] *= std::exp(-gamma * (t / a1) * (t / a1)) / rs -
               rs * std::exp(-gamma * t * t);
  }
  const auto mode = NormalizationMode::Unitary;
  return {abs_signal(lct_fast(A, mode, Pf)),
          abs_signal(lct_fast(A, mode, Df))};
}

Signal random_gaussian_mixture(const Grid& grid, std::uint64_t seed,
                               int components) {
  if (grid.n == 0 || !(grid.dt > 0.0))
    throw input_error("random_gaussian_mixture: empty grid");
  if (components < 1)
    throw input_error("random_gaussian_mixture: need components >= 1");
  Rng rng(seed);
  const double span = grid.dt * static_cast<double>(grid.n);
  Signal out = make_signal(grid);
  for (int c = 0; c < components; ++c) {
    const cdouble amp(rng.normal(), rng.normal());
    // Centers cluster at mid-grid and frequencies stay at unit scale, so
    // every bump decays well before the boundary and the time-frequency
    // footprint sits inside the compact lattices the retrieval experiments
    // sample. Draw order is part of the seeding contract.
    const double center = grid.t0 + span * (0.5 + rng.uniform(-0.03, 0.03));
    const double width = rng.uniform(1.0, 1.5);
    const double freq = rng.uniform(-0.4, 0.4);
    for (std::size_t k = 0; k < grid.n; ++k) {
      const double t = grid.point(k);
      out.v[k] += amp * std::exp(-width * (t - center) * (t - center)) *
                  std::polar(1.0, freq * t);
    }
  }
  return out;
}

Signal random_bandlimited(const Grid& grid, double B, std::uint64_t seed) {
  if (grid.n == 0 || !(grid.dt > 0.0))
    throw input_error("random_bandlimited: empty grid");
  if (!(B > 0.0)) throw input_error("random_bandlimited: need B > 0");
  constexpr int kModes = 33;
  Rng rng(seed);
  Signal out = make_signal(grid);
  for (int j = 0; j < kModes; ++j) {
    const cdouble c(rng.normal(), rng.normal());
    const double omega = -B + 2.0 * B * j / (kModes - 1);
    for (std::size_t k = 0; k < grid.n; ++k)
      out.v[k] += c * std::polar(1.0, omega * grid.point(k));
  }
  return out;
}

BandlimitedReport bandlimited_experiment(double B, double m,
                                         const LctParams& A, int trials,
                                         std::uint64_t seed) {
  if (trials < 1) throw input_error("bandlimited_experiment: need trials >= 1");
  require_unit_det(A);
  // Throws on inadmissible m before any measurement work.
  const SamplingSet lattice = bandlimited_lattice(B, m, A.b, 15, 16);
  const Grid grid{-8.0, 1.0 / 16.0, 512};
  WindowSpec phi;
  phi.kind = WindowSpec::Kind::Gaussian;
  phi.gamma = 1.0;

  BandlimitedReport rep;
  rep.trials.reserve(static_cast<std::size_t>(trials));
  int equal_ok = 0, distinct_ok = 0;
  bool all_pass = true;
  for (int i = 0; i < trials; ++i) {
    const Signal f =
        random_bandlimited(grid, B, derive_seed(seed, 3 * uint64_t(i)));
    Rng phase_rng(derive_seed(seed, 3 * uint64_t(i) + 1));
    const double alpha = 2.0 * std::acos(-1.0) * phase_rng.uniform();
    const Signal fe = scale(f, std::polar(1.0, alpha));
    const Signal h =
        random_bandlimited(grid, B, derive_seed(seed, 3 * uint64_t(i) + 2));
    const double hs =
        0.1 * l2_norm(f) / std::max(l2_norm(h), kNormFloor);
    const Signal g = add(f, scale(h, hs));

    const MeasurementSet mf = measure(f, A, phi, lattice);
    const MeasurementSet me = measure(fe, A, phi, lattice);
    const MeasurementSet mg = measure(g, A, phi, lattice);

    BandlimitedTrial row;
    row.trial = i;
    row.equivalent_gap = magnitude_gap(mf.magnitudes, me.magnitudes);
    row.distinct_gap = magnitude_gap(mf.magnitudes, mg.magnitudes);
    const double nf = std::max(l2_norm(f), kNormFloor);
    row.equivalent_phase = global_phase_distance(f, fe) / nf;
    row.distinct_phase = global_phase_distance(f, g) / nf;
    rep.trials.push_back(row);

    const bool eq_ok = row.equivalent_gap <= 1e-10;
    const bool di_ok = row.distinct_gap >= 1e-6;
    equal_ok += eq_ok ? 1 : 0;
    distinct_ok += di_ok ? 1 : 0;
    all_pass = all_pass && eq_ok && di_ok;
  }
  rep.equal_rate = double(equal_ok) / trials;
  rep.distinguish_rate = double(distinct_ok) / trials;
  rep.all_pass = all_pass;
  return rep;
}

}  // namespace canonica
