#pragma once

#include <cstddef>
#include <vector>

#include "canonica/signal.hpp"

namespace canonica {

// One time-frequency sampling node.
struct TfPoint {
  double x = 0.0;
  double mu = 0.0;
};

// Deduplicated sampling nodes in lexicographic (x, mu) order, tagged with the
// generator that produced them.
struct SamplingSet {
  enum class Kind { Sqrt, Lines, Bandlimited, Explicit };
  Kind kind = Kind::Explicit;
  double tau = 0.0, v = 0.0;      // Sqrt
  int K = 0;                      // Sqrt
  double b = 0.0, u = 0.0;        // Lines
  int x_count = 0;                // Lines
  double band = 0.0, m = 0.0;     // Bandlimited (band = B)
  int x_max = 0, mu_count = 0;    // Bandlimited
  std::vector<TfPoint> points;
};

// Square-root lattice {sigma tau sqrt(k)} x {sigma' v sqrt(k')}, k,k' = 0..K.
// (2K+1)^2 nodes after deduplicating k = 0. K >= 1.
SamplingSet sqrt_lattice(double tau, double v, int K);

// Uniform line family x in (pi b / u) Z, |index| <= x_count, crossed with the
// nodes of mu_grid. Requires b != 0, u > 0, x_count >= 1.
SamplingSet counterexample_lines(double b, double u, int x_count,
                                 const Grid& mu_grid);

// {0..x_max} x {j m b : |j| <= mu_count}. Requires 0 < m < 1/(4B); the
// boundary m = 1/(4B) is rejected.
SamplingSet bandlimited_lattice(double B, double m, double b, int x_max,
                                int mu_count);

// Caller-supplied nodes, sorted lexicographically with exact duplicates
// removed.
SamplingSet explicit_set(std::vector<TfPoint> points);

// Density test for the square-root lattice against a window of Gaussian decay
// rate m (time) and strip growth rate n: tau < 1/sqrt(2 n e) and
// v < |b| sqrt(2 m / e). strict additionally caps tau at the smaller
// 1/(sqrt(2n) e) reading.
bool sqrt_admissible(double m, double n, double b, double tau, double v,
                     bool strict = false);

// Slack of the lattice generator under the density bound:
// 1/sqrt(n e) - min over 1 <= k <= K of (tau sqrt(k))/sqrt(k). Positive
// means the density condition holds.
double density_margin(double tau, double n, int K);

}  // namespace canonica
