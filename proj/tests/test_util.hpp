#ifndef PAIRSIM_TEST_UTIL_HPP
#define PAIRSIM_TEST_UTIL_HPP

#include <cmath>
#include <functional>
#include <vector>

#include "pairsim/config.hpp"
#include "pairsim/jsa.hpp"

namespace pairsim::test {

// Default source resolved at the degenerate temperature, on a configurable
// grid size (smaller than production for unit-test speed).
inline ResolvedSetup default_setup(int points = 256) {
  RunConfig cfg = default_config();
  cfg.grid.points_per_axis = points;
  return resolve_setup(cfg);
}

inline JsaGrid default_jsa(int points = 256) {
  const ResolvedSetup s = default_setup(points);
  return build_jsa(s.sellmeier, s.crystal, s.pump, s.grid);
}

// Symmetric separable Gaussian fixture A = f(ws) f(wi), single Schmidt mode.
inline JsaGrid separable_gaussian(double center = 1207.0, double sigma = 0.5,
                                  int points = 256, double half_span = 3.0) {
  FrequencyGrid grid{center, half_span, points};
  auto f = [=](double w) {
    const double d = (w - center) / sigma;
    return std::exp(-0.5 * d * d);
  };
  return JsaGrid::from_function(grid, [f](double ws, double wi) { return f(ws) * f(wi); });
}

// Trapezoid integral of |A|^2 over the grid.
inline double density_integral(const JsaGrid& jsa) {
  const auto w = jsa.grid.weights();
  const int n = jsa.grid.points_per_axis;
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    double row = 0.0;
    for (int j = 0; j < n; ++j) row += jsa.at(i, j) * jsa.at(i, j) * w[j];
    total += row * w[i];
  }
  return total;
}

// Trapezoid integral of a sampled spectrum on its uniform axis.
inline double spectrum_integral(const Spectrum& s) {
  const int n = static_cast<int>(s.value.size());
  const double step = s.omega_rad_ps[1] - s.omega_rad_ps[0];
  double total = 0.5 * (s.value.front() + s.value.back());
  for (int i = 1; i + 1 < n; ++i) total += s.value[i];
  return total * step;
}

} // namespace pairsim::test

#endif
