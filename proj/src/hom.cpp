#include "pairsim/hom.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "pairsim/errors.hpp"

namespace pairsim {

namespace {

struct OverlapSums {
  double magnitude = 0.0;  // sum |A_ij A_ji| w_i w_j
  double signed_sum = 0.0; // sum  A_ij A_ji  w_i w_j
  double density = 0.0;    // sum  A_ij^2     w_i w_j
};

OverlapSums overlap_sums(const JsaGrid& jsa) {
  const int n = jsa.grid.points_per_axis;
  const auto w = jsa.grid.weights();
  OverlapSums s;
  for (int i = 0; i < n; ++i) {
    double mag = 0.0, sgn = 0.0, den = 0.0;
    for (int j = 0; j < n; ++j) {
      const double a = jsa.at(i, j);
      const double p = a * jsa.at(j, i) * w[j];
      sgn += p;
      mag += std::abs(p);
      den += a * a * w[j];
    }
    s.magnitude += mag * w[i];
    s.signed_sum += sgn * w[i];
    s.density += den * w[i];
  }
  if (!(s.density > 0.0)) throw NumericalError("overlap of a zero-norm amplitude grid");
  return s;
}

} // namespace

double overlap_visibility(const JsaGrid& jsa) {
  const OverlapSums s = overlap_sums(jsa);
  return s.magnitude / s.density;
}

double signed_overlap(const JsaGrid& jsa) {
  const OverlapSums s = overlap_sums(jsa);
  return s.signed_sum / s.density;
}

HomCurve dip_curve(const JsaGrid& jsa, double delay_span_ps, int points) {
  if (!(delay_span_ps > 0.0)) throw RangeError("delay span must be > 0");
  if (points < 9) throw RangeError("delay grid needs at least 9 points");

  const int n = jsa.grid.points_per_axis;
  const auto w = jsa.grid.weights();
  const double step = jsa.grid.step();

  // On the uniform axis the delay phase e^{i(w_j - w_i) tau} depends only on
  // j - i, so the double sum collapses onto the 2n-1 skew diagonals of
  // P_ij = A_ij A_ji w_i w_j. P is symmetric, hence D_m = D_{-m} and the
  // curve is real and even in tau.
  std::vector<double> diag(n, 0.0);  // D_m for m >= 0
  double density = 0.0;
  for (int i = 0; i < n; ++i) {
    double den = 0.0;
    for (int j = i; j < n; ++j) {
      const double p = jsa.at(i, j) * jsa.at(j, i) * w[i] * w[j];
      diag[j - i] += p;
    }
    for (int j = 0; j < n; ++j) {
      const double a = jsa.at(i, j);
      den += a * a * w[j];
    }
    density += den * w[i];
  }
  if (!(density > 0.0)) throw NumericalError("dip curve of a zero-norm amplitude grid");

  HomCurve curve;
  curve.delay_ps.resize(points);
  curve.coincidence.resize(points);
  int min_idx = 0;
  for (int k = 0; k < points; ++k) {
    const double tau = -delay_span_ps + 2.0 * delay_span_ps * k / (points - 1);
    double num = diag[0];
    for (int m = 1; m < n; ++m) num += 2.0 * diag[m] * std::cos(m * step * tau);
    curve.delay_ps[k] = tau;
    curve.coincidence[k] = 1.0 - num / density;
    if (curve.coincidence[k] < curve.coincidence[min_idx]) min_idx = k;
  }

  if (min_idx == 0 || min_idx == points - 1)
    throw SolverError("delay span too small: dip minimum sits on the grid edge");

  curve.visibility = 1.0 - curve.coincidence[min_idx];
  curve.dip_center_ps = curve.delay_ps[min_idx];

  const double level = 1.0 - curve.visibility / 2.0;
  auto cross = [&](int dir) -> double {
    int i = min_idx;
    while (true) {
      const int next = i + dir;
      if (next < 0 || next >= points)
        throw SolverError("delay span too small to bracket the dip half depth");
      if (curve.coincidence[next] >= level) {
        const double v0 = curve.coincidence[i], v1 = curve.coincidence[next];
        const double t = (level - v0) / (v1 - v0);
        return curve.delay_ps[i] + t * (curve.delay_ps[next] - curve.delay_ps[i]);
      }
      i = next;
    }
  };
  const double lo = cross(-1);
  const double hi = cross(+1);
  curve.dip_fwhm_ps = hi - lo;
  return curve;
}

double dip_fwhm_vs_group_delay(const SellmeierSet& set, const CrystalSpec& crystal,
                               double pump_center_rad_ps) {
  const TaylorCoefficients c = taylor_coefficients(set, crystal, pump_center_rad_ps);
  return std::abs(c.tau_s_ps_um - c.tau_i_ps_um) * crystal.length_um();
}

} // namespace pairsim
