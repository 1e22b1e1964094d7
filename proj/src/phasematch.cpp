#include "pairsim/phasematch.hpp"

#include <cmath>
#include <sstream>

#include "pairsim/units.hpp"

namespace pairsim {

void CrystalSpec::validate() const {
  if (!(length_mm > 0.0)) throw ConfigError("crystal.length_mm must be > 0");
  if (!(poling_period_um > 0.0)) throw ConfigError("crystal.poling_period_um must be > 0");
  if (qpm_sign != 1 && qpm_sign != -1)
    throw ConfigError("crystal.qpm_sign must be +1 or -1");
}

double delta_k(const SellmeierSet& set, const CrystalSpec& crystal,
               double ws_rad_ps, double wi_rad_ps) {
  if (!(ws_rad_ps > 0.0) || !(wi_rad_ps > 0.0))
    throw RangeError("delta_k requires positive signal and idler frequencies");
  const double kp = propagation_constant(set, crystal.axes.pump, ws_rad_ps + wi_rad_ps,
                                         crystal.temperature_c);
  const double ks = propagation_constant(set, crystal.axes.signal, ws_rad_ps,
                                         crystal.temperature_c);
  const double ki = propagation_constant(set, crystal.axes.idler, wi_rad_ps,
                                         crystal.temperature_c);
  return kp - ks - ki + crystal.qpm_sign * 2.0 * kPi / crystal.poling_period_um;
}

TaylorCoefficients taylor_coefficients(const SellmeierSet& set,
                                       const CrystalSpec& crystal,
                                       double pump_center_rad_ps) {
  const double w_half = pump_center_rad_ps / 2.0;
  TaylorCoefficients c;
  c.degenerate_omega_rad_ps = w_half;
  c.dk0_rad_um = delta_k(set, crystal, w_half, w_half);
  const double kp_prime = group_derivative(set, crystal.axes.pump, pump_center_rad_ps,
                                           crystal.temperature_c);
  c.tau_s_ps_um = kp_prime - group_derivative(set, crystal.axes.signal, w_half,
                                              crystal.temperature_c);
  c.tau_i_ps_um = kp_prime - group_derivative(set, crystal.axes.idler, w_half,
                                              crystal.temperature_c);
  return c;
}

double taylor_delta_k(const TaylorCoefficients& coeffs, double ws_rad_ps,
                      double wi_rad_ps) {
  const double omega_s = ws_rad_ps - coeffs.degenerate_omega_rad_ps;
  const double omega_i = wi_rad_ps - coeffs.degenerate_omega_rad_ps;
  return coeffs.dk0_rad_um + coeffs.tau_s_ps_um * omega_s + coeffs.tau_i_ps_um * omega_i;
}

namespace {

double dk0_at(const SellmeierSet& set, CrystalSpec crystal, double pump_center,
              double temperature_c) {
  crystal.temperature_c = temperature_c;
  const double w_half = pump_center / 2.0;
  return delta_k(set, crystal, w_half, w_half);
}

} // namespace

double degenerate_temperature(const SellmeierSet& set, const CrystalSpec& crystal,
                              double pump_center_rad_ps, double t_lo_c, double t_hi_c) {
  double lo = t_lo_c, hi = t_hi_c;
  double f_lo = dk0_at(set, crystal, pump_center_rad_ps, lo);
  double f_hi = dk0_at(set, crystal, pump_center_rad_ps, hi);
  if (f_lo == 0.0) return lo;
  if (f_hi == 0.0) return hi;
  if (std::signbit(f_lo) == std::signbit(f_hi)) {
    std::ostringstream os;
    os << "no phase-matching temperature in range [" << lo << ", " << hi
       << "] C: dk0(" << lo << ") = " << f_lo << " rad/um, dk0(" << hi
       << ") = " << f_hi << " rad/um";
    throw SolverError(os.str());
  }
  // ~50 halvings shrink the bracket to ~1e-13 C; dk0 slope is O(1e-5) rad/um/C
  // so the residual lands far below the 1e-9 requirement.
  for (int it = 0; it < 60 && hi - lo > 1e-11; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = dk0_at(set, crystal, pump_center_rad_ps, mid);
    if (f_mid == 0.0) return mid;
    if (std::signbit(f_mid) == std::signbit(f_lo)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  const double root = 0.5 * (lo + hi);
  const double residual = dk0_at(set, crystal, pump_center_rad_ps, root);
  if (std::abs(residual) >= 1e-9) {
    std::ostringstream os;
    os << "degenerate temperature solve stalled: |dk0(" << root << " C)| = "
       << std::abs(residual) << " rad/um";
    throw SolverError(os.str());
  }
  return root;
}

int choose_qpm_sign(const SellmeierSet& set, const CrystalSpec& crystal,
                    double pump_center_rad_ps, double t_lo_c, double t_hi_c) {
  for (int sign : {+1, -1}) {
    CrystalSpec c = crystal;
    c.qpm_sign = sign;
    const double f_lo = dk0_at(set, c, pump_center_rad_ps, t_lo_c);
    const double f_hi = dk0_at(set, c, pump_center_rad_ps, t_hi_c);
    if (std::signbit(f_lo) != std::signbit(f_hi) || f_lo == 0.0 || f_hi == 0.0)
      return sign;
  }
  std::ostringstream os;
  os << "no phase-matching temperature in range [" << t_lo_c << ", " << t_hi_c
     << "] C for either grating-term sign";
  throw SolverError(os.str());
}

} // namespace pairsim
