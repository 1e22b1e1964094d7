#ifndef PAIRSIM_PHASEMATCH_HPP
#define PAIRSIM_PHASEMATCH_HPP

#include "pairsim/dispersion.hpp"

namespace pairsim {

struct AxisAssignment {
  OpticalAxis pump = OpticalAxis::Y;
  OpticalAxis signal = OpticalAxis::Y;
  OpticalAxis idler = OpticalAxis::Z;
};

// Poled nonlinear crystal geometry and operating point.
struct CrystalSpec {
  double length_mm = 10.0;
  double poling_period_um = 46.146;
  double temperature_c = 25.0;
  int qpm_sign = +1;  // sign of the 2*pi/poling_period grating term
  AxisAssignment axes;

  double length_um() const { return length_mm * 1e3; }
  void validate() const;  // L > 0, period > 0, sign in {-1, +1}
};

// First-order expansion of delta-k about the degenerate point omega_p0/2:
//   delta_k ~= dk0 + tau_s * Omega_s + tau_i * Omega_i,  Omega_j = w_j - omega_p0/2
// tau_s = k_p'(omega_p0) - k_s'(omega_p0/2), tau_i likewise with the idler
// axis. For type-II KTP tau_s != tau_i; that difference sets the sinc width.
struct TaylorCoefficients {
  double dk0_rad_um = 0.0;
  double tau_s_ps_um = 0.0;
  double tau_i_ps_um = 0.0;
  double degenerate_omega_rad_ps = 0.0;  // omega_p0 / 2
};

// Exact quasi-phase-matched wavevector mismatch [rad/um]:
//   delta_k = k_p(ws+wi) - k_s(ws) - k_i(wi) + qpm_sign * 2*pi/poling_period
double delta_k(const SellmeierSet& set, const CrystalSpec& crystal,
               double ws_rad_ps, double wi_rad_ps);

TaylorCoefficients taylor_coefficients(const SellmeierSet& set,
                                       const CrystalSpec& crystal,
                                       double pump_center_rad_ps);

// Exactly linear in the detunings from the degenerate point.
double taylor_delta_k(const TaylorCoefficients& coeffs, double ws_rad_ps,
                      double wi_rad_ps);

// Bisection root of dk0(T) = 0 on [t_lo, t_hi] C, to |dk0| < 1e-9 rad/um.
// The crystal's own temperature field is ignored. Throws SolverError with the
// endpoint values when dk0 does not change sign on the bracket.
double degenerate_temperature(const SellmeierSet& set, const CrystalSpec& crystal,
                              double pump_center_rad_ps, double t_lo_c = 15.0,
                              double t_hi_c = 150.0);

// Picks the grating-term sign (+1 or -1) for which dk0(T) crosses zero inside
// [t_lo, t_hi]. Only one sign is physical for a given coefficient set.
int choose_qpm_sign(const SellmeierSet& set, const CrystalSpec& crystal,
                    double pump_center_rad_ps, double t_lo_c = 15.0,
                    double t_hi_c = 150.0);

} // namespace pairsim

#endif
