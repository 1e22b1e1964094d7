#ifndef PAIRSIM_UNITS_HPP
#define PAIRSIM_UNITS_HPP

#include <cmath>

// Internal unit system: angular frequency in rad/ps, length in um, time in ps,
// temperature in degrees C, power in W. All intermediate magnitudes stay
// O(1)..O(1e4), which keeps double arithmetic well away from exponent limits.
namespace pairsim {

inline constexpr double kSpeedOfLightUmPerPs = 299.792458;
inline constexpr double kPi = 3.14159265358979323846;

inline double omega_from_wavelength_um(double lambda_um) {
  return 2.0 * kPi * kSpeedOfLightUmPerPs / lambda_um;
}

inline double wavelength_um_from_omega(double omega_rad_ps) {
  return 2.0 * kPi * kSpeedOfLightUmPerPs / omega_rad_ps;
}

inline double omega_from_wavelength_nm(double lambda_nm) {
  return omega_from_wavelength_um(lambda_nm * 1e-3);
}

inline double wavelength_nm_from_omega(double omega_rad_ps) {
  return wavelength_um_from_omega(omega_rad_ps) * 1e3;
}

// Width of an interval in omega equivalent to dlambda (nm) at center lambda (nm).
inline double omega_width_from_nm(double dlambda_nm, double lambda_nm) {
  const double lam_um = lambda_nm * 1e-3;
  return 2.0 * kPi * kSpeedOfLightUmPerPs * (dlambda_nm * 1e-3) / (lam_um * lam_um);
}

// FWHM of exp(-x^2/(2 sigma^2)) is 2 sqrt(2 ln 2) sigma.
inline double gaussian_fwhm_from_sigma(double sigma) {
  return 2.0 * std::sqrt(2.0 * std::log(2.0)) * sigma;
}

inline double gaussian_sigma_from_fwhm(double fwhm) {
  return fwhm / (2.0 * std::sqrt(2.0 * std::log(2.0)));
}

} // namespace pairsim

#endif
