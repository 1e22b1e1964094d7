#include "pairsim/dispersion.hpp"

#include <cmath>
#include <sstream>

#include "pairsim/units.hpp"

namespace pairsim {

OpticalAxis axis_from_string(std::string_view s) {
  if (s == "Y" || s == "y") return OpticalAxis::Y;
  if (s == "Z" || s == "z") return OpticalAxis::Z;
  throw ConfigError("unknown optical axis '" + std::string(s) + "' (supported: Y, Z)");
}

std::string axis_to_string(OpticalAxis axis) {
  return axis == OpticalAxis::Y ? "Y" : "Z";
}

void SellmeierSet::validate() const {
  if (provenance.empty())
    throw ConfigError("sellmeier set: provenance must be non-empty");
  if (!(wavelength_min_um > 0.0) || !(wavelength_max_um > wavelength_min_um))
    throw ConfigError("sellmeier set: invalid wavelength window");
  if (!(temperature_max_c > temperature_min_c))
    throw ConfigError("sellmeier set: invalid temperature window");
  if (!(reference_temperature_c >= temperature_min_c &&
        reference_temperature_c <= temperature_max_c))
    throw ConfigError("sellmeier set: reference temperature outside temperature window");
}

namespace {

const SellmeierSet& build_ktp_kato_thermo() {
  static const SellmeierSet set = [] {
    SellmeierSet s;
    // n_y^2 = 2.09930 + 0.922683/(1 - 0.0467695/l^2) - 0.0138408 l^2
    //       = 2.09930 + 0.922683 l^2/(l^2 - 0.0467695) - 0.0138408 l^2
    s.y.a = 2.09930;
    s.y.b_lambda2 = -0.0138408;
    s.y.resonances = {{0.0, 0.922683, 0.0467695}};
    // n_z^2 = 2.12725 + 1.18431/(1 - 0.0514852/l^2)
    //               + 0.6603/(1 - 100.00507/l^2) - 0.00968956 l^2
    s.z.a = 2.12725;
    s.z.b_lambda2 = -9.68956e-3;
    s.z.resonances = {{0.0, 1.18431, 5.14852e-2}, {0.0, 0.6603, 100.00507}};
    // dn/dT polynomials in 1/lambda, 1e-5/C
    s.y.dn_dt = {0.5425e-5, 0.5154e-5, -0.4063e-5, 0.1997e-5};
    s.z.dn_dt = {-0.1897e-5, 3.6677e-5, -2.9220e-5, 0.9221e-5};
    s.reference_temperature_c = 20.0;
    s.wavelength_min_um = 0.40;
    s.wavelength_max_um = 3.50;
    s.temperature_min_c = 0.0;
    s.temperature_max_c = 200.0;
    s.provenance =
        "flux-grown KTP; n_z: Fradkin et al., Appl. Phys. Lett. 74, 914 (1999); "
        "n_y: Koenig & Wong refit of Fan et al. (1987), Appl. Phys. Lett. 84, 1644 (2004); "
        "dn/dT: Kato & Takaoka, Appl. Opt. 41, 5040 (2002), ref 20 C";
    s.validate();
    return s;
  }();
  return set;
}

const SellmeierSet& build_ktp_emanuelli_thermo() {
  static const SellmeierSet set = [] {
    SellmeierSet s = build_ktp_kato_thermo();
    s.y.dn_dt = {6.2897e-6, 6.3061e-6, -6.0629e-6, 2.6486e-6};
    s.y.dn_dt2 = {-0.14445e-8, 2.2244e-8, -3.5770e-8, 1.3470e-8};
    s.z.dn_dt = {9.9587e-6, 9.9228e-6, -8.9603e-6, 4.1010e-6};
    s.z.dn_dt2 = {-1.1882e-8, 10.459e-8, -9.8136e-8, 3.1481e-8};
    s.reference_temperature_c = 25.0;
    s.provenance =
        "flux-grown KTP; n_z: Fradkin et al., Appl. Phys. Lett. 74, 914 (1999); "
        "n_y: Koenig & Wong refit of Fan et al. (1987), Appl. Phys. Lett. 84, 1644 (2004); "
        "dn/dT: Emanuelli & Arie, Appl. Opt. 42, 6661 (2003), ref 25 C";
    s.validate();
    return s;
  }();
  return set;
}

void check_window(const SellmeierSet& set, double wavelength_um, double temperature_c) {
  if (!(wavelength_um >= set.wavelength_min_um && wavelength_um <= set.wavelength_max_um)) {
    std::ostringstream os;
    os << "wavelength " << wavelength_um * 1e3 << " nm outside validity window ["
       << set.wavelength_min_um * 1e3 << ", " << set.wavelength_max_um * 1e3 << "] nm";
    throw RangeError(os.str());
  }
  if (!(temperature_c >= set.temperature_min_c && temperature_c <= set.temperature_max_c)) {
    std::ostringstream os;
    os << "temperature " << temperature_c << " C outside validity window ["
       << set.temperature_min_c << ", " << set.temperature_max_c << "] C";
    throw RangeError(os.str());
  }
}

double room_temperature_index(const AxisCoefficients& ax, double wavelength_um) {
  const double l2 = wavelength_um * wavelength_um;
  double n2 = ax.a + ax.b_lambda2 * l2;
  for (const auto& r : ax.resonances)
    n2 += (r.num_const + r.num_lambda2 * l2) / (l2 - r.pole_um2);
  return std::sqrt(n2);
}

double inverse_lambda_poly(const std::array<double, 4>& c, double wavelength_um) {
  const double x = 1.0 / wavelength_um;
  return c[0] + x * (c[1] + x * (c[2] + x * c[3]));
}

} // namespace

const SellmeierSet& ktp_default() { return build_ktp_kato_thermo(); }
const SellmeierSet& ktp_emanuelli() { return build_ktp_emanuelli_thermo(); }

double thermo_optic_correction(const SellmeierSet& set, OpticalAxis axis,
                               double wavelength_um, double temperature_c) {
  const AxisCoefficients& ax = set.axis(axis);
  const double dt = temperature_c - set.reference_temperature_c;
  return inverse_lambda_poly(ax.dn_dt, wavelength_um) * dt +
         inverse_lambda_poly(ax.dn_dt2, wavelength_um) * dt * dt;
}

double refractive_index(const SellmeierSet& set, OpticalAxis axis,
                        double wavelength_nm, double temperature_c) {
  const double lam_um = wavelength_nm * 1e-3;
  check_window(set, lam_um, temperature_c);
  return room_temperature_index(set.axis(axis), lam_um) +
         thermo_optic_correction(set, axis, lam_um, temperature_c);
}

double propagation_constant(const SellmeierSet& set, OpticalAxis axis,
                            double omega_rad_ps, double temperature_c) {
  if (!(omega_rad_ps > 0.0))
    throw RangeError("propagation constant requires a positive angular frequency");
  const double lam_nm = wavelength_nm_from_omega(omega_rad_ps);
  const double n = refractive_index(set, axis, lam_nm, temperature_c);
  return n * omega_rad_ps / kSpeedOfLightUmPerPs;
}

double group_derivative(const SellmeierSet& set, OpticalAxis axis,
                        double omega_rad_ps, double temperature_c,
                        double step_rad_ps) {
  if (!(step_rad_ps > 0.0))
    throw RangeError("group derivative requires a positive stencil step");
  const double k_hi = propagation_constant(set, axis, omega_rad_ps + step_rad_ps, temperature_c);
  const double k_lo = propagation_constant(set, axis, omega_rad_ps - step_rad_ps, temperature_c);
  return (k_hi - k_lo) / (2.0 * step_rad_ps);
}

} // namespace pairsim
