#ifndef PAIRSIM_DISPERSION_HPP
#define PAIRSIM_DISPERSION_HPP

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "pairsim/errors.hpp"

namespace pairsim {

// Principal axes of the biaxial crystal that carry the interacting fields.
// Only y and z are modeled (type-II signal/idler live on orthogonal axes).
enum class OpticalAxis { Y, Z };

OpticalAxis axis_from_string(std::string_view s);
std::string axis_to_string(OpticalAxis axis);

// One axis of a temperature-dependent Sellmeier model:
//
//   n^2(lambda) = a + b_lambda2 * lambda^2
//                 + sum_k (num_const_k + num_lambda2_k * lambda^2) / (lambda^2 - pole_k)
//   n(lambda, T) = n(lambda) + P1(1/lambda) * (T - Tref) + P2(1/lambda) * (T - Tref)^2
//
// with lambda in um and P1, P2 cubic polynomials in 1/lambda. This covers the
// published KTP fits in use (Fradkin-style, Fan-style, Kato-style resonances,
// Emanuelli/Kato thermo-optic polynomials).
struct SellmeierResonance {
  double num_const = 0.0;    // dimensionless numerator term
  double num_lambda2 = 0.0;  // numerator term multiplying lambda^2 [1/um^2]
  double pole_um2 = 0.0;     // resonance pole [um^2]
};

struct AxisCoefficients {
  double a = 0.0;            // constant term of n^2
  double b_lambda2 = 0.0;    // coefficient on lambda^2 in n^2 [1/um^2]
  std::vector<SellmeierResonance> resonances;
  std::array<double, 4> dn_dt{};   // P1 coefficients [1/C], powers 1/lambda^0..3
  std::array<double, 4> dn_dt2{};  // P2 coefficients [1/C^2]
};

struct SellmeierSet {
  AxisCoefficients y;
  AxisCoefficients z;
  double reference_temperature_c = 25.0;  // thermo-optic correction vanishes here
  double wavelength_min_um = 0.4;
  double wavelength_max_um = 3.5;
  double temperature_min_c = 0.0;
  double temperature_max_c = 200.0;
  std::string provenance;  // citation of the published data, must be non-empty

  const AxisCoefficients& axis(OpticalAxis ax) const {
    return ax == OpticalAxis::Y ? y : z;
  }
  // Throws ConfigError on an unusable set (empty provenance, inverted windows).
  void validate() const;
};

// Flux-grown PPKTP. n_z: Fradkin et al., APL 74, 914 (1999). n_y: Koenig-Wong
// refit of Fan et al. (1987) data, APL 84, 1644 (2004). dn/dT: Kato-Takaoka,
// Appl. Opt. 41, 5040 (2002), referenced to 20 C.
const SellmeierSet& ktp_default();

// Same room-temperature fits with the Emanuelli-Arie thermo-optic polynomials,
// Appl. Opt. 42, 6661 (2003), referenced to 25 C.
const SellmeierSet& ktp_emanuelli();

// Thermo-optic correction alone: P1 * dT + P2 * dT^2. Exactly zero at Tref.
double thermo_optic_correction(const SellmeierSet& set, OpticalAxis axis,
                               double wavelength_um, double temperature_c);

// n(lambda, T). Wavelength in nm, temperature in C. Throws RangeError naming
// the offending parameter when outside the set's validity window.
double refractive_index(const SellmeierSet& set, OpticalAxis axis,
                        double wavelength_nm, double temperature_c);

// k = n(lambda(omega), T) * omega / c  [rad/um], omega in rad/ps.
double propagation_constant(const SellmeierSet& set, OpticalAxis axis,
                            double omega_rad_ps, double temperature_c);

// dk/domega by central finite difference with step h [rad/ps]; the group
// slowness 1/v_g in ps/um. The symmetric stencil must stay inside the window.
double group_derivative(const SellmeierSet& set, OpticalAxis axis,
                        double omega_rad_ps, double temperature_c,
                        double step_rad_ps = 1e-4);

} // namespace pairsim

#endif
