#ifndef PAIRSIM_SHG_HPP
#define PAIRSIM_SHG_HPP

#include <span>
#include <vector>

namespace pairsim {

// Singly-resonant two-mirror SHG cavity at the fundamental wavelength.
struct CavitySpec {
  double r1 = 0.95;         // incoupler power reflectivity at the fundamental
  double t1 = 0.05;         // incoupler power transmittance at the fundamental
  double r2 = 0.999;        // outcoupler reflectivity at the fundamental
  double t2 = 0.001;        // outcoupler transmittance at the fundamental
  double t2_sh = 0.952;     // outcoupler transmittance at the second harmonic
  double loss_delta = 0.01; // single-pass intracavity loss fraction
  double gamma_sh = 0.0;    // nonlinear conversion coefficient [1/W]

  double single_pass_t() const { return 1.0 - loss_delta; }
  void validate() const;  // fractions in [0,1], r1 + t1 <= 1, gamma >= 0
};

struct ShgOperatingPoint {
  double p1_w = 0.0;       // fundamental input power
  double pc_w = 0.0;       // intracavity circulating power
  double p2_w = 0.0;       // second-harmonic output power
  double rm = 0.0;         // round-trip efficiency at the converged point
  double residual_w = 0.0; // |pc - rhs(pc)| at the converged point
};

// rm = t^2 (1 - gamma pc)^2 r2. Throws SolverError once gamma*pc >= 1
// (conversion loss cannot exceed unity per pass).
double round_trip_efficiency(const CavitySpec& cavity, double pc_w);

// Damped fixed-point solve of pc = t1 p1 / (1 - sqrt(r1 rm(pc)))^2,
// started from the gamma = 0 closed form. Converged when successive
// iterates differ by < 1e-9 relative.
ShgOperatingPoint circulating_power(const CavitySpec& cavity, double p1_w);

// p2 = 2 gamma pc^2 t2_sh at the converged circulating power.
double sh_output_power(const CavitySpec& cavity, double p1_w);

// Finds gamma such that sh_output_power(p1_ref) = p2_ref to within 1e-9 W.
// p2(gamma) rises to a single maximum and then falls, so the search expands
// geometrically from 1e-8 along the rising branch and bisects the first
// crossing. Throws SolverError with endpoint outputs when p2_ref exceeds the
// attainable maximum on [1e-8, 1] 1/W.
double calibrate_gamma(const CavitySpec& cavity_without_gamma, double p1_ref_w,
                       double p2_ref_w);

// Per-point solves over a sorted, nonnegative input power sweep.
std::vector<ShgOperatingPoint> power_curve(const CavitySpec& cavity,
                                           std::span<const double> p1_values_w);

} // namespace pairsim

#endif
