#ifndef PAIRSIM_JSA_HPP
#define PAIRSIM_JSA_HPP

#include <functional>
#include <string>
#include <vector>

#include "pairsim/phasematch.hpp"
#include "pairsim/units.hpp"

namespace pairsim {

struct PumpSpec {
  double center_wavelength_nm = 780.0;
  double bandwidth_3db_nm = 0.108;  // FWHM of the pump intensity spectrum
  double power_w = 1.41;            // consumed by the shg module only

  double center_omega() const { return omega_from_wavelength_nm(center_wavelength_nm); }
  // Amplitude width B in exp(-(ws+wi-wp0)^2 / (4 B^2)): the intensity FWHM
  // in omega divided by 2 sqrt(2 ln 2).
  double amplitude_bandwidth() const {
    return gaussian_sigma_from_fwhm(
        omega_width_from_nm(bandwidth_3db_nm, center_wavelength_nm));
  }
  void validate() const;
};

// Uniform, endpoint-inclusive omega axis shared by signal and idler.
struct FrequencyGrid {
  double center_rad_ps = 0.0;
  double half_span_rad_ps = 0.0;
  int points_per_axis = 1024;  // >= 64 and even

  double step() const { return 2.0 * half_span_rad_ps / (points_per_axis - 1); }
  double omega_at(int i) const { return center_rad_ps - half_span_rad_ps + i * step(); }
  std::vector<double> axis() const;
  // Trapezoid integration weights (step, halved at the two endpoints).
  std::vector<double> weights() const;
  void validate() const;
};

// Discretized real joint spectral amplitude. Signed (sinc side lobes keep
// their sign), normalized so the trapezoid integral of |A|^2 is 1.
struct JsaGrid {
  FrequencyGrid grid;
  std::vector<double> amplitude;  // row-major [signal][idler]
  double normalization = 1.0;     // constant the raw amplitude was divided by
  std::vector<std::string> warnings;

  double at(int is, int ii) const { return amplitude[static_cast<size_t>(is) * grid.points_per_axis + ii]; }
  double& at(int is, int ii) { return amplitude[static_cast<size_t>(is) * grid.points_per_axis + ii]; }

  // Builds a normalized grid from an arbitrary amplitude function of
  // (omega_s, omega_i); used for analytic fixtures as well as by build_jsa.
  static JsaGrid from_function(const FrequencyGrid& grid,
                               const std::function<double(double, double)>& amplitude);
};

// 1-D spectrum sampled on an ascending uniform omega axis.
struct Spectrum {
  std::vector<double> omega_rad_ps;
  std::vector<double> value;
};

enum class PhaseMatchModel { Exact, Taylor };
enum class Party { Signal, Idler };

// exp(-(ws+wi-wp0)^2/(4 B^2)); exactly 1 on the line ws+wi = wp0.
double pump_envelope(const PumpSpec& pump, double ws_rad_ps, double wi_rad_ps);

// sin(dk L/2)/(dk/2) [um]; the dk -> 0 limit returns L exactly.
double sinc_amplitude(double dk_rad_um, double length_um);

// Phase-matching amplitude at (ws, wi) from exact propagation constants.
double phase_matching_amplitude(const SellmeierSet& set, const CrystalSpec& crystal,
                                double ws_rad_ps, double wi_rad_ps);

// Pump envelope times phase-matching amplitude, normalized. The grid must be
// centered on the degenerate frequency (half the pump center). Under-resolved
// grids get a warning pushed into JsaGrid::warnings, not an error.
JsaGrid build_jsa(const SellmeierSet& set, const CrystalSpec& crystal,
                  const PumpSpec& pump, const FrequencyGrid& grid,
                  PhaseMatchModel model = PhaseMatchModel::Exact);

// Row/column trapezoid sums of |A|^2; integrates to 1 on the grid.
Spectrum marginal_spectrum(const JsaGrid& jsa, Party which);

// |A|^2 slice at the grid line nearest the grid center (the degenerate
// frequency), renormalized to unit peak. offset reports how far the sampled
// line sits from the exact center (always within half a grid step).
struct CoincidenceSlice {
  Spectrum spectrum;
  double offset_rad_ps = 0.0;
};
CoincidenceSlice coincidence_spectrum(const JsaGrid& jsa);

// 3-dB width by linear interpolation between the samples bracketing the
// half-maximum on each side of the unique interior peak.
struct FwhmResult {
  double width_nm = 0.0;      // wavelength-domain width (crossings mapped via 2 pi c / omega)
  double width_rad_ps = 0.0;  // omega-domain width
  double center_nm = 0.0;     // midpoint of the two half-max crossings, in nm
  double crossing_lo_rad_ps = 0.0;
  double crossing_hi_rad_ps = 0.0;
};
FwhmResult fwhm_3db(const Spectrum& spectrum);

// R = marginal width / coincidence width, both measured with fwhm_3db.
// r_lambda is the reported figure; r_omega is the same ratio in omega.
struct EntanglementParameter {
  double r_lambda = 0.0;
  double r_omega = 0.0;
  FwhmResult marginal;
  FwhmResult coincidence;
  double slice_offset_rad_ps = 0.0;
};
EntanglementParameter entanglement_parameter(const JsaGrid& jsa);

// Schmidt spectrum lambda_j = s_j^2 / sum s^2 of the weighted amplitude
// matrix A_ij sqrt(w_i w_j), sorted descending; sums to 1.
std::vector<double> schmidt_spectrum(const JsaGrid& jsa);

// Effective mode count K = 1 / sum lambda_j^2; K = 1 for separable grids.
double schmidt_number(const JsaGrid& jsa);

// Convolution with a Gaussian kernel of FWHM rbw on the wavelength axis;
// kernel mass is column-normalized so the spectrum area is preserved.
// rbw = 0 is the identity. Throws RangeError when the kernel exceeds the
// grid span.
Spectrum convolve_instrument(const Spectrum& spectrum, double rbw_nm);

// Figures of merit assembled by the report pipeline.
struct SpectralReport {
  double signal_center_nm = 0.0;
  double idler_center_nm = 0.0;
  double signal_fwhm_nm = 0.0;
  double idler_fwhm_nm = 0.0;
  double coincidence_fwhm_nm = 0.0;
  double r_lambda = 0.0;
  double r_omega = 0.0;
  double schmidt_k = 0.0;
  double hom_visibility = 0.0;
  double hom_dip_fwhm_ps = 0.0;
};

} // namespace pairsim

#endif
