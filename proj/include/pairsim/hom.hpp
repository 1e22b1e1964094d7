#ifndef PAIRSIM_HOM_HPP
#define PAIRSIM_HOM_HPP

#include "pairsim/jsa.hpp"

namespace pairsim {

// Normalized coincidence vs relative delay; baseline 1 at large delay.
struct HomCurve {
  std::vector<double> delay_ps;
  std::vector<double> coincidence;
  double visibility = 0.0;   // 1 - min C
  double dip_center_ps = 0.0;
  double dip_fwhm_ps = 0.0;  // width at C = 1 - visibility/2, interpolated
};

// Overlap of A with its transpose, magnitudes inside the integral:
//   V = sum |A(ws,wi) A(wi,ws)| w w / sum |A|^2 w w
double overlap_visibility(const JsaGrid& jsa);

// Same overlap without magnitude bars; differs from overlap_visibility when
// sinc side-lobe signs misalign under the swap. Governs the physical dip
// depth.
double signed_overlap(const JsaGrid& jsa);

// C(tau) = 1 - Re[ sum A(ws,wi) A(wi,ws) e^{i (wi-ws) tau} w w ] / sum |A|^2 w w
// evaluated on a uniform delay grid over [-delay_span, +delay_span] ps.
// Throws SolverError when the dip minimum sits at the grid edge or the
// half-depth crossings fall outside the span.
HomCurve dip_curve(const JsaGrid& jsa, double delay_span_ps, int points);

// Analytic estimate of the full dip base width: |tau_s - tau_i| * L [ps].
// The triangular dip of a cw-pumped type-II source has FWHM = base/2.
double dip_fwhm_vs_group_delay(const SellmeierSet& set, const CrystalSpec& crystal,
                               double pump_center_rad_ps);

} // namespace pairsim

#endif
