#include "pairsim/jsa.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pairsim/errors.hpp"

namespace pairsim {

void PumpSpec::validate() const {
  if (!(center_wavelength_nm > 0.0)) throw ConfigError("pump.center_wavelength_nm must be > 0");
  if (!(bandwidth_3db_nm > 0.0)) throw ConfigError("pump.bandwidth_3db_nm must be > 0");
  if (!(power_w >= 0.0)) throw ConfigError("pump.power_w must be >= 0");
}

void FrequencyGrid::validate() const {
  if (points_per_axis < 64 || points_per_axis % 2 != 0)
    throw ConfigError("grid.points_per_axis must be even and >= 64 (got " +
                      std::to_string(points_per_axis) + ")");
  if (!(half_span_rad_ps > 0.0)) throw ConfigError("grid half span must be > 0");
  if (!(center_rad_ps > half_span_rad_ps))
    throw ConfigError("grid extends to non-positive frequencies");
}

std::vector<double> FrequencyGrid::axis() const {
  std::vector<double> w(points_per_axis);
  for (int i = 0; i < points_per_axis; ++i) w[i] = omega_at(i);
  return w;
}

std::vector<double> FrequencyGrid::weights() const {
  std::vector<double> w(points_per_axis, step());
  w.front() *= 0.5;
  w.back() *= 0.5;
  return w;
}

namespace {

void normalize_grid(JsaGrid& jsa) {
  const auto w = jsa.grid.weights();
  const int n = jsa.grid.points_per_axis;
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    double row = 0.0;
    for (int j = 0; j < n; ++j) {
      const double a = jsa.at(i, j);
      row += a * a * w[j];
    }
    total += row * w[i];
  }
  if (!std::isfinite(total) || !(total > 0.0))
    throw NumericalError("joint spectral amplitude has zero or non-finite norm");
  const double scale = std::sqrt(total);
  for (double& a : jsa.amplitude) a /= scale;
  jsa.normalization = scale;
}

void check_finite(const JsaGrid& jsa) {
  for (double a : jsa.amplitude)
    if (!std::isfinite(a))
      throw NumericalError("non-finite joint spectral amplitude entry");
}

} // namespace

JsaGrid JsaGrid::from_function(const FrequencyGrid& grid,
                               const std::function<double(double, double)>& amplitude) {
  grid.validate();
  JsaGrid jsa;
  jsa.grid = grid;
  const int n = grid.points_per_axis;
  const auto axis = grid.axis();
  jsa.amplitude.resize(static_cast<size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      jsa.at(i, j) = amplitude(axis[i], axis[j]);
  check_finite(jsa);
  normalize_grid(jsa);
  return jsa;
}

double pump_envelope(const PumpSpec& pump, double ws_rad_ps, double wi_rad_ps) {
  const double b = pump.amplitude_bandwidth();
  if (!(b > 0.0)) throw RangeError("pump amplitude bandwidth must be > 0");
  const double d = ws_rad_ps + wi_rad_ps - pump.center_omega();
  return std::exp(-d * d / (4.0 * b * b));
}

double sinc_amplitude(double dk_rad_um, double length_um) {
  const double x = 0.5 * dk_rad_um * length_um;
  if (std::abs(x) < 1e-8) return length_um;
  return length_um * std::sin(x) / x;
}

double phase_matching_amplitude(const SellmeierSet& set, const CrystalSpec& crystal,
                                double ws_rad_ps, double wi_rad_ps) {
  return sinc_amplitude(delta_k(set, crystal, ws_rad_ps, wi_rad_ps), crystal.length_um());
}

JsaGrid build_jsa(const SellmeierSet& set, const CrystalSpec& crystal,
                  const PumpSpec& pump, const FrequencyGrid& grid,
                  PhaseMatchModel model) {
  grid.validate();
  crystal.validate();
  pump.validate();
  const double w_half = pump.center_omega() / 2.0;
  if (std::abs(grid.center_rad_ps - w_half) > 0.5 * grid.step() + 1e-12)
    throw ConfigError("grid must be centered at the degenerate frequency (half the pump center)");

  const int n = grid.points_per_axis;
  const auto axis = grid.axis();
  const double length_um = crystal.length_um();
  const double bp = pump.amplitude_bandwidth();
  const double wp0 = pump.center_omega();

  JsaGrid jsa;
  jsa.grid = grid;
  jsa.amplitude.resize(static_cast<size_t>(n) * n);

  // The pump factor and the pump propagation constant depend on ws+wi only,
  // which takes 2n-1 distinct values on the shared axis.
  std::vector<double> pump_by_sum(2 * n - 1);
  const double base_sum = 2.0 * axis[0];
  for (int s = 0; s < 2 * n - 1; ++s) {
    const double d = base_sum + s * grid.step() - wp0;
    pump_by_sum[s] = std::exp(-d * d / (4.0 * bp * bp));
  }

  if (model == PhaseMatchModel::Exact) {
    std::vector<double> ks(n), ki(n), kp(2 * n - 1);
    for (int i = 0; i < n; ++i) {
      ks[i] = propagation_constant(set, crystal.axes.signal, axis[i], crystal.temperature_c);
      ki[i] = propagation_constant(set, crystal.axes.idler, axis[i], crystal.temperature_c);
    }
    for (int s = 0; s < 2 * n - 1; ++s)
      kp[s] = propagation_constant(set, crystal.axes.pump, base_sum + s * grid.step(),
                                   crystal.temperature_c);
    const double grating = crystal.qpm_sign * 2.0 * kPi / crystal.poling_period_um;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const double dk = kp[i + j] - ks[i] - ki[j] + grating;
        jsa.at(i, j) = pump_by_sum[i + j] * sinc_amplitude(dk, length_um);
      }
    }
  } else {
    const TaylorCoefficients coeffs = taylor_coefficients(set, crystal, wp0);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const double dk = taylor_delta_k(coeffs, axis[i], axis[j]);
        jsa.at(i, j) = pump_by_sum[i + j] * sinc_amplitude(dk, length_um);
      }
    }
  }

  check_finite(jsa);
  normalize_grid(jsa);

  // Resolution check: at least 8 samples across the pump FWHM along a row and
  // across each sinc FWHM (set by the group-slowness differences).
  const double pump_fwhm = gaussian_fwhm_from_sigma(bp);
  double min_fwhm = pump_fwhm;
  const TaylorCoefficients coeffs = taylor_coefficients(set, crystal, wp0);
  const double sinc_half_arg = 1.39155737825151;  // sinc^2(x) = 1/2
  for (double tau : {coeffs.tau_s_ps_um, coeffs.tau_i_ps_um}) {
    const double scale = std::abs(tau) * length_um;
    if (scale > 0.0) min_fwhm = std::min(min_fwhm, 4.0 * sinc_half_arg / scale);
  }
  const double samples = min_fwhm / grid.step();
  if (samples < 8.0) {
    std::ostringstream os;
    os << "grid under-resolves the joint spectrum: " << samples
       << " samples across the narrowest feature (need >= 8); increase points_per_axis";
    jsa.warnings.push_back(os.str());
  }
  return jsa;
}

Spectrum marginal_spectrum(const JsaGrid& jsa, Party which) {
  const int n = jsa.grid.points_per_axis;
  const auto w = jsa.grid.weights();
  Spectrum s;
  s.omega_rad_ps = jsa.grid.axis();
  s.value.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double a = jsa.at(i, j);
      if (which == Party::Signal)
        s.value[i] += a * a * w[j];
      else
        s.value[j] += a * a * w[i];
    }
  }
  return s;
}

CoincidenceSlice coincidence_spectrum(const JsaGrid& jsa) {
  const int n = jsa.grid.points_per_axis;
  const double pos = (jsa.grid.center_rad_ps - jsa.grid.omega_at(0)) / jsa.grid.step();
  int j0 = static_cast<int>(std::llround(pos));
  j0 = std::clamp(j0, 0, n - 1);
  CoincidenceSlice slice;
  slice.offset_rad_ps = jsa.grid.omega_at(j0) - jsa.grid.center_rad_ps;
  slice.spectrum.omega_rad_ps = jsa.grid.axis();
  slice.spectrum.value.resize(n);
  double peak = 0.0;
  for (int i = 0; i < n; ++i) {
    const double a = jsa.at(i, j0);
    slice.spectrum.value[i] = a * a;
    peak = std::max(peak, slice.spectrum.value[i]);
  }
  if (!(peak > 0.0)) throw NumericalError("coincidence slice is identically zero");
  for (double& v : slice.spectrum.value) v /= peak;
  return slice;
}

FwhmResult fwhm_3db(const Spectrum& spectrum) {
  const int n = static_cast<int>(spectrum.value.size());
  if (n < 3 || spectrum.omega_rad_ps.size() != spectrum.value.size())
    throw RangeError("spectrum too short for width extraction");
  int peak = 0;
  for (int i = 1; i < n; ++i)
    if (spectrum.value[i] > spectrum.value[peak]) peak = i;
  if (peak == 0 || peak == n - 1)
    throw RangeError("spectrum clipped: maximum sits on the grid edge");
  const double half = 0.5 * spectrum.value[peak];

  auto cross = [&](int dir) -> double {
    // walk from the peak towards the edge to the first sample at or below half
    int i = peak;
    while (true) {
      const int next = i + dir;
      if (next < 0 || next >= n)
        throw RangeError("spectrum clipped: half-maximum crossing outside the grid");
      if (spectrum.value[next] <= half) {
        const double v0 = spectrum.value[i], v1 = spectrum.value[next];
        const double t = (half - v0) / (v1 - v0);
        return spectrum.omega_rad_ps[i] +
               t * (spectrum.omega_rad_ps[next] - spectrum.omega_rad_ps[i]);
      }
      i = next;
    }
  };

  FwhmResult r;
  r.crossing_lo_rad_ps = cross(-1);
  r.crossing_hi_rad_ps = cross(+1);
  r.width_rad_ps = r.crossing_hi_rad_ps - r.crossing_lo_rad_ps;
  const double lam_hi = wavelength_nm_from_omega(r.crossing_lo_rad_ps);
  const double lam_lo = wavelength_nm_from_omega(r.crossing_hi_rad_ps);
  r.width_nm = lam_hi - lam_lo;
  r.center_nm = 0.5 * (lam_hi + lam_lo);
  return r;
}

EntanglementParameter entanglement_parameter(const JsaGrid& jsa) {
  EntanglementParameter r;
  r.marginal = fwhm_3db(marginal_spectrum(jsa, Party::Signal));
  const CoincidenceSlice slice = coincidence_spectrum(jsa);
  r.coincidence = fwhm_3db(slice.spectrum);
  r.slice_offset_rad_ps = slice.offset_rad_ps;
  r.r_lambda = r.marginal.width_nm / r.coincidence.width_nm;
  r.r_omega = r.marginal.width_rad_ps / r.coincidence.width_rad_ps;
  return r;
}

double schmidt_number(const JsaGrid& jsa) {
  const std::vector<double> lambda = schmidt_spectrum(jsa);
  double sum_sq = 0.0;
  for (double l : lambda) sum_sq += l * l;
  return 1.0 / sum_sq;
}

Spectrum convolve_instrument(const Spectrum& spectrum, double rbw_nm) {
  if (!(rbw_nm >= 0.0)) throw RangeError("instrument resolution bandwidth must be >= 0");
  if (rbw_nm == 0.0) return spectrum;
  const int n = static_cast<int>(spectrum.value.size());
  if (n < 3) throw RangeError("spectrum too short for convolution");

  std::vector<double> lam(n), w(n);
  for (int i = 0; i < n; ++i) lam[i] = wavelength_nm_from_omega(spectrum.omega_rad_ps[i]);
  for (int i = 0; i < n; ++i) {
    const double left = (i > 0) ? std::abs(lam[i] - lam[i - 1]) : 0.0;
    const double right = (i + 1 < n) ? std::abs(lam[i + 1] - lam[i]) : 0.0;
    w[i] = 0.5 * (left + right);
  }
  const double span = std::abs(lam.front() - lam.back());
  if (rbw_nm > span)
    throw RangeError("kernel exceeds grid: rbw " + std::to_string(rbw_nm) +
                     " nm wider than the " + std::to_string(span) + " nm span");

  const double sigma = gaussian_sigma_from_fwhm(rbw_nm);
  Spectrum out;
  out.omega_rad_ps = spectrum.omega_rad_ps;
  out.value.assign(n, 0.0);
  // Each source sample's mass is spread with a kernel renormalized on the
  // grid, so the trapezoid area is preserved exactly.
  std::vector<double> kernel(n);
  for (int j = 0; j < n; ++j) {
    const double mass = spectrum.value[j] * w[j];
    if (mass == 0.0) continue;
    double norm = 0.0;
    for (int i = 0; i < n; ++i) {
      const double d = (lam[i] - lam[j]) / sigma;
      kernel[i] = std::exp(-0.5 * d * d);
      norm += kernel[i] * w[i];
    }
    for (int i = 0; i < n; ++i) out.value[i] += mass * kernel[i] / norm;
  }
  return out;
}

} // namespace pairsim
