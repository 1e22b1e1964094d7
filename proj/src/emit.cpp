#include "pairsim/emit.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "pairsim/hom.hpp"

namespace pairsim {

using nlohmann::json;

std::string format_g9(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  out << content;
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

json json_number_or_null(double v) {
  return std::isfinite(v) ? json(v) : json(nullptr);
}

json crystal_to_json(const CrystalSpec& c) {
  json j;
  j["length_mm"] = c.length_mm;
  j["poling_period_um"] = c.poling_period_um;
  j["temperature_c"] = c.temperature_c;
  j["qpm_sign"] = c.qpm_sign;
  j["pump_axis"] = axis_to_string(c.axes.pump);
  j["signal_axis"] = axis_to_string(c.axes.signal);
  j["idler_axis"] = axis_to_string(c.axes.idler);
  return j;
}

json pump_to_json(const PumpSpec& p) {
  json j;
  j["center_wavelength_nm"] = p.center_wavelength_nm;
  j["bandwidth_3db_nm"] = p.bandwidth_3db_nm;
  j["power_w"] = p.power_w;
  j["amplitude_bandwidth_rad_ps"] = p.amplitude_bandwidth();
  return j;
}

json grid_to_json(const FrequencyGrid& g) {
  json j;
  j["center_rad_ps"] = g.center_rad_ps;
  j["half_span_rad_ps"] = g.half_span_rad_ps;
  j["points_per_axis"] = g.points_per_axis;
  j["step_rad_ps"] = g.step();
  return j;
}

json setup_to_json(const ResolvedSetup& setup) {
  json j;
  j["crystal"] = crystal_to_json(setup.crystal);
  j["pump"] = pump_to_json(setup.pump);
  j["grid"] = grid_to_json(setup.grid);
  j["degenerate_temperature_c"] = json_number_or_null(setup.t_deg_c);
  j["dk0_at_operating_t_rad_um"] = setup.dk0_at_operating_t;
  j["sellmeier_provenance"] = setup.sellmeier.provenance;
  return j;
}

json cavity_to_json(const CavitySpec& c) {
  json j;
  j["r1"] = c.r1;
  j["t1"] = c.t1;
  j["r2"] = c.r2;
  j["t2"] = c.t2;
  j["t2_sh"] = c.t2_sh;
  j["loss_delta"] = c.loss_delta;
  j["gamma_sh_per_w"] = c.gamma_sh;
  return j;
}

std::string dump_json(const json& j) { return j.dump(2) + "\n"; }

// Resolves gamma: configured value or one-point calibration.
struct CavityResolution {
  CavitySpec cavity;
  bool calibrated = false;
};

CavityResolution resolve_cavity(const RunConfig& config) {
  CavityResolution r;
  r.cavity = config.cavity.spec;
  if (config.cavity.gamma_sh) {
    r.cavity.gamma_sh = *config.cavity.gamma_sh;
  } else {
    r.cavity.gamma_sh = calibrate_gamma(r.cavity, config.cavity.calibration.p1_w,
                                        config.cavity.calibration.p2_w);
    r.calibrated = true;
  }
  return r;
}

// Gaussian-kernel width that broadens `spectrum` to target_fwhm_nm.
double fit_rbw(const Spectrum& spectrum, double target_fwhm_nm) {
  const double bare = fwhm_3db(spectrum).width_nm;
  if (target_fwhm_nm <= bare) return 0.0;
  const double lam_span =
      std::abs(wavelength_nm_from_omega(spectrum.omega_rad_ps.front()) -
               wavelength_nm_from_omega(spectrum.omega_rad_ps.back()));
  auto width_at = [&](double rbw) {
    try {
      return fwhm_3db(convolve_instrument(spectrum, rbw)).width_nm;
    } catch (const RangeError& e) {
      throw SolverError("instrument fit target " + format_g9(target_fwhm_nm) +
                        " nm unreachable on this grid: " + e.what());
    }
  };
  // smoothing never narrows the spectrum below the kernel width, so the
  // target itself brackets the root from above (grown if the tails bite)
  double lo = 0.0, hi = target_fwhm_nm;
  while (width_at(hi) < target_fwhm_nm) {
    hi *= 1.5;
    if (hi > lam_span)
      throw SolverError("instrument fit target " + format_g9(target_fwhm_nm) +
                        " nm unreachable on this grid");
  }
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double width = width_at(mid);
    if (std::abs(width - target_fwhm_nm) < 1e-6) return mid;
    if (width < target_fwhm_nm)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

std::string csv_join(const std::vector<std::string>& cells) {
  std::string line;
  for (size_t i = 0; i < cells.size(); ++i) {
    if (i) line += ',';
    line += cells[i];
  }
  line += '\n';
  return line;
}

} // namespace

std::vector<std::string> emit_jsa(const RunConfig& config,
                                  const std::filesystem::path& out_dir) {
  const ResolvedSetup setup = resolve_setup(config);
  const JsaGrid jsa = build_jsa(setup.sellmeier, setup.crystal, setup.pump, setup.grid);
  const int n = setup.grid.points_per_axis;
  const auto axis = setup.grid.axis();

  std::string csv;
  csv.reserve(static_cast<size_t>(n) * n * 14);
  {
    std::vector<std::string> header;
    header.reserve(n + 1);
    header.push_back("signal_nm");
    for (int j = 0; j < n; ++j)
      header.push_back(format_g9(wavelength_nm_from_omega(axis[j])));
    csv += csv_join(header);
  }
  for (int i = 0; i < n; ++i) {
    std::vector<std::string> row;
    row.reserve(n + 1);
    row.push_back(format_g9(wavelength_nm_from_omega(axis[i])));
    for (int j = 0; j < n; ++j) {
      const double a = jsa.at(i, j);
      row.push_back(format_g9(a * a));
    }
    csv += csv_join(row);
  }
  write_file(out_dir / "jsa.csv", csv);

  json meta = setup_to_json(setup);
  meta["normalization"] = jsa.normalization;
  meta["warnings"] = jsa.warnings;
  meta["csv"] = "jsa.csv: header row = idler wavelengths [nm]; first column = signal "
                "wavelength [nm]; cells = normalized joint spectral density |A|^2";
  write_file(out_dir / "jsa_meta.json", dump_json(meta));
  return {"jsa.csv", "jsa_meta.json"};
}

std::vector<std::string> emit_marginals(const RunConfig& config,
                                        const std::filesystem::path& out_dir) {
  const ResolvedSetup setup = resolve_setup(config);
  const JsaGrid jsa = build_jsa(setup.sellmeier, setup.crystal, setup.pump, setup.grid);
  const Spectrum signal = marginal_spectrum(jsa, Party::Signal);
  const Spectrum idler = marginal_spectrum(jsa, Party::Idler);
  const CoincidenceSlice slice = coincidence_spectrum(jsa);

  std::string csv = "wavelength_nm,signal_marginal,idler_marginal,coincidence\n";
  const int n = setup.grid.points_per_axis;
  for (int i = 0; i < n; ++i) {
    csv += csv_join({format_g9(wavelength_nm_from_omega(signal.omega_rad_ps[i])),
                     format_g9(signal.value[i]), format_g9(idler.value[i]),
                     format_g9(slice.spectrum.value[i])});
  }
  write_file(out_dir / "marginals.csv", csv);

  const FwhmResult fs = fwhm_3db(signal);
  const FwhmResult fi = fwhm_3db(idler);
  const FwhmResult fc = fwhm_3db(slice.spectrum);
  json meta = setup_to_json(setup);
  meta["signal_center_nm"] = fs.center_nm;
  meta["signal_fwhm_nm"] = fs.width_nm;
  meta["idler_center_nm"] = fi.center_nm;
  meta["idler_fwhm_nm"] = fi.width_nm;
  meta["coincidence_fwhm_nm"] = fc.width_nm;
  meta["coincidence_slice_offset_rad_ps"] = slice.offset_rad_ps;
  meta["r_lambda"] = fs.width_nm / fc.width_nm;
  meta["r_omega"] = fs.width_rad_ps / fc.width_rad_ps;
  meta["warnings"] = jsa.warnings;
  write_file(out_dir / "marginals_meta.json", dump_json(meta));
  return {"marginals.csv", "marginals_meta.json"};
}

std::vector<std::string> emit_hom(const RunConfig& config,
                                  const std::filesystem::path& out_dir) {
  const ResolvedSetup setup = resolve_setup(config);
  const JsaGrid jsa = build_jsa(setup.sellmeier, setup.crystal, setup.pump, setup.grid);
  const HomCurve curve = dip_curve(jsa, config.hom.delay_span_ps, config.hom.points);

  std::string csv = "delay_ps,coincidence\n";
  for (size_t k = 0; k < curve.delay_ps.size(); ++k)
    csv += csv_join({format_g9(curve.delay_ps[k]), format_g9(curve.coincidence[k])});
  write_file(out_dir / "hom.csv", csv);

  json meta = setup_to_json(setup);
  meta["visibility"] = curve.visibility;
  meta["dip_center_ps"] = curve.dip_center_ps;
  meta["dip_fwhm_ps"] = curve.dip_fwhm_ps;
  meta["overlap_visibility"] = overlap_visibility(jsa);
  meta["signed_overlap"] = signed_overlap(jsa);
  meta["group_delay_base_ps"] =
      dip_fwhm_vs_group_delay(setup.sellmeier, setup.crystal, setup.pump.center_omega());
  meta["warnings"] = jsa.warnings;
  write_file(out_dir / "hom_meta.json", dump_json(meta));
  return {"hom.csv", "hom_meta.json"};
}

std::vector<std::string> emit_shg_curve(const RunConfig& config,
                                        const std::filesystem::path& out_dir) {
  const CavityResolution res = resolve_cavity(config);
  std::vector<double> p1;
  for (int i = 0; i <= 150; ++i) p1.push_back(1.5 * i / 150.0);
  const std::vector<ShgOperatingPoint> curve = power_curve(res.cavity, p1);

  std::string csv = "p1_W,pc_W,p2_W,rm,residual\n";
  for (const auto& pt : curve)
    csv += csv_join({format_g9(pt.p1_w), format_g9(pt.pc_w), format_g9(pt.p2_w),
                     format_g9(pt.rm), format_g9(pt.residual_w)});
  write_file(out_dir / "shg_curve.csv", csv);

  json meta;
  meta["cavity"] = cavity_to_json(res.cavity);
  meta["gamma_source"] = res.calibrated ? "calibrated" : "configured";
  meta["calibration_p1_w"] = config.cavity.calibration.p1_w;
  meta["calibration_p2_w"] = config.cavity.calibration.p2_w;
  const ShgOperatingPoint ref = circulating_power(res.cavity, config.cavity.calibration.p1_w);
  meta["p2_at_calibration_p1_w"] = ref.p2_w;
  meta["efficiency_at_calibration_p1"] = ref.p2_w / ref.p1_w;
  meta["note"] = "theory curve only; above-threshold back-conversion of the circulating "
                 "field is outside this model, so measured curves fall below it at high power";
  write_file(out_dir / "shg_meta.json", dump_json(meta));
  return {"shg_curve.csv", "shg_meta.json"};
}

std::vector<std::string> emit_pm_temp(const RunConfig& config,
                                      const std::filesystem::path& out_dir,
                                      std::string* stdout_text) {
  const ResolvedSetup setup = resolve_setup(config);
  const double wp0 = config.pump.center_omega();
  CrystalSpec probe = setup.crystal;
  auto dk0_at = [&](double t) {
    probe.temperature_c = t;
    return delta_k(setup.sellmeier, probe, wp0 / 2.0, wp0 / 2.0);
  };

  json out;
  out["degenerate_temperature_c"] = json_number_or_null(setup.t_deg_c);
  out["qpm_sign"] = setup.crystal.qpm_sign;
  out["poling_period_um"] = setup.crystal.poling_period_um;
  out["pump_center_nm"] = config.pump.center_wavelength_nm;
  out["dk0_at_t_deg_rad_um"] =
      json_number_or_null(std::isfinite(setup.t_deg_c) ? dk0_at(setup.t_deg_c)
                                                       : std::numeric_limits<double>::quiet_NaN());
  out["dk0_at_15c_rad_um"] = dk0_at(15.0);
  out["dk0_at_150c_rad_um"] = dk0_at(150.0);
  out["operating_temperature_c"] = setup.crystal.temperature_c;
  out["sellmeier_provenance"] = setup.sellmeier.provenance;
  write_file(out_dir / "pm_temp.json", dump_json(out));

  if (stdout_text) {
    std::ostringstream os;
    os << "T_deg = " << format_g9(setup.t_deg_c) << " C (qpm_sign "
       << (setup.crystal.qpm_sign > 0 ? "+1" : "-1") << ", poling period "
       << format_g9(setup.crystal.poling_period_um) << " um, pump "
       << format_g9(config.pump.center_wavelength_nm) << " nm)\n"
       << "dk0(T_deg) = " << format_g9(out["dk0_at_t_deg_rad_um"].is_null()
                                           ? std::numeric_limits<double>::quiet_NaN()
                                           : out["dk0_at_t_deg_rad_um"].get<double>())
       << " rad/um; dk0(15 C) = " << format_g9(dk0_at(15.0))
       << "; dk0(150 C) = " << format_g9(dk0_at(150.0)) << "\n";
    *stdout_text = os.str();
  }
  return {"pm_temp.json"};
}

std::string build_report_json(const RunConfig& config) {
  const ResolvedSetup setup = resolve_setup(config);
  const JsaGrid jsa = build_jsa(setup.sellmeier, setup.crystal, setup.pump, setup.grid);

  const Spectrum signal = marginal_spectrum(jsa, Party::Signal);
  const Spectrum idler = marginal_spectrum(jsa, Party::Idler);
  const CoincidenceSlice slice = coincidence_spectrum(jsa);
  const FwhmResult fs = fwhm_3db(signal);
  const FwhmResult fi = fwhm_3db(idler);
  const FwhmResult fc = fwhm_3db(slice.spectrum);
  const double v_signed = signed_overlap(jsa);
  const HomCurve curve = dip_curve(jsa, config.hom.delay_span_ps, config.hom.points);

  SpectralReport figures;
  figures.signal_center_nm = fs.center_nm;
  figures.idler_center_nm = fi.center_nm;
  figures.signal_fwhm_nm = fs.width_nm;
  figures.idler_fwhm_nm = fi.width_nm;
  figures.coincidence_fwhm_nm = fc.width_nm;
  figures.r_lambda = fs.width_nm / fc.width_nm;
  figures.r_omega = fs.width_rad_ps / fc.width_rad_ps;
  figures.schmidt_k = schmidt_number(jsa);
  figures.hom_visibility = overlap_visibility(jsa);
  figures.hom_dip_fwhm_ps = curve.dip_fwhm_ps;

  json report;
  report["setup"] = setup_to_json(setup);
  report["warnings"] = jsa.warnings;

  json& spectral = report["spectral"];
  spectral["signal_center_nm"] = figures.signal_center_nm;
  spectral["idler_center_nm"] = figures.idler_center_nm;
  spectral["signal_fwhm_nm"] = figures.signal_fwhm_nm;
  spectral["idler_fwhm_nm"] = figures.idler_fwhm_nm;
  spectral["coincidence_fwhm_nm"] = figures.coincidence_fwhm_nm;
  spectral["coincidence_slice_offset_rad_ps"] = slice.offset_rad_ps;
  spectral["r_lambda"] = figures.r_lambda;
  spectral["r_omega"] = figures.r_omega;
  spectral["schmidt_k"] = figures.schmidt_k;

  json& hom = report["hom"];
  hom["overlap_visibility"] = figures.hom_visibility;
  hom["signed_overlap"] = v_signed;
  hom["dip_visibility"] = curve.visibility;
  hom["dip_center_ps"] = curve.dip_center_ps;
  hom["dip_fwhm_ps"] = figures.hom_dip_fwhm_ps;
  hom["group_delay_base_ps"] =
      dip_fwhm_vs_group_delay(setup.sellmeier, setup.crystal, setup.pump.center_omega());

  // Instrument comparison: Gaussian resolution kernel, either configured or
  // fitted so the convolved marginal matches the measured single-photon width.
  json& instrument = report["instrument"];
  double rbw = 0.0;
  if (config.instrument.rbw_nm) {
    rbw = *config.instrument.rbw_nm;
    instrument["rbw_source"] = "configured";
  } else {
    rbw = fit_rbw(signal, config.instrument.fit_target_marginal_nm);
    instrument["rbw_source"] = "fitted";
  }
  instrument["rbw_nm"] = rbw;
  instrument["fit_target_marginal_nm"] = config.instrument.fit_target_marginal_nm;
  const double conv_marginal = fwhm_3db(convolve_instrument(signal, rbw)).width_nm;
  const double conv_coincidence =
      fwhm_3db(convolve_instrument(slice.spectrum, rbw)).width_nm;
  instrument["convolved_marginal_fwhm_nm"] = conv_marginal;
  instrument["convolved_coincidence_fwhm_nm"] = conv_coincidence;
  instrument["reference_coincidence_nm"] = config.instrument.reference_coincidence_nm;
  instrument["coincidence_shift_nm"] = conv_coincidence - fc.width_nm;
  instrument["note"] =
      "single Gaussian kernel fitted to the measured single-photon width; applying the "
      "same kernel to the coincidence slice reports direction and magnitude only (the "
      "coincidence measurement involves both monochromators, so its effective kernel "
      "differs)";

  json& shg = report["shg"];
  const CavityResolution res = resolve_cavity(config);
  shg["cavity"] = cavity_to_json(res.cavity);
  shg["gamma_source"] = res.calibrated ? "calibrated" : "configured";
  const ShgOperatingPoint ref = circulating_power(res.cavity, config.cavity.calibration.p1_w);
  shg["calibration_p1_w"] = config.cavity.calibration.p1_w;
  shg["calibration_p2_w"] = config.cavity.calibration.p2_w;
  shg["p2_at_calibration_p1_w"] = ref.p2_w;
  shg["efficiency_at_calibration_p1"] = ref.p2_w / ref.p1_w;
  shg["circulating_power_at_calibration_p1_w"] = ref.pc_w;

  return dump_json(report);
}

std::vector<std::string> emit_report(const RunConfig& config,
                                     const std::filesystem::path& out_dir) {
  write_file(out_dir / "report.json", build_report_json(config));
  return {"report.json"};
}

} // namespace pairsim
