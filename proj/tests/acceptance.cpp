// Acceptance suite: runs the full default pipeline and checks every shipped
// figure of merit at its stated tolerance, one line per criterion.
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "pairsim/cli.hpp"
#include "pairsim/emit.hpp"
#include "pairsim/hom.hpp"

using namespace pairsim;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report_line(int number, const std::string& name, bool pass, const std::string& detail) {
  std::printf("%s  criterion %d: %s — %s\n", pass ? "PASS" : "FAIL", number, name.c_str(),
              detail.c_str());
  if (!pass) ++failures;
}

void run_criterion(int number, const std::string& name,
                   const std::function<std::pair<bool, std::string>()>& body) {
  try {
    const auto [pass, detail] = body();
    report_line(number, name, pass, detail);
  } catch (const std::exception& e) {
    report_line(number, name, false, std::string("exception: ") + e.what());
  }
}

bool within(double value, double target, double rel_tol) {
  return std::abs(value - target) <= rel_tol * std::abs(target);
}

std::string g9(double v) { return format_g9(v); }

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Grid-converged Schmidt number at the default configuration, recorded after
// the first verified run (1024^2 vs 512^2 agreed to 6e-7 relative).
constexpr double kSchmidtGolden = 5.75042522;

} // namespace

int main() {
  // One full default pipeline, shared by criteria 1-4, 6 and 7.
  json report;
  double report_seconds = 0.0;
  try {
    const auto t0 = std::chrono::steady_clock::now();
    const std::string text = build_report_json(default_config());
    report_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report = json::parse(text);
  } catch (const std::exception& e) {
    std::printf("FAIL  default report pipeline raised: %s\n", e.what());
    return 1;
  }
  const json& spectral = report["spectral"];
  const json& hom = report["hom"];
  const json& instrument = report["instrument"];
  const json& shg = report["shg"];

  run_criterion(1, "marginal centers/widths and report runtime", [&] {
    const double sc = spectral["signal_center_nm"].get<double>();
    const double ic = spectral["idler_center_nm"].get<double>();
    const double sw = spectral["signal_fwhm_nm"].get<double>();
    const double iw = spectral["idler_fwhm_nm"].get<double>();
    const bool pass = std::abs(sc - 1560.0) <= 0.2 && std::abs(ic - 1559.9) <= 0.2 &&
                      within(sw, 2.4, 0.10) && within(iw, 2.4, 0.10) && report_seconds < 10.0;
    return std::make_pair(pass, "centers " + g9(sc) + "/" + g9(ic) + " nm, widths " + g9(sw) +
                                    "/" + g9(iw) + " nm, report took " + g9(report_seconds) +
                                    " s at 1024^2");
  });

  run_criterion(2, "coincidence width", [&] {
    const double cw = spectral["coincidence_fwhm_nm"].get<double>();
    return std::make_pair(within(cw, 0.43, 0.10), g9(cw) + " nm vs 0.43 nm +/- 10%");
  });

  run_criterion(3, "entanglement parameter R", [&] {
    const double r = spectral["r_lambda"].get<double>();
    const double r_omega = spectral["r_omega"].get<double>();
    return std::make_pair(within(r, 5.58, 0.10), "R_lambda = " + g9(r) + " (R_omega = " +
                                                     g9(r_omega) + ") vs 5.58 +/- 10%");
  });

  run_criterion(4, "two-photon interference visibility and dip width", [&] {
    const double v = hom["dip_visibility"].get<double>();
    const double v_eq = hom["overlap_visibility"].get<double>();
    const double v_signed = hom["signed_overlap"].get<double>();
    const double fw = hom["dip_fwhm_ps"].get<double>();
    const bool pass = v >= 0.99 && v_eq >= 0.99 && within(fw, 1.48, 0.10) &&
                      std::abs(v_eq - v_signed) < 1e-2;
    return std::make_pair(pass, "visibility " + g9(v) + " (overlap " + g9(v_eq) +
                                    ", signed " + g9(v_signed) + "), dip fwhm " + g9(fw) +
                                    " ps vs 1.48 ps +/- 10%");
  });

  run_criterion(5, "cavity second-harmonic calibration and scaling", [&] {
    const double p2 = shg["p2_at_calibration_p1_w"].get<double>();
    const double eff = shg["efficiency_at_calibration_p1"].get<double>();
    bool pass = std::abs(p2 - 0.742) <= 1e-6 && std::abs(eff - 0.526) <= 0.001;

    CavitySpec cavity;
    cavity.gamma_sh = shg["cavity"]["gamma_sh_per_w"].get<double>();
    const double slope =
        std::log(sh_output_power(cavity, 1e-3) / sh_output_power(cavity, 0.5e-3)) / std::log(2.0);
    pass = pass && std::abs(slope - 2.0) <= 0.02;

    std::vector<double> p1;
    for (int i = 0; i <= 150; ++i) p1.push_back(1.5 * i / 150.0);
    const auto curve = power_curve(cavity, p1);
    for (size_t i = 1; i < curve.size(); ++i)
      if (curve[i].p2_w < curve[i - 1].p2_w - 1e-15) pass = false;

    return std::make_pair(pass, "p2(1.41 W) = " + g9(p2) + " W, efficiency " + g9(eff * 100) +
                                    "%, low-power slope " + g9(slope) +
                                    ", curve monotone on [0, 1.5] W; high-power back-conversion"
                                    " deliberately not modeled");
  });

  run_criterion(6, "degenerate phase-matching temperature", [&] {
    const double t = report["setup"]["degenerate_temperature_c"].get<double>();
    const double dk0 = report["setup"]["dk0_at_operating_t_rad_um"].get<double>();
    const bool pass = std::abs(t - 64.0) <= 10.0 && std::abs(dk0) < 1e-9;
    return std::make_pair(pass, "T_deg = " + g9(t) + " C (band 64 +/- 10, value is a property"
                                    " of the embedded coefficient set), |dk0| = " +
                                    g9(std::abs(dk0)) + " rad/um");
  });

  run_criterion(7, "instrument-resolution comparison", [&] {
    const double rbw = instrument["rbw_nm"].get<double>();
    const double conv_m = instrument["convolved_marginal_fwhm_nm"].get<double>();
    const double conv_c = instrument["convolved_coincidence_fwhm_nm"].get<double>();
    const double bare_c = spectral["coincidence_fwhm_nm"].get<double>();
    const double shift = instrument["coincidence_shift_nm"].get<double>();
    // hard tolerance only on the fitted marginal; the coincidence comparison
    // is directional (the measured joint width involves both monochromators)
    const bool pass = std::abs(conv_m - 3.22) <= 0.05 && conv_c > bare_c &&
                      std::isfinite(shift) && shift > 0.0;
    return std::make_pair(pass, "fitted rbw = " + g9(rbw) + " nm -> marginal " + g9(conv_m) +
                                    " nm (target 3.22 +/- 0.05); coincidence " + g9(bare_c) +
                                    " -> " + g9(conv_c) + " nm, moves toward the measured 0.52"
                                    " (shift " + g9(shift) + " nm, reported without tolerance);"
                                    " measured visibility 95% and 1.28 ps are non-targets");
  });

  run_criterion(8, "property suite", [&] {
    std::ostringstream detail;
    bool pass = true;
    auto expect = [&](bool ok, const std::string& what) {
      if (!ok) {
        pass = false;
        detail << " FAILED[" << what << "]";
      }
    };

    // normalization at the default grid
    {
      RunConfig cfg = default_config();
      cfg.grid.points_per_axis = 512;
      const ResolvedSetup s = resolve_setup(cfg);
      const JsaGrid jsa = build_jsa(s.sellmeier, s.crystal, s.pump, s.grid);
      const auto w = jsa.grid.weights();
      double total = 0.0;
      for (int i = 0; i < 512; ++i)
        for (int j = 0; j < 512; ++j)
          total += jsa.at(i, j) * jsa.at(i, j) * w[i] * w[j];
      expect(std::abs(total - 1.0) <= 1e-9, "normalization");

      // Schmidt spectrum is a probability distribution
      const auto lambda = schmidt_spectrum(jsa);
      double sum = 0.0;
      bool nonneg = true;
      for (double l : lambda) {
        sum += l;
        nonneg = nonneg && l >= 0.0;
      }
      expect(std::abs(sum - 1.0) <= 1e-9 && nonneg, "schmidt-spectrum");

      // K converges under grid refinement: 512^2 vs the default 1024^2
      const double k512 = schmidt_number(jsa);
      const double k1024 = spectral["schmidt_k"].get<double>();
      expect(std::abs(k512 - k1024) / k1024 <= 0.02, "schmidt-refinement");
      expect(within(k1024, kSchmidtGolden, 0.02), "schmidt-golden");
      detail << " K=" << g9(k1024) << " (512^2: " << g9(k512) << ");";

      // marginal width drifts < 0.1% under 2x grid refinement
      const double w1 = fwhm_3db(marginal_spectrum(jsa, Party::Signal)).width_nm;
      RunConfig fine = default_config();
      fine.grid.points_per_axis = 1024;
      const ResolvedSetup sf = resolve_setup(fine);
      const JsaGrid jf = build_jsa(sf.sellmeier, sf.crystal, sf.pump, sf.grid);
      const double w2 = fwhm_3db(marginal_spectrum(jf, Party::Signal)).width_nm;
      expect(std::abs(w1 - w2) / w2 < 1e-3, "fwhm-refinement");

      // dip curve at the default window: nonnegative, Gibbs shoulder from the
      // +/-6 nm truncation stays under 1%, far baseline within 1e-3 of 1
      const HomCurve curve = dip_curve(jf, 6.0, 601);
      bool bounded = true;
      for (size_t k = 0; k < curve.coincidence.size(); ++k) {
        const double c = curve.coincidence[k];
        bounded = bounded && c >= 0.0 && c <= 1.01;
        if (std::abs(curve.delay_ps[k]) >= 4.0)
          bounded = bounded && std::abs(c - 1.0) <= 1e-3;
      }
      expect(bounded, "hom-curve-bounds");
    }

    // separable fixture: R, K, V, dip floor
    {
      FrequencyGrid grid{1207.0, 3.0, 256};
      auto f = [](double x) {
        const double d = (x - 1207.0) / 0.5;
        return std::exp(-0.5 * d * d);
      };
      const JsaGrid sep =
          JsaGrid::from_function(grid, [&](double a, double b) { return f(a) * f(b); });
      expect(std::abs(entanglement_parameter(sep).r_lambda - 1.0) <= 0.01, "separable-R");
      expect(std::abs(schmidt_number(sep) - 1.0) <= 1e-6, "separable-K");
      expect(std::abs(overlap_visibility(sep) - 1.0) <= 1e-9, "separable-V");
      const HomCurve dip = dip_curve(sep, 8.0, 401);
      expect(std::abs((1.0 - dip.visibility) - 0.0) <= 1e-9, "separable-dip");
    }

    // SHG: fixed-point residuals and the gamma = 0 closed form
    {
      CavitySpec cavity;
      cavity.gamma_sh = calibrate_gamma(cavity, 1.41, 0.742);
      for (double p1 : {0.1, 0.7, 1.41}) {
        const ShgOperatingPoint pt = circulating_power(cavity, p1);
        expect(pt.residual_w < 1e-9 * std::max(pt.pc_w, 1.0), "fixed-point-residual");
      }
      CavitySpec linear;
      linear.gamma_sh = 0.0;
      const double t = linear.single_pass_t();
      const double closed =
          linear.t1 * 1.41 / std::pow(1.0 - std::sqrt(linear.r1 * linear.r2 * t * t), 2.0);
      expect(std::abs(circulating_power(linear, 1.41).pc_w - closed) <= 1e-12 * closed,
             "closed-form");
    }

    // byte-identical artifacts for identical configs (256^2 grid via the CLI)
    {
      const fs::path dir =
          fs::temp_directory_path() / ("pairsim_acceptance_" + std::to_string(::getpid()));
      fs::remove_all(dir);
      fs::create_directories(dir);
      json cfg;
      cfg["grid"]["points_per_axis"] = 256;
      cfg["hom"]["points"] = 201;
      {
        std::ofstream out(dir / "cfg.json", std::ios::binary);
        out << cfg.dump();
      }
      const std::string cfg_path = (dir / "cfg.json").string();
      const std::string out_a = (dir / "a").string();
      const std::string out_b = (dir / "b").string();
      std::ostringstream sink;
      std::streambuf* old = std::cout.rdbuf(sink.rdbuf());
      bool identical = true;
      for (const char* sub : {"report", "marginals", "hom"}) {
        const char* argv_a[] = {"pairsim", sub, "--config", cfg_path.c_str(), "--out",
                                out_a.c_str()};
        const char* argv_b[] = {"pairsim", sub, "--config", cfg_path.c_str(), "--out",
                                out_b.c_str()};
        identical = identical && cli::run(6, argv_a) == 0 && cli::run(6, argv_b) == 0;
      }
      std::cout.rdbuf(old);
      for (const auto& entry : fs::directory_iterator(out_a)) {
        const fs::path other = fs::path(out_b) / entry.path().filename();
        identical = identical && fs::exists(other) && slurp(entry.path()) == slurp(other);
      }
      expect(identical, "byte-identical-outputs");
      fs::remove_all(dir);
    }

    return std::make_pair(pass, pass ? "normalization, separable limits, schmidt spectrum,"
                                       " residuals, closed form, refinement drifts and output"
                                       " determinism all within bounds" + detail.str()
                                     : detail.str());
  });

  if (failures == 0) {
    std::printf("all acceptance criteria passed\n");
    return 0;
  }
  std::printf("%d acceptance criterion(s) failed\n", failures);
  return 1;
}
