#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "test_util.hpp"
#include "pairsim/hom.hpp"

using namespace pairsim;
using namespace pairsim::test;

TEST_CASE("pump envelope peaks at exactly 1 on the energy-conservation line") {
  PumpSpec pump;
  const double wp = pump.center_omega();
  CHECK(pump_envelope(pump, wp / 2.0 + 0.7, wp / 2.0 - 0.7) == 1.0);
  // depends on ws + wi only
  CHECK(pump_envelope(pump, wp / 2.0 + 0.3, wp / 2.0 - 0.1) ==
        pump_envelope(pump, wp / 2.0 - 0.1, wp / 2.0 + 0.3));
}

TEST_CASE("pump intensity halves at the detuning set by the 3-dB bandwidth") {
  PumpSpec pump;
  pump.bandwidth_3db_nm = 0.05;
  const double wp = pump.center_omega();
  const double fwhm = omega_width_from_nm(0.05, 780.0);
  const double amp = pump_envelope(pump, wp / 2.0 + fwhm / 2.0, wp / 2.0);
  CHECK(amp * amp == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("sinc amplitude limit, first zero and quarter-period value") {
  const double L = 1e4;  // 10 mm in um
  CHECK(sinc_amplitude(0.0, L) == L);
  CHECK(sinc_amplitude(1e-13, L) == L);  // analytic limit branch
  CHECK(std::abs(sinc_amplitude(2.0 * kPi / L, L)) < 1e-9 * L);
  CHECK(sinc_amplitude(kPi / L, L) == doctest::Approx(L * 2.0 / kPi).epsilon(1e-12));
}

TEST_CASE("built grid is normalized and finite") {
  const JsaGrid jsa = default_jsa(256);
  CHECK(density_integral(jsa) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(jsa.normalization > 0.0);
  CHECK(jsa.warnings.empty());
  for (double a : jsa.amplitude) CHECK(std::isfinite(a));
}

TEST_CASE("joint density is frequency anti-correlated") {
  const JsaGrid jsa = default_jsa(512);
  const int n = jsa.grid.points_per_axis;
  const auto w = jsa.grid.weights();
  const auto axis = jsa.grid.axis();

  double mass = 0, mean_s = 0, mean_i = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double p = jsa.at(i, j) * jsa.at(i, j) * w[i] * w[j];
      mass += p;
      mean_s += p * axis[i];
      mean_i += p * axis[j];
    }
  mean_s /= mass;
  mean_i /= mass;
  double cov = 0, var_s = 0, var_i = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double p = jsa.at(i, j) * jsa.at(i, j) * w[i] * w[j];
      cov += p * (axis[i] - mean_s) * (axis[j] - mean_i);
      var_s += p * (axis[i] - mean_s) * (axis[i] - mean_s);
      var_i += p * (axis[j] - mean_i) * (axis[j] - mean_i);
    }
  const double pearson = cov / mass / std::sqrt(var_s / mass * var_i / mass);
  CHECK(pearson < -0.9);

  // density on the anti-diagonal lattice line dominates the diagonal at equal
  // offsets from the center
  const int i0 = n / 2;
  for (int m : {8, 16, 28, 40}) {  // offsets ~0.3..1.5 rad/ps at 512 points
    const double anti = jsa.at(i0 + m, n - 1 - i0 - m) * jsa.at(i0 + m, n - 1 - i0 - m);
    const double diag = jsa.at(i0 + m, i0 + m) * jsa.at(i0 + m, i0 + m);
    CHECK(anti >= 10.0 * diag);
  }
}

TEST_CASE("vanishing pump bandwidth collapses the density onto the anti-diagonal") {
  ResolvedSetup s = default_setup(256);
  s.pump.bandwidth_3db_nm = 1e-8;
  const JsaGrid jsa = build_jsa(s.sellmeier, s.crystal, s.pump, s.grid);
  CHECK(!jsa.warnings.empty());  // grossly under-resolved pump ridge
  const int n = jsa.grid.points_per_axis;
  const auto w = jsa.grid.weights();
  double off_line = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i + j != n - 1) off_line += jsa.at(i, j) * jsa.at(i, j) * w[i] * w[j];
  CHECK(off_line < 1e-3);
}

TEST_CASE("under-resolved grids raise a structured warning") {
  ResolvedSetup s = default_setup(64);  // 64 points over +/-6 nm under-samples the pump
  const JsaGrid jsa = build_jsa(s.sellmeier, s.crystal, s.pump, s.grid);
  REQUIRE(!jsa.warnings.empty());
  CHECK(jsa.warnings.front().find("under-resolve") != std::string::npos);
}

TEST_CASE("grid must be centered on the degenerate frequency") {
  ResolvedSetup s = default_setup(256);
  FrequencyGrid off = s.grid;
  off.center_rad_ps += 1.0;
  CHECK_THROWS_AS(build_jsa(s.sellmeier, s.crystal, s.pump, off), ConfigError);
}

TEST_CASE("marginals integrate to one and match the separable analytic form") {
  const JsaGrid jsa = default_jsa(256);
  for (Party p : {Party::Signal, Party::Idler}) {
    const Spectrum m = marginal_spectrum(jsa, p);
    CHECK(spectrum_integral(m) == doctest::Approx(1.0).epsilon(1e-9));
  }

  const double c = 1207.0, sigma = 0.5;
  const JsaGrid sep = separable_gaussian(c, sigma, 256);
  const Spectrum m = marginal_spectrum(sep, Party::Signal);
  // marginal of f(ws) f(wi) is proportional to f(ws)^2; the peak sample sits
  // half a step off center on an even grid, so normalize both sides by it
  const size_t peak_idx =
      std::max_element(m.value.begin(), m.value.end()) - m.value.begin();
  auto analytic = [&](size_t i) {
    const double d = (m.omega_rad_ps[i] - c) / sigma;
    return std::exp(-d * d);
  };
  for (size_t i = 0; i < m.value.size(); ++i)
    CHECK(m.value[i] / m.value[peak_idx] ==
          doctest::Approx(analytic(i) / analytic(peak_idx)).epsilon(1e-6));
}

TEST_CASE("coincidence slice of a separable equal-width grid reproduces the marginal width") {
  const JsaGrid sep = separable_gaussian(1207.0, 0.5, 256);
  const EntanglementParameter ep = entanglement_parameter(sep);
  CHECK(ep.r_lambda == doctest::Approx(1.0).epsilon(0.01));
  CHECK(ep.r_omega == doctest::Approx(1.0).epsilon(0.01));
  CHECK(std::abs(ep.slice_offset_rad_ps) <= 0.5 * sep.grid.step());
}

TEST_CASE("flat-pump slice is the bare sinc^2 phase-matching profile") {
  ResolvedSetup s = default_setup(256);
  s.pump.bandwidth_3db_nm = 1e4;  // flat envelope across the grid
  const JsaGrid jsa = build_jsa(s.sellmeier, s.crystal, s.pump, s.grid);
  const CoincidenceSlice slice = coincidence_spectrum(jsa);
  const int n = s.grid.points_per_axis;
  const int j0 = static_cast<int>(
      std::llround((s.grid.center_rad_ps - s.grid.omega_at(0)) / s.grid.step()));
  const double wi = s.grid.omega_at(j0);
  std::vector<double> expected(n);
  double peak = 0.0;
  for (int i = 0; i < n; ++i) {
    const double phi = phase_matching_amplitude(s.sellmeier, s.crystal, s.grid.omega_at(i), wi);
    expected[i] = phi * phi;
    peak = std::max(peak, expected[i]);
  }
  for (int i = 0; i < n; ++i)
    CHECK(slice.spectrum.value[i] == doctest::Approx(expected[i] / peak).epsilon(1e-5));
}

TEST_CASE("fwhm of sampled gaussians matches the closed form") {
  const double c = 1207.0, sigma = 0.35;
  Spectrum s;
  const int n = 513;
  for (int i = 0; i < n; ++i) {
    const double w = c - 4.0 * sigma + 8.0 * sigma * i / (n - 1);
    s.omega_rad_ps.push_back(w);
    const double d = (w - c) / sigma;
    s.value.push_back(std::exp(-0.5 * d * d));
  }
  const FwhmResult r = fwhm_3db(s);
  CHECK(r.width_rad_ps == doctest::Approx(gaussian_fwhm_from_sigma(sigma)).epsilon(1e-3));
  CHECK(r.center_nm == doctest::Approx(wavelength_nm_from_omega(c)).epsilon(1e-6));
}

TEST_CASE("fwhm of a sinc^2 profile matches a dense-scan oracle") {
  const double c = 1207.0, a = 1.5;  // sinc(a (w - c))^2
  auto profile = [&](double w) {
    const double x = a * (w - c);
    return x == 0.0 ? 1.0 : std::pow(std::sin(x) / x, 2.0);
  };
  Spectrum s;
  const int n = 1025;
  for (int i = 0; i < n; ++i) {
    const double w = c - 2.5 + 5.0 * i / (n - 1);
    s.omega_rad_ps.push_back(w);
    s.value.push_back(profile(w));
  }
  // dense scan of the analytic curve for the half-maximum crossing
  double cross = 0.0;
  const int scans = 1000000;
  for (int i = 1; i <= scans; ++i) {
    const double w = c + 2.5 * i / scans;
    if (profile(w) <= 0.5) {
      const double w_prev = c + 2.5 * (i - 1) / scans;
      const double v0 = profile(w_prev), v1 = profile(w);
      cross = w_prev + (0.5 - v0) / (v1 - v0) * (w - w_prev);
      break;
    }
  }
  const double oracle_width = 2.0 * (cross - c);
  const FwhmResult r = fwhm_3db(s);
  CHECK(r.width_rad_ps == doctest::Approx(oracle_width).epsilon(0.002));

  // refinement stability: doubling the sampling moves the width by < 0.1%
  Spectrum s2;
  for (int i = 0; i < 2 * n - 1; ++i) {
    const double w = c - 2.5 + 5.0 * i / (2 * n - 2);
    s2.omega_rad_ps.push_back(w);
    s2.value.push_back(profile(w));
  }
  CHECK(std::abs(fwhm_3db(s2).width_rad_ps - r.width_rad_ps) / r.width_rad_ps < 1e-3);
}

TEST_CASE("clipped spectra are rejected") {
  Spectrum rising;  // peak on the edge
  for (int i = 0; i < 64; ++i) {
    rising.omega_rad_ps.push_back(1200.0 + 0.01 * i);
    rising.value.push_back(static_cast<double>(i));
  }
  CHECK_THROWS_WITH_AS(fwhm_3db(rising), doctest::Contains("clipped"), RangeError);

  Spectrum narrow;  // half-maximum crossings outside the grid
  for (int i = 0; i < 64; ++i) {
    const double w = 1207.0 - 0.5 + 1.0 * i / 63.0;
    narrow.omega_rad_ps.push_back(w);
    narrow.value.push_back(std::exp(-0.5 * (w - 1207.0) * (w - 1207.0)));
  }
  CHECK_THROWS_WITH_AS(fwhm_3db(narrow), doctest::Contains("clipped"), RangeError);
}

TEST_CASE("default source reproduces the reference spectral figures") {
  const JsaGrid jsa = default_jsa(512);
  const EntanglementParameter ep = entanglement_parameter(jsa);
  CHECK(ep.marginal.width_nm == doctest::Approx(2.4).epsilon(0.10));
  CHECK(std::abs(ep.marginal.center_nm - 1560.0) < 0.2);
  CHECK(ep.coincidence.width_nm == doctest::Approx(0.43).epsilon(0.10));
  CHECK(ep.r_lambda == doctest::Approx(5.58).epsilon(0.10));
  const FwhmResult idler = fwhm_3db(marginal_spectrum(jsa, Party::Idler));
  CHECK(idler.width_nm == doctest::Approx(2.4).epsilon(0.10));
  CHECK(std::abs(idler.center_nm - 1559.9) < 0.2);
}

TEST_CASE("narrowing the pump strictly increases the entanglement parameter") {
  double previous = 0.0;
  for (double bw : {0.216, 0.108, 0.054}) {
    ResolvedSetup s = default_setup(512);
    s.pump.bandwidth_3db_nm = bw;
    const JsaGrid jsa = build_jsa(s.sellmeier, s.crystal, s.pump, s.grid);
    const double r = entanglement_parameter(jsa).r_lambda;
    CHECK(r > previous);
    previous = r;
  }
}

TEST_CASE("schmidt spectrum of a separable grid is a single mode") {
  const JsaGrid sep = separable_gaussian(1207.0, 0.5, 128);
  const std::vector<double> lambda = schmidt_spectrum(sep);
  CHECK(schmidt_number(sep) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(lambda.front() == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("schmidt spectrum is a probability distribution") {
  for (const JsaGrid& jsa : {default_jsa(192), separable_gaussian(1207.0, 0.4, 128)}) {
    const std::vector<double> lambda = schmidt_spectrum(jsa);
    double sum = 0.0;
    for (double l : lambda) {
      CHECK(l >= 0.0);
      sum += l;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(schmidt_number(jsa) >= 1.0 - 1e-6);
  }
}

TEST_CASE("schmidt number agrees with the trace-identity oracle") {
  // K = (tr M)^2 / tr(M^2) for M = B^T B, independent of any eigensolve.
  const JsaGrid jsa = default_jsa(192);
  const int n = jsa.grid.points_per_axis;
  const auto w = jsa.grid.weights();
  std::vector<double> sw(n);
  for (int i = 0; i < n; ++i) sw[i] = std::sqrt(w[i]);
  std::vector<double> m(static_cast<size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double acc = 0.0;
      for (int k = 0; k < n; ++k)
        acc += jsa.at(k, i) * sw[k] * sw[i] * jsa.at(k, j) * sw[k] * sw[j];
      m[static_cast<size_t>(i) * n + j] = acc;
    }
  double tr = 0.0, tr2 = 0.0;
  for (int i = 0; i < n; ++i) tr += m[static_cast<size_t>(i) * n + i];
  for (double v : m) tr2 += v * v;
  const double k_oracle = tr * tr / tr2;
  CHECK(schmidt_number(jsa) == doctest::Approx(k_oracle).epsilon(1e-9));
}

TEST_CASE("instrument convolution: identity, quadrature widths, area") {
  const double lam0 = 1560.0, sig_nm = 0.9;
  Spectrum s;
  const int n = 801;
  for (int i = 0; i < n; ++i) {
    const double w = omega_from_wavelength_nm(1566.0) +
                     (omega_from_wavelength_nm(1554.0) - omega_from_wavelength_nm(1566.0)) *
                         i / (n - 1);
    s.omega_rad_ps.push_back(w);
    const double d = (wavelength_nm_from_omega(w) - lam0) / sig_nm;
    s.value.push_back(std::exp(-0.5 * d * d));
  }

  const Spectrum same = convolve_instrument(s, 0.0);
  for (size_t i = 0; i < s.value.size(); ++i)
    CHECK(std::abs(same.value[i] - s.value[i]) < 1e-12);

  const double a = gaussian_fwhm_from_sigma(sig_nm);
  for (double rbw : {1.0, 2.1}) {
    const Spectrum conv = convolve_instrument(s, rbw);
    const double width = fwhm_3db(conv).width_nm;
    CHECK(width == doctest::Approx(std::sqrt(a * a + rbw * rbw)).epsilon(0.005));

    // area preservation on the wavelength axis
    auto area = [&](const Spectrum& sp) {
      double total = 0.0;
      for (size_t i = 0; i + 1 < sp.value.size(); ++i) {
        const double dl = std::abs(wavelength_nm_from_omega(sp.omega_rad_ps[i + 1]) -
                                   wavelength_nm_from_omega(sp.omega_rad_ps[i]));
        total += 0.5 * (sp.value[i] + sp.value[i + 1]) * dl;
      }
      return total;
    };
    CHECK(area(conv) == doctest::Approx(area(s)).epsilon(1e-6));
  }
}

TEST_CASE("kernel wider than the grid span is rejected") {
  const JsaGrid jsa = default_jsa(128);
  const Spectrum m = marginal_spectrum(jsa, Party::Signal);
  CHECK_THROWS_WITH_AS(convolve_instrument(m, 20.0), doctest::Contains("kernel exceeds"),
                       RangeError);
}

TEST_CASE("grid validation enforces the shape contract") {
  FrequencyGrid g{1207.5, 4.6, 63};
  CHECK_THROWS_AS(g.validate(), ConfigError);  // odd
  g.points_per_axis = 62;
  CHECK_THROWS_AS(g.validate(), ConfigError);  // even but below the 64 floor
  g.points_per_axis = 64;
  CHECK_NOTHROW(g.validate());
}
