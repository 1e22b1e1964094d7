#ifndef PAIRSIM_CONFIG_HPP
#define PAIRSIM_CONFIG_HPP

#include <optional>
#include <string>

#include "pairsim/jsa.hpp"
#include "pairsim/shg.hpp"

namespace pairsim {

struct CalibrationPoint {
  double p1_w = 1.41;
  double p2_w = 0.742;
};

struct CavityConfig {
  CavitySpec spec;                 // gamma_sh field unused until resolved
  std::optional<double> gamma_sh;  // absent -> calibrate at the point below
  CalibrationPoint calibration;
};

struct GridConfig {
  int points_per_axis = 1024;
  double half_span_nm = 6.0;  // about the degenerate wavelength
};

struct HomConfig {
  double delay_span_ps = 6.0;
  int points = 601;
};

struct InstrumentConfig {
  std::optional<double> rbw_nm;          // absent -> fit to the target below
  double fit_target_marginal_nm = 3.22;  // measured single-photon 3-dB width
  double reference_coincidence_nm = 0.52;
};

// Full run description. Parsed strictly: unknown keys are rejected, every
// nested invariant is checked at parse time with a field-path diagnostic.
struct RunConfig {
  CrystalSpec crystal;
  bool temperature_degenerate = true;  // solve T_deg instead of crystal.temperature_c
  bool qpm_sign_auto = true;           // pick the physical grating-term sign
  PumpSpec pump;
  CavityConfig cavity;
  GridConfig grid;
  HomConfig hom;
  InstrumentConfig instrument;
  std::string output_dir = "out";
  std::string sellmeier_set = "ktp_default";   // builtin set name
  std::optional<std::string> sellmeier_file;   // override file, wins over the name
};

RunConfig default_config();

// Strict parse of a UTF-8 JSON document. Malformed JSON -> ConfigError with
// the byte offset; schema violations -> ConfigError with the field path.
RunConfig parse_config(const std::string& json_text);

// Canonical JSON serialization (stable key order); re-parsing reproduces the
// same RunConfig.
std::string config_to_json(const RunConfig& config);

// Loads a SellmeierSet override document; diagnostics carry line:column and
// field paths.
SellmeierSet load_sellmeier_file(const std::string& path);
SellmeierSet sellmeier_from_json_text(const std::string& text,
                                      const std::string& origin);

// Everything downstream code needs, with temperature, QPM sign, coefficient
// set and grid resolved from the config.
struct ResolvedSetup {
  SellmeierSet sellmeier;
  CrystalSpec crystal;  // temperature_c and qpm_sign filled in
  PumpSpec pump;
  FrequencyGrid grid;   // centered on the degenerate frequency
  double t_deg_c = 0.0;
  double dk0_at_operating_t = 0.0;
};
ResolvedSetup resolve_setup(const RunConfig& config);

} // namespace pairsim

#endif
