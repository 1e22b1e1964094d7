#include "pairsim/config.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <json.hpp>

namespace pairsim {

using nlohmann::json;

namespace {

std::string join_path(const std::string& base, const std::string& key) {
  return base.empty() ? key : base + "." + key;
}

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError(path.empty() ? what : path + ": " + what);
}

void require_object(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected a JSON object");
}

void reject_unknown_keys(const json& j, const std::string& path,
                         const std::set<std::string>& allowed) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key())) fail(path, "unknown key '" + it.key() + "'");
}

double get_number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

int get_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<int>();
}

std::string get_string(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

template <typename F>
void if_present(const json& j, const std::string& key, F&& apply) {
  if (auto it = j.find(key); it != j.end()) apply(*it);
}

void parse_crystal(const json& j, const std::string& path, RunConfig& cfg) {
  require_object(j, path);
  reject_unknown_keys(j, path,
                      {"length_mm", "poling_period_um", "temperature_c", "qpm_sign",
                       "pump_axis", "signal_axis", "idler_axis"});
  if_present(j, "length_mm", [&](const json& v) {
    cfg.crystal.length_mm = get_number(v, join_path(path, "length_mm"));
  });
  if_present(j, "poling_period_um", [&](const json& v) {
    cfg.crystal.poling_period_um = get_number(v, join_path(path, "poling_period_um"));
  });
  if_present(j, "temperature_c", [&](const json& v) {
    const std::string p = join_path(path, "temperature_c");
    if (v.is_string()) {
      if (v.get<std::string>() != "degenerate")
        fail(p, "expected a number or the string \"degenerate\"");
      cfg.temperature_degenerate = true;
    } else {
      cfg.temperature_degenerate = false;
      cfg.crystal.temperature_c = get_number(v, p);
    }
  });
  if_present(j, "qpm_sign", [&](const json& v) {
    const std::string p = join_path(path, "qpm_sign");
    if (v.is_string()) {
      if (v.get<std::string>() != "auto") fail(p, "expected +1, -1 or \"auto\"");
      cfg.qpm_sign_auto = true;
    } else {
      const int sign = get_int(v, p);
      if (sign != 1 && sign != -1) fail(p, "expected +1, -1 or \"auto\"");
      cfg.qpm_sign_auto = false;
      cfg.crystal.qpm_sign = sign;
    }
  });
  auto parse_axis = [&](const char* key, OpticalAxis& out) {
    if_present(j, key, [&](const json& v) {
      const std::string p = join_path(path, key);
      try {
        out = axis_from_string(get_string(v, p));
      } catch (const ConfigError& e) {
        fail(p, e.what());
      }
    });
  };
  parse_axis("pump_axis", cfg.crystal.axes.pump);
  parse_axis("signal_axis", cfg.crystal.axes.signal);
  parse_axis("idler_axis", cfg.crystal.axes.idler);
}

void parse_pump(const json& j, const std::string& path, RunConfig& cfg) {
  require_object(j, path);
  reject_unknown_keys(j, path, {"center_wavelength_nm", "bandwidth_3db_nm", "power_w"});
  if_present(j, "center_wavelength_nm", [&](const json& v) {
    cfg.pump.center_wavelength_nm = get_number(v, join_path(path, "center_wavelength_nm"));
  });
  if_present(j, "bandwidth_3db_nm", [&](const json& v) {
    cfg.pump.bandwidth_3db_nm = get_number(v, join_path(path, "bandwidth_3db_nm"));
  });
  if_present(j, "power_w", [&](const json& v) {
    cfg.pump.power_w = get_number(v, join_path(path, "power_w"));
  });
}

void parse_cavity(const json& j, const std::string& path, RunConfig& cfg) {
  require_object(j, path);
  reject_unknown_keys(j, path,
                      {"r1", "t1", "r2", "t2", "t2_sh", "loss_delta", "gamma_sh",
                       "calibration_p1_w", "calibration_p2_w"});
  auto num = [&](const char* key, double& out) {
    if_present(j, key, [&](const json& v) { out = get_number(v, join_path(path, key)); });
  };
  num("r1", cfg.cavity.spec.r1);
  num("t1", cfg.cavity.spec.t1);
  num("r2", cfg.cavity.spec.r2);
  num("t2", cfg.cavity.spec.t2);
  num("t2_sh", cfg.cavity.spec.t2_sh);
  num("loss_delta", cfg.cavity.spec.loss_delta);
  if_present(j, "gamma_sh", [&](const json& v) {
    const std::string p = join_path(path, "gamma_sh");
    if (v.is_null())
      cfg.cavity.gamma_sh.reset();
    else
      cfg.cavity.gamma_sh = get_number(v, p);
  });
  num("calibration_p1_w", cfg.cavity.calibration.p1_w);
  num("calibration_p2_w", cfg.cavity.calibration.p2_w);
}

void parse_grid(const json& j, const std::string& path, RunConfig& cfg) {
  require_object(j, path);
  reject_unknown_keys(j, path, {"points_per_axis", "half_span_nm"});
  if_present(j, "points_per_axis", [&](const json& v) {
    cfg.grid.points_per_axis = get_int(v, join_path(path, "points_per_axis"));
  });
  if_present(j, "half_span_nm", [&](const json& v) {
    cfg.grid.half_span_nm = get_number(v, join_path(path, "half_span_nm"));
  });
}

void parse_hom(const json& j, const std::string& path, RunConfig& cfg) {
  require_object(j, path);
  reject_unknown_keys(j, path, {"delay_span_ps", "points"});
  if_present(j, "delay_span_ps", [&](const json& v) {
    cfg.hom.delay_span_ps = get_number(v, join_path(path, "delay_span_ps"));
  });
  if_present(j, "points", [&](const json& v) {
    cfg.hom.points = get_int(v, join_path(path, "points"));
  });
}

void parse_instrument(const json& j, const std::string& path, RunConfig& cfg) {
  require_object(j, path);
  reject_unknown_keys(j, path,
                      {"rbw_nm", "fit_target_marginal_nm", "reference_coincidence_nm"});
  if_present(j, "rbw_nm", [&](const json& v) {
    if (v.is_null())
      cfg.instrument.rbw_nm.reset();
    else
      cfg.instrument.rbw_nm = get_number(v, join_path(path, "rbw_nm"));
  });
  if_present(j, "fit_target_marginal_nm", [&](const json& v) {
    cfg.instrument.fit_target_marginal_nm =
        get_number(v, join_path(path, "fit_target_marginal_nm"));
  });
  if_present(j, "reference_coincidence_nm", [&](const json& v) {
    cfg.instrument.reference_coincidence_nm =
        get_number(v, join_path(path, "reference_coincidence_nm"));
  });
}

void validate_config(const RunConfig& cfg) {
  cfg.crystal.validate();
  cfg.pump.validate();
  CavitySpec cavity = cfg.cavity.spec;
  cavity.gamma_sh = cfg.cavity.gamma_sh.value_or(0.0);
  cavity.validate();
  if (cfg.grid.points_per_axis < 64 || cfg.grid.points_per_axis % 2 != 0)
    fail("grid.points_per_axis", "must be even and >= 64 (got " +
                                     std::to_string(cfg.grid.points_per_axis) + ")");
  if (!(cfg.grid.half_span_nm > 0.0)) fail("grid.half_span_nm", "must be > 0");
  if (!(cfg.hom.delay_span_ps > 0.0)) fail("hom.delay_span_ps", "must be > 0");
  if (cfg.hom.points < 9) fail("hom.points", "must be >= 9");
  if (cfg.instrument.rbw_nm && !(*cfg.instrument.rbw_nm >= 0.0))
    fail("instrument.rbw_nm", "must be >= 0");
  if (!(cfg.instrument.fit_target_marginal_nm > 0.0))
    fail("instrument.fit_target_marginal_nm", "must be > 0");
  if (!(cfg.instrument.reference_coincidence_nm > 0.0))
    fail("instrument.reference_coincidence_nm", "must be > 0");
  if (!(cfg.cavity.calibration.p1_w > 0.0)) fail("cavity.calibration_p1_w", "must be > 0");
  if (!(cfg.cavity.calibration.p2_w > 0.0)) fail("cavity.calibration_p2_w", "must be > 0");
  if (cfg.output_dir.empty()) fail("output_dir", "must be non-empty");
  if (cfg.sellmeier_set != "ktp_default" && cfg.sellmeier_set != "ktp_emanuelli")
    fail("sellmeier_set", "unknown set '" + cfg.sellmeier_set +
                              "' (builtin: ktp_default, ktp_emanuelli)");
}

std::pair<int, int> line_column_of_byte(const std::string& text, size_t byte) {
  int line = 1, col = 1;
  for (size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

std::array<double, 4> parse_poly4(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 4) fail(path, "expected an array of 4 numbers");
  std::array<double, 4> out{};
  for (size_t i = 0; i < 4; ++i) out[i] = get_number(v[i], path + "[" + std::to_string(i) + "]");
  return out;
}

AxisCoefficients parse_axis_coefficients(const json& j, const std::string& path) {
  require_object(j, path);
  reject_unknown_keys(j, path, {"a", "b_lambda2", "resonances", "dn_dt", "dn_dt2"});
  AxisCoefficients ax;
  if_present(j, "a", [&](const json& v) { ax.a = get_number(v, join_path(path, "a")); });
  if_present(j, "b_lambda2", [&](const json& v) {
    ax.b_lambda2 = get_number(v, join_path(path, "b_lambda2"));
  });
  if_present(j, "resonances", [&](const json& v) {
    const std::string p = join_path(path, "resonances");
    if (!v.is_array()) fail(p, "expected an array");
    for (size_t i = 0; i < v.size(); ++i) {
      const std::string rp = p + "[" + std::to_string(i) + "]";
      require_object(v[i], rp);
      reject_unknown_keys(v[i], rp, {"num_const", "num_lambda2", "pole_um2"});
      SellmeierResonance r;
      if_present(v[i], "num_const", [&](const json& x) {
        r.num_const = get_number(x, join_path(rp, "num_const"));
      });
      if_present(v[i], "num_lambda2", [&](const json& x) {
        r.num_lambda2 = get_number(x, join_path(rp, "num_lambda2"));
      });
      if_present(v[i], "pole_um2", [&](const json& x) {
        r.pole_um2 = get_number(x, join_path(rp, "pole_um2"));
      });
      ax.resonances.push_back(r);
    }
  });
  if_present(j, "dn_dt", [&](const json& v) { ax.dn_dt = parse_poly4(v, join_path(path, "dn_dt")); });
  if_present(j, "dn_dt2", [&](const json& v) { ax.dn_dt2 = parse_poly4(v, join_path(path, "dn_dt2")); });
  return ax;
}

} // namespace

RunConfig default_config() { return RunConfig{}; }

RunConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError("config parse error at byte " + std::to_string(e.byte) + ": " + e.what());
  }
  require_object(j, "");
  reject_unknown_keys(j, "",
                      {"crystal", "pump", "cavity", "grid", "hom", "instrument",
                       "output_dir", "sellmeier_set", "sellmeier_file"});
  RunConfig cfg = default_config();
  if_present(j, "crystal", [&](const json& v) { parse_crystal(v, "crystal", cfg); });
  if_present(j, "pump", [&](const json& v) { parse_pump(v, "pump", cfg); });
  if_present(j, "cavity", [&](const json& v) { parse_cavity(v, "cavity", cfg); });
  if_present(j, "grid", [&](const json& v) { parse_grid(v, "grid", cfg); });
  if_present(j, "hom", [&](const json& v) { parse_hom(v, "hom", cfg); });
  if_present(j, "instrument", [&](const json& v) { parse_instrument(v, "instrument", cfg); });
  if_present(j, "output_dir", [&](const json& v) { cfg.output_dir = get_string(v, "output_dir"); });
  if_present(j, "sellmeier_set", [&](const json& v) {
    cfg.sellmeier_set = get_string(v, "sellmeier_set");
  });
  if_present(j, "sellmeier_file", [&](const json& v) {
    if (v.is_null())
      cfg.sellmeier_file.reset();
    else
      cfg.sellmeier_file = get_string(v, "sellmeier_file");
  });
  validate_config(cfg);
  return cfg;
}

std::string config_to_json(const RunConfig& cfg) {
  json j;
  j["crystal"]["length_mm"] = cfg.crystal.length_mm;
  j["crystal"]["poling_period_um"] = cfg.crystal.poling_period_um;
  if (cfg.temperature_degenerate)
    j["crystal"]["temperature_c"] = "degenerate";
  else
    j["crystal"]["temperature_c"] = cfg.crystal.temperature_c;
  if (cfg.qpm_sign_auto)
    j["crystal"]["qpm_sign"] = "auto";
  else
    j["crystal"]["qpm_sign"] = cfg.crystal.qpm_sign;
  j["crystal"]["pump_axis"] = axis_to_string(cfg.crystal.axes.pump);
  j["crystal"]["signal_axis"] = axis_to_string(cfg.crystal.axes.signal);
  j["crystal"]["idler_axis"] = axis_to_string(cfg.crystal.axes.idler);
  j["pump"]["center_wavelength_nm"] = cfg.pump.center_wavelength_nm;
  j["pump"]["bandwidth_3db_nm"] = cfg.pump.bandwidth_3db_nm;
  j["pump"]["power_w"] = cfg.pump.power_w;
  j["cavity"]["r1"] = cfg.cavity.spec.r1;
  j["cavity"]["t1"] = cfg.cavity.spec.t1;
  j["cavity"]["r2"] = cfg.cavity.spec.r2;
  j["cavity"]["t2"] = cfg.cavity.spec.t2;
  j["cavity"]["t2_sh"] = cfg.cavity.spec.t2_sh;
  j["cavity"]["loss_delta"] = cfg.cavity.spec.loss_delta;
  j["cavity"]["gamma_sh"] = cfg.cavity.gamma_sh ? json(*cfg.cavity.gamma_sh) : json(nullptr);
  j["cavity"]["calibration_p1_w"] = cfg.cavity.calibration.p1_w;
  j["cavity"]["calibration_p2_w"] = cfg.cavity.calibration.p2_w;
  j["grid"]["points_per_axis"] = cfg.grid.points_per_axis;
  j["grid"]["half_span_nm"] = cfg.grid.half_span_nm;
  j["hom"]["delay_span_ps"] = cfg.hom.delay_span_ps;
  j["hom"]["points"] = cfg.hom.points;
  j["instrument"]["rbw_nm"] = cfg.instrument.rbw_nm ? json(*cfg.instrument.rbw_nm) : json(nullptr);
  j["instrument"]["fit_target_marginal_nm"] = cfg.instrument.fit_target_marginal_nm;
  j["instrument"]["reference_coincidence_nm"] = cfg.instrument.reference_coincidence_nm;
  j["output_dir"] = cfg.output_dir;
  j["sellmeier_set"] = cfg.sellmeier_set;
  j["sellmeier_file"] = cfg.sellmeier_file ? json(*cfg.sellmeier_file) : json(nullptr);
  return j.dump(2) + "\n";
}

SellmeierSet sellmeier_from_json_text(const std::string& text, const std::string& origin) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_column_of_byte(text, e.byte > 0 ? e.byte - 1 : 0);
    throw ConfigError(origin + ":" + std::to_string(line) + ":" + std::to_string(col) +
                      ": " + e.what());
  }
  try {
    require_object(j, "");
    reject_unknown_keys(j, "",
                        {"provenance", "reference_temperature_c", "wavelength_window_um",
                         "temperature_window_c", "y", "z"});
    SellmeierSet set;
    if (auto it = j.find("provenance"); it != j.end())
      set.provenance = get_string(*it, "provenance");
    else
      fail("provenance", "required key missing");
    if_present(j, "reference_temperature_c", [&](const json& v) {
      set.reference_temperature_c = get_number(v, "reference_temperature_c");
    });
    if_present(j, "wavelength_window_um", [&](const json& v) {
      if (!v.is_array() || v.size() != 2)
        fail("wavelength_window_um", "expected [min, max]");
      set.wavelength_min_um = get_number(v[0], "wavelength_window_um[0]");
      set.wavelength_max_um = get_number(v[1], "wavelength_window_um[1]");
    });
    if_present(j, "temperature_window_c", [&](const json& v) {
      if (!v.is_array() || v.size() != 2)
        fail("temperature_window_c", "expected [min, max]");
      set.temperature_min_c = get_number(v[0], "temperature_window_c[0]");
      set.temperature_max_c = get_number(v[1], "temperature_window_c[1]");
    });
    if (auto it = j.find("y"); it != j.end())
      set.y = parse_axis_coefficients(*it, "y");
    else
      fail("y", "required key missing");
    if (auto it = j.find("z"); it != j.end())
      set.z = parse_axis_coefficients(*it, "z");
    else
      fail("z", "required key missing");
    set.validate();
    return set;
  } catch (const ConfigError& e) {
    throw ConfigError(origin + ": " + e.what());
  }
}

SellmeierSet load_sellmeier_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read sellmeier override file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return sellmeier_from_json_text(buf.str(), path);
}

ResolvedSetup resolve_setup(const RunConfig& config) {
  ResolvedSetup setup;
  setup.sellmeier = config.sellmeier_file ? load_sellmeier_file(*config.sellmeier_file)
                    : (config.sellmeier_set == "ktp_emanuelli" ? ktp_emanuelli()
                                                               : ktp_default());
  setup.crystal = config.crystal;
  setup.pump = config.pump;
  const double wp0 = config.pump.center_omega();

  if (config.qpm_sign_auto)
    setup.crystal.qpm_sign = choose_qpm_sign(setup.sellmeier, setup.crystal, wp0);

  if (config.temperature_degenerate) {
    setup.t_deg_c = degenerate_temperature(setup.sellmeier, setup.crystal, wp0);
    setup.crystal.temperature_c = setup.t_deg_c;
  } else {
    try {
      setup.t_deg_c = degenerate_temperature(setup.sellmeier, setup.crystal, wp0);
    } catch (const SolverError&) {
      setup.t_deg_c = std::numeric_limits<double>::quiet_NaN();
    }
  }

  setup.grid.center_rad_ps = wp0 / 2.0;
  setup.grid.half_span_rad_ps =
      omega_width_from_nm(config.grid.half_span_nm, wavelength_nm_from_omega(wp0 / 2.0));
  setup.grid.points_per_axis = config.grid.points_per_axis;
  setup.grid.validate();

  setup.dk0_at_operating_t =
      delta_k(setup.sellmeier, setup.crystal, wp0 / 2.0, wp0 / 2.0);
  return setup;
}

} // namespace pairsim
