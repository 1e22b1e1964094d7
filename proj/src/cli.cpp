#include "pairsim/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "pairsim/emit.hpp"

namespace pairsim::cli {

namespace {

const char* kUsage =
    "usage: pairsim <subcommand> [--config <path>] [--out <dir>]\n"
    "       pairsim --print-defaults\n"
    "\n"
    "subcommands:\n"
    "  jsa         emit the joint spectral density grid (jsa.csv + jsa_meta.json)\n"
    "  marginals   emit signal/idler marginals and the coincidence slice with widths\n"
    "  hom         emit the two-photon interference dip curve\n"
    "  shg-curve   emit the cavity second-harmonic power curve\n"
    "  pm-temp     solve and print the degenerate phase-matching temperature\n"
    "  report      emit report.json with every figure of merit\n"
    "\n"
    "flags:\n"
    "  --config <path>   JSON run configuration (defaults used when omitted)\n"
    "  --out <dir>       output directory (overrides the config's output_dir)\n"
    "  --print-defaults  print the default configuration as JSON and exit\n";

int usage_error(const std::string& message) {
  std::cerr << "error: " << message << "\n\n" << kUsage;
  return 1;
}

} // namespace

int run(int argc, const char* const* argv) {
  std::vector<std::string> args(argv + 1, argv + argc);

  std::string subcommand;
  std::string config_path;
  std::string out_override;
  bool print_defaults = false;

  for (size_t i = 0; i < args.size(); ++i) {
    const std::string& a = args[i];
    if (a == "--seedless") {
      std::cerr << "error: --seedless is reserved; this simulator has no randomness to seed\n";
      return 1;
    }
    if (a == "--print-defaults") {
      print_defaults = true;
    } else if (a == "--config") {
      if (++i >= args.size()) return usage_error("--config requires a path");
      config_path = args[i];
    } else if (a == "--out") {
      if (++i >= args.size()) return usage_error("--out requires a directory");
      out_override = args[i];
    } else if (!a.empty() && a[0] == '-') {
      return usage_error("unknown flag '" + a + "'");
    } else if (subcommand.empty()) {
      subcommand = a;
    } else {
      return usage_error("unexpected argument '" + a + "'");
    }
  }

  if (print_defaults) {
    std::cout << config_to_json(default_config());
    return 0;
  }
  if (subcommand.empty()) return usage_error("missing subcommand");

  try {
    RunConfig config;
    if (!config_path.empty()) {
      std::ifstream in(config_path, std::ios::binary);
      if (!in) {
        std::cerr << "error: cannot read config file '" << config_path << "'\n";
        return 1;
      }
      std::ostringstream buf;
      buf << in.rdbuf();
      config = parse_config(buf.str());
    } else {
      config = default_config();
    }
    const std::filesystem::path out_dir =
        out_override.empty() ? std::filesystem::path(config.output_dir)
                             : std::filesystem::path(out_override);
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) {
      std::cerr << "error: cannot create output directory '" << out_dir.string()
                << "': " << ec.message() << "\n";
      return 1;
    }

    std::vector<std::string> files;
    if (subcommand == "jsa") {
      files = emit_jsa(config, out_dir);
    } else if (subcommand == "marginals") {
      files = emit_marginals(config, out_dir);
    } else if (subcommand == "hom") {
      files = emit_hom(config, out_dir);
    } else if (subcommand == "shg-curve") {
      files = emit_shg_curve(config, out_dir);
    } else if (subcommand == "pm-temp") {
      std::string text;
      files = emit_pm_temp(config, out_dir, &text);
      std::cout << text;
    } else if (subcommand == "report") {
      files = emit_report(config, out_dir);
    } else {
      return usage_error("unknown subcommand '" + subcommand + "'");
    }
    for (const std::string& f : files)
      std::cout << "wrote " << (out_dir / f).string() << "\n";
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
}

} // namespace pairsim::cli
