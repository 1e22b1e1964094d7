#ifndef PAIRSIM_EMIT_HPP
#define PAIRSIM_EMIT_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "pairsim/config.hpp"

namespace pairsim {

// Deterministic number formatting for all emitted artifacts: 9 significant
// digits, '.' decimal separator.
std::string format_g9(double v);

// Subcommand back-ends. Each writes its CSV/JSON artifacts under out_dir and
// returns the list of files written (paths relative to out_dir).
std::vector<std::string> emit_jsa(const RunConfig& config, const std::filesystem::path& out_dir);
std::vector<std::string> emit_marginals(const RunConfig& config, const std::filesystem::path& out_dir);
std::vector<std::string> emit_hom(const RunConfig& config, const std::filesystem::path& out_dir);
std::vector<std::string> emit_shg_curve(const RunConfig& config, const std::filesystem::path& out_dir);
std::vector<std::string> emit_pm_temp(const RunConfig& config, const std::filesystem::path& out_dir,
                                      std::string* stdout_text);
std::vector<std::string> emit_report(const RunConfig& config, const std::filesystem::path& out_dir);

// The report document as a JSON string (what report.json contains).
std::string build_report_json(const RunConfig& config);

} // namespace pairsim

#endif
