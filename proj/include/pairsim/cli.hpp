#ifndef PAIRSIM_CLI_HPP
#define PAIRSIM_CLI_HPP

namespace pairsim::cli {

// Full command-line entry point. Exit status 0 on success, 1 on usage or
// configuration errors, 2 on numerical/solver errors. Diagnostics go to
// stderr.
int run(int argc, const char* const* argv);

} // namespace pairsim::cli

#endif
