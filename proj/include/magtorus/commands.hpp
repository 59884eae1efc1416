// Batch pipelines behind the CLI verbs. Each command validates its inputs,
// writes artifacts plus a manifest into the configured run directory, and
// returns the process exit code:
//   0 success, 2 config / missing-artifact error,
//   3 numerical precondition violation, 4 verification-threshold failure.
#pragma once

#include <json.hpp>

#include "magtorus/config.hpp"

namespace magtorus::commands {

int run_deform(const RunConfig& cfg);
int run_verify(const RunConfig& cfg);
int run_simulate(const RunConfig& cfg);
int run_classify_check(const RunConfig& cfg);
int run_export_plots(const RunConfig& cfg);

}  // namespace magtorus::commands
