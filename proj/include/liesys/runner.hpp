#pragma once

#include "liesys/config.hpp"

namespace liesys {

/// Executes the configured command and writes its artifacts (trajectory.csv,
/// invariant_<name>.csv, summary.json) into config.output_dir.
/// Returns 0 on success and 2 when a configured scientific bound was
/// exceeded; input and domain problems throw Error (exit code 1 in the CLI).
int run(const RunConfig& config);

}  // namespace liesys
