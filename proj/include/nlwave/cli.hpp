#pragma once

#include "nlwave/config.hpp"

namespace nlwave {

/// Dispatches one command. Returns the process exit status (0 success,
/// 3 when a validation suite reports failures); schema and numeric errors
/// propagate as exceptions for the caller to map to exit codes.
int run_command(const RunConfig& cfg);

}  // namespace nlwave
