#pragma once

#include <string>

#include "moldflux/config.hpp"

namespace moldflux {

/// Executes one subcommand against a validated configuration. All outputs
/// (CSV/VTK/artifact) land under cfg.out_dir and a manifest JSON is written
/// even when a numerical stage fails. Returns a short human-readable report.
std::string run_subcommand(const RunConfig& cfg, const std::string& subcommand);

}  // namespace moldflux
