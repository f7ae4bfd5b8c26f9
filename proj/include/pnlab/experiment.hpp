// Subcommand dispatch and artifact emission.  Every run writes CSVs with a
// fixed column schema, appends to a summary report, and drops a manifest
// echoing the exact configuration; identical configs produce byte-identical
// files.  Layer and corrector solutions are cached on disk keyed by a hash
// of the part of the config they depend on.
#pragma once

#include <filesystem>
#include <memory>
#include <string>

#include "pnlab/config.hpp"
#include "pnlab/corrector.hpp"
#include "pnlab/layer.hpp"
#include "pnlab/types.hpp"

namespace pnlab {

// Exit statuses: 0 ok, 1 compute failure, 2 config failure.
enum ExitStatus { kOk = 0, kComputeFailure = 1, kConfigFailure = 2 };

// Valid subcommands: layer, corrector, hull, cell, orowan, particles, verify.
int run_experiment(const RunConfig& cfg, const std::string& subcommand);

// %.17g formatting used for every CSV number (round-trips doubles exactly).
std::string format_real(Real v);

// FNV-1a of the canonical serialization restricted to the keys a stage
// depends on; used as the cache filename suffix.
std::string config_hash(const std::string& canonical);

// Cached layer/corrector access: load from <dir>/cache if present, else
// solve and store.  Loading reproduces the solve bit-for-bit because the
// cache stores full-precision samples and derived constants.
std::shared_ptr<const LayerSolution> layer_for_config(const RunConfig& cfg,
                                                      const std::filesystem::path& dir);
std::shared_ptr<const CorrectorSolution> corrector_for_config(
    const RunConfig& cfg, Real L, const LayerSolution& layer,
    const std::filesystem::path& dir);

}  // namespace pnlab
