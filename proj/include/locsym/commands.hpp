#pragma once

// Analyses driven by a RunConfig. Each command writes its JSON record (and
// CSV tables where applicable) into the output directory and returns the
// list of files written, in order.

#include <functional>
#include <string>
#include <vector>

#include "locsym/config.hpp"
#include "locsym/detector.hpp"
#include "locsym/invariants.hpp"
#include "locsym/solver.hpp"

namespace locsym {

// Process exit codes.
enum ExitCode : int {
    kExitOk = 0,
    kExitFailure = 1,
    kExitConfig = 2,
    kExitPhysics = 3,
    kExitZeroCurrent = 4,
};

using CommandFn = std::vector<std::string> (*)(const RunConfig&, const std::string& out_dir);

std::vector<std::string> run_solve(const RunConfig& config, const std::string& out_dir);
std::vector<std::string> run_invariants(const RunConfig& config, const std::string& out_dir);
std::vector<std::string> run_detect(const RunConfig& config, const std::string& out_dir);
std::vector<std::string> run_decompose(const RunConfig& config, const std::string& out_dir);
std::vector<std::string> run_mapcheck(const RunConfig& config, const std::string& out_dir);
std::vector<std::string> run_band(const RunConfig& config, const std::string& out_dir);
std::vector<std::string> run_scan(const RunConfig& config, const std::string& out_dir);

// nullptr for an unknown name.
CommandFn find_command(const std::string& name);
const std::vector<std::string>& command_names();

// The state analysed by every command at one energy, per the incidence mode.
ScatteringState make_state(const RunConfig& config, const PotentialProfile& profile, double energy);

// Transforms from the config, or the detected ones when the config lists none.
std::vector<SymmetryTransform> analysis_transforms(const RunConfig& config,
                                                   const PotentialProfile& profile);

// Non-trivial components of the symmetry set at least min_width wide.
std::vector<Interval> analysis_components(const RunConfig& config, const PotentialProfile& profile,
                                          const SymmetryTransform& f);

// Runs fn(i) for i in [0, count) on worker threads; results are ordered by i.
// The first exception thrown by any item is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace locsym
