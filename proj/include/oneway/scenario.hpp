#pragma once
/*
 * Scenario layer: configuration of a single solve (coefficient, initial data,
 * range, grid, method), the two solution pipelines, and the CSV/JSON command
 * writers behind the CLI.
 */
#include <optional>
#include <string>
#include <vector>

#include "oneway/expansion.hpp"
#include "oneway/model.hpp"
#include "oneway/oracle.hpp"

namespace oneway {

struct Scenario {
    enum class Method { EigExp, SchurRef };

    PiecewiseWavenumber pw;
    InitialCondition ic;
    double r_f = 1.0;
    int N = 127;
    Method method = Method::EigExp;
    SolverConfig cfg;
    std::string out_dir = ".";
    std::string cache_dir;    // empty disables the decomposition disk cache
    bool with_reference = true;
    int n_ref = 8191;
};

/// Checks r_f >= 0, N >= 3, and the embedded coefficient and solver configs.
void validate(const Scenario& sc);

struct SolveResult {
    GridSolution solution;
    int terms = 0;  // kept modes for eigexp, N for the dense comparator
    double wall_time_ms = 0.0;
    std::optional<double> error_vs_reference;
};

/// Modal pipeline: spectrum capped at min(m_max, N+1), projection of the
/// grid-sampled initial data through its sine series, truncation at
/// truncation_tol/max(r_f, 0.01), evaluation on the scenario grid.
SolveResult run_eigexp(const Scenario& sc);

/// Dense comparator: eigendecomposition of the full FD matrix, explicit
/// propagator assembly, matrix-vector application.
SolveResult run_schur(const Scenario& sc);

/// Dispatches on sc.method and fills error_vs_reference when requested and
/// the grids are compatible. Reference time is excluded from wall_time_ms.
SolveResult run_scenario(const Scenario& sc);

/// Parses the documented JSON scenario schema (keys: alphas, rhos, ic.kind,
/// ic.params, r_f, N, method, solver, out, cache, n_ref, with_reference).
/// Throws std::invalid_argument on malformed input.
Scenario scenario_from_json_file(const std::string& path);

// Command writers; each returns the paths it wrote. Timings appear only in
// the JSON summaries so CSV bodies are byte-identical across runs.
std::vector<std::string> cmd_spectrum(const Scenario& sc);
std::vector<std::string> cmd_solve(const Scenario& sc);
std::vector<std::string> cmd_compare(const Scenario& base, std::vector<double> rfs,
                                     std::vector<int> Ns);
std::vector<std::string> cmd_decay(const Scenario& sc);

}  // namespace oneway
