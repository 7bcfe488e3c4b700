#pragma once

#include <string>
#include <vector>

#include "fuzzybox/geometry.hpp"
#include "fuzzybox/sweep.hpp"

namespace fuzzybox::cli {

// Resolved run configuration: defaults, then config-file values, then command
// line flags (flags win).  All lengths in q0 units.
struct RunConfig {
    // geometry / physics
    bool half_line = false;
    double a = 0.0;
    double b = 10.0;
    double ell = 0.1;
    double hbar = 1.0;
    double mass = 1.0;
    double q0 = 1.0;
    double grid_h = 0.0; // 0 -> auto (ell/20)

    // io
    std::string out_dir = "fuzzybox_out";
    std::string config_file;

    // sweep knobs
    double x_step = 0.01;
    double pad = 2.0; // sampled range extends [a-pad, b+pad]
    bool ell_given = false;
    bool a_given = false;
    bool b_given = false;
    bool p_given = false;
    double p_value = 0.0;

    // uncertainty scan
    double scan_lo = -8.0, scan_hi = 18.0, scan_step = 0.05;
    double probe_width = 1.0;

    // portrait grid
    double portrait_step = 0.1;

    // simulate
    double start_q = 5.0, start_p = 20.0;
    double horizon = 10.0, dt = 5e-5;
    int sample_stride = 0; // 0 -> auto (~2000 output rows)

    // limit study
    double ell0 = 0.4;
    int limit_steps = 6;
    double limit_horizon = 4.0, limit_dt = 1e-4;
    double limit_p = 2.0;

    bool serial = false;

    Geometry geometry() const {
        return half_line ? Geometry::half_line(a) : Geometry::bounded(a, b);
    }
    QuantizationParams params() const {
        QuantizationParams p{ell, hbar, mass, q0};
        p.validate();
        return p;
    }
    double resolved_h() const { return grid_h > 0.0 ? grid_h : ell / 20.0; }
    par::Exec exec() const { return serial ? par::Exec::serial : par::Exec::openmp; }
};

// Subcommand bodies (also driven directly by tests).  `prefix` is prepended to
// the deterministic output file names; each returns the written paths.
std::vector<std::string> cmd_window(const RunConfig& cfg, const std::string& prefix = "");
std::vector<std::string> cmd_operator(const RunConfig& cfg, const std::string& prefix = "",
                                      bool dump_bands = false);
std::vector<std::string> cmd_commutator(const RunConfig& cfg, const std::string& prefix = "");
std::vector<std::string> cmd_uncertainty(const RunConfig& cfg, const std::string& prefix = "");
std::vector<std::string> cmd_mass(const RunConfig& cfg, const std::string& prefix = "");
std::vector<std::string> cmd_potentials(const RunConfig& cfg, const std::string& prefix = "");
std::vector<std::string> cmd_force(const RunConfig& cfg, const std::string& prefix = "");
std::vector<std::string> cmd_portrait(const RunConfig& cfg, const std::string& prefix = "");
// Returns written paths; sets all_passed for the exit status.
std::vector<std::string> cmd_quantize_check(const RunConfig& cfg, bool& all_passed,
                                            const std::string& prefix = "");
std::vector<std::string> cmd_simulate(const RunConfig& cfg, const std::string& prefix = "");
std::vector<std::string> cmd_limit_study(const RunConfig& cfg, const std::string& prefix = "");
std::vector<std::string> cmd_figures(const RunConfig& cfg);

// Full command-line entry: parse argv (plus optional key=value config file),
// dispatch, and map failures to exit codes 2 (I/O), 3 (configuration),
// 4 (numerical).
int run(int argc, const char* const* argv);

} // namespace fuzzybox::cli
