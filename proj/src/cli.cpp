#include "fuzzybox/cli.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "fuzzybox/csvio.hpp"
#include "fuzzybox/dynamics.hpp"
#include "fuzzybox/operators.hpp"
#include "fuzzybox/quantizer.hpp"
#include "fuzzybox/states.hpp"
#include "fuzzybox/windowfn.hpp"

namespace fuzzybox::cli {

namespace {

using quantizer::ObservableKind;
using quantizer::ObservableSpec;
using quantizer::PhaseState;
using quantizer::PortraitMethod;

std::string out_path(const RunConfig& cfg, const std::string& prefix, const std::string& name) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(cfg.out_dir, ec);
    if (ec) throw io_error("cannot create output directory: " + cfg.out_dir);
    return (fs::path(cfg.out_dir) / (prefix + name)).string();
}

void common_metadata(csv::Writer& w, const RunConfig& cfg, const char* sub) {
    w.comment(std::string("fuzzybox ") + sub);
    w.metadata("half_line", cfg.half_line ? "1" : "0");
    w.metadata("a", cfg.a);
    if (!cfg.half_line) w.metadata("b", cfg.b);
    w.metadata("ell", cfg.ell);
    w.metadata("hbar", cfg.hbar);
    w.metadata("mass", cfg.mass);
    w.metadata("q0", cfg.q0);
}

std::vector<double> linspace_step(double lo, double hi, double step) {
    if (!(step > 0.0)) throw config_error("sweep: step must be positive");
    const int n = static_cast<int>(std::floor((hi - lo) / step + 1e-9)) + 1;
    if (n < 2) throw config_error("sweep: empty range");
    std::vector<double> xs(n);
    for (int i = 0; i < n; ++i) xs[i] = lo + i * step;
    return xs;
}

// A sweep combo: geometry plus smearing width.
struct Combo {
    Geometry geom;
    double ell;
};

std::vector<Combo> resolve_combos(const RunConfig& cfg, std::vector<double> default_ells,
                                  std::vector<double> default_as) {
    std::vector<double> ells = cfg.ell_given ? std::vector<double>{cfg.ell} : default_ells;
    std::vector<double> as = cfg.a_given ? std::vector<double>{cfg.a} : default_as;
    std::vector<Combo> combos;
    for (double a : as)
        for (double ell : ells) {
            if (cfg.half_line)
                combos.push_back({Geometry::half_line(a), ell});
            else
                combos.push_back({Geometry::bounded(a, cfg.b_given ? cfg.b : a + 10.0), ell});
        }
    return combos;
}

double combo_right_edge(const Combo& c) { return c.geom.is_bounded() ? c.geom.b : c.geom.a + 10.0; }

} // namespace

std::vector<std::string> cmd_window(const RunConfig& cfg, const std::string& prefix) {
    const QuantizationParams base = cfg.params();
    const auto combos = resolve_combos(cfg, {0.5, 0.1}, {0.0, 2.0, 4.0});

    const std::string path = out_path(cfg, prefix, "window.csv");
    csv::Writer w(path);
    common_metadata(w, cfg, "window");
    w.metadata("x_step", cfg.x_step);
    w.header({"ell [q0]", "a [q0]", "b [q0]", "x [q0]", "W [1]", "dW [1/q0]", "d2W [1/q0^2]"});
    for (const Combo& c : combos) {
        const QuantizationParams prm = base.with_ell(c.ell);
        const auto xs = linspace_step(c.geom.a - cfg.pad, combo_right_edge(c) + cfg.pad, cfg.x_step);
        std::vector<std::array<double, 3>> rows(xs.size());
        par::for_index(xs.size(), cfg.exec(), [&](std::size_t i) {
            rows[i] = {windowfn::window(xs[i], c.geom, prm),
                       windowfn::window_derivative(1, xs[i], c.geom, prm),
                       windowfn::window_derivative(2, xs[i], c.geom, prm)};
        });
        const double bcol = c.geom.is_bounded() ? c.geom.b : INFINITY;
        for (std::size_t i = 0; i < xs.size(); ++i)
            w.row({c.ell, c.geom.a, bcol, xs[i], rows[i][0], rows[i][1], rows[i][2]});
    }
    w.close();
    return {path};
}

std::vector<std::string> cmd_operator(const RunConfig& cfg, const std::string& prefix,
                                      bool dump_bands) {
    const QuantizationParams base = cfg.params();
    const auto combos = resolve_combos(cfg, {0.1}, {0.0, 2.0, 4.0});

    std::vector<std::string> written;
    const std::string path = out_path(cfg, prefix, "operator.csv");
    csv::Writer w(path);
    common_metadata(w, cfg, "operator");
    w.metadata("x_step", cfg.x_step);
    w.header({"ell [q0]", "a [q0]", "b [q0]", "x [q0]", "Q [q0]", "dQdx [1]"});
    for (const Combo& c : combos) {
        const QuantizationParams prm = base.with_ell(c.ell);
        const auto xs = linspace_step(c.geom.a - cfg.pad, combo_right_edge(c) + cfg.pad, cfg.x_step);
        std::vector<std::array<double, 2>> rows(xs.size());
        par::for_index(xs.size(), cfg.exec(), [&](std::size_t i) {
            rows[i] = {operators::position_symbol(xs[i], c.geom, prm),
                       operators::spectral_density(xs[i], c.geom, prm)};
        });
        const double bcol = c.geom.is_bounded() ? c.geom.b : INFINITY;
        for (std::size_t i = 0; i < xs.size(); ++i)
            w.row({c.ell, c.geom.a, bcol, xs[i], rows[i][0], rows[i][1]});
    }
    w.close();
    written.push_back(path);

    if (dump_bands) {
        const Combo& c = combos.front();
        const QuantizationParams prm = base.with_ell(c.ell);
        const Grid grid = Grid::with_spacing(c.geom.a - 3.0, combo_right_edge(c) + 3.0,
                                             cfg.grid_h > 0.0 ? cfg.grid_h : c.ell / 20.0);
        const auto dump = [&](const BandedOperator& op, const std::string& name) {
            const std::string p = out_path(cfg, prefix, "bands_" + name + ".csv");
            std::ofstream os(p);
            if (!os) throw io_error("cannot open output file: " + p);
            op.write_csv(os);
            written.push_back(p);
        };
        dump(operators::window_matrix(grid, c.geom, prm), "window");
        dump(operators::position_matrix(grid, c.geom, prm), "position");
        dump(operators::momentum_matrix(grid, c.geom, prm), "momentum");
        dump(operators::hamiltonian_matrix(operators::OrderingChoice::p_sandwich, grid, c.geom,
                                           prm),
             "kinetic_sandwich");
        dump(operators::hamiltonian_matrix(operators::OrderingChoice::anticommutator_half, grid,
                                           c.geom, prm),
             "kinetic_anticom");
    }
    return written;
}

std::vector<std::string> cmd_commutator(const RunConfig& cfg, const std::string& prefix) {
    const QuantizationParams base = cfg.params();
    const auto combos = resolve_combos(cfg, {0.1}, {0.0, 2.0, 4.0});

    const std::string path = out_path(cfg, prefix, "commutator.csv");
    csv::Writer w(path);
    common_metadata(w, cfg, "commutator");
    w.metadata("x_step", cfg.x_step);
    w.header({"ell [q0]", "a [q0]", "b [q0]", "x [q0]", "commutator [1]", "departure [1]"});
    for (const Combo& c : combos) {
        const QuantizationParams prm = base.with_ell(c.ell);
        const auto xs = linspace_step(c.geom.a - cfg.pad, combo_right_edge(c) + cfg.pad, cfg.x_step);
        const auto vals = par::sample_curve(xs, cfg.exec(), [&](double x) {
            return operators::commutator_symbol(x, c.geom, prm);
        });
        const double bcol = c.geom.is_bounded() ? c.geom.b : INFINITY;
        for (std::size_t i = 0; i < xs.size(); ++i)
            w.row({c.ell, c.geom.a, bcol, xs[i], vals[i], vals[i] - 1.0});
    }
    w.close();
    return {path};
}

std::vector<std::string> cmd_uncertainty(const RunConfig& cfg, const std::string& prefix) {
    const QuantizationParams prm = cfg.params();
    const Geometry geom = cfg.geometry();
    const auto centers = linspace_step(cfg.scan_lo, cfg.scan_hi, cfg.scan_step);

    std::vector<states::UncertaintyResult> results(centers.size());
    par::for_index(centers.size(), cfg.exec(), [&](std::size_t i) {
        results[i] = states::uncertainty_product({centers[i], cfg.probe_width, 0.0}, geom, prm);
    });

    const std::string path = out_path(cfg, prefix, "uncertainty.csv");
    csv::Writer w(path);
    common_metadata(w, cfg, "uncertainty");
    w.metadata("probe_width", cfg.probe_width);
    w.metadata("scan_step", cfg.scan_step);
    w.header({"c [q0]", "com_expect [1]", "dq [q0]", "dp [hbar/q0]", "product [hbar]",
              "bound [hbar]", "slack [hbar]"});
    for (std::size_t i = 0; i < centers.size(); ++i) {
        const auto& r = results[i];
        w.row({centers[i], r.commutator_mean, r.q_spread, r.p_spread, r.product(),
               r.bound(prm.hbar), r.slack(prm.hbar)});
    }
    w.close();
    return {path};
}

std::vector<std::string> cmd_mass(const RunConfig& cfg, const std::string& prefix) {
    const QuantizationParams base = cfg.params();
    const auto combos = resolve_combos(cfg, {0.1}, {0.0});

    const std::string path = out_path(cfg, prefix, "mass.csv");
    csv::Writer w(path);
    common_metadata(w, cfg, "mass");
    w.metadata("x_step", cfg.x_step);
    w.header({"ell [q0]", "a [q0]", "b [q0]", "x [q0]", "W [1]", "M_over_m [1]"});
    for (const Combo& c : combos) {
        const QuantizationParams prm = base.with_ell(c.ell);
        const auto xs = linspace_step(c.geom.a - cfg.pad, combo_right_edge(c) + cfg.pad, cfg.x_step);
        const auto vals = par::sample_curve(xs, cfg.exec(), [&](double x) {
            return windowfn::window_profile(x, c.geom, prm.ell);
        });
        const double bcol = c.geom.is_bounded() ? c.geom.b : INFINITY;
        for (std::size_t i = 0; i < xs.size(); ++i)
            w.row({c.ell, c.geom.a, bcol, xs[i], vals[i], 1.0 / vals[i]});
    }
    w.close();
    return {path};
}

std::vector<std::string> cmd_potentials(const RunConfig& cfg, const std::string& prefix) {
    const QuantizationParams base = cfg.params();
    const auto combos = resolve_combos(cfg, {0.1, 0.3, 0.5}, {0.0});
    const double alpha = base.energy_unit();

    const std::string path = out_path(cfg, prefix, "potentials.csv");
    csv::Writer w(path);
    common_metadata(w, cfg, "potentials");
    w.metadata("x_step", cfg.x_step);
    w.header({"ell [q0]", "a [q0]", "b [q0]", "x [q0]", "V_minus [alpha]", "V_plus [alpha]"});
    for (const Combo& c : combos) {
        const QuantizationParams prm = base.with_ell(c.ell);
        const auto xs = linspace_step(c.geom.a - cfg.pad, combo_right_edge(c) + cfg.pad, cfg.x_step);
        std::vector<std::array<double, 2>> rows(xs.size());
        par::for_index(xs.size(), cfg.exec(), [&](std::size_t i) {
            rows[i] = {operators::potential(operators::PotentialSign::minus, xs[i], c.geom, prm),
                       operators::potential(operators::PotentialSign::plus, xs[i], c.geom, prm)};
        });
        const double bcol = c.geom.is_bounded() ? c.geom.b : INFINITY;
        for (std::size_t i = 0; i < xs.size(); ++i)
            w.row({c.ell, c.geom.a, bcol, xs[i], rows[i][0] / alpha, rows[i][1] / alpha});
    }
    w.close();
    return {path};
}

std::vector<std::string> cmd_force(const RunConfig& cfg, const std::string& prefix) {
    const QuantizationParams base = cfg.params();
    const Geometry geom = cfg.geometry();
    const std::vector<double> ells =
        cfg.ell_given ? std::vector<double>{cfg.ell} : std::vector<double>{0.1, 0.3, 0.5};
    const std::vector<double> ps = cfg.p_given
                                       ? std::vector<double>{cfg.p_value}
                                       : std::vector<double>{0.0, 20.0 * base.hbar / base.q0};
    const double f0 = base.force_unit();

    const std::string path = out_path(cfg, prefix, "force.csv");
    csv::Writer w(path);
    common_metadata(w, cfg, "force");
    w.metadata("x_step", cfg.x_step);
    w.header({"ell [q0]", "p [hbar/q0]", "q [q0]", "F [F0]"});
    const double hi = geom.is_bounded() ? geom.b : geom.a + 10.0;
    for (double ell : ells) {
        const QuantizationParams prm = base.with_ell(ell);
        const dynamics::MechanicalSystem sys = dynamics::semiclassical_system(geom, prm);
        for (double p : ps) {
            const auto qs = linspace_step(geom.a - cfg.pad, hi + cfg.pad, cfg.x_step);
            const auto vals = par::sample_curve(qs, cfg.exec(), [&](double q) {
                return dynamics::force(sys, PhaseState{q, p});
            });
            for (std::size_t i = 0; i < qs.size(); ++i)
                w.row({ell, p, qs[i], vals[i] / f0});
        }
    }
    w.close();
    return {path};
}

std::vector<std::string> cmd_portrait(const RunConfig& cfg, const std::string& prefix) {
    const QuantizationParams prm = cfg.params();
    const Geometry geom = cfg.geometry();
    const double hi = geom.is_bounded() ? geom.b : geom.a + 10.0;
    const auto qs = linspace_step(geom.a - cfg.pad, hi + cfg.pad, cfg.portrait_step);
    const std::vector<double> ps =
        cfg.p_given ? std::vector<double>{cfg.p_value} : std::vector<double>{0.0, 10.0, 20.0};

    struct Entry {
        const char* name;
        ObservableKind kind;
    };
    const std::array<Entry, 4> catalog{{{"window", ObservableKind::unit},
                                        {"position", ObservableKind::position},
                                        {"momentum", ObservableKind::momentum},
                                        {"kinetic", ObservableKind::kinetic}}};

    const std::string path = out_path(cfg, prefix, "portrait.csv");
    csv::Writer w(path);
    common_metadata(w, cfg, "portrait");
    w.metadata("portrait_step", cfg.portrait_step);
    w.header({"observable", "q [q0]", "p [hbar/q0]", "closed [model]", "quadrature [model]",
              "abs_diff [model]"});
    for (const Entry& e : catalog) {
        const ObservableSpec spec{e.kind, true};
        for (double p : ps) {
            std::vector<std::array<double, 2>> rows(qs.size());
            par::for_index(qs.size(), cfg.exec(), [&](std::size_t i) {
                const PhaseState at{qs[i], p};
                rows[i] = {
                    quantizer::portrait(spec, at, geom, prm, PortraitMethod::closed_form),
                    quantizer::portrait(spec, at, geom, prm, PortraitMethod::quadrature)};
            });
            for (std::size_t i = 0; i < qs.size(); ++i)
                w.row_raw({e.name, csv::format_float(qs[i]), csv::format_float(p),
                           csv::format_float(rows[i][0]), csv::format_float(rows[i][1]),
                           csv::format_float(std::fabs(rows[i][0] - rows[i][1]))});
        }
    }
    w.close();
    return {path};
}

std::vector<std::string> cmd_quantize_check(const RunConfig& cfg, bool& all_passed,
                                            const std::string& prefix) {
    const QuantizationParams prm = cfg.params();
    const Geometry geom = cfg.geometry();
    const double right = geom.is_bounded() ? geom.b : geom.a + 10.0;
    const Grid grid = Grid::with_spacing(geom.a - 7.0, right + 7.0, cfg.resolved_h());

    all_passed = true;
    const std::string path = out_path(cfg, prefix, "quantize_check.csv");
    csv::Writer w(path);
    common_metadata(w, cfg, "quantize-check");
    w.metadata("grid_h", grid.h());
    w.header({"check", "observable", "value_re", "value_im", "reference_re", "reference_im",
              "abs_err", "tol", "pass"});

    auto report = [&](const std::string& check, const std::string& obs, std::complex<double> val,
                      std::complex<double> ref, double tol) {
        const double err = std::abs(val - ref);
        const bool ok = err <= tol;
        all_passed = all_passed && ok;
        w.row_raw({check, obs, csv::format_float(val.real()), csv::format_float(val.imag()),
                   csv::format_float(ref.real()), csv::format_float(ref.imag()),
                   csv::format_float(err), csv::format_float(tol), ok ? "1" : "0"});
    };

    // Packet sampling / overlap identities.
    const double mid = 0.5 * (geom.a + right);
    const WaveFunction cs0 = quantizer::cs_sample({mid, 3.0 * prm.hbar / prm.q0}, grid, prm);
    report("packet_norm", "unit", cs0.norm(), 1.0, 1e-8);
    const std::array<std::pair<PhaseState, PhaseState>, 3> opairs{
        {{{mid - 1.0, 3.0}, {mid - 0.6, 1.0}},
         {{mid, 0.0}, {mid, 8.0}},
         {{mid - 2.0, -2.0}, {mid + 1.0, 2.0}}}};
    for (const auto& [s1, s2] : opairs) {
        const WaveFunction f1 = quantizer::cs_sample(s1, grid, prm);
        const WaveFunction f2 = quantizer::cs_sample(s2, grid, prm);
        report("packet_overlap", "unit", quantizer::cs_overlap(s1, s2, prm),
               inner_product(f1, f2), 1e-6);
    }

    // Resolution of identity and matrix agreement on probe pairs.
    const std::array<std::pair<states::GaussianProbe, states::GaussianProbe>, 2> pairs{
        {{{mid - 1.0, 0.8, 1.3}, {mid + 1.0, 1.1, -0.7}},
         {{mid - 1.8, 1.0, 0.0}, {mid - 1.8, 1.0, 2.0}}}};

    const BandedOperator Wm = operators::window_matrix(grid, geom, prm);
    const BandedOperator Qm = operators::position_matrix(grid, geom, prm);
    const BandedOperator Pm = operators::momentum_matrix(grid, geom, prm);
    const BandedOperator Hm =
        operators::hamiltonian_matrix(operators::OrderingChoice::p_sandwich, grid, geom, prm);

    for (const auto& [pb, pk] : pairs) {
        const WaveFunction bra = states::sample_probe(pb, grid);
        const WaveFunction ket = states::sample_probe(pk, grid);
        report("identity_resolution", "unit",
               quantizer::quantize_element({ObservableKind::unit, false}, bra, ket, geom, prm),
               inner_product(bra, ket), 1e-8);
        report("matrix_agreement", "window",
               quantizer::quantize_element({ObservableKind::unit, true}, bra, ket, geom, prm),
               inner_product(bra, Wm.apply(ket)), 1e-4);
        report("matrix_agreement", "position",
               quantizer::quantize_element({ObservableKind::position, true}, bra, ket, geom, prm),
               inner_product(bra, Qm.apply(ket)), 1e-4);
        report("matrix_agreement", "momentum",
               quantizer::quantize_element({ObservableKind::momentum, true}, bra, ket, geom, prm),
               inner_product(bra, Pm.apply(ket)), 1e-4);
        report("matrix_agreement", "kinetic",
               quantizer::quantize_element({ObservableKind::kinetic, true}, bra, ket, geom, prm),
               inner_product(bra, Hm.apply(ket)), 1e-4);
    }

    // Portrait closed form vs quadrature.
    const std::array<PhaseState, 3> points{{{geom.a + 0.3, 4.0}, {mid, -12.0}, {right - 0.1, 0.0}}};
    const std::array<std::pair<const char*, ObservableKind>, 4> kinds{
        {{"window", ObservableKind::unit},
         {"position", ObservableKind::position},
         {"momentum", ObservableKind::momentum},
         {"kinetic", ObservableKind::kinetic}}};
    for (const auto& [name, kind] : kinds)
        for (const PhaseState& at : points)
            report("portrait_agreement", name,
                   quantizer::portrait({kind, true}, at, geom, prm, PortraitMethod::closed_form),
                   quantizer::portrait({kind, true}, at, geom, prm, PortraitMethod::quadrature),
                   1e-5);

    w.close();
    return {path};
}

std::vector<std::string> cmd_simulate(const RunConfig& cfg, const std::string& prefix) {
    const QuantizationParams prm = cfg.params();
    const Geometry geom = cfg.geometry();
    const dynamics::MechanicalSystem sys = dynamics::semiclassical_system(geom, prm);
    const PhaseState s0{cfg.start_q, cfg.start_p};
    const dynamics::Trajectory tr = dynamics::integrate(sys, s0, cfg.horizon, cfg.dt);

    const long n = static_cast<long>(tr.times.size());
    const long stride = cfg.sample_stride > 0
                            ? cfg.sample_stride
                            : std::max<long>(1, n / 2000);
    const double f0 = prm.force_unit();
    const double alpha = prm.energy_unit();

    const std::string path = out_path(cfg, prefix, "trajectory.csv");
    csv::Writer w(path);
    common_metadata(w, cfg, "simulate");
    w.metadata("start_q", cfg.start_q);
    w.metadata("start_p", cfg.start_p);
    w.metadata("horizon", cfg.horizon);
    w.metadata("dt", cfg.dt);
    w.metadata("sample_stride", static_cast<double>(stride));
    w.metadata("max_relative_energy_drift", tr.max_relative_energy_drift());
    w.metadata("truncated", tr.truncated ? "1" : "0");
    w.header({"t [m*q0^2/hbar]", "q [q0]", "p [hbar/q0]", "E [alpha]", "F [F0]"});
    for (long i = 0; i < n; i += stride) {
        const PhaseState& s = tr.states[i];
        w.row({tr.times[i], s.q, s.p, tr.energies[i] / alpha, dynamics::force(sys, s) / f0});
    }
    w.close();
    return {path};
}

std::vector<std::string> cmd_limit_study(const RunConfig& cfg, const std::string& prefix) {
    const Geometry geom = cfg.geometry();
    const PhaseState s0{cfg.start_q, cfg.limit_p};
    const auto rows = dynamics::classical_limit_study(s0, geom, cfg.mass, cfg.ell0,
                                                      cfg.limit_steps, cfg.limit_horizon,
                                                      cfg.limit_dt, cfg.exec());

    const std::string path = out_path(cfg, prefix, "limit_study.csv");
    csv::Writer w(path);
    common_metadata(w, cfg, "limit-study");
    w.metadata("start_q", cfg.start_q);
    w.metadata("start_p", cfg.limit_p);
    w.metadata("ell0", cfg.ell0);
    w.metadata("steps", static_cast<double>(cfg.limit_steps));
    w.metadata("horizon", cfg.limit_horizon);
    w.metadata("dt", cfg.limit_dt);
    w.header({"n", "ell [q0]", "hbar [action]", "interior_dev [q0]", "penetration [q0]",
              "max_force [model]"});
    for (const auto& r : rows)
        w.row({static_cast<double>(r.n), r.ell, r.hbar, r.interior_deviation, r.penetration,
               r.max_force});
    w.close();
    return {path};
}

std::vector<std::string> cmd_figures(const RunConfig& cfg) {
    // Paper-default datasets, fig-prefixed; only I/O knobs are inherited.
    RunConfig def;
    def.out_dir = cfg.out_dir;
    def.serial = cfg.serial;
    std::vector<std::string> written;
    auto append = [&](std::vector<std::string> v) {
        written.insert(written.end(), v.begin(), v.end());
    };
    append(cmd_window(def, "fig1_"));
    append(cmd_operator(def, "fig2_"));
    append(cmd_commutator(def, "fig3_"));
    append(cmd_uncertainty(def, "fig4_"));
    append(cmd_mass(def, "fig5_"));
    append(cmd_potentials(def, "fig6_"));
    append(cmd_force(def, "fig7_"));
    return written;
}

namespace {

// key=value configuration file ('#' comments).  Values feed the same fields as
// the long flags; explicit flags win because they are parsed afterwards.
std::map<std::string, std::string> parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open config file: " + path);
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        const std::string t = trim(line);
        if (t.empty()) continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw config_error("config file line " + std::to_string(lineno) +
                               ": expected key = value");
        const std::string key = trim(t.substr(0, eq));
        const std::string val = trim(t.substr(eq + 1));
        if (key.empty() || val.empty())
            throw config_error("config file line " + std::to_string(lineno) +
                               ": empty key or value");
        kv[key] = val;
    }
    return kv;
}

double to_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw config_error("config: bad numeric value for '" + key + "': " + v);
    }
}

int to_int(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const int i = std::stoi(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return i;
    } catch (const std::exception&) {
        throw config_error("config: bad integer value for '" + key + "': " + v);
    }
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "1" || v == "true") return true;
    if (v == "0" || v == "false") return false;
    throw config_error("config: bad boolean value for '" + key + "': " + v);
}

void apply_config_file(RunConfig& cfg, const std::map<std::string, std::string>& kv) {
    for (const auto& [key, val] : kv) {
        if (key == "half-line") cfg.half_line = to_bool(key, val);
        else if (key == "a") { cfg.a = to_double(key, val); cfg.a_given = true; }
        else if (key == "b") { cfg.b = to_double(key, val); cfg.b_given = true; }
        else if (key == "ell") { cfg.ell = to_double(key, val); cfg.ell_given = true; }
        else if (key == "hbar") cfg.hbar = to_double(key, val);
        else if (key == "mass") cfg.mass = to_double(key, val);
        else if (key == "q0") cfg.q0 = to_double(key, val);
        else if (key == "grid-h") cfg.grid_h = to_double(key, val);
        else if (key == "out") cfg.out_dir = val;
        else if (key == "x-step") cfg.x_step = to_double(key, val);
        else if (key == "pad") cfg.pad = to_double(key, val);
        else if (key == "p") { cfg.p_value = to_double(key, val); cfg.p_given = true; }
        else if (key == "scan-lo") cfg.scan_lo = to_double(key, val);
        else if (key == "scan-hi") cfg.scan_hi = to_double(key, val);
        else if (key == "scan-step") cfg.scan_step = to_double(key, val);
        else if (key == "width") cfg.probe_width = to_double(key, val);
        else if (key == "portrait-step") cfg.portrait_step = to_double(key, val);
        else if (key == "start-q") cfg.start_q = to_double(key, val);
        else if (key == "start-p") cfg.start_p = to_double(key, val);
        else if (key == "T") cfg.horizon = to_double(key, val);
        else if (key == "dt") cfg.dt = to_double(key, val);
        else if (key == "sample-stride") cfg.sample_stride = to_int(key, val);
        else if (key == "ell0") cfg.ell0 = to_double(key, val);
        else if (key == "limit-steps") cfg.limit_steps = to_int(key, val);
        else if (key == "limit-T") cfg.limit_horizon = to_double(key, val);
        else if (key == "limit-dt") cfg.limit_dt = to_double(key, val);
        else if (key == "limit-p") cfg.limit_p = to_double(key, val);
        else if (key == "serial") cfg.serial = to_bool(key, val);
        else throw config_error("config: unknown key '" + key + "'");
    }
}

void validate_common(const RunConfig& cfg) {
    cfg.params();   // throws on bad physics values
    cfg.geometry(); // throws on bad geometry
    if (cfg.grid_h < 0.0) throw config_error("grid-h must be non-negative");
    if (!(cfg.x_step > 0.0)) throw config_error("x-step must be positive");
    if (!(cfg.pad >= 0.0)) throw config_error("pad must be non-negative");
}

} // namespace

int run(int argc, const char* const* argv) {
    RunConfig cfg;

    // The config file (if any) must be applied before flag parsing so that
    // explicit flags override it; find it with a light pre-scan.
    try {
        for (int i = 1; i < argc; ++i) {
            const std::string arg = argv[i];
            if (arg == "--config") {
                if (i + 1 >= argc) throw config_error("--config needs a file path");
                cfg.config_file = argv[i + 1];
            } else if (arg.rfind("--config=", 0) == 0) {
                cfg.config_file = arg.substr(9);
            }
        }
        if (!cfg.config_file.empty()) apply_config_file(cfg, parse_config_file(cfg.config_file));
    } catch (const io_error& e) {
        std::fprintf(stderr, "fuzzybox: %s\n", e.what());
        return 2;
    } catch (const config_error& e) {
        std::fprintf(stderr, "fuzzybox: %s\n", e.what());
        return 3;
    }

    CLI::App app{"fuzzybox: windowed phase-space quantization toolkit for a particle in an "
                 "interval or half line"};
    app.require_subcommand(1);

    bool dump_bands = false;
    bool figures_all = false;

    auto add_common = [&](CLI::App* sub) {
        sub->add_flag("--half-line", cfg.half_line, "use the half line [a, inf)");
        sub->add_option("--a", cfg.a, "left endpoint [q0]");
        sub->add_option("--b", cfg.b, "right endpoint [q0]");
        sub->add_option("--ell", cfg.ell, "smearing width [q0]");
        sub->add_option("--hbar", cfg.hbar, "Planck constant [action]");
        sub->add_option("--mass", cfg.mass, "particle mass [m]");
        sub->add_option("--q0", cfg.q0, "reference length unit");
        sub->add_option("--grid-h", cfg.grid_h, "grid spacing (0 = auto ell/20) [q0]");
        sub->add_option("--out", cfg.out_dir, "output directory");
        sub->add_option("--config", cfg.config_file,
                        "key=value config file (flags win on conflict)");
        sub->add_option("--x-step", cfg.x_step, "curve sampling step [q0]");
        sub->add_option("--pad", cfg.pad, "sampling margin beyond the region [q0]");
        sub->add_flag("--serial", cfg.serial, "run sweeps on the serial reference path");
        return sub;
    };

    CLI::App* window = add_common(app.add_subcommand("window", "smooth window and derivatives"));
    CLI::App* oper =
        add_common(app.add_subcommand("operator", "position symbol and spectral density"));
    oper->add_flag("--dump-bands", dump_bands, "also dump matrix bands for the first combo");
    CLI::App* comm = add_common(app.add_subcommand("commutator", "commutator symbol curves"));
    CLI::App* unc = add_common(
        app.add_subcommand("uncertainty", "uncertainty scan over probe centers"));
    unc->add_option("--scan-lo", cfg.scan_lo, "scan start [q0]");
    unc->add_option("--scan-hi", cfg.scan_hi, "scan end [q0]");
    unc->add_option("--scan-step", cfg.scan_step, "scan step [q0]");
    unc->add_option("--width", cfg.probe_width, "probe width [q0]");
    CLI::App* mass = add_common(app.add_subcommand("mass", "effective-mass profile"));
    CLI::App* pots = add_common(app.add_subcommand("potentials", "ordering potentials V+ / V-"));
    CLI::App* force = add_common(app.add_subcommand("force", "semiclassical force curves"));
    force->add_option("--p", cfg.p_value, "momentum [hbar/q0]");
    CLI::App* portrait =
        add_common(app.add_subcommand("portrait", "lower symbols: closed form vs quadrature"));
    portrait->add_option("--p", cfg.p_value, "momentum [hbar/q0]");
    portrait->add_option("--portrait-step", cfg.portrait_step, "q sampling step [q0]");
    CLI::App* qcheck = add_common(
        app.add_subcommand("quantize-check", "oracle consistency battery (exit 4 on failure)"));
    CLI::App* sim = add_common(app.add_subcommand("simulate", "semiclassical trajectory"));
    sim->add_option("--start-q", cfg.start_q, "initial position [q0]");
    sim->add_option("--start-p", cfg.start_p, "initial momentum [hbar/q0]");
    sim->add_option("--T", cfg.horizon, "time horizon [m q0^2/hbar]");
    sim->add_option("--dt", cfg.dt, "integration step [m q0^2/hbar]");
    sim->add_option("--sample-stride", cfg.sample_stride, "output every k-th step (0 = auto)");
    CLI::App* limit = add_common(
        app.add_subcommand("limit-study", "classical-limit sequence ell_n = ell0/2^n"));
    limit->add_option("--start-q", cfg.start_q, "initial position [q0]");
    limit->add_option("--limit-p", cfg.limit_p, "initial momentum [hbar/q0]");
    limit->add_option("--ell0", cfg.ell0, "initial smearing width [q0]");
    limit->add_option("--limit-steps", cfg.limit_steps, "number of halvings");
    limit->add_option("--limit-T", cfg.limit_horizon, "time horizon");
    limit->add_option("--limit-dt", cfg.limit_dt, "integration step");
    CLI::App* figures =
        add_common(app.add_subcommand("figures", "regenerate every figure dataset"));
    figures->add_flag("--all", figures_all, "regenerate all datasets (default)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e); // prints help, returns 0
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 3;
    }

    try {
        // Flag presence refines the sweep semantics (a single explicit value
        // collapses the default parameter sweeps).
        auto given = [&](CLI::App* sub, const char* name) {
            return sub->parsed() && sub->count(name) > 0;
        };
        for (CLI::App* sub : {window, oper, comm, unc, mass, pots, force, portrait, qcheck, sim,
                              limit, figures}) {
            if (!sub->parsed()) continue;
            cfg.ell_given = cfg.ell_given || given(sub, "--ell");
            cfg.a_given = cfg.a_given || given(sub, "--a");
            cfg.b_given = cfg.b_given || given(sub, "--b");
            if (sub == force || sub == portrait)
                cfg.p_given = cfg.p_given || given(sub, "--p");
        }
        validate_common(cfg);

        if (window->parsed()) cmd_window(cfg);
        else if (oper->parsed()) cmd_operator(cfg, "", dump_bands);
        else if (comm->parsed()) cmd_commutator(cfg);
        else if (unc->parsed()) cmd_uncertainty(cfg);
        else if (mass->parsed()) cmd_mass(cfg);
        else if (pots->parsed()) cmd_potentials(cfg);
        else if (force->parsed()) cmd_force(cfg);
        else if (portrait->parsed()) cmd_portrait(cfg);
        else if (qcheck->parsed()) {
            bool ok = false;
            cmd_quantize_check(cfg, ok);
            if (!ok) {
                std::fprintf(stderr, "fuzzybox: quantize-check found discrepancies above "
                                     "tolerance\n");
                return 4;
            }
        } else if (sim->parsed()) cmd_simulate(cfg);
        else if (limit->parsed()) cmd_limit_study(cfg);
        else if (figures->parsed()) cmd_figures(cfg);
    } catch (const io_error& e) {
        std::fprintf(stderr, "fuzzybox: %s\n", e.what());
        return 2;
    } catch (const config_error& e) {
        std::fprintf(stderr, "fuzzybox: %s\n", e.what());
        return 3;
    } catch (const std::domain_error& e) {
        std::fprintf(stderr, "fuzzybox: %s\n", e.what());
        return 3;
    } catch (const numerical_error& e) {
        std::fprintf(stderr, "fuzzybox: %s\n", e.what());
        return 4;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "fuzzybox: internal error: %s\n", e.what());
        return 4;
    }
    return 0;
}

} // namespace fuzzybox::cli
