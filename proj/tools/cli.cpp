#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "rrk/analysis.hpp"
#include "rrk/csv.hpp"
#include "rrk/error.hpp"
#include "rrk/problems.hpp"
#include "rrk/relaxation.hpp"
#include "rrk/tableau.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace rrk::cli {

namespace {

const std::vector<std::string> kProblems{"oscillator", "sunshu", "advection", "burgers-cons", "burgers-diss", "zero"};
const std::vector<std::string> kSubcommands{"list-methods", "validate",         "integrate", "convergence", "gamma-study",
                                            "energy",       "stability-region", "ssp-table", "modes"};

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> read_optional(const json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return j.at(key).get<double>();
}

/// Method selected by --tableau-file if present, otherwise by --method.
ButcherTableau resolve_method(const RunConfig& cfg) {
    if (!cfg.tableau_file.empty()) return load_tableau(cfg.tableau_file);
    return builtin(cfg.method);
}

std::vector<ButcherTableau> method_table(const RunConfig& cfg) {
    std::vector<ButcherTableau> all;
    for (const auto& n : builtin_names()) all.push_back(builtin(n));
    if (!cfg.tableau_file.empty()) all.push_back(load_tableau(cfg.tableau_file));
    return all;
}

struct Setup {
    IvpProblem prob;
    double dt = 0.0;
};

void require(bool ok, const std::string& msg) {
    if (!ok) throw ArgumentError(msg);
}

Setup build_problem(const RunConfig& cfg, const ButcherTableau& tab) {
    require(std::find(kProblems.begin(), kProblems.end(), cfg.problem) != kProblems.end(),
            "unknown problem '" + cfg.problem + "'");
    require(cfg.t_end > 0.0, "--t-end must be positive");
    Setup s;
    if (cfg.problem == "advection") {
        require(cfg.mu.has_value(), "advection takes --mu, not --dt");
        require(!cfg.dt.has_value(), "advection takes --mu, not --dt");
        require(*cfg.mu > 0.0, "--mu must be positive");
        require(cfg.ic == "noise" || cfg.ic == "sech2", "--ic must be noise or sech2");
        AdvectionInitial ic = WhiteNoise{cfg.seed};
        if (cfg.ic == "sech2") ic = Sech2{};
        s.prob = spectral_advection(cfg.m, ic);
        s.dt = *cfg.mu * dt_max(stability_polynomial(tab), 1.0, cfg.m);
        return s;
    }
    require(!cfg.mu.has_value(), "--mu applies to the advection problem only");
    require(cfg.dt.has_value(), "--dt is required");
    require(*cfg.dt > 0.0, "--dt must be positive");
    s.dt = *cfg.dt;
    if (cfg.problem == "oscillator") {
        s.prob = oscillator();
    } else if (cfg.problem == "sunshu") {
        s.prob = sun_shu();
    } else if (cfg.problem == "zero") {
        s.prob = zero_problem({1.0, 0.0});
    } else {
        BurgersConfig bc;
        bc.n = cfg.n;
        bc.epsilon = cfg.eps;
        bc.flux = cfg.problem == "burgers-cons" ? BurgersFlux::conservative : BurgersFlux::dissipative;
        s.prob = burgers(bc);
    }
    return s;
}

std::vector<double> halving_list(double dt, int levels) {
    require(levels >= 2, "--levels must be at least 2");
    std::vector<double> dts;
    for (int k = 0; k < levels; ++k) dts.push_back(std::ldexp(dt, -k));
    return dts;
}

class Output {
public:
    Output(RunConfig& cfg) : cfg_(cfg), dir_(cfg.out.empty() ? fs::path("rrk-out") : fs::path(cfg.out)) {
        fs::create_directories(dir_);
    }

    fs::path file(const std::string& name) {
        cfg_.outputs.push_back(name);
        return dir_ / name;
    }

    void write_manifest() {
        std::ofstream f(dir_ / "manifest.json");
        f << to_json(cfg_).dump(2) << '\n';
    }

private:
    RunConfig& cfg_;
    fs::path dir_;
};

void cmd_list_methods(RunConfig& cfg, std::ostream& out) {
    std::ostringstream table;
    table << "method,stages,order,ssp_coeff,gamma_star\n";
    std::vector<std::vector<std::string>> rows;
    for (const auto& tab : method_table(cfg)) {
        const auto diag = validate(tab, 6);
        std::optional<SspReport> ssp;
        if (tab.is_explicit()) ssp = ssp_coefficient(tab);
        std::vector<std::string> row{tab.name(), std::to_string(tab.stages()), std::to_string(diag.order),
                                     ssp ? format_double(ssp->ssp_coeff) : "",
                                     ssp && ssp->gamma_star ? format_double(*ssp->gamma_star) : ""};
        table << csv_escape(row[0]) << ',' << row[1] << ',' << row[2] << ',' << row[3] << ',' << row[4] << '\n';
        rows.push_back(std::move(row));
    }
    out << table.str();
    if (cfg.out.empty()) return;
    Output o(cfg);
    CsvWriter w(o.file("methods.csv"));
    w.header({"method", "stages", "order", "ssp_coeff", "gamma_star"});
    for (const auto& r : rows) {
        for (const auto& f : r) w.field(f);
        w.end_row();
    }
    o.write_manifest();
}

void cmd_validate(RunConfig& cfg, std::ostream& out) {
    const auto tab = resolve_method(cfg);
    const auto diag = validate(tab, 6);
    const auto alg = algebraic_stability_matrix(tab);
    auto yes = [](bool b) { return b ? "yes" : "no"; };
    out << "method " << tab.name() << '\n'
        << "stages " << tab.stages() << '\n'
        << "explicit " << yes(diag.is_explicit) << '\n'
        << "c consistent " << yes(diag.c_consistent) << '\n'
        << "nonnegative weights " << yes(diag.nonneg_weights) << '\n'
        << "order " << diag.order << '\n'
        << "sum b_i a_ij " << format_double(diag.positivity_sum) << '\n'
        << "algebraic stability " << to_string(alg.classification) << '\n';
    if (diag.is_explicit) {
        const auto ssp = ssp_coefficient(tab);
        out << "ssp coefficient " << format_double(ssp.ssp_coeff) << '\n';
        if (ssp.gamma_star) out << "gamma_star " << format_double(*ssp.gamma_star) << '\n';
        out << "imaginary interval " << format_double(imaginary_interval(stability_polynomial(tab), 1.0)) << '\n';
    }
    Output o(cfg);
    CsvWriter w(o.file("order_conditions.csv"));
    w.header({"tree", "order", "density", "residual"});
    for (const auto& r : diag.residuals) {
        w.field(r.tree).field(static_cast<long long>(r.order)).field(r.density).field(r.residual);
        w.end_row();
    }
    o.write_manifest();
}

void write_burgers_state(Output& o, const RunConfig& cfg, const State& u) {
    BurgersConfig bc;
    bc.n = cfg.n;
    const auto x = burgers_grid(bc);
    CsvWriter w(o.file("state.csv"));
    w.header({"x", "u"});
    for (std::size_t i = 0; i < u.size(); ++i) {
        w.field(x[i]).field(u[i]);
        w.end_row();
    }
}

void report_gamma(const Trajectory& traj, std::ostream& out, std::ostream& err) {
    const auto& md = traj.metadata;
    out << "steps " << md.steps << '\n'
        << "achieved_t " << format_double(md.achieved_t) << '\n'
        << "gamma_min " << format_double(md.gamma_min) << '\n'
        << "gamma_max " << format_double(md.gamma_max) << '\n'
        << "fallback_steps " << md.fallback_steps << '\n';
    if (!md.gamma_warnings.empty())
        err << "warning: gamma outside [0.5, 1.5] on " << md.gamma_warnings.size() << " steps, first at step "
            << md.gamma_warnings.front() << '\n';
}

void cmd_integrate(RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const auto tab = resolve_method(cfg);
    const auto s = build_problem(cfg, tab);
    const auto traj = integrate(tab, s.prob, s.prob.t0, s.prob.u0, s.dt, cfg.t_end, parse_mode(cfg.mode));
    Output o(cfg);
    {
        CsvWriter w(o.file("trajectory.csv"));
        std::vector<std::string> cols{"t", "gamma", "energy", "energy_sq"};
        if (cfg.dump_state)
            for (std::size_t i = 0; i < s.prob.dim; ++i) cols.push_back("u" + std::to_string(i));
        w.header(cols);
        for (const auto& r : traj.records) {
            w.field(r.t).field(r.gamma).field(std::sqrt(r.energy_sq)).field(r.energy_sq);
            if (cfg.dump_state)
                for (double v : r.state) w.field(v);
            w.end_row();
        }
    }
    if (cfg.problem == "burgers-cons" || cfg.problem == "burgers-diss") write_burgers_state(o, cfg, traj.final().state);
    report_gamma(traj, out, err);
    o.write_manifest();
}

void cmd_energy(RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const auto tab = resolve_method(cfg);
    const auto s = build_problem(cfg, tab);
    IntegrateOptions opts;
    opts.store_states = false;
    const auto traj = integrate(tab, s.prob, s.prob.t0, s.prob.u0, s.dt, cfg.t_end, parse_mode(cfg.mode), opts);
    Output o(cfg);
    CsvWriter w(o.file("energy.csv"));
    w.header({"t", "energy_sq", "energy_change"});
    const double e0 = traj.records.front().energy_sq;
    double worst = 0.0;
    for (const auto& r : traj.records) {
        w.field(r.t).field(r.energy_sq).field(r.energy_sq - e0);
        w.end_row();
        worst = std::max(worst, std::abs(r.energy_sq - e0));
    }
    out << "max_energy_change " << format_double(worst) << '\n';
    report_gamma(traj, out, err);
    o.write_manifest();
}

void cmd_convergence(RunConfig& cfg, std::ostream& out) {
    const auto tab = resolve_method(cfg);
    auto s = build_problem(cfg, tab);
    if (!s.prob.exact) {
        require(cfg.ref_dt > 0.0, "--ref-dt must be positive");
        s.prob = with_reference_solution(s.prob, builtin("BSRK(8,5)"), cfg.ref_dt);
    }
    const auto dts = halving_list(s.dt, cfg.levels);
    const auto res = convergence_study(tab, s.prob, s.prob.t0, s.prob.u0, dts, cfg.t_end, parse_mode(cfg.mode));
    Output o(cfg);
    CsvWriter w(o.file("convergence.csv"));
    w.header({"method", "mode", "dt", "error", "achieved_t", "slope"});
    for (const auto& p : res.points) {
        w.field(tab.name()).field(cfg.mode).field(p.dt).field(p.error).field(p.achieved_t).field(res.slope);
        w.end_row();
    }
    out << "slope " << format_double(res.slope) << '\n';
    o.write_manifest();
}

void cmd_gamma_study(RunConfig& cfg, std::ostream& out) {
    const auto tab = resolve_method(cfg);
    const auto s = build_problem(cfg, tab);
    const auto dts = halving_list(s.dt, cfg.levels);
    const auto res = gamma_study(tab, s.prob, s.prob.t0, s.prob.u0, dts);
    Output o(cfg);
    CsvWriter w(o.file("gamma.csv"));
    w.header({"method", "dt", "gamma_error", "slope"});
    for (const auto& p : res.points) {
        w.field(tab.name()).field(p.dt).field(p.gamma_error).field(res.slope);
        w.end_row();
    }
    out << "slope " << format_double(res.slope) << '\n';
    o.write_manifest();
}

void cmd_stability_region(RunConfig& cfg, std::ostream& out) {
    require(cfg.re_range.size() == 2 && cfg.im_range.size() == 2, "--re and --im take two values");
    require(!cfg.gammas.empty(), "--gamma needs at least one value");
    const auto tab = resolve_method(cfg);
    const auto sp = stability_polynomial(tab);
    Output o(cfg);
    for (double g : cfg.gammas) {
        const auto grid = stability_region_scan(sp, g, {cfg.re_range[0], cfg.re_range[1]},
                                                {cfg.im_range[0], cfg.im_range[1]}, cfg.resolution, cfg.resolution);
        const std::string tag = format_double(g);
        {
            CsvWriter w(o.file("region_gamma_" + tag + ".csv"));
            w.header({"re", "im", "stable"});
            for (std::size_t j = 0; j < grid.im.size(); ++j)
                for (std::size_t i = 0; i < grid.re.size(); ++i) {
                    w.field(grid.re[i]).field(grid.im[j]).field(static_cast<long long>(grid.at(i, j)));
                    w.end_row();
                }
        }
        CsvWriter w(o.file("boundary_gamma_" + tag + ".csv"));
        w.header({"re", "im"});
        for (const auto& z : grid.boundary) {
            w.field(z.re).field(z.im);
            w.end_row();
        }
        out << "gamma " << tag << " imaginary_interval " << format_double(imaginary_interval(sp, g)) << '\n';
    }
    o.write_manifest();
}

void cmd_ssp_table(RunConfig& cfg, std::ostream& out) {
    Output o(cfg);
    CsvWriter w(o.file("ssp_table.csv"));
    w.header({"method", "ssp_coeff", "gamma_star"});
    out << "method,ssp_coeff,gamma_star\n";
    for (const auto& tab : method_table(cfg)) {
        const auto rep = ssp_coefficient(tab);
        w.field(tab.name()).field(rep.ssp_coeff).field(rep.gamma_star);
        w.end_row();
        out << csv_escape(tab.name()) << ',' << format_double(rep.ssp_coeff) << ','
            << (rep.gamma_star ? format_double(*rep.gamma_star) : "") << '\n';
    }
    o.write_manifest();
}

void cmd_modes(RunConfig& cfg, std::ostream& out, std::ostream& err) {
    require(cfg.problem == "advection", "modes needs --problem advection");
    const auto tab = resolve_method(cfg);
    const auto s = build_problem(cfg, tab);
    IntegrateOptions opts;
    opts.store_states = false;
    const auto traj = integrate(tab, s.prob, s.prob.t0, s.prob.u0, s.dt, cfg.t_end, parse_mode(cfg.mode), opts);
    const auto amp = mode_amplification(s.prob.u0, traj.final().state);
    Output o(cfg);
    CsvWriter w(o.file("modes.csv"));
    w.header({"xi", "rel_change"});
    int damped = 0, amplified = 0;
    for (std::size_t xi = 0; xi < amp.size(); ++xi) {
        w.field(static_cast<long long>(xi)).field(amp[xi]);
        w.end_row();
        if (amp[xi] && xi > 0) {
            if (*amp[xi] < -1e-8) ++damped;
            if (*amp[xi] > 1e-8) ++amplified;
        }
    }
    const double e0 = traj.records.front().energy_sq;
    out << "dt " << format_double(s.dt) << '\n'
        << "energy_rel_change " << format_double((traj.final().energy_sq - e0) / e0) << '\n'
        << "damped_modes " << damped << '\n'
        << "amplified_modes " << amplified << '\n';
    report_gamma(traj, out, err);
    o.write_manifest();
}

void add_run_options(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--method", cfg.method, "registry method name");
    sub->add_option("--tableau-file", cfg.tableau_file, "load the method from a tableau file");
    sub->add_option("--mode", cfg.mode, "baseline | idt | rrk");
    sub->add_option("--problem", cfg.problem, "oscillator | sunshu | advection | burgers-cons | burgers-diss | zero");
    sub->add_option_function<double>("--dt", [&cfg](const double& v) { cfg.dt = v; }, "step size");
    sub->add_option_function<double>("--mu", [&cfg](const double& v) { cfg.mu = v; },
                                     "advection step as a fraction of dt_max");
    sub->add_option("--t-end", cfg.t_end, "final time");
    sub->add_option("--m", cfg.m, "advection grid size");
    sub->add_option("--n", cfg.n, "Burgers grid size");
    sub->add_option("--eps", cfg.eps, "Burgers dissipation");
    sub->add_option("--seed", cfg.seed, "white-noise seed");
    sub->add_option("--ic", cfg.ic, "advection initial data: noise | sech2");
    sub->add_option("--out", cfg.out, "output directory");
}

}  // namespace

json to_json(const RunConfig& cfg) {
    return json{{"tool", "rrk"},
                {"version", kToolVersion},
                {"subcommand", cfg.subcommand},
                {"method", cfg.method},
                {"tableau_file", cfg.tableau_file},
                {"mode", cfg.mode},
                {"problem", cfg.problem},
                {"dt", optional_number(cfg.dt)},
                {"mu", optional_number(cfg.mu)},
                {"t_end", cfg.t_end},
                {"m", cfg.m},
                {"n", cfg.n},
                {"eps", cfg.eps},
                {"seed", cfg.seed},
                {"ic", cfg.ic},
                {"levels", cfg.levels},
                {"ref_dt", cfg.ref_dt},
                {"gammas", cfg.gammas},
                {"re_range", cfg.re_range},
                {"im_range", cfg.im_range},
                {"resolution", cfg.resolution},
                {"dump_state", cfg.dump_state},
                {"out", cfg.out},
                {"outputs", cfg.outputs}};
}

RunConfig from_json(const json& j) {
    try {
        RunConfig c;
        c.subcommand = j.at("subcommand").get<std::string>();
        c.method = j.value("method", c.method);
        c.tableau_file = j.value("tableau_file", c.tableau_file);
        c.mode = j.value("mode", c.mode);
        c.problem = j.value("problem", c.problem);
        c.dt = read_optional(j, "dt");
        c.mu = read_optional(j, "mu");
        c.t_end = j.value("t_end", c.t_end);
        c.m = j.value("m", c.m);
        c.n = j.value("n", c.n);
        c.eps = j.value("eps", c.eps);
        c.seed = j.value("seed", c.seed);
        c.ic = j.value("ic", c.ic);
        c.levels = j.value("levels", c.levels);
        c.ref_dt = j.value("ref_dt", c.ref_dt);
        c.gammas = j.value("gammas", c.gammas);
        c.re_range = j.value("re_range", c.re_range);
        c.im_range = j.value("im_range", c.im_range);
        c.resolution = j.value("resolution", c.resolution);
        c.dump_state = j.value("dump_state", c.dump_state);
        c.out = j.value("out", c.out);
        return c;
    } catch (const json::exception& e) {
        throw ParseError(std::string("manifest: ") + e.what());
    }
}

int execute(RunConfig cfg, std::ostream& out, std::ostream& err) {
    cfg.outputs.clear();
    try {
        (void)parse_mode(cfg.mode);
        const auto& s = cfg.subcommand;
        if (s == "list-methods") cmd_list_methods(cfg, out);
        else if (s == "validate") cmd_validate(cfg, out);
        else if (s == "integrate") cmd_integrate(cfg, out, err);
        else if (s == "energy") cmd_energy(cfg, out, err);
        else if (s == "convergence") cmd_convergence(cfg, out);
        else if (s == "gamma-study") cmd_gamma_study(cfg, out);
        else if (s == "stability-region") cmd_stability_region(cfg, out);
        else if (s == "ssp-table") cmd_ssp_table(cfg, out);
        else if (s == "modes") cmd_modes(cfg, out, err);
        else throw ArgumentError("unknown subcommand '" + s + "'");
    } catch (const NumericalError& e) {
        err << "numerical abort: " << e.what() << '\n';
        return 2;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Energy-relaxed Runge-Kutta experiments and method analysis", "rrk"};
    app.set_version_flag("--version", kToolVersion);
    app.require_subcommand(0, 1);

    std::string manifest_path;
    std::string replay_out;
    app.add_option("--manifest", manifest_path, "replay a previously written manifest.json");
    app.add_option("--out", replay_out, "output directory override for --manifest");

    RunConfig cfg;
    std::vector<CLI::App*> subs;
    for (const auto& name : kSubcommands) {
        auto* sub = app.add_subcommand(name);
        subs.push_back(sub);
        if (name == "list-methods" || name == "ssp-table") {
            sub->add_option("--tableau-file", cfg.tableau_file, "append a method from a tableau file");
            sub->add_option("--out", cfg.out, "output directory");
            continue;
        }
        if (name == "validate") {
            sub->add_option("--method", cfg.method, "registry method name");
            sub->add_option("--tableau-file", cfg.tableau_file, "load the method from a tableau file");
            sub->add_option("--out", cfg.out, "output directory");
            continue;
        }
        add_run_options(sub, cfg);
        if (name == "integrate") sub->add_flag("--dump-state", cfg.dump_state, "add state columns to the trajectory");
        if (name == "convergence" || name == "gamma-study")
            sub->add_option("--levels", cfg.levels, "number of halvings of the starting dt");
        if (name == "convergence") sub->add_option("--ref-dt", cfg.ref_dt, "reference step for Burgers");
        if (name == "stability-region") {
            sub->add_option("--gamma", cfg.gammas, "relaxation values to scan");
            sub->add_option("--re", cfg.re_range, "real range")->expected(2);
            sub->add_option("--im", cfg.im_range, "imaginary range")->expected(2);
            sub->add_option("--resolution", cfg.resolution, "grid points per axis");
        }
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForVersion& e) {
        out << kToolVersion << '\n';
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }

    if (!manifest_path.empty()) {
        if (app.get_subcommands().size() == 1) {
            err << "error: --manifest replays a run and takes no subcommand\n";
            return 1;
        }
        std::ifstream f(manifest_path);
        if (!f) {
            err << "error: cannot open manifest '" << manifest_path << "'\n";
            return 1;
        }
        RunConfig replay;
        try {
            replay = from_json(json::parse(f));
        } catch (const json::exception& e) {
            err << "error: manifest: " << e.what() << '\n';
            return 1;
        } catch (const Error& e) {
            err << "error: " << e.what() << '\n';
            return 1;
        }
        if (!replay_out.empty()) replay.out = replay_out;
        return execute(std::move(replay), out, err);
    }
    if (!replay_out.empty()) {
        err << "error: a top-level --out is only valid with --manifest\n";
        return 1;
    }

    const auto chosen = app.get_subcommands();
    if (chosen.empty()) {
        err << "error: a subcommand is required\n" << app.help();
        return 1;
    }
    cfg.subcommand = chosen.front()->get_name();
    return execute(std::move(cfg), out, err);
}

}  // namespace rrk::cli
