#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "perilib/dynamics.hpp"
#include "perilib/error.hpp"
#include "perilib/normal_form.hpp"
#include "perilib/portrait.hpp"
#include "perilib/potentials.hpp"
#include "perilib/theorem.hpp"

namespace perilib::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string tag(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

std::string seed_line(const ExperimentConfig& cfg) { return "seed," + std::to_string(cfg.seed); }

std::string out_path(const ExperimentConfig& cfg, const std::string& name) {
    std::error_code ec;
    fs::create_directories(cfg.out_dir, ec);
    if (ec) throw IoError("cannot create output directory '" + cfg.out_dir + "': " + ec.message());
    return (fs::path(cfg.out_dir) / name).string();
}

json header(const ExperimentConfig& cfg, const std::string& command) {
    json j;
    j["seed"] = cfg.seed;
    j["command"] = command;
    return j;
}

struct Resolved {
    HamiltonianSpec spec;
    TheoremInputs inputs;
};

Resolved resolve(const ExperimentConfig& cfg) {
    Resolved r;
    if (cfg.domain.construct_remark) {
        RemarkChoice ch;
        ch.m0 = cfg.m0;
        ch.Lambda = cfg.Lambda;
        ch.mu = cfg.mu;
        ch.frame = cfg.frame;
        ch.index = cfg.index;
        ch.eps0 = cfg.domain.eps0;
        ch.delta = cfg.domain.delta;
        ch.margin = cfg.domain.margin;
        ch.c0_grid = cfg.c0_grid;
        const RemarkParameters p = construct_remark_parameters(ch, cfg.constants);
        r.spec = p.spec;
        r.inputs = p.inputs;
    } else {
        r.spec = cfg.spec();
        r.inputs.eps0 = cfg.domain.eps0;
        r.inputs.delta = cfg.domain.delta;
        r.inputs.s0 = cfg.domain.s0;
        r.inputs.alpha_minus = cfg.domain.alpha_minus;
        r.inputs.alpha_plus = cfg.domain.alpha_plus;
        r.inputs.c0_grid = cfg.c0_grid;
    }
    r.inputs.N = cfg.N;
    return r;
}

json masses_json(const HamiltonianSpec& s) {
    return {{"mu", s.masses.mu},
            {"kappa", s.masses.kappa},
            {"frame", std::string(to_string(s.masses.frame))},
            {"index", s.index == HamiltonianIndex::H1 ? "H1" : "H2"},
            {"beta", s.masses.beta},
            {"beta_bar", s.masses.beta_bar},
            {"beta_lower", s.beta_star()},
            {"beta_upper", s.beta_upper()},
            {"m0", s.m0},
            {"Lambda", s.Lambda},
            {"a", s.a()}};
}

// log10(16 cosh^2 s0) without overflow.
double log10_literal(double s0) {
    const double a = std::abs(s0);
    return std::log10(4.0) + 2.0 * (a + std::log1p(std::exp(-2.0 * a))) / std::log(10.0);
}

json report_json(const TheoremReport& rep) {
    json ineq = json::array();
    for (const auto& q : rep.inequalities) {
        ineq.push_back({{"label", q.label},
                        {"lhs", q.lhs},
                        {"rhs", q.rhs},
                        {"relation", q.relation == Relation::less ? "<" : "<="},
                        {"holds", q.holds}});
    }
    return {{"pass", rep.pass},
            {"inequalities", ineq},
            {"c0", rep.c0},
            {"inv_N0", rep.inv_N0},
            {"N0", rep.N0},
            {"eta", rep.eta},
            {"T_estimate", rep.T_estimate},
            {"C_upper_literal_16cosh2_s0", rep.C_star_literal},
            {"log10_C_upper_literal", log10_literal(rep.inputs.s0)},
            {"surrogates",
             {{"C_upper", rep.constants.C_upper},
              {"C_lower", rep.constants.C_lower},
              {"c_star", rep.constants.c_star},
              {"c_circ", rep.constants.c_circ},
              {"note", "numerical illustration with configurable surrogate constants, not a proof"}}},
            {"inputs",
             {{"eps0", rep.inputs.eps0},
              {"delta", rep.inputs.delta},
              {"s0", rep.inputs.s0},
              {"alpha_minus", rep.inputs.alpha_minus},
              {"alpha_plus", rep.inputs.alpha_plus},
              {"N", rep.inputs.N}}}};
}

std::vector<double> parse_state(const std::string& s) {
    const auto v = parse_doubles("evolve.state", s);
    if (v.size() != 4) throw ConfigError("config field 'evolve.state': expected four numbers or 'auto'");
    return v;
}

std::string json_text(const json& j) { return j.dump(2) + "\n"; }

}  // namespace

void write_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw IoError("cannot open '" + tmp + "' for writing");
        os << content;
        os.flush();
        if (!os) throw IoError("write to '" + tmp + "' failed");
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) throw IoError("cannot rename '" + tmp + "' to '" + path + "': " + ec.message());
}

CommandResult cmd_portrait(const ExperimentConfig& cfg, const std::vector<double>& eps) {
    const auto& t = cfg.tree;
    PortraitGrid grid{get_int(t, "portrait.ng", 128), get_int(t, "portrait.nG", 128)};
    if (grid.ng < 64 || grid.nG < 64) throw ConfigError("config field 'portrait.ng': grid must be at least 64x64");
    const int levels = get_int(t, "portrait.levels", 24);
    if (levels < 1) throw ConfigError("config field 'portrait.levels': must be positive");
    const int eq_grid = get_int(t, "portrait.equilibria_grid", 24);
    if (eq_grid < 2) throw ConfigError("config field 'portrait.equilibria_grid': must be at least 2");
    CommandResult res;
    std::ostringstream summary;
    for (double e : eps) {
        if (!(e > 0.0) || std::abs(e - 0.5) < 1e-9 || std::abs(e - 1.0) < 1e-9) {
            throw ConfigError("config field 'portrait.eps': " + tag(e) +
                              " must be positive and differ from the transition values 1/2 and 1");
        }
        const auto contours = phase_portrait(e, cfg.Lambda, grid, levels);
        const auto eq = find_equilibria(e, cfg.Lambda, eq_grid);
        std::ostringstream csv;
        write_portrait_csv(csv, contours, {seed_line(cfg), "eps," + tag(e), "Lambda," + tag(cfg.Lambda)});
        const std::string csv_path = out_path(cfg, "portrait_eps" + tag(e) + ".csv");
        write_atomic(csv_path, csv.str());

        json j = header(cfg, "portrait");
        j["eps"] = e;
        j["Lambda"] = cfg.Lambda;
        json list = json::array();
        int centers = 0, saddles = 0;
        for (const auto& q : eq) {
            (q.kind == EquilibriumKind::center ? centers : saddles) += 1;
            list.push_back({{"g", q.g},
                            {"G", q.G},
                            {"kind", to_string(q.kind)},
                            {"eigenvalues",
                             {{q.eigenvalues.first.real(), q.eigenvalues.first.imag()},
                              {q.eigenvalues.second.real(), q.eigenvalues.second.imag()}}}});
        }
        j["equilibria"] = list;
        j["centers"] = centers;
        j["saddles"] = saddles;
        j["rotation"] = has_rotation(contours, grid);
        j["contours"] = contours.size();
        const std::string eq_path = out_path(cfg, "equilibria_eps" + tag(e) + ".json");
        write_atomic(eq_path, json_text(j));
        res.files.push_back(csv_path);
        res.files.push_back(eq_path);
        summary << "eps=" << tag(e) << ": " << centers << " centers, " << saddles << " saddles, rotation "
                << (j["rotation"].get<bool>() ? "yes" : "no") << "\n";
    }
    res.summary = summary.str();
    return res;
}

CommandResult cmd_verify_renorm(const ExperimentConfig& cfg, const std::vector<double>& eps) {
    const auto& t = cfg.tree;
    const int samples = get_int(t, "renorm.samples", 100);
    const int bsamples = get_int(t, "renorm.bracket_samples", 50);
    const double h = get_double(t, "renorm.bracket_h", 1e-5);
    if (samples < 1 || bsamples < 1 || !(h > 0.0)) {
        throw ConfigError("config field 'renorm.samples': sample counts and bracket_h must be positive");
    }
    for (double e : eps) {
        if (!(std::abs(e) < 0.5)) {
            throw ConfigError("config field 'renorm.eps': |eps| = " + tag(std::abs(e)) +
                              " violates the hypothesis |eps| < 1/2 of the renormalization identity");
        }
    }
    const QuadratureSpec quad = cfg.quad();
    json j = header(cfg, "verify-renorm");
    j["quadrature_nodes"] = quad.n_nodes;
    json rows = json::array();
    std::ostringstream summary;
    double worst = 0.0;
    for (std::size_t i = 0; i < eps.size(); ++i) {
        const std::uint64_t s = cfg.seed + i;
        const RenormCheck rc = check_renorm_identity(eps[i], cfg.Lambda, samples, quad, s);
        const BracketCheck bc = check_bracket_commutation(eps[i], cfg.Lambda, bsamples, h, quad, s);
        rows.push_back({{"eps", eps[i]},
                        {"max_residual", rc.max_residual},
                        {"samples", rc.samples},
                        {"rejected_resampled", rc.rejected},
                        {"bracket_max_abs", bc.max_abs},
                        {"bracket_samples", bc.samples},
                        {"bracket_h", h}});
        worst = std::max(worst, rc.max_residual);
        summary << "eps=" << tag(eps[i]) << ": max residual " << rc.max_residual << ", bracket " << bc.max_abs
                << "\n";
    }
    j["results"] = rows;
    j["max_residual"] = worst;
    CommandResult res;
    const std::string p = out_path(cfg, "renorm_report.json");
    write_atomic(p, json_text(j));
    res.files.push_back(p);
    res.summary = summary.str();
    return res;
}

CommandResult cmd_evolve(const ExperimentConfig& cfg, const std::string& chart_name, const std::string& state,
                         const std::string& T_text) {
    if (chart_name != "secular" && chart_name != "action-angle") {
        throw ConfigError("config field 'evolve.chart': expected secular or action-angle");
    }
    const Chart chart = chart_name == "secular" ? Chart::secular : Chart::action_angle;
    const double turns = get_double(cfg.tree, "evolve.turns", 2.5);
    if (!(turns > 0.0)) throw ConfigError("config field 'evolve.turns': must be positive");
    const Resolved r = resolve(cfg);
    const QuadratureSpec quad = cfg.quad();

    Trajectory traj;
    LibrationSummary lib;
    json extra;
    if (state == "auto") {
        if (chart != Chart::action_angle) {
            throw ConfigError("config field 'evolve.state': 'auto' requires the action-angle chart");
        }
        const TheoremReport rep = check_theorem_main1(r.spec, r.inputs, cfg.constants);
        if (!rep.pass) throw ConfigError("config field 'evolve.state': 'auto' needs a passing theorem report");
        const ActionAngleState s0 = default_initial_state(r.spec, r.inputs);
        double budget = 0.0;
        if (T_text != "auto") {
            budget = parse_doubles("evolve.T", T_text).at(0);
            if (!(budget >= 0.0)) throw ConfigError("config field 'evolve.T': must be non-negative");
        }
        if (T_text != "auto" && budget == 0.0) {
            traj = integrate(r.spec, s0, 0.0, cfg.integrator, quad);
            lib = measure_libration(traj);
        } else {
            const LibrationRun run = run_libration_experiment(r.spec, rep, s0, budget, turns, cfg.integrator, quad);
            traj = run.trajectory;
            lib = run.summary;
            extra["duration"] = run.duration;
            extra["min_radius"] = run.min_radius;
            extra["collision_radius"] = run.collision_radius;
            extra["T_estimate"] = rep.T_estimate;
        }
    } else {
        const auto v = parse_state(state);
        if (T_text == "auto") throw ConfigError("config field 'evolve.T': 'auto' requires state = auto");
        const double T = parse_doubles("evolve.T", T_text).at(0);
        if (!(T >= 0.0)) throw ConfigError("config field 'evolve.T': must be non-negative");
        if (chart == Chart::secular) {
            traj = integrate(r.spec, SecularState{v[0], v[1], v[2], v[3]}, T, cfg.integrator, quad);
        } else {
            traj = integrate(r.spec, ActionAngleState{v[0], v[1], v[2], v[3]}, T, cfg.integrator, quad);
        }
        lib = measure_libration(traj);
    }

    std::ostringstream csv;
    write_trajectory_csv(csv, traj, {seed_line(cfg), "chart," + chart_name});
    const std::string csv_path = out_path(cfg, "trajectory.csv");
    write_atomic(csv_path, csv.str());

    json j = header(cfg, "evolve");
    j["chart"] = chart_name;
    j["samples"] = traj.times.size();
    j["t_end"] = traj.times.empty() ? 0.0 : traj.times.back();
    j["winding"] = lib.winding;
    j["total_variation"] = lib.total_variation;
    j["squeezes"] = lib.squeezes;
    j["Gcal_drift"] = lib.Gcal_drift;
    j["max_energy_drift"] = traj.max_energy_drift;
    j["energy_tol"] = cfg.integrator.energy_tol;
    j["energy_within_tol"] = traj.max_energy_drift <= cfg.integrator.energy_tol;
    j["domain_exit"] = traj.domain_exit;
    j["winding_at_least_2pi"] = lib.winding >= 2.0 * std::numbers::pi;
    j["winding_at_least_3pi"] = lib.winding >= 3.0 * std::numbers::pi;
    j["events"] = traj.events.size();
    j["masses"] = masses_json(r.spec);
    for (auto& [k, v] : extra.items()) j[k] = v;
    const std::string js_path = out_path(cfg, "evolve_summary.json");
    write_atomic(js_path, json_text(j));

    CommandResult res;
    res.files = {csv_path, js_path};
    std::ostringstream s;
    s << "samples " << traj.times.size() << ", winding " << lib.winding << ", squeezes " << lib.squeezes
      << ", energy drift " << traj.max_energy_drift << (traj.domain_exit ? ", domain exit" : "") << "\n";
    res.summary = s.str();
    return res;
}

CommandResult cmd_check_theorem(const ExperimentConfig& cfg, std::optional<double> N) {
    ExperimentConfig c = cfg;
    if (N) {
        if (!(*N > 0.0)) throw ConfigError("config field 'theorem.N': must be positive");
        c.N = *N;
    }
    const Resolved r = resolve(c);
    const TheoremReport rep = check_theorem_main1(r.spec, r.inputs, c.constants);
    json j = header(c, "check-theorem");
    j["report"] = report_json(rep);
    j["masses"] = masses_json(r.spec);
    j["construction"] = c.domain.construct_remark ? "remark" : "none";
    const std::string p = out_path(c, "theorem_report.json");
    write_atomic(p, json_text(j));
    CommandResult res;
    res.files.push_back(p);
    res.summary = std::string("theorem hypotheses ") + (rep.pass ? "PASS" : "FAIL") + ", eta " +
                  std::to_string(rep.eta) + "\n";
    return res;
}

CommandResult cmd_normalform(const ExperimentConfig& cfg, std::optional<int> N_flag) {
    const auto& t = cfg.tree;
    const int N = N_flag ? *N_flag : get_int(t, "normalform.N", 3);
    if (N < 0) throw ConfigError("config field 'normalform.N': must be non-negative");
    DeskModelSpec spec = default_desk_model();
    spec.ham = cfg.spec();
    spec.quad = cfg.quad();
    spec.Gcal_lo = get_double(t, "normalform.Gcal_lo", cfg.Lambda - 0.25);
    spec.Gcal_hi = get_double(t, "normalform.Gcal_hi", cfg.Lambda);
    spec.y_lo = get_double(t, "normalform.y_lo", spec.y_lo);
    spec.y_hi = get_double(t, "normalform.y_hi", spec.y_hi);
    spec.x_lo = get_double(t, "normalform.x_lo", spec.x_lo);
    spec.x_hi = get_double(t, "normalform.x_hi", spec.x_hi);
    spec.nodes = get_int(t, "normalform.nodes", spec.nodes);
    spec.shape.fourier_cutoff = get_int(t, "normalform.fourier_cutoff", spec.shape.fourier_cutoff);
    if (spec.nodes < 4) throw ConfigError("config field 'normalform.nodes': must be at least 4");
    if (spec.shape.fourier_cutoff < 1) throw ConfigError("config field 'normalform.fourier_cutoff': must be positive");
    if (!(spec.Gcal_lo < spec.Gcal_hi) || !(spec.Gcal_hi <= cfg.Lambda) || !(spec.Gcal_lo > 0.0)) {
        throw ConfigError("config field 'normalform.Gcal_lo': need 0 < Gcal_lo < Gcal_hi <= Lambda");
    }
    if (!(0.0 < spec.y_lo && spec.y_lo < spec.y_hi)) throw ConfigError("config field 'normalform.y_lo': need 0 < y_lo < y_hi");
    if (!(0.0 < spec.x_lo && spec.x_lo < spec.x_hi && spec.x_hi < 2.0 * std::numbers::pi)) {
        throw ConfigError("config field 'normalform.x_lo': need 0 < x_lo < x_hi < 2 pi");
    }
    NormalFormOptions opt;
    opt.weights.rho = get_double(t, "normalform.rho", spec.weights.rho);
    opt.weights.s = get_double(t, "normalform.s", spec.weights.s);
    opt.weights.delta = get_double(t, "normalform.delta", spec.weights.delta);
    opt.weights.r = get_double(t, "normalform.r", spec.weights.r);
    opt.weights.xi = get_double(t, "normalform.xi", spec.weights.xi);
    try {
        opt.weights.validate();
    } catch (const Error&) {
        throw ConfigError("config field 'normalform.rho': norm weights must be positive");
    }
    opt.nqp.x0 = get_double(t, "normalform.x0", 0.5 * (spec.x_lo + spec.x_hi));
    opt.lie.c_bar = get_double(t, "normalform.c_bar", 1.0);
    opt.lie.max_order = get_int(t, "normalform.max_order", opt.lie.max_order);

    const DeskModel model = build_desk_model(spec);
    const NormalFormResult nf = normal_form_steps(model.f, model.freq, N, opt);

    json j = header(cfg, "normalform");
    j["N"] = N;
    json rows = json::array();
    for (const auto& s : nf.steps) {
        rows.push_back({{"step", s.step},
                        {"weights", {s.weights.rho, s.weights.s, s.weights.delta, s.weights.r, s.weights.xi}},
                        {"f_norm", s.f_norm},
                        {"f_osc_norm", s.f_osc_norm},
                        {"f_avg_norm", s.f_avg_norm},
                        {"phi_norm", s.phi_norm},
                        {"contraction", s.contraction},
                        {"homological_residual", s.homological_residual},
                        {"lie_terms", s.lie_terms},
                        {"tail_bound", s.tail_bound}});
    }
    j["steps"] = rows;
    j["weights_order"] = {"rho", "s", "delta", "r", "xi"};
    j["masses"] = masses_json(spec.ham);
    const std::string p = out_path(cfg, "normalform_norms.json");
    write_atomic(p, json_text(j));
    const std::string pg = out_path(cfg, "g_star.json");
    write_atomic(pg, tf_to_json(nf.g_star) + "\n");
    const std::string pf = out_path(cfg, "f_star.json");
    write_atomic(pf, tf_to_json(nf.f_star) + "\n");

    CommandResult res;
    res.files = {p, pg, pf};
    std::ostringstream s;
    for (const auto& st : nf.steps) s << "step " << st.step << ": ||f|| " << st.f_norm << "\n";
    res.summary = s.str();
    return res;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"perilib: secular perihelion dynamics toolkit"};
    app.require_subcommand(1);
    std::string config_path;
    std::vector<std::string> overrides;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
    std::string eps_text, chart, state, T_text;
    std::optional<double> N_theorem;
    std::optional<int> N_nf;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "INI configuration file")->required();
        sub->add_option("--seed", seed, "64-bit seed recorded in every output");
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--set", overrides, "override: section.key=value");
    };
    auto* portrait = app.add_subcommand("portrait", "phase portraits and equilibria of the rescaled Hamiltonian");
    common(portrait);
    portrait->add_option("--eps", eps_text, "comma-separated eps values");
    auto* renorm = app.add_subcommand("verify-renorm", "check the renormalization identity");
    common(renorm);
    renorm->add_option("--eps", eps_text, "comma-separated eps values");
    auto* evolve = app.add_subcommand("evolve", "integrate a trajectory");
    common(evolve);
    evolve->add_option("--chart", chart, "secular | action-angle");
    evolve->add_option("--state", state, "four comma-separated numbers, or auto");
    evolve->add_option("--T", T_text, "duration, or auto");
    auto* theorem = app.add_subcommand("check-theorem", "evaluate the libration-theorem hypotheses");
    common(theorem);
    theorem->add_option("--N", N_theorem, "number of normal-form steps");
    auto* nf = app.add_subcommand("normalform", "iterate the normal form on the desk-scale model");
    common(nf);
    nf->add_option("--N", N_nf, "number of steps");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kConfig;
    }

    try {
        ExperimentConfig cfg = load_config(config_path, overrides);
        if (seed) cfg.seed = *seed;
        if (out_dir) cfg.out_dir = *out_dir;
        CommandResult res;
        const auto& t = cfg.tree;
        if (*portrait) {
            const std::string e = eps_text.empty() ? get_string(t, "portrait.eps", "0.3,0.7,1.5") : eps_text;
            res = cmd_portrait(cfg, parse_doubles("portrait.eps", e));
        } else if (*renorm) {
            const std::string e =
                eps_text.empty() ? get_string(t, "renorm.eps", "-0.4,-0.25,-0.1,0,0.1,0.25,0.4") : eps_text;
            res = cmd_verify_renorm(cfg, parse_doubles("renorm.eps", e));
        } else if (*evolve) {
            res = cmd_evolve(cfg, chart.empty() ? get_string(t, "evolve.chart", "secular") : chart,
                             state.empty() ? get_string(t, "evolve.state", "auto") : state,
                             T_text.empty() ? get_string(t, "evolve.T", "auto") : T_text);
        } else if (*theorem) {
            res = cmd_check_theorem(cfg, N_theorem);
        } else {
            res = cmd_normalform(cfg, N_nf);
        }
        out << res.summary;
        for (const auto& f : res.files) out << "wrote " << f << "\n";
        return kOk;
    } catch (const ConfigError& e) {
        err << "perilib: configuration error: " << e.what() << "\n";
        return kConfig;
    } catch (const IoError& e) {
        err << "perilib: I/O error: " << e.what() << "\n";
        return kIo;
    } catch (const ContractionError& e) {
        err << "perilib: contraction lost at step " << e.step() << " (measured factor " << e.factor()
            << "): " << e.what() << "\n";
        return kNumerical;
    } catch (const DomainError& e) {
        err << "perilib: invalid parameters: " << e.what() << "\n";
        return kConfig;
    } catch (const Error& e) {
        err << "perilib: numerical guard: " << e.what() << "\n";
        return kNumerical;
    } catch (const std::exception& e) {
        err << "perilib: error: " << e.what() << "\n";
        return kNumerical;
    }
}

}  // namespace perilib::cli
