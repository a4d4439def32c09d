#include "config.hpp"

#include <cmath>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>

#include "perilib/error.hpp"

namespace perilib::cli {

namespace {

using boost::property_tree::ptree;

std::string trim(std::string s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    const auto e = s.find_last_not_of(" \t\r\n");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

double to_double(const std::string& field, const std::string& text) {
    try {
        std::size_t used = 0;
        const double v = std::stod(trim(text), &used);
        if (used != trim(text).size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config field '" + field + "': expected a number, got '" + text + "'");
    }
}

void require(bool ok, const std::string& field, const std::string& what) {
    if (!ok) throw ConfigError("config field '" + field + "': " + what);
}

}  // namespace

double get_double(const ptree& t, const std::string& key, double fallback) {
    const auto v = t.get_optional<std::string>(key);
    if (!v) return fallback;
    const double d = to_double(key, *v);
    require(std::isfinite(d), key, "must be finite");
    return d;
}

int get_int(const ptree& t, const std::string& key, int fallback) {
    const double d = get_double(t, key, fallback);
    require(d == std::floor(d) && std::abs(d) < 2e9, key, "expected an integer");
    return static_cast<int>(d);
}

std::string get_string(const ptree& t, const std::string& key, const std::string& fallback) {
    const auto v = t.get_optional<std::string>(key);
    return v ? trim(*v) : fallback;
}

std::vector<double> parse_doubles(const std::string& field, const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (trim(item).empty()) continue;
        out.push_back(to_double(field, item));
    }
    require(!out.empty(), field, "expected a comma-separated list of numbers");
    return out;
}

std::vector<double> get_doubles(const ptree& t, const std::string& key, const std::vector<double>& fallback) {
    const auto v = t.get_optional<std::string>(key);
    return v ? parse_doubles(key, *v) : fallback;
}

HamiltonianSpec ExperimentConfig::spec() const {
    HamiltonianSpec s;
    s.index = index;
    s.m0 = m0;
    s.Lambda = Lambda;
    s.masses = derive_mass_params(mu, kappa, frame);
    return s;
}

ExperimentConfig parse_config(const ptree& t) {
    ExperimentConfig c;
    c.tree = t;
    c.mu = get_double(t, "masses.mu", c.mu);
    require(c.mu > 0.0, "masses.mu", "must be positive");
    c.kappa = get_double(t, "masses.kappa", c.kappa);
    require(c.kappa > 0.0, "masses.kappa", "must be positive");
    const std::string frame = get_string(t, "masses.frame", "m0centric");
    try {
        c.frame = parse_frame(frame);
    } catch (const Error&) {
        throw ConfigError("config field 'masses.frame': expected jacobi or m0centric, got '" + frame + "'");
    }
    const std::string idx = get_string(t, "hamiltonian.index", "H2");
    require(idx == "H1" || idx == "H2", "hamiltonian.index", "expected H1 or H2, got '" + idx + "'");
    c.index = idx == "H1" ? HamiltonianIndex::H1 : HamiltonianIndex::H2;
    c.Lambda = get_double(t, "hamiltonian.Lambda", c.Lambda);
    require(c.Lambda > 0.0, "hamiltonian.Lambda", "must be positive");
    c.m0 = get_double(t, "hamiltonian.m0", c.m0);
    require(c.m0 > 0.0, "hamiltonian.m0", "must be positive");

    DomainConfig& d = c.domain;
    const std::string construct = get_string(t, "domain.construct", "none");
    require(construct == "none" || construct == "remark", "domain.construct", "expected none or remark");
    d.construct_remark = construct == "remark";
    d.eps0 = get_double(t, "domain.eps0", d.eps0);
    require(d.eps0 > 0.0, "domain.eps0", "must be positive");
    d.delta = get_double(t, "domain.delta", d.delta);
    require(d.delta > 0.0, "domain.delta", "must be positive");
    d.margin = get_double(t, "domain.margin", d.margin);
    require(d.margin > 1.0, "domain.margin", "must exceed 1");
    d.s0 = get_double(t, "domain.s0", d.s0);
    require(d.s0 > 0.0, "domain.s0", "must be positive");
    d.alpha_minus = get_double(t, "domain.alpha_minus", d.alpha_minus);
    require(d.alpha_minus > 0.0, "domain.alpha_minus", "must be positive");
    d.alpha_plus = get_double(t, "domain.alpha_plus", d.alpha_plus);
    require(d.alpha_plus > 0.0, "domain.alpha_plus", "must be positive");
    if (!d.construct_remark) {
        require(d.alpha_minus < d.alpha_plus / 4.0, "domain.alpha_minus", "must be below alpha_plus/4");
    }

    c.constants.C_upper = get_double(t, "theorem.C_upper", c.constants.C_upper);
    c.constants.C_lower = get_double(t, "theorem.C_lower", c.constants.C_lower);
    c.constants.c_star = get_double(t, "theorem.c_star", c.constants.c_star);
    c.constants.c_circ = get_double(t, "theorem.c_circ", c.constants.c_circ);
    require(c.constants.C_upper > c.constants.C_lower && c.constants.C_lower > 1.0, "theorem.C_upper",
            "surrogates must satisfy C_upper > C_lower > 1");
    c.N = get_double(t, "theorem.N", c.N);
    require(c.N > 0.0, "theorem.N", "must be positive");
    c.c0_grid = get_int(t, "theorem.c0_grid", c.c0_grid);
    require(c.c0_grid >= 16, "theorem.c0_grid", "must be at least 16");

    c.quad_nodes = get_int(t, "quadrature.nodes", c.quad_nodes);
    require(c.quad_nodes >= 32 && c.quad_nodes % 2 == 0, "quadrature.nodes", "must be even and at least 32");

    c.integrator.rtol = get_double(t, "integrator.rtol", c.integrator.rtol);
    require(c.integrator.rtol > 0.0, "integrator.rtol", "must be positive");
    c.integrator.atol = get_double(t, "integrator.atol", c.integrator.atol);
    require(c.integrator.atol > 0.0, "integrator.atol", "must be positive");
    c.integrator.energy_tol = get_double(t, "integrator.energy_tol", c.integrator.energy_tol);
    require(c.integrator.energy_tol > 0.0, "integrator.energy_tol", "must be positive");
    c.integrator.max_steps = get_int(t, "integrator.max_steps", static_cast<int>(c.integrator.max_steps));
    require(c.integrator.max_steps > 0, "integrator.max_steps", "must be positive");

    c.out_dir = get_string(t, "output.dir", c.out_dir);
    const double seed = get_double(t, "run.seed", 0.0);
    require(seed >= 0.0 && seed == std::floor(seed), "run.seed", "must be a non-negative integer");
    c.seed = static_cast<std::uint64_t>(seed);
    return c;
}

ExperimentConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
    ptree t;
    try {
        boost::property_tree::ini_parser::read_ini(path, t);
    } catch (const boost::property_tree::ini_parser_error& e) {
        if (e.line() == 0) throw IoError("cannot read config '" + path + "': " + e.message());
        throw ConfigError("malformed config '" + path + "' line " + std::to_string(e.line()) + ": " + e.message());
    }
    for (const auto& o : overrides) {
        const auto eq = o.find('=');
        if (eq == std::string::npos || o.find('.') == std::string::npos || o.find('.') > eq) {
            throw ConfigError("override '" + o + "' must look like section.key=value");
        }
        t.put(trim(o.substr(0, eq)), trim(o.substr(eq + 1)));
    }
    return parse_config(t);
}

}  // namespace perilib::cli
