#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/property_tree/ptree.hpp>

#include "perilib/hamiltonians.hpp"
#include "perilib/integrator.hpp"
#include "perilib/theorem.hpp"

namespace perilib::cli {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct DomainConfig {
    double eps0 = 0.5;
    double delta = 0.05;
    double s0 = 1.0;
    double alpha_minus = 1.0;
    double alpha_plus = 8.0;
    bool construct_remark = false;
    double margin = 4.0;
};

struct ExperimentConfig {
    double mu = 1.0;
    double kappa = 0.1;
    Frame frame = Frame::m0centric;
    HamiltonianIndex index = HamiltonianIndex::H2;
    double Lambda = 1.0;
    double m0 = 1.0;
    DomainConfig domain;
    SurrogateConstants constants;
    double N = 1.0;
    int c0_grid = 64;
    int quad_nodes = 256;
    StepControl integrator;
    std::string out_dir = ".";
    std::uint64_t seed = 0;
    boost::property_tree::ptree tree;  // full file, for command sections

    HamiltonianSpec spec() const;
    QuadratureSpec quad() const { return {quad_nodes}; }
};

// Reads an INI file and applies "section.key=value" overrides.
ExperimentConfig load_config(const std::string& path, const std::vector<std::string>& overrides = {});
ExperimentConfig parse_config(const boost::property_tree::ptree& tree);

// Typed access with the failing field named in errors.
double get_double(const boost::property_tree::ptree& t, const std::string& key, double fallback);
int get_int(const boost::property_tree::ptree& t, const std::string& key, int fallback);
std::string get_string(const boost::property_tree::ptree& t, const std::string& key, const std::string& fallback);
std::vector<double> get_doubles(const boost::property_tree::ptree& t, const std::string& key,
                                const std::vector<double>& fallback);
std::vector<double> parse_doubles(const std::string& field, const std::string& text);

}  // namespace perilib::cli
