#include "colecole/config.hpp"
#include "colecole/errors.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace colecole {

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

ConfigMap parse_key_value(std::istream& in, const std::string& path) {
    ConfigMap out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw config_error(path + ":" + std::to_string(lineno) +
                               ": expected 'key = value'");
        const std::string key = trim(t.substr(0, eq));
        const std::string val = trim(t.substr(eq + 1));
        if (key.empty()) throw config_error(path + ": empty key");
        if (out.count(key)) throw config_error(path + ": duplicate key '" + key + "'");
        out[key] = val;
    }
    return out;
}

ConfigMap parse_json(std::istream& in, const std::string& path) {
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw config_error(path + ": bad JSON: " + e.what());
    }
    if (!j.is_object()) throw config_error(path + ": expected a JSON object");
    ConfigMap out;
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (it.key() == "derived" || it.key() == "outputs") continue; // echo-only sections
        const auto& v = it.value();
        if (v.is_string()) out[it.key()] = v.get<std::string>();
        else if (v.is_boolean()) out[it.key()] = v.get<bool>() ? "true" : "false";
        else if (v.is_number_integer()) out[it.key()] = std::to_string(v.get<long long>());
        else if (v.is_number()) out[it.key()] = format_number(v.get<double>());
        else if (v.is_array()) {
            std::string joined;
            for (const auto& el : v) {
                if (!joined.empty()) joined += ",";
                if (el.is_number_integer()) joined += std::to_string(el.get<long long>());
                else if (el.is_number()) joined += format_number(el.get<double>());
                else throw config_error(path + ": non-numeric list for key '" + it.key() + "'");
            }
            out[it.key()] = joined;
        }
        else throw config_error(path + ": unsupported value type for key '" + it.key() + "'");
    }
    return out;
}

// Tracks which keys were consumed; leftovers are a hard error.
class ConfigReader {
public:
    explicit ConfigReader(const ConfigMap& cfg) : cfg_(cfg) {}

    bool has(const std::string& key) {
        used_.insert(key);
        return cfg_.count(key) > 0;
    }
    std::string str(const std::string& key, const std::string& dflt) {
        used_.insert(key);
        auto it = cfg_.find(key);
        return it == cfg_.end() ? dflt : it->second;
    }
    double num(const std::string& key, double dflt) {
        used_.insert(key);
        auto it = cfg_.find(key);
        if (it == cfg_.end()) return dflt;
        return parse_double(key, it->second);
    }
    int integer(const std::string& key, int dflt) {
        used_.insert(key);
        auto it = cfg_.find(key);
        if (it == cfg_.end()) return dflt;
        return parse_int(key, it->second);
    }
    bool flag(const std::string& key, bool dflt) {
        used_.insert(key);
        auto it = cfg_.find(key);
        if (it == cfg_.end()) return dflt;
        if (it->second == "true" || it->second == "1") return true;
        if (it->second == "false" || it->second == "0") return false;
        throw config_error("key '" + key + "': expected true/false");
    }
    std::vector<int> int_list(const std::string& key, std::vector<int> dflt) {
        used_.insert(key);
        auto it = cfg_.find(key);
        if (it == cfg_.end()) return dflt;
        std::vector<int> out;
        std::stringstream ss(it->second);
        std::string item;
        while (std::getline(ss, item, ',')) out.push_back(parse_int(key, trim(item)));
        if (out.empty()) throw config_error("key '" + key + "': empty list");
        return out;
    }
    std::vector<double> num_list(const std::string& key, std::vector<double> dflt) {
        used_.insert(key);
        auto it = cfg_.find(key);
        if (it == cfg_.end()) return dflt;
        std::vector<double> out;
        std::stringstream ss(it->second);
        std::string item;
        while (std::getline(ss, item, ',')) out.push_back(parse_double(key, trim(item)));
        if (out.empty()) throw config_error("key '" + key + "': empty list");
        return out;
    }

    void finish(const std::string& command) const {
        std::string unknown;
        for (const auto& [key, val] : cfg_) {
            if (key == "command") {
                if (val != command)
                    throw config_error("config was written by subcommand '" + val +
                                       "', not '" + command + "'");
                continue;
            }
            if (!used_.count(key)) unknown += (unknown.empty() ? "" : ", ") + key;
        }
        if (!unknown.empty())
            throw config_error("unknown configuration key(s): " + unknown);
    }

private:
    static double parse_double(const std::string& key, const std::string& s) {
        try {
            std::size_t pos = 0;
            const double v = std::stod(s, &pos);
            if (pos != s.size()) throw std::invalid_argument("trailing");
            return v;
        } catch (const std::exception&) {
            throw config_error("key '" + key + "': not a number: '" + s + "'");
        }
    }
    static int parse_int(const std::string& key, const std::string& s) {
        try {
            std::size_t pos = 0;
            const int v = std::stoi(s, &pos);
            if (pos != s.size()) throw std::invalid_argument("trailing");
            return v;
        } catch (const std::exception&) {
            throw config_error("key '" + key + "': not an integer: '" + s + "'");
        }
    }

    const ConfigMap& cfg_;
    std::set<std::string> used_;
};

QuadOptions read_quad(ConfigReader& r) {
    QuadOptions q;
    q.n = r.integer("quad_n", q.n);
    q.map_order = r.integer("map_order", q.map_order);
    q.far_switch = r.num("far_switch", q.far_switch);
    return q;
}

} // namespace

ConfigMap parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file: " + path);
    if (path.size() > 5 && path.substr(path.size() - 5) == ".json")
        return parse_json(in, path);
    return parse_key_value(in, path);
}

SimulateSpec make_simulate_spec(const ConfigMap& cfg) {
    ConfigReader r(cfg);
    SimulateSpec s;
    s.dim = r.integer("dim", 1);
    s.x_lo = r.num("x_min", 0.0);
    s.x_hi = r.num("x_max", 2.0);
    s.y_lo = r.num("y_min", 0.0);
    s.y_hi = r.num("y_max", 2.0);
    s.spatial_n = r.integer("spatial_n", s.dim == 2 ? 24 : 200);
    s.T = r.num("T", 1.5);
    s.intervals = r.integer("intervals", 5);
    s.colloc = r.integer("colloc", 20);
    s.tau = r.num("tau", 4.0);
    s.quad = read_quad(r);
    s.alpha = r.num("alpha", 0.6);
    s.lambda = r.num("lambda", 1.0);

    const bool has_direct = r.has("c") || r.has("d");
    const bool has_physical = r.has("eps0") || r.has("eps_inf") || r.has("eps_s") ||
                              r.has("tau_relax") || r.has("mu0");
    if (has_direct && has_physical)
        throw config_error("give either direct coefficients (c, d) or physical "
                           "constants (eps*, tau_relax, mu0), not both");
    if (has_physical) {
        PhysicalConfig p;
        p.eps0 = r.num("eps0", p.eps0);
        p.eps_inf = r.num("eps_inf", p.eps_inf);
        p.eps_s = r.num("eps_s", p.eps_s);
        p.tau_relax = r.num("tau_relax", p.tau_relax);
        p.mu0 = r.num("mu0", p.mu0);
        p.alpha = s.alpha;
        s.physical = p;
    } else {
        s.direct = std::make_pair(r.num("c", 1.0), r.num("d", 74.0 / 75.0));
    }

    const std::string ic = r.str("ic", "square_impulse");
    if (ic == "square_impulse") s.ic.kind = InitialCondition::Kind::square_impulse;
    else if (ic == "sine_product") s.ic.kind = InitialCondition::Kind::sine_product;
    else if (ic == "custom_table") s.ic.kind = InitialCondition::Kind::custom_table;
    else throw config_error("unknown ic profile: " + ic);
    s.ic.center = r.num("ic_center", s.ic.center);
    s.ic.width = r.num("ic_width", s.ic.width);
    s.ic.height = r.num("ic_height", s.ic.height);
    s.ic.kx = r.num("ic_kx", s.ic.kx);
    s.ic.ky = r.num("ic_ky", s.ic.ky);
    s.ic.file = r.str("ic_file", "");

    s.snapshot_stride = r.integer("snapshot_stride", 1);
    s.dense_output = r.flag("dense_output", false);
    s.dense_per_interval = r.integer("dense_per_interval", 8);
    s.output_points = r.integer("output_points", 0);
    s.recover_e = r.flag("recover_e", s.dim == 1);
    s.threads = r.integer("threads", 0);
    s.out_dir = r.str("out", "out");
    r.finish("simulate");
    s.validate();
    return s;
}

IdeSpec make_ide_spec(const ConfigMap& cfg) {
    ConfigReader r(cfg);
    IdeSpec s;
    s.c = r.num("c", s.c);
    s.d = r.num("d", s.d);
    s.lambda = r.num("lambda", s.lambda);
    s.alpha = r.num("alpha", s.alpha);
    s.u0 = r.num("u0", s.u0);
    s.u1 = r.num("u1", s.u1);
    s.T = r.num("T", s.T);
    s.intervals = r.integer("intervals", s.intervals);
    s.colloc = r.integer("colloc", s.colloc);
    s.tau = r.num("tau", s.tau);
    s.quad = read_quad(r);
    s.dense_output = r.flag("dense_output", s.dense_output);
    s.dense_per_interval = r.integer("dense_per_interval", s.dense_per_interval);
    s.out_dir = r.str("out", "out");
    r.finish("ide");
    s.validate();
    return s;
}

ConvergenceSpec make_convergence_spec(const ConfigMap& cfg) {
    ConfigReader r(cfg);
    ConvergenceSpec s;
    s.alpha = r.num("alpha", s.alpha);
    s.c = r.num("c", s.c);
    s.d = r.num("d", s.d);
    s.lambda = r.num("lambda", s.lambda);
    s.quad.n = r.integer("quad_n", s.quad.n);
    s.quad.map_order = r.integer("map_order", s.quad.map_order);
    s.n_sweep = r.int_list("n_sweep", s.n_sweep);
    s.k_sweep = r.int_list("k_sweep", s.k_sweep);
    s.frozen_colloc = r.integer("frozen_colloc", s.frozen_colloc);
    s.taus = r.num_list("taus", s.taus);
    s.out_dir = r.str("out", "out");
    r.finish("convergence");
    s.validate();
    return s;
}

QuadtestSpec make_quadtest_spec(const ConfigMap& cfg) {
    ConfigReader r(cfg);
    QuadtestSpec s;
    s.n_sweep = r.int_list("n_sweep", s.n_sweep);
    s.out_dir = r.str("out", "out");
    r.finish("quadtest");
    return s;
}

namespace {

nlohmann::json quad_json(const QuadOptions& q) {
    return {{"quad_n", q.n}, {"map_order", q.map_order}, {"far_switch", q.far_switch}};
}

void merge(nlohmann::json& dst, const nlohmann::json& src) {
    for (auto it = src.begin(); it != src.end(); ++it) dst[it.key()] = it.value();
}

} // namespace

std::string simulate_run_json(const SimulateSpec& spec, const SimulationResult& result) {
    nlohmann::json j;
    j["command"] = "simulate";
    j["dim"] = spec.dim;
    j["x_min"] = spec.x_lo;
    j["x_max"] = spec.x_hi;
    if (spec.dim == 2) {
        j["y_min"] = spec.y_lo;
        j["y_max"] = spec.y_hi;
    }
    j["spatial_n"] = spec.spatial_n;
    j["T"] = spec.T;
    j["intervals"] = spec.intervals;
    j["colloc"] = spec.colloc;
    j["tau"] = spec.tau;
    merge(j, quad_json(spec.quad));
    j["alpha"] = spec.alpha;
    j["lambda"] = spec.lambda;
    if (spec.physical) {
        j["eps0"] = spec.physical->eps0;
        j["eps_inf"] = spec.physical->eps_inf;
        j["eps_s"] = spec.physical->eps_s;
        j["tau_relax"] = spec.physical->tau_relax;
        j["mu0"] = spec.physical->mu0;
    } else {
        j["c"] = spec.direct->first;
        j["d"] = spec.direct->second;
    }
    switch (spec.ic.kind) {
        case InitialCondition::Kind::square_impulse:
            j["ic"] = "square_impulse";
            j["ic_center"] = spec.ic.center;
            j["ic_width"] = spec.ic.width;
            j["ic_height"] = spec.ic.height;
            break;
        case InitialCondition::Kind::sine_product:
            j["ic"] = "sine_product";
            j["ic_kx"] = spec.ic.kx;
            if (spec.dim == 2) j["ic_ky"] = spec.ic.ky;
            break;
        case InitialCondition::Kind::custom_table:
            j["ic"] = "custom_table";
            j["ic_file"] = spec.ic.file;
            break;
    }
    j["snapshot_stride"] = spec.snapshot_stride;
    j["dense_output"] = spec.dense_output;
    j["dense_per_interval"] = spec.dense_per_interval;
    j["output_points"] = spec.output_points;
    j["recover_e"] = spec.recover_e;
    j["threads"] = spec.threads;
    j["out"] = spec.out_dir;
    j["derived"] = {{"a", result.a},
                    {"b", result.b},
                    {"lambda", result.lambda},
                    {"a_minus_b_over_lambda", result.a - result.b / result.lambda},
                    {"max_condition_estimate", result.max_condition_estimate}};
    j["outputs"] = result.files_written;
    return j.dump(2) + "\n";
}

std::string ide_run_json(const IdeSpec& spec, const IdeResult& result) {
    nlohmann::json j;
    j["command"] = "ide";
    j["c"] = spec.c;
    j["d"] = spec.d;
    j["lambda"] = spec.lambda;
    j["alpha"] = spec.alpha;
    j["u0"] = spec.u0;
    j["u1"] = spec.u1;
    j["T"] = spec.T;
    j["intervals"] = spec.intervals;
    j["colloc"] = spec.colloc;
    j["tau"] = spec.tau;
    merge(j, quad_json(spec.quad));
    j["dense_output"] = spec.dense_output;
    j["dense_per_interval"] = spec.dense_per_interval;
    j["out"] = spec.out_dir;
    j["derived"] = {{"c_minus_d_over_lambda", spec.c - spec.d / spec.lambda},
                    {"condition_estimate", result.condition_estimate}};
    j["outputs"] = result.files_written;
    return j.dump(2) + "\n";
}

std::string convergence_run_json(const ConvergenceSpec& spec) {
    nlohmann::json j;
    j["command"] = "convergence";
    j["alpha"] = spec.alpha;
    j["c"] = spec.c;
    j["d"] = spec.d;
    j["lambda"] = spec.lambda;
    j["quad_n"] = spec.quad.n;
    j["map_order"] = spec.quad.map_order;
    j["n_sweep"] = spec.n_sweep;
    j["k_sweep"] = spec.k_sweep;
    j["frozen_colloc"] = spec.frozen_colloc;
    j["taus"] = spec.taus;
    j["out"] = spec.out_dir;
    return j.dump(2) + "\n";
}

std::string quadtest_run_json(const QuadtestSpec& spec) {
    nlohmann::json j;
    j["command"] = "quadtest";
    j["n_sweep"] = spec.n_sweep;
    j["out"] = spec.out_dir;
    return j.dump(2) + "\n";
}

} // namespace colecole
