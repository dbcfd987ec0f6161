#pragma once

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"

namespace adiabatic {

// Every key a run configuration may carry, as "section.key".
inline const std::set<std::string>& known_config_keys() {
    static const std::set<std::string> keys = {
        "run.seed", "run.workers",
        "anneal.A", "anneal.delta", "anneal.B", "anneal.E_C", "anneal.F", "anneal.flux_override",
        "circuit.n_max", "circuit.gauge",
        "schedule.s_star", "schedule.intervals", "schedule.mode", "schedule.exact_gap",
        "path.kind", "path.scale", "path.d", "path.strength", "path.dim",
        "spectrum.levels", "spectrum.intervals",
        "bounds.A_list", "bounds.s_star_list", "bounds.convergence", "bounds.max_refinements",
        "evolve.tf_multiples", "evolve.tf_list", "evolve.include_zero", "evolve.tolerance", "evolve.initial_steps",
        "evolve.max_doublings",
        "effective.observable",
        "oracle.A_list", "oracle.delta_list", "oracle.K_list", "oracle.m_max", "oracle.well_compare",
        "oracle.well_points", "oracle.well_tf", "oracle.well_s_end",
        "sweep.A_list", "sweep.s_star_list", "sweep.tf_multiple",
        "verify.instances", "verify.dims", "verify.fixture",
    };
    return keys;
}

// Flat sectioned key = value configuration. Reads record the value that applied, default or not,
// so the manifest can echo the resolved run.
class Config {
public:
    Config() = default;

    static Config parse(const std::string& text) {
        Config c;
        std::istringstream is(text);
        try {
            boost::property_tree::ini_parser::read_ini(is, c.tree_);
        } catch (const boost::property_tree::ini_parser_error& e) {
            throw ConfigError(std::string("malformed config: ") + e.message() + " at line " + std::to_string(e.line()));
        }
        c.check_keys();
        return c;
    }

    static Config load(const std::string& path) {
        std::ifstream f(path);
        if (!f) throw ConfigError("cannot read config file " + path);
        std::stringstream ss;
        ss << f.rdbuf();
        return parse(ss.str());
    }

    bool has(const std::string& key) const { return bool(tree_.get_optional<std::string>(key)); }

    void set(const std::string& key, const std::string& value) {
        if (!known_config_keys().count(key)) throw ConfigError("unknown config key '" + key + "'");
        tree_.put(key, value);
    }

    double get_double(const std::string& key, double def) {
        auto raw = raw_value(key);
        double v = def;
        if (raw) v = parse_double(key, *raw);
        record(key, format(v));
        return v;
    }

    long get_int(const std::string& key, long def) {
        auto raw = raw_value(key);
        long v = def;
        if (raw) {
            std::size_t pos = 0;
            try {
                v = std::stol(*raw, &pos);
            } catch (const std::exception&) {
                pos = std::string::npos;
            }
            if (pos != raw->size()) throw ConfigError("malformed integer for key '" + key + "': " + *raw);
        }
        record(key, std::to_string(v));
        return v;
    }

    bool get_bool(const std::string& key, bool def) {
        auto raw = raw_value(key);
        bool v = def;
        if (raw) {
            if (*raw == "true" || *raw == "1" || *raw == "yes")
                v = true;
            else if (*raw == "false" || *raw == "0" || *raw == "no")
                v = false;
            else
                throw ConfigError("malformed boolean for key '" + key + "': " + *raw);
        }
        record(key, v ? "true" : "false");
        return v;
    }

    std::string get_string(const std::string& key, const std::string& def, const std::set<std::string>& allowed = {}) {
        auto raw = raw_value(key);
        std::string v = raw ? *raw : def;
        if (!allowed.empty() && !allowed.count(v)) {
            std::string opts;
            for (const auto& a : allowed) opts += (opts.empty() ? "" : "|") + a;
            throw ConfigError("invalid value for key '" + key + "': " + v + " (expected " + opts + ")");
        }
        record(key, v);
        return v;
    }

    // comma-separated reals
    std::vector<double> get_list(const std::string& key, const std::vector<double>& def) {
        auto raw = raw_value(key);
        std::vector<double> v = def;
        if (raw) {
            v.clear();
            std::stringstream ss(*raw);
            std::string item;
            while (std::getline(ss, item, ',')) v.push_back(parse_double(key, trim(item)));
            if (v.empty()) throw ConfigError("empty list for key '" + key + "'");
        }
        std::string echo;
        for (double x : v) echo += (echo.empty() ? "" : ",") + format(x);
        record(key, echo);
        return v;
    }

    // "section.key = value" for every value read, sorted by key.
    std::string manifest() const {
        std::ostringstream os;
        std::string section;
        for (const auto& [k, v] : resolved_) {
            const std::string sec = k.substr(0, k.find('.'));
            if (sec != section) {
                os << (section.empty() ? "" : "\n") << '[' << sec << "]\n";
                section = sec;
            }
            os << k.substr(k.find('.') + 1) << " = " << v << '\n';
        }
        return os.str();
    }

    const std::map<std::string, std::string>& resolved() const { return resolved_; }

    static std::string format(double v) {
        std::ostringstream os;
        os.precision(17);
        os << v;
        return os.str();
    }

private:
    static std::string trim(const std::string& s) {
        const auto a = s.find_first_not_of(" \t"), b = s.find_last_not_of(" \t");
        return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    }

    static double parse_double(const std::string& key, const std::string& raw) {
        std::size_t pos = 0;
        double v = 0;
        try {
            v = std::stod(raw, &pos);
        } catch (const std::exception&) {
            pos = std::string::npos;
        }
        if (pos != raw.size() || !std::isfinite(v)) throw ConfigError("malformed number for key '" + key + "': " + raw);
        return v;
    }

    std::optional<std::string> raw_value(const std::string& key) const {
        if (!known_config_keys().count(key)) throw ConfigError("unknown config key '" + key + "'");
        auto v = tree_.get_optional<std::string>(key);
        if (!v) return std::nullopt;
        return trim(*v);
    }

    void record(const std::string& key, const std::string& v) { resolved_[key] = v; }

    void check_keys() const {
        for (const auto& [section, body] : tree_) {
            if (body.empty() && !body.data().empty())
                throw ConfigError("config key '" + section + "' outside any section");
            for (const auto& [key, value] : body) {
                const std::string full = section + "." + key;
                if (!known_config_keys().count(full)) throw ConfigError("unknown config key '" + full + "'");
                (void)value;
            }
        }
    }

    boost::property_tree::ptree tree_;
    std::map<std::string, std::string> resolved_;
};

}  // namespace adiabatic
