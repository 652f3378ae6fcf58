#include "sbo/config.hpp"

#include <json.hpp>

#include <set>

#include "sbo/bilinear.hpp"
#include "sbo/gateaux.hpp"
#include "sbo/util.hpp"

namespace sbo {

using nlohmann::json;

const char* to_string(Command c) {
    switch (c) {
        case Command::solve: return "solve";
        case Command::conserve: return "conserve";
        case Command::scaling: return "scaling";
        case Command::picard: return "picard";
        case Command::probe_gateaux: return "probe-gateaux";
        case Command::probe_bilinear: return "probe-bilinear";
        case Command::oracle_calculus: return "oracle-calculus";
    }
    return "?";
}

namespace {

Command command_from_string(const std::string& s) {
    for (Command c : {Command::solve, Command::conserve, Command::scaling, Command::picard,
                      Command::probe_gateaux, Command::probe_bilinear, Command::oracle_calculus}) {
        if (s == to_string(c)) return c;
    }
    throw config_error("command: unknown command '" + s + "'");
}

void reject_unknown(const json& obj, const std::set<std::string>& allowed,
                    const std::string& path) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!allowed.count(it.key()))
            throw config_error("unknown key '" + (path.empty() ? it.key() : path + "." + it.key()) +
                               "'");
    }
}

double get_number(const json& obj, const std::string& key, const std::string& path,
                  std::optional<double> fallback = std::nullopt) {
    if (!obj.contains(key)) {
        if (fallback) return *fallback;
        throw config_error("missing required field '" + path + "'");
    }
    if (!obj[key].is_number())
        throw config_error("field '" + path + "' must be a number");
    return obj[key].get<double>();
}

std::string get_string(const json& obj, const std::string& key, const std::string& path,
                       std::optional<std::string> fallback = std::nullopt) {
    if (!obj.contains(key)) {
        if (fallback) return *fallback;
        throw config_error("missing required field '" + path + "'");
    }
    if (!obj[key].is_string())
        throw config_error("field '" + path + "' must be a string");
    return obj[key].get<std::string>();
}

std::vector<int> get_int_list(const json& obj, const std::string& key, const std::string& path,
                              std::vector<int> fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_array()) throw config_error("field '" + path + "' must be an array");
    std::vector<int> out;
    for (const json& v : obj[key]) {
        if (!v.is_number_integer()) throw config_error("field '" + path + "' must hold integers");
        out.push_back(v.get<int>());
    }
    return out;
}

// Pin nu to a case's admissible regime: a missing nu takes the case default,
// a supplied inadmissible nu is a configuration error.
void resolve_case_nu(const std::string& label, bool nu_given, RunConfig& cfg) {
    const bool resonant_case = label.rfind("T13", 0) == 0 || label == "T43";
    const bool zero_nu_case = label == "T42iii";
    if (resonant_case) {
        if (!nu_given) cfg.nu = 1.0;
        if (std::abs(std::abs(cfg.nu) - 1.0) > 1e-12)
            throw config_error("case " + label + " requires |nu| = 1 (got nu = " +
                               format_double(cfg.nu) + ")");
    } else if (zero_nu_case) {
        if (!nu_given) cfg.nu = 0.0;
        if (cfg.nu != 0.0)
            throw config_error("case " + label + " requires nu = 0");
    } else if (!label.empty()) {
        if (std::abs(std::abs(cfg.nu) - 1.0) <= 1e-12)
            throw config_error("case " + label + " requires |nu| != 1");
    }
}

struct CaseDefaults {
    double s, s_prime;
};

std::optional<CaseDefaults> case_regularity_defaults(const std::string& label) {
    if (label == "T12i_low") return CaseDefaults{0.0, -1.0};
    if (label == "T12i_high") return CaseDefaults{0.0, 1.0};
    if (label == "T12ii_low") return CaseDefaults{0.0, -2.5};
    if (label == "T12ii_high") return CaseDefaults{0.0, 1.5};
    if (label == "T13_a") return CaseDefaults{0.0, -1.0};
    if (label == "T13_b") return CaseDefaults{0.0, 0.0};
    if (label == "T13_c") return CaseDefaults{-0.5, -0.5};
    if (label == "T42i") return CaseDefaults{0.0, 0.5};
    if (label == "T42ii") return CaseDefaults{0.0, -1.5};
    if (label == "T42iii") return CaseDefaults{0.0, -1.0};
    if (label == "T43") return CaseDefaults{0.0, -0.5};
    return std::nullopt;
}

}  // namespace

RunConfig parse_config(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw config_error(std::string("malformed JSON: ") + e.what());
    }
    if (!doc.is_object()) throw config_error("config must be a JSON object");

    reject_unknown(doc, {"command", "system", "grid", "data", "case", "N_list", "t", "trials",
                         "points_per_dim", "modes_per_min_width", "lambda_list", "iterations",
                         "quad_intervals", "out", "seed"},
                   "");

    RunConfig cfg;
    cfg.command = command_from_string(get_string(doc, "command", "command"));

    bool nu_given = false, s_given = false, sp_given = false;
    if (doc.contains("system")) {
        const json& sys = doc["system"];
        if (!sys.is_object()) throw config_error("field 'system' must be an object");
        reject_unknown(sys, {"alpha", "beta", "nu", "s", "s_prime", "b", "b_prime", "c", "c_prime"},
                       "system");
        nu_given = sys.contains("nu");
        s_given = sys.contains("s");
        sp_given = sys.contains("s_prime");
        cfg.alpha = get_number(sys, "alpha", "system.alpha", cfg.alpha);
        cfg.beta = get_number(sys, "beta", "system.beta", cfg.beta);
        cfg.nu = get_number(sys, "nu", "system.nu", cfg.nu);
        cfg.s = get_number(sys, "s", "system.s", cfg.s);
        cfg.s_prime = get_number(sys, "s_prime", "system.s_prime", cfg.s_prime);
        cfg.b = get_number(sys, "b", "system.b", cfg.b);
        cfg.b_prime = get_number(sys, "b_prime", "system.b_prime", cfg.b_prime);
        cfg.c = get_number(sys, "c", "system.c", cfg.c);
        cfg.c_prime = get_number(sys, "c_prime", "system.c_prime", cfg.c_prime);
        if (cfg.alpha == 0.0 || cfg.beta == 0.0)
            throw config_error("system: alpha*beta must be nonzero");
    }

    const bool needs_grid = cfg.command == Command::solve || cfg.command == Command::conserve ||
                            cfg.command == Command::picard || cfg.command == Command::scaling;
    if (doc.contains("grid")) {
        const json& grid = doc["grid"];
        if (!grid.is_object()) throw config_error("field 'grid' must be an object");
        reject_unknown(grid, {"L", "n", "dt", "T"}, "grid");
        cfg.n = static_cast<int>(get_number(grid, "n", "grid.n"));
        cfg.length = get_number(grid, "L", "grid.L");
        cfg.dt = get_number(grid, "dt", "grid.dt", cfg.dt);
        cfg.horizon = get_number(grid, "T", "grid.T", cfg.horizon);
    } else if (needs_grid) {
        throw config_error("missing required field 'grid.n'");
    }

    if (doc.contains("data")) {
        const json& data = doc["data"];
        if (!data.is_object()) throw config_error("field 'data' must be an object");
        reject_unknown(data, {"kind", "amp_u", "amp_v", "width_frac", "mode_u", "mode_v",
                              "halfwidth_modes", "path"},
                       "data");
        cfg.data.kind = get_string(data, "kind", "data.kind", cfg.data.kind);
        if (cfg.data.kind != "gaussian" && cfg.data.kind != "single_mode" &&
            cfg.data.kind != "packet" && cfg.data.kind != "csv" && cfg.data.kind != "zero")
            throw config_error("data.kind: unknown profile '" + cfg.data.kind + "'");
        cfg.data.amp_u = get_number(data, "amp_u", "data.amp_u", cfg.data.amp_u);
        cfg.data.amp_v = get_number(data, "amp_v", "data.amp_v", cfg.data.amp_v);
        cfg.data.width_frac = get_number(data, "width_frac", "data.width_frac", cfg.data.width_frac);
        cfg.data.mode_u = static_cast<int>(get_number(data, "mode_u", "data.mode_u", cfg.data.mode_u));
        cfg.data.mode_v = static_cast<int>(get_number(data, "mode_v", "data.mode_v", cfg.data.mode_v));
        cfg.data.halfwidth_modes = static_cast<int>(
            get_number(data, "halfwidth_modes", "data.halfwidth_modes", cfg.data.halfwidth_modes));
        if (cfg.data.kind == "csv") cfg.data.path = get_string(data, "path", "data.path");
    }

    const bool needs_case =
        cfg.command == Command::probe_gateaux || cfg.command == Command::probe_bilinear;
    if (doc.contains("case")) {
        cfg.case_label = get_string(doc, "case", "case");
        if (cfg.command == Command::probe_gateaux) {
            packet_case_from_string(cfg.case_label);  // validates
        } else if (cfg.command == Command::probe_bilinear) {
            box_case_from_string(cfg.case_label);
        }
        resolve_case_nu(cfg.case_label, nu_given, cfg);
        if (const auto defaults = case_regularity_defaults(cfg.case_label)) {
            if (!s_given) cfg.s = defaults->s;
            if (!sp_given) cfg.s_prime = defaults->s_prime;
        }
    } else if (needs_case) {
        throw config_error("missing required field 'case'");
    }

    cfg.scales = get_int_list(doc, "N_list", "N_list", cfg.scales);
    for (int n : cfg.scales)
        if (n < 2) throw config_error("N_list: scales must be >= 2");
    cfg.probe_t = get_number(doc, "t", "t", cfg.probe_t);
    cfg.trials = static_cast<int>(get_number(doc, "trials", "trials", cfg.trials));
    cfg.points_per_dim =
        static_cast<int>(get_number(doc, "points_per_dim", "points_per_dim", cfg.points_per_dim));
    cfg.modes_per_min_width = static_cast<int>(
        get_number(doc, "modes_per_min_width", "modes_per_min_width", cfg.modes_per_min_width));
    cfg.lambdas = get_int_list(doc, "lambda_list", "lambda_list", cfg.lambdas);
    cfg.iterations = static_cast<int>(get_number(doc, "iterations", "iterations", cfg.iterations));
    cfg.quad_intervals =
        static_cast<int>(get_number(doc, "quad_intervals", "quad_intervals", cfg.quad_intervals));
    cfg.out_prefix = get_string(doc, "out", "out", cfg.out_prefix);
    if (doc.contains("seed")) {
        if (!doc["seed"].is_number_unsigned() && !doc["seed"].is_number_integer())
            throw config_error("field 'seed' must be an integer");
        cfg.seed = doc["seed"].get<std::uint64_t>();
    }
    return cfg;
}

std::string emit_config(const RunConfig& cfg) {
    json doc;
    doc["command"] = to_string(cfg.command);
    doc["system"] = {{"alpha", cfg.alpha},   {"beta", cfg.beta},       {"nu", cfg.nu},
                     {"s", cfg.s},           {"s_prime", cfg.s_prime}, {"b", cfg.b},
                     {"b_prime", cfg.b_prime}, {"c", cfg.c},           {"c_prime", cfg.c_prime}};
    doc["grid"] = {{"L", cfg.length}, {"n", cfg.n}, {"dt", cfg.dt}, {"T", cfg.horizon}};
    doc["data"] = {{"kind", cfg.data.kind},
                   {"amp_u", cfg.data.amp_u},
                   {"amp_v", cfg.data.amp_v},
                   {"width_frac", cfg.data.width_frac},
                   {"mode_u", cfg.data.mode_u},
                   {"mode_v", cfg.data.mode_v},
                   {"halfwidth_modes", cfg.data.halfwidth_modes}};
    if (!cfg.data.path.empty()) doc["data"]["path"] = cfg.data.path;
    if (!cfg.case_label.empty()) doc["case"] = cfg.case_label;
    doc["N_list"] = cfg.scales;
    doc["t"] = cfg.probe_t;
    doc["trials"] = cfg.trials;
    doc["points_per_dim"] = cfg.points_per_dim;
    doc["modes_per_min_width"] = cfg.modes_per_min_width;
    doc["lambda_list"] = cfg.lambdas;
    doc["iterations"] = cfg.iterations;
    doc["quad_intervals"] = cfg.quad_intervals;
    doc["out"] = cfg.out_prefix;
    doc["seed"] = cfg.seed;
    return doc.dump(2);
}

bool operator==(const RunConfig& a, const RunConfig& b) {
    return a.command == b.command && a.alpha == b.alpha && a.beta == b.beta && a.nu == b.nu &&
           a.s == b.s && a.s_prime == b.s_prime && a.b == b.b && a.b_prime == b.b_prime &&
           a.c == b.c && a.c_prime == b.c_prime && a.length == b.length && a.n == b.n &&
           a.dt == b.dt && a.horizon == b.horizon && a.case_label == b.case_label &&
           a.scales == b.scales && a.probe_t == b.probe_t && a.trials == b.trials &&
           a.points_per_dim == b.points_per_dim &&
           a.modes_per_min_width == b.modes_per_min_width && a.lambdas == b.lambdas &&
           a.iterations == b.iterations && a.quad_intervals == b.quad_intervals &&
           a.data.kind == b.data.kind && a.data.amp_u == b.data.amp_u &&
           a.data.amp_v == b.data.amp_v && a.data.width_frac == b.data.width_frac &&
           a.data.mode_u == b.data.mode_u && a.data.mode_v == b.data.mode_v &&
           a.data.halfwidth_modes == b.data.halfwidth_modes && a.data.path == b.data.path &&
           a.out_prefix == b.out_prefix && a.seed == b.seed;
}

}  // namespace sbo
