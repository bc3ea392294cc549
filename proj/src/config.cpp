#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "surveil/experiment.hpp"

namespace surveil {

namespace {

using nlohmann::json;

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
    if (!obj.is_object()) throw std::invalid_argument("config: '" + where + "' must be an object");
    for (const auto& [key, value] : obj.items()) {
        if (!allowed.count(key)) {
            throw std::invalid_argument("config: unknown key '" + key + "' in " + where);
        }
    }
}

template <class T>
void read(const json& obj, const char* key, T& out) {
    if (obj.contains(key)) out = obj.at(key).get<T>();
}

Point2 read_point(const json& j, const std::string& name) {
    if (!j.is_array() || j.size() != 2) {
        throw std::invalid_argument("config: '" + name + "' must be [x, y]");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

NodeLayout parse_layout(const json& j) {
    check_keys(j, {"alan", "bob", "rey", "eve", "rey_array_axis"}, "layout");
    NodeLayout l;
    if (j.contains("alan")) l.alan = read_point(j["alan"], "alan");
    if (j.contains("bob")) l.bob = read_point(j["bob"], "bob");
    if (j.contains("rey")) l.rey = read_point(j["rey"], "rey");
    if (j.contains("eve")) l.eve = read_point(j["eve"], "eve");
    if (j.contains("rey_array_axis")) l.rey_array_axis = read_point(j["rey_array_axis"], "rey_array_axis");
    return l;
}

FadingParams parse_fading(const json& j) {
    check_keys(j, {"exp_direct", "exp_ris", "ref_loss_db", "rician_k", "element_spacing"},
               "fading");
    FadingParams f;
    read(j, "exp_direct", f.exp_direct);
    read(j, "exp_ris", f.exp_ris);
    read(j, "ref_loss_db", f.ref_loss_db);
    read(j, "rician_k", f.rician_k);
    read(j, "element_spacing", f.element_spacing);
    return f;
}

ScaOptions parse_sca(const json& j) {
    check_keys(j, {"max_rounds", "obj_tol", "init_value", "solver"}, "sca");
    ScaOptions s;
    read(j, "max_rounds", s.max_rounds);
    read(j, "obj_tol", s.obj_tol);
    if (j.contains("init_value")) {
        const json& iv = j["init_value"];
        s.init_value = iv.is_array() ? cplx{iv.at(0).get<double>(), iv.at(1).get<double>()}
                                     : cplx{iv.get<double>(), 0.0};
    }
    if (j.contains("solver")) {
        check_keys(j["solver"], {"tol", "max_iters"}, "sca.solver");
        read(j["solver"], "tol", s.solver.tol);
        read(j["solver"], "max_iters", s.solver.max_iters);
    }
    return s;
}

template <class T>
std::vector<T> value_or_list(const json& j) {
    if (j.is_array()) return j.get<std::vector<T>>();
    return {j.get<T>()};
}

}  // namespace

ExperimentConfig parse_config_json(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("config: malformed JSON: ") + e.what());
    }
    check_keys(root,
               {"layout", "fading", "n_r", "p_a_db", "p_max_db", "methods", "realizations",
                "base_seed", "sca", "rounds"},
               "config");
    ExperimentConfig cfg;
    try {
        if (root.contains("layout")) cfg.layout = parse_layout(root["layout"]);
        if (root.contains("fading")) cfg.fading = parse_fading(root["fading"]);
        if (root.contains("sca")) cfg.sca = parse_sca(root["sca"]);

        const bool n_list = root.contains("n_r") && root["n_r"].is_array();
        const bool pa_list = root.contains("p_a_db") && root["p_a_db"].is_array();
        if (n_list == pa_list) {
            throw std::invalid_argument("config: exactly one of n_r and p_a_db must be a list");
        }
        if (root.contains("n_r")) cfg.n_r = value_or_list<int>(root["n_r"]);
        if (root.contains("p_a_db")) cfg.p_a_db = value_or_list<double>(root["p_a_db"]);
        if (root.contains("p_max_db")) cfg.p_max_db = value_or_list<double>(root["p_max_db"]);
        if (root.contains("methods")) {
            cfg.methods.clear();
            for (const auto& m : root["methods"]) cfg.methods.push_back(parse_method(m.get<std::string>()));
        }
        read(root, "realizations", cfg.realizations);
        read(root, "base_seed", cfg.base_seed);
        read(root, "rounds", cfg.rounds);
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("config: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_json(ss.str());
}

}  // namespace surveil
