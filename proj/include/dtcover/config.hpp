#pragma once

#include <array>
#include <istream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dtcover/curve_class.hpp"
#include "dtcover/dual_graph.hpp"
#include "dtcover/errors.hpp"
#include "dtcover/invariants.hpp"
#include "dtcover/rational.hpp"

namespace dtcover {

/// Parsed configuration file.
struct Config {
    std::shared_ptr<const DualGraph> graph;
    GeometryKind geometry = GeometryKind::SuperRigid;
    WeightKind weight = WeightKind::Behrend;
    std::shared_ptr<BaseTable> base_table = std::make_shared<BaseTable>();

    BaseProvider provider() const { return make_base_provider(base_table); }
};

inline GeometryKind parse_geometry(const std::string& s) {
    if (s == "super-rigid") return GeometryKind::SuperRigid;
    if (s == "surface-type") return GeometryKind::SurfaceType;
    throw ConfigError("geometry must be 'super-rigid' or 'surface-type', got '" + s + "'");
}

inline WeightKind parse_weight(const std::string& s) {
    if (s == "behrend") return WeightKind::Behrend;
    if (s == "euler") return WeightKind::Euler;
    throw ConfigError("weight must be 'behrend' or 'euler', got '" + s + "'");
}

namespace detail {

inline std::string id_string(const nlohmann::json& j, const std::string& where) {
    if (j.is_string()) return j.get<std::string>();
    if (j.is_number_integer()) return std::to_string(j.get<long long>());
    throw ConfigError(where + ": vertex id must be a string or integer");
}

inline Rational json_rational(const nlohmann::json& j, const std::string& where) {
    if (j.is_string()) return Rational::parse(j.get<std::string>());
    if (j.is_number_integer()) return Rational(static_cast<std::int64_t>(j.get<long long>()));
    throw ConfigError(where + ": values must be exact rationals written as \"p/q\" strings");
}

inline int json_int(const nlohmann::json& obj, const char* key, int fallback, const std::string& where) {
    if (!obj.contains(key)) return fallback;
    const auto& v = obj.at(key);
    if (!v.is_number_integer()) throw ConfigError(where + ": '" + key + "' must be an integer");
    return v.get<int>();
}

}  // namespace detail

inline Config parse_config(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    if (!j.contains("graph") || !j.at("graph").is_object()) throw ConfigError("config needs a 'graph' object");
    const auto& gj = j.at("graph");
    if (!gj.contains("vertices") || !gj.at("vertices").is_array())
        throw ConfigError("graph needs a 'vertices' array");

    std::vector<Vertex> vs;
    std::map<std::string, std::size_t> index;
    for (const auto& vj : gj.at("vertices")) {
        const std::string where = "vertex " + std::to_string(vs.size());
        if (!vj.is_object() || !vj.contains("id")) throw ConfigError(where + ": needs an 'id'");
        Vertex v;
        v.name = detail::id_string(vj.at("id"), where);
        if (!index.emplace(v.name, vs.size()).second) throw ConfigError("duplicate vertex id '" + v.name + "'");
        if (!vj.contains("h_deg")) throw ConfigError(where + ": needs 'h_deg'");
        v.h_deg = detail::json_int(vj, "h_deg", 0, where);
        v.omega_deg = detail::json_int(vj, "omega_deg", 1, where);
        if (vj.contains("rational")) {
            if (!vj.at("rational").is_boolean()) throw ConfigError(where + ": 'rational' must be a boolean");
            v.rational = vj.at("rational").get<bool>();
        }
        vs.push_back(std::move(v));
    }

    std::vector<Edge> es;
    if (gj.contains("edges")) {
        if (!gj.at("edges").is_array()) throw ConfigError("'edges' must be an array");
        for (const auto& ej : gj.at("edges")) {
            const std::string where = "edge " + std::to_string(es.size());
            if (!ej.is_array() || ej.size() != 2) throw ConfigError(where + ": must be a pair [u, v]");
            auto ends = std::array<std::size_t, 2>{};
            for (std::size_t k = 0; k < 2; ++k) {
                const auto id = detail::id_string(ej.at(k), where);
                auto it = index.find(id);
                if (it == index.end()) throw ConfigError(where + ": unknown vertex '" + id + "'");
                ends[k] = it->second;
            }
            es.push_back({ends[0], ends[1]});
        }
    }

    Config cfg;
    try {
        cfg.graph = std::make_shared<const DualGraph>(std::move(vs), std::move(es));
    } catch (const DomainError& e) {
        throw ConfigError(std::string("graph: ") + e.what());
    }

    if (!j.contains("geometry") || !j.at("geometry").is_string()) throw ConfigError("config needs 'geometry'");
    cfg.geometry = parse_geometry(j.at("geometry").get<std::string>());
    if (j.contains("weight")) {
        if (!j.at("weight").is_string()) throw ConfigError("'weight' must be a string");
        cfg.weight = parse_weight(j.at("weight").get<std::string>());
    }

    if (j.contains("base_table")) {
        if (!j.at("base_table").is_array()) throw ConfigError("'base_table' must be an array");
        for (const auto& bj : j.at("base_table")) {
            const std::string where = "base_table entry " + std::to_string(cfg.base_table->size());
            if (!bj.is_object() || !bj.contains("gamma") || !bj.contains("value"))
                throw ConfigError(where + ": needs 'gamma' and 'value'");
            if (!bj.at("gamma").is_string()) throw ConfigError(where + ": 'gamma' must be a string like \"1,2,1\"");
            const auto gamma = CurveClass::parse(bj.at("gamma").get<std::string>());
            if (gamma.size() != cfg.graph->vertex_count())
                throw ConfigError(where + ": gamma has " + std::to_string(gamma.size()) + " entries, graph has " +
                                  std::to_string(cfg.graph->vertex_count()) + " vertices");
            if (gamma.is_zero()) throw ConfigError(where + ": gamma must be nonzero");
            const auto sub = support_subgraph(*cfg.graph, gamma);
            if (!sub.graph.is_connected() || genus(sub.graph) != 0)
                throw ConfigError(where + ": support of gamma must be a tree");
            std::optional<std::int64_t> n;
            if (bj.contains("n")) {
                if (!bj.at("n").is_number_integer()) throw ConfigError(where + ": 'n' must be an integer");
                n = bj.at("n").get<std::int64_t>();
            }
            cfg.base_table->add(sub.graph, sub.restrict(gamma), n, detail::json_rational(bj.at("value"), where));
        }
    }
    return cfg;
}

inline Config parse_config(std::istream& in) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("malformed JSON: ") + e.what());
    }
    return parse_config(j);
}

inline Config parse_config_string(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("malformed JSON: ") + e.what());
    }
    return parse_config(j);
}

/// A class on the config graph from its "a,b,c" form.
inline CurveClass parse_class_for(const DualGraph& g, const std::string& text) {
    auto c = CurveClass::parse(text);
    if (c.size() != g.vertex_count())
        throw ConfigError("class (" + text + ") has " + std::to_string(c.size()) + " entries, graph has " +
                          std::to_string(g.vertex_count()) + " vertices");
    return c;
}

}  // namespace dtcover
