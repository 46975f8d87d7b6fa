#pragma once

#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "rigidnet/ais.hpp"
#include "rigidnet/formation.hpp"
#include "rigidnet/localization.hpp"

namespace rigidnet {

using nlohmann::json;

inline constexpr int kSchemaVersion = 1;

// --- graphs and frameworks -------------------------------------------------

inline json graph_to_json(const Graph& g) {
    json edges = json::array();
    for (auto [u, v] : g.edges()) edges.push_back({u, v});
    return {{"n", g.n()}, {"edges", edges}};
}

inline Graph graph_from_json(const json& j) {
    if (!j.is_object() || !j.contains("n") || !j.contains("edges")) {
        throw Error(Errc::invalid_input, "graph JSON needs {\"n\", \"edges\"}");
    }
    std::vector<EdgePair> edges;
    for (const auto& e : j.at("edges")) {
        if (!e.is_array() || e.size() != 2) {
            throw Error(Errc::invalid_input, "graph JSON: each edge must be [i, j]");
        }
        edges.push_back({e[0].get<int>(), e[1].get<int>()});
    }
    return Graph(j.at("n").get<int>(), std::move(edges));
}

inline json positions_to_json(const std::vector<Vec2>& pts) {
    json out = json::array();
    for (const auto& p : pts) out.push_back({p.x, p.y});
    return out;
}

inline std::vector<Vec2> positions_from_json(const json& j) {
    std::vector<Vec2> pts;
    for (const auto& p : j) {
        if (!p.is_array() || p.size() != 2) {
            throw Error(Errc::invalid_input, "positions JSON: each point must be [x, y]");
        }
        pts.push_back({p[0].get<double>(), p[1].get<double>()});
    }
    return pts;
}

inline json framework_to_json(const Framework& fw) {
    return {{"graph", graph_to_json(fw.graph())}, {"positions", positions_to_json(fw.config())}};
}

inline Framework framework_from_json(const json& j) {
    if (!j.contains("graph") || !j.contains("positions")) {
        throw Error(Errc::invalid_input, "framework JSON needs {\"graph\", \"positions\"}");
    }
    return Framework(graph_from_json(j.at("graph")), positions_from_json(j.at("positions")));
}

inline json ais_to_json(const AngleIndexSet& ais) {
    json triples = json::array();
    for (const auto& t : ais.triples()) triples.push_back({t.i, t.j, t.k});
    return {{"triples", triples}};
}

inline AngleIndexSet ais_from_json(const json& j, const Graph& host) {
    if (!j.contains("triples")) throw Error(Errc::invalid_input, "AIS JSON needs {\"triples\"}");
    std::vector<AngleTriple> triples;
    for (const auto& t : j.at("triples")) {
        if (!t.is_array() || t.size() != 3) {
            throw Error(Errc::invalid_input, "AIS JSON: each triple must be [i, j, k]");
        }
        triples.emplace_back(t[0].get<int>(), t[1].get<int>(), t[2].get<int>());
    }
    return AngleIndexSet(host, std::move(triples));
}

// --- reports ----------------------------------------------------------------

inline json report_to_json(const RigidityReport& r) {
    json j{{"schema_version", kSchemaVersion},
           {"rank_bearing", r.rank_bearing},
           {"rank_signed_angle", r.rank_signed_angle},
           {"null_dim_signed_angle", r.null_dim_signed_angle},
           {"is_ibr", r.is_ibr},
           {"is_isar", r.is_isar},
           {"tolerance_used", r.tolerance_used},
           {"singular_values", r.singular_values}};
    if (r.seed) {
        j["seed"] = *r.seed;
        j["rng_algorithm"] = Rng::algorithm();
    }
    return j;
}

inline json generic_verdict_to_json(const GenericVerdict& v) {
    json samples = json::array();
    for (char s : v.per_sample_isar) samples.push_back(static_cast<bool>(s));
    return {{"schema_version", kSchemaVersion},
            {"trials", v.trials},
            {"seed", v.seed},
            {"rng_algorithm", Rng::algorithm()},
            {"per_sample_isar", samples},
            {"majority_isar", v.majority_isar},
            {"has_laman_spanning_subgraph", v.has_laman_spanning_subgraph}};
}

inline json gais_result_to_json(const GaisResult& r) {
    return {{"schema_version", kSchemaVersion},
            {"ais", ais_to_json(r.ais)},
            {"laman_subgraph", graph_to_json(r.laman_subgraph)},
            {"size", r.size},
            {"angle_connected", r.angle_connected},
            {"restricted_rank", r.restricted_rank}};
}

// --- scenarios ---------------------------------------------------------------

struct LocalizationScenario {
    SensorNetwork network;
    LocalizationOptions options;
};

inline LocalizationScenario localization_scenario_from_json(const json& j) {
    LocalizationScenario sc;
    Framework fw = framework_from_json(j);
    if (!j.contains("anchors")) {
        throw Error(Errc::invalid_input, "localization scenario needs \"anchors\"");
    }
    std::vector<VertexId> anchors;
    for (const auto& a : j.at("anchors")) anchors.push_back(a.get<int>());
    sc.network = SensorNetwork(std::move(fw), std::move(anchors));
    if (j.contains("seed")) sc.options.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("step")) sc.options.step = j.at("step").get<double>();
    if (j.contains("horizon")) sc.options.horizon = j.at("horizon").get<double>();
    if (sc.options.step <= 0.0 || sc.options.horizon <= 0.0) {
        throw Error(Errc::invalid_input, "localization scenario: step and horizon must be positive");
    }
    return sc;
}

struct FormationScenario {
    Framework target;
    FormationOptions options;
};

inline FormationScenario formation_scenario_from_json(const json& j) {
    FormationScenario sc;
    if (!j.contains("graph") || !j.contains("target_positions")) {
        throw Error(Errc::invalid_input,
                    "formation scenario needs {\"graph\", \"target_positions\"}");
    }
    sc.target = Framework(graph_from_json(j.at("graph")),
                          positions_from_json(j.at("target_positions")));
    if (j.contains("seed")) sc.options.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("step")) sc.options.step = j.at("step").get<double>();
    if (j.contains("horizon")) sc.options.horizon = j.at("horizon").get<double>();
    if (j.contains("init_box")) {
        const auto& box = j.at("init_box");
        if (!box.is_array() || box.size() != 2) {
            throw Error(Errc::invalid_input, "formation scenario: init_box must be [lo, hi]");
        }
        sc.options.init_box_lo = box[0].get<double>();
        sc.options.init_box_hi = box[1].get<double>();
    }
    if (j.contains("init_attitude_range")) {
        const auto& range = j.at("init_attitude_range");
        if (!range.is_array() || range.size() != 2) {
            throw Error(Errc::invalid_input,
                        "formation scenario: init_attitude_range must be [lo, hi]");
        }
        sc.options.init_attitude_lo = range[0].get<double>();
        sc.options.init_attitude_hi = range[1].get<double>();
    }
    if (sc.options.step <= 0.0 || sc.options.horizon <= 0.0) {
        throw Error(Errc::invalid_input, "formation scenario: step and horizon must be positive");
    }
    return sc;
}

// --- trajectory output --------------------------------------------------------

inline void write_localization_csv(std::ostream& os, const LocalizationTrajectory& traj) {
    os << "t,location_error,bearing_error\n";
    os << std::setprecision(17);
    for (std::size_t s = 0; s < traj.times.size(); ++s) {
        os << traj.times[s] << ',' << traj.location_error[s] << ',' << traj.bearing_error[s]
           << '\n';
    }
}

inline void write_formation_csv(std::ostream& os, const FormationTrajectory& traj) {
    const std::size_t n = traj.positions.empty() ? 0 : traj.positions.front().size();
    os << 't';
    for (std::size_t i = 1; i <= n; ++i) {
        os << ",x" << i << ",y" << i << ",beta" << i;
    }
    os << ",angle_error,attitude_error\n";
    os << std::setprecision(17);
    for (std::size_t s = 0; s < traj.times.size(); ++s) {
        os << traj.times[s];
        for (std::size_t i = 0; i < n; ++i) {
            os << ',' << traj.positions[s][i].x << ',' << traj.positions[s][i].y << ','
               << traj.attitudes[s][i];
        }
        os << ',' << traj.angle_error[s] << ',' << traj.attitude_error[s] << '\n';
    }
}

inline json localization_final_state_to_json(const LocalizationTrajectory& traj) {
    json bearings = json::array();
    for (const auto& [pair, b] : traj.final_b_hat) {
        bearings.push_back({{"from", pair.first}, {"to", pair.second}, {"value", {b.x, b.y}}});
    }
    return {{"schema_version", kSchemaVersion},
            {"estimates", positions_to_json(traj.final_p_hat)},
            {"bearing_estimates", bearings},
            {"final_location_error", traj.location_error.back()},
            {"final_bearing_error", traj.bearing_error.back()}};
}

inline json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::invalid_input, "cannot open input file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw Error(Errc::invalid_input, std::string("malformed JSON: ") + e.what());
    }
    return j;
}

} // namespace rigidnet
