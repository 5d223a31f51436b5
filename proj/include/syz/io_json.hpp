#pragma once

#include <json.hpp>

#include "syz/curve.hpp"

namespace syz {

// Curve model file format: components count, nodes as
// [[comp, param], [comp, param], lambda], named marked points; all scalars as
// decimal strings so files round-trip bit-exactly.
template <Field K>
nlohmann::ordered_json curve_to_json(const GluedCurve<K>& X) {
    nlohmann::ordered_json j;
    j["components"] = X.ncomps();
    nlohmann::ordered_json nodes = nlohmann::ordered_json::array();
    for (const auto& n : X.nodes()) {
        nlohmann::ordered_json node = nlohmann::ordered_json::array();
        node.push_back({n.a.comp, n.a.param.str()});
        node.push_back({n.b.comp, n.b.param.str()});
        node.push_back(n.lambda.str());
        nodes.push_back(std::move(node));
    }
    j["nodes"] = std::move(nodes);
    nlohmann::ordered_json marked = nlohmann::ordered_json::object();
    for (const auto& [name, bp] : X.marked())
        marked[name] = {bp.comp, bp.param.str()};
    j["marked"] = std::move(marked);
    return j;
}

template <Field K>
GluedCurve<K> curve_from_json(const nlohmann::json& j) {
    auto branch = [](const nlohmann::json& b) {
        return BranchPoint<K>{b.at(0).get<std::uint32_t>(),
                              K::parse(b.at(1).get<std::string>())};
    };
    std::uint32_t ncomps = j.at("components").get<std::uint32_t>();
    std::vector<CurveNode<K>> nodes;
    for (const auto& n : j.at("nodes"))
        nodes.push_back({branch(n.at(0)), branch(n.at(1)),
                         K::parse(n.at(2).get<std::string>())});
    std::map<std::string, BranchPoint<K>> marked;
    if (j.contains("marked"))
        for (const auto& [name, bp] : j.at("marked").items())
            marked.emplace(name, branch(bp));
    return GluedCurve<K>(ncomps, std::move(nodes), std::move(marked));
}

} // namespace syz
