/*
   Copyright 2026 The extalg Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

        http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#ifndef EXTALG_JSON_IO_HPP
#define EXTALG_JSON_IO_HPP

#include <cstdio>
#include <cstdlib>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "algebra_core.hpp"

namespace extalg::io {

using json = nlohmann::json;

inline json complex_to_json(cplx z) { return json::array({z.real(), z.imag()}); }

inline cplx complex_from_json(const json& j) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return {j[0].get<double>(), j[1].get<double>()};
    throw ParseError("expected a number or an [re, im] pair, got " + j.dump());
}

/// Rejects keys outside `allowed`.
inline void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
    if (!j.is_object()) throw ParseError(where + ": expected an object");
    for (const auto& [key, _] : j.items())
        if (!allowed.count(key)) throw ParseError(where + ": unknown key '" + key + "'");
}

inline json space_to_json(const CharacterSpace& space) {
    json j;
    j["points"] = space.ids();
    if (space.has_coords()) {
        json coords = json::array();
        for (auto c : space.coords()) coords.push_back(complex_to_json(c));
        j["coords"] = std::move(coords);
    }
    if (space.has_adjacency()) {
        json adj = json::array();
        for (const auto& e : space.edges())
            adj.push_back({{"edge", {e.from, e.to}}, {"loop", e.loop}});
        j["adjacency"] = std::move(adj);
    }
    return j;
}

inline CharacterSpace space_from_json(const json& j) {
    check_keys(j, {"points", "coords", "adjacency"}, "space");
    if (!j.contains("points") || !j["points"].is_array())
        throw ParseError("space: 'points' must be an array of ids");
    std::vector<std::string> ids;
    for (const auto& p : j["points"]) {
        if (!p.is_string()) throw ParseError("space: point ids must be strings");
        ids.push_back(p.get<std::string>());
    }
    std::vector<cplx> coords;
    if (j.contains("coords"))
        for (const auto& c : j["coords"]) coords.push_back(complex_from_json(c));
    std::vector<Edge> edges;
    if (j.contains("adjacency")) {
        for (const auto& e : j["adjacency"]) {
            check_keys(e, {"edge", "loop"}, "adjacency entry");
            const auto& pair = e.at("edge");
            if (!pair.is_array() || pair.size() != 2)
                throw ParseError("adjacency: 'edge' must be an index pair");
            edges.push_back({pair[0].get<std::size_t>(), pair[1].get<std::size_t>(),
                             e.value("loop", false)});
        }
    }
    return CharacterSpace(std::move(ids), std::move(coords), std::move(edges));
}

inline json element_to_json(const Element& e) {
    json values = json::array();
    for (auto v : e.values()) values.push_back(complex_to_json(v));
    return json{{"values", std::move(values)}};
}

inline Element element_from_json(const json& j, const CharacterSpace& space) {
    check_keys(j, {"values"}, "element");
    std::vector<cplx> values;
    for (const auto& v : j.at("values")) values.push_back(complex_from_json(v));
    return Element(space, std::move(values));
}

/// Shortest round-trip decimal form; identical bytes for identical doubles.
inline std::string format_number(double x) {
    if (x == 0.0) return "0";
    char buf[64];
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, x);
        if (std::strtod(buf, nullptr) == x) break;
    }
    return buf;
}

}  // namespace extalg::io

#endif  // EXTALG_JSON_IO_HPP
