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

// Scenario files: a space, named elements and polynomials, and a task list.
// Tasks run in order; each produces one CSV or JSON artifact and a summary
// recorded in manifest.json.

#ifndef EXTALG_SCENARIO_HPP
#define EXTALG_SCENARIO_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "algebra_core.hpp"
#include "arens_hoffman.hpp"
#include "averaging.hpp"
#include "cole_tower.hpp"
#include "errors.hpp"
#include "expr.hpp"
#include "fibration.hpp"
#include "invertible_density.hpp"
#include "json_io.hpp"
#include "log_ext.hpp"
#include "poly_resultant.hpp"

namespace extalg::scenario {

using ojson = nlohmann::ordered_json;

inline constexpr int kFormatVersion = 1;

struct Artifact {
    std::string name;
    std::string content;
};

struct TaskOutcome {
    std::size_t index = 0;
    std::string op;
    bool ok = true;
    std::string failure;
    ojson summary = ojson::object();
    std::optional<Artifact> artifact;
};

struct RunResult {
    std::vector<TaskOutcome> tasks;
    /// Task artifacts followed by manifest.json; empty when there are no tasks.
    std::vector<Artifact> files;
    bool ok() const {
        for (const auto& t : tasks)
            if (!t.ok) return false;
        return true;
    }
};

namespace detail {

inline const std::map<std::string, std::set<std::string>>& task_keys() {
    static const std::map<std::string, std::set<std::string>> keys = {
        {"report", {}},
        {"winding", {"element"}},
        {"fibration", {"poly"}},
        {"extend-ah", {"poly", "t", "element"}},
        {"extend-cole", {"polys", "cap"}},
        {"cole-distance", {"f", "basis", "polys"}},
        {"extend-log", {"element", "t"}},
        {"t-operator", {"poly", "t", "element"}},
        {"approx-invert", {"poly", "t", "element", "epsilon", "strategy", "retries"}},
        {"log-descent", {"poly", "t", "f", "h"}},
        {"tower", {"tests", "rounds", "samples"}},
        {"region-5323", {"t", "arc", "centre", "radius"}},
    };
    return keys;
}

inline const std::map<std::string, std::set<std::string>>& expect_keys() {
    static const std::map<std::string, std::set<std::string>> keys = {
        {"report", {}},
        {"winding", {"windings"}},
        {"fibration", {"components", "loop_components"}},
        {"extend-ah", {"invertible"}},
        {"extend-cole", {"points"}},
        {"cole-distance", {"before", "after", "tol"}},
        {"extend-log", {"t", "components"}},
        {"t-operator", {"max_difference"}},
        {"approx-invert", {}},
        {"log-descent", {}},
        {"tower", {"final_coverage", "final_winding"}},
        {"region-5323", {"lo", "hi", "lo_closed", "hi_closed", "tol"}},
    };
    return keys;
}

inline double finite(double x, const std::string& what) {
    if (!std::isfinite(x)) throw TaskFailure(what + " is not finite");
    return x;
}

inline std::string num(double x) { return io::format_number(finite(x, "value")); }

inline std::string csv_header(const std::string& kind, const std::string& columns) {
    return "# extalg " + kind + " v" + std::to_string(kFormatVersion) + "\n" + columns + "\n";
}

inline std::string two_digits(std::size_t k) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%02zu", k);
    return buf;
}

}  // namespace detail

class Scenario {
   public:
    /// Parses and validates a scenario document; every failure is a ParseError.
    static Scenario from_json(const ojson& doc) {
        try {
            return parse(doc);
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(std::string("malformed scenario: ") + e.what());
        } catch (const ParseError&) {
            throw;
        } catch (const Error& e) {
            throw ParseError(std::string("invalid scenario: ") + e.what());
        }
    }

    static Scenario from_text(const std::string& text) {
        ojson doc;
        try {
            doc = ojson::parse(text);
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(std::string("not valid JSON: ") + e.what());
        }
        return from_json(doc);
    }

    static Scenario from_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw ParseError("cannot read '" + path + "'");
        std::stringstream ss;
        ss << in.rdbuf();
        return from_text(ss.str());
    }

    const CharacterSpace& space() const noexcept { return *space_; }
    const expr::Environment& elements() const noexcept { return elements_; }
    const std::map<std::string, MonicPoly>& polys() const noexcept { return polys_; }
    const std::vector<ojson>& tasks() const noexcept { return tasks_; }
    std::uint64_t seed() const noexcept { return seed_; }
    const std::string& space_kind() const noexcept { return kind_; }

    void set_seed(std::uint64_t s) { seed_ = s; }

    /// Replaces the task list, validating each entry.
    void set_tasks(std::vector<ojson> tasks) {
        try {
            for (const auto& t : tasks) validate_task(t);
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(std::string("malformed task: ") + e.what());
        } catch (const ParseError&) {
            throw;
        } catch (const Error& e) {
            throw ParseError(std::string("invalid task: ") + e.what());
        }
        tasks_ = std::move(tasks);
    }

    /// Evaluates a coefficient entry (expression string or number) on the space.
    Element evaluate(const ojson& v) const {
        if (v.is_number()) return Element::constant(*space_, v.get<double>());
        if (v.is_string()) return expr::evaluate(v.get<std::string>(), *space_, elements_);
        if (v.is_object()) return io::element_from_json(nlohmann::json::parse(v.dump()), *space_);
        throw ParseError("expected an expression, a number or a value table, got " + v.dump());
    }

   private:
    static Scenario parse(const ojson& doc) {
        io::check_keys(nlohmann::json::parse(doc.dump()),
                       {"version", "seed", "description", "space", "elements", "polys", "tasks"}, "scenario");
        Scenario s;
        if (doc.contains("version") && doc["version"].get<int>() != kFormatVersion)
            throw ParseError("unsupported scenario version " + doc["version"].dump());
        s.seed_ = doc.value("seed", std::uint64_t{0});
        if (!doc.contains("space")) throw ParseError("scenario: missing 'space'");
        s.space_ = std::make_shared<const CharacterSpace>(s.parse_space(doc["space"]));
        if (doc.contains("elements")) {
            if (!doc["elements"].is_object()) throw ParseError("'elements' must be an object");
            for (const auto& [name, v] : doc["elements"].items()) {
                s.check_name(name);
                s.elements_.emplace(name, s.evaluate(v));
            }
        }
        if (doc.contains("polys")) {
            if (!doc["polys"].is_object()) throw ParseError("'polys' must be an object");
            for (const auto& [name, v] : doc["polys"].items()) {
                s.check_name(name);
                s.polys_.emplace(name, s.parse_poly(v));
            }
        }
        if (doc.contains("tasks")) {
            if (!doc["tasks"].is_array()) throw ParseError("'tasks' must be an array");
            std::vector<ojson> tasks(doc["tasks"].begin(), doc["tasks"].end());
            s.set_tasks(std::move(tasks));
        }
        return s;
    }

    void check_name(const std::string& name) const {
        static const std::set<std::string> reserved = {"i", "pi", "e", "z", "t", "exp"};
        if (name.empty() || reserved.count(name)) throw ParseError("'" + name + "' is not a usable name");
        for (char c : name)
            if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_'))
                throw ParseError("'" + name + "' is not a usable name");
        if (std::isdigit(static_cast<unsigned char>(name[0]))) throw ParseError("'" + name + "' starts with a digit");
        if (elements_.count(name) || polys_.count(name)) throw ParseError("'" + name + "' defined twice");
    }

    CharacterSpace parse_space(const ojson& j) {
        if (!j.is_object() || !j.contains("kind")) throw ParseError("space: needs a 'kind'");
        kind_ = j["kind"].get<std::string>();
        const auto plain = nlohmann::json::parse(j.dump());
        if (kind_ == "interval") {
            io::check_keys(plain, {"kind", "resolution"}, "space");
            return spaces::interval(resolution(j));
        }
        if (kind_ == "circle") {
            io::check_keys(plain, {"kind", "resolution", "radius", "centre"}, "space");
            const double r = j.contains("radius") ? constant(j["radius"]).real() : 1.0;
            const cplx c = j.contains("centre") ? io::complex_from_json(plain["centre"]) : cplx{};
            if (!(r > 0.0)) throw ParseError("space: radius must be positive");
            return spaces::circle(resolution(j), r, c);
        }
        if (kind_ == "plane-grid") {
            io::check_keys(plain, {"kind", "nx", "ny", "x0", "x1", "y0", "y1"}, "space");
            auto get = [&](const char* k, double d) { return j.contains(k) ? constant(j[k]).real() : d; };
            const std::size_t nx = j.at("nx").get<std::size_t>(), ny = j.at("ny").get<std::size_t>();
            if (nx * ny > 100000) throw ParseError("space: grid too large");
            return spaces::plane_grid(nx, ny, get("x0", -1.0), get("x1", 1.0), get("y0", -1.0), get("y1", 1.0));
        }
        if (kind_ == "explicit") {
            auto body = plain;
            body.erase("kind");
            return io::space_from_json(body);
        }
        throw ParseError("space: unknown kind '" + kind_ + "'");
    }

    static std::size_t resolution(const ojson& j) {
        if (!j.contains("resolution")) throw ParseError("space: missing 'resolution'");
        const auto n = j["resolution"].get<std::size_t>();
        if (n > 100000) throw ParseError("space: resolution too large");
        return n;
    }

    static cplx constant(const ojson& v) {
        if (v.is_number()) return {v.get<double>(), 0.0};
        if (v.is_string()) return expr::evaluate_constant(v.get<std::string>());
        throw ParseError("expected a number or a constant expression, got " + v.dump());
    }

    MonicPoly parse_poly(const ojson& v) {
        io::check_keys(nlohmann::json::parse(v.dump()), {"lower", "roots", "max_degree"}, "poly");
        const std::size_t cap = v.value("max_degree", kDefaultMaxDegree);
        if (v.contains("lower") == v.contains("roots")) throw ParseError("poly: give exactly one of 'lower' or 'roots'");
        const auto& list = v.contains("lower") ? v["lower"] : v["roots"];
        if (!list.is_array()) throw ParseError("poly: coefficient list must be an array");
        std::vector<Element> els;
        for (const auto& c : list) els.push_back(evaluate(c));
        if (v.contains("roots")) return MonicPoly::from_roots(els, cap);
        return MonicPoly(std::move(els), cap);
    }

    void need_element(const ojson& t, const char* key) const {
        if (!t.contains(key) || !t[key].is_string() || !elements_.count(t[key].get<std::string>()))
            throw ParseError(std::string("task: '") + key + "' must name a defined element");
    }

    void need_poly(const ojson& t, const char* key) const {
        if (!t.contains(key) || !t[key].is_string() || !polys_.count(t[key].get<std::string>()))
            throw ParseError(std::string("task: '") + key + "' must name a defined polynomial");
    }

    void need_list(const ojson& t, const char* key) const {
        if (!t.contains(key) || !t[key].is_array() || t[key].empty())
            throw ParseError(std::string("task: '") + key + "' must be a non-empty array");
        for (const auto& c : t[key]) evaluate(c);
    }

    void validate_task(const ojson& t) const {
        if (!t.is_object() || !t.contains("op") || !t["op"].is_string()) throw ParseError("task: needs an 'op'");
        const std::string op = t["op"].get<std::string>();
        const auto& keys = detail::task_keys();
        auto it = keys.find(op);
        if (it == keys.end()) throw ParseError("task: unknown op '" + op + "'");
        std::set<std::string> allowed = it->second;
        allowed.insert({"op", "expect"});
        io::check_keys(nlohmann::json::parse(t.dump()), allowed, "task '" + op + "'");
        if (t.contains("expect"))
            io::check_keys(nlohmann::json::parse(t["expect"].dump()), detail::expect_keys().at(op),
                           "expect of '" + op + "'");
        for (const char* k : {"t", "epsilon", "radius"})
            if (t.contains(k)) constant(t[k]);
        if (op == "winding" || op == "extend-log") need_element(t, "element");
        if (op == "fibration" || op == "extend-ah" || op == "t-operator" || op == "approx-invert" ||
            op == "log-descent")
            need_poly(t, "poly");
        if (op == "t-operator" || op == "approx-invert") need_list(t, "element");
        if (op == "extend-ah" && t.contains("element")) need_list(t, "element");
        if (op == "extend-cole" || op == "cole-distance") {
            if (!t.contains("polys") || !t["polys"].is_array() || t["polys"].empty())
                throw ParseError("task: 'polys' must be a non-empty array of polynomial names");
            for (const auto& p : t["polys"])
                if (!p.is_string() || !polys_.count(p.get<std::string>()))
                    throw ParseError("task: unknown polynomial " + p.dump());
        }
        if (op == "cole-distance") {
            need_element(t, "f");
            need_list(t, "basis");
        }
        if (op == "log-descent") {
            need_element(t, "f");
            need_list(t, "h");
        }
        if (op == "approx-invert") {
            if (!t.contains("epsilon")) throw ParseError("task: approx-invert needs 'epsilon'");
            const std::string s = t.value("strategy", std::string("direct"));
            if (s != "direct" && s != "chain") throw ParseError("task: strategy must be 'direct' or 'chain'");
        }
        if (op == "tower") {
            if (!t.contains("tests") || !t["tests"].is_array()) throw ParseError("task: 'tests' must be an array");
            for (const auto& e : t["tests"])
                if (!e.is_string() || !elements_.count(e.get<std::string>()))
                    throw ParseError("task: unknown test element " + e.dump());
        }
        if (op == "region-5323") {
            if (t.contains("arc") && !(t["arc"].is_array() && t["arc"].size() == 2))
                throw ParseError("task: 'arc' must be [lo, hi]");
            if (t.contains("arc"))
                for (const auto& a : t["arc"]) constant(a);
            if (t.contains("centre")) constant(t["centre"]);
        }
    }

    friend class Runner;

    std::shared_ptr<const CharacterSpace> space_;
    std::string kind_;
    expr::Environment elements_;
    std::map<std::string, MonicPoly> polys_;
    std::vector<ojson> tasks_;
    std::uint64_t seed_ = 0;
};

class Runner {
   public:
    explicit Runner(const Scenario& s) : s_(s) {}

    RunResult run() const {
        RunResult out;
        const auto& tasks = s_.tasks();
        if (tasks.empty()) return out;
        ojson manifest;
        manifest["format"] = "extalg-manifest";
        manifest["version"] = kFormatVersion;
        manifest["seed"] = s_.seed();
        manifest["space"] = {{"kind", s_.space_kind()}, {"points", s_.space().size()}};
        manifest["tasks"] = ojson::array();
        for (std::size_t k = 0; k < tasks.size(); ++k) {
            TaskOutcome o;
            o.index = k + 1;
            o.op = tasks[k]["op"].get<std::string>();
            try {
                run_task(tasks[k], o);
            } catch (const Error& e) {
                o.ok = false;
                o.failure = e.what();
                o.artifact.reset();
            }
            ojson entry;
            entry["index"] = o.index;
            entry["op"] = o.op;
            entry["status"] = o.ok ? "ok" : "failed";
            if (!o.ok) entry["failure"] = o.failure;
            if (o.artifact) {
                o.artifact->name = detail::two_digits(o.index) + "-" + o.op + o.artifact->name;
                entry["artifact"] = o.artifact->name;
                out.files.push_back(*o.artifact);
            }
            entry["summary"] = o.summary;
            manifest["tasks"].push_back(std::move(entry));
            out.tasks.push_back(std::move(o));
        }
        out.files.push_back({"manifest.json", manifest.dump(2) + "\n"});
        return out;
    }

   private:
    using Expect = ojson;

    // ---- parameter helpers ----

    static double param(const ojson& t, const char* key, double fallback) {
        return t.contains(key) ? Scenario::constant(t[key]).real() : fallback;
    }

    static std::optional<double> opt_param(const ojson& t, const char* key) {
        if (!t.contains(key)) return std::nullopt;
        return Scenario::constant(t[key]).real();
    }

    const Element& element(const ojson& t, const char* key) const {
        return s_.elements().at(t[key].get<std::string>());
    }

    const MonicPoly& poly(const ojson& t, const char* key) const { return s_.polys().at(t[key].get<std::string>()); }

    AHElement ah_element(const AHExtension& ext, const ojson& list) const {
        std::vector<Element> c;
        for (const auto& v : list) c.push_back(s_.evaluate(v));
        if (c.size() > ext.degree())
            throw TaskFailure("element has " + std::to_string(c.size()) + " coefficients, extension degree is " +
                              std::to_string(ext.degree()));
        while (c.size() < ext.degree()) c.push_back(Element::constant(ext.space(), 0.0));
        return AHElement(ext, std::move(c));
    }

    static void expect_near(const std::string& name, double got, double want, double tol) {
        if (!(std::abs(got - want) <= tol))
            throw TaskFailure("expect." + name + ": got " + io::format_number(got) + ", want " +
                              io::format_number(want) + " within " + io::format_number(tol));
    }

    static void expect_equal(const std::string& name, const ojson& got, const ojson& want) {
        if (got != want) throw TaskFailure("expect." + name + ": got " + got.dump() + ", want " + want.dump());
    }

    static void require(bool cond, const std::string& assertion) {
        if (!cond) throw TaskFailure("assertion failed: " + assertion);
    }

    // ---- tasks ----

    void run_task(const ojson& t, TaskOutcome& o) const {
        const Expect ex = t.value("expect", ojson::object());
        const std::string& op = o.op;
        if (op == "report") return report(o);
        if (op == "winding") return winding(t, ex, o);
        if (op == "fibration") return fibration(t, ex, o);
        if (op == "extend-ah") return extend_ah(t, ex, o);
        if (op == "extend-cole") return extend_cole(t, ex, o);
        if (op == "cole-distance") return cole_distance(t, ex, o);
        if (op == "extend-log") return extend_log(t, ex, o);
        if (op == "t-operator") return t_operator(t, ex, o);
        if (op == "approx-invert") return approx_invert(t, o);
        if (op == "log-descent") return descent(t, o);
        if (op == "tower") return tower(t, ex, o);
        if (op == "region-5323") return region(t, ex, o);
        throw TaskFailure("unknown op '" + op + "'");
    }

    void report(TaskOutcome& o) const {
        ojson j;
        j["space"] = {{"kind", s_.space_kind()},
                      {"points", s_.space().size()},
                      {"coords", s_.space().has_coords()},
                      {"loops", s_.space().loops().size()}};
        j["elements"] = ojson::array();
        for (const auto& [name, e] : s_.elements()) {
            ojson el = {{"name", name},
                        {"sup_norm", detail::finite(sup_norm(e), name)},
                        {"min_modulus", detail::finite(min_modulus(e), name)},
                        {"invertible", is_invertible(e)}};
            if (s_.space().has_adjacency() && is_invertible(e) && !s_.space().loops().empty())
                el["windings"] = windings(e);
            j["elements"].push_back(std::move(el));
        }
        j["polys"] = ojson::array();
        for (const auto& [name, p] : s_.polys())
            j["polys"].push_back({{"name", name},
                                  {"degree", p.degree()},
                                  {"min_norm_param", detail::finite(min_norm_param(p), name)}});
        o.summary = {{"elements", s_.elements().size()}, {"polys", s_.polys().size()}};
        o.artifact = Artifact{".json", j.dump(2) + "\n"};
    }

    void winding(const ojson& t, const Expect& ex, TaskOutcome& o) const {
        const auto w = windings(element(t, "element"));
        std::string csv = detail::csv_header("winding", "loop,winding");
        for (std::size_t k = 0; k < w.size(); ++k) csv += "loop" + std::to_string(k) + "," + std::to_string(w[k]) + "\n";
        o.summary = {{"windings", w}};
        o.artifact = Artifact{".csv", csv};
        if (ex.contains("windings")) expect_equal("windings", ojson(w), ex["windings"]);
    }

    void fibration(const ojson& t, const Expect& ex, TaskOutcome& o) const {
        const auto f = build_fibration(poly(t, "poly"));
        const auto top = loop_components(f);
        std::string csv = detail::csv_header("fibration", "character,root_re,root_im,multiplicity,sheet,component");
        for (std::size_t p = 0; p < f.collapsed_size(); ++p) {
            const auto [w, i] = f.collapsed_point(p);
            const auto& c = f.fibre(w)[i];
            csv += f.base().id(w) + "," + detail::num(c.centre.real()) + "," + detail::num(c.centre.imag()) + "," +
                   std::to_string(c.multiplicity) + "," + std::to_string(top.sheet_id[p]) + "," +
                   std::to_string(top.component_id[p]) + "\n";
        }
        std::size_t cyclic = 0;
        for (bool c : top.component_cyclic) cyclic += c ? 1 : 0;
        ojson loops = ojson::array();
        for (const auto& l : top.loops) {
            ojson ids = ojson::array();
            for (auto p : l) ids.push_back(top.space.id(p));
            loops.push_back(std::move(ids));
        }
        o.summary = {{"points", f.collapsed_size()},
                     {"components", top.component_count()},
                     {"loop_components", cyclic},
                     {"loops", std::move(loops)}};
        o.artifact = Artifact{".csv", csv};
        if (ex.contains("components")) expect_equal("components", ojson(top.component_count()), ex["components"]);
        if (ex.contains("loop_components")) expect_equal("loop_components", ojson(cyclic), ex["loop_components"]);
    }

    void extend_ah(const ojson& t, const Expect& ex, TaskOutcome& o) const {
        const AHExtension ext(poly(t, "poly"), opt_param(t, "t"));
        o.summary["t"] = detail::finite(ext.t(), "t");
        o.summary["degree"] = ext.degree();
        o.summary["xbar_norm"] = detail::finite(ah_norm(xbar(ext)), "norm of xbar");
        const AHElement u = t.contains("element") ? ah_element(ext, t["element"]) : xbar(ext);
        const Element R = ah_resultant(u);
        std::string csv = detail::csv_header("extend-ah", "character,resultant_re,resultant_im,invertible");
        const double thr = kInvertibleMargin * std::max(1.0, sup_norm(R));
        for (std::size_t w = 0; w < R.size(); ++w)
            csv += ext.space().id(w) + "," + detail::num(R[w].real()) + "," + detail::num(R[w].imag()) + "," +
                   (std::abs(R[w]) > thr ? "1" : "0") + "\n";
        const bool inv = has_margin(R);
        o.summary["norm"] = detail::finite(ah_norm(u), "norm");
        o.summary["invertible"] = inv;
        if (inv) {
            const AHElement v = ah_invert(u);
            const double res = ah_norm(ah_mul(u, v) - embed(ext, 1.0));
            o.summary["inverse_norm"] = detail::finite(ah_norm(v), "inverse norm");
            o.summary["inverse_residual"] = detail::finite(res, "inverse residual");
            require(res <= 1e-9, "||u v - 1|| <= 1e-9");
        }
        o.artifact = Artifact{".csv", csv};
        if (ex.contains("invertible")) expect_equal("invertible", ojson(inv), ex["invertible"]);
    }

    std::vector<MonicPoly> poly_list(const ojson& t) const {
        std::vector<MonicPoly> out;
        for (const auto& p : t["polys"]) out.push_back(s_.polys().at(p.get<std::string>()));
        return out;
    }

    void extend_cole(const ojson& t, const Expect& ex, TaskOutcome& o) const {
        const auto cap = static_cast<std::size_t>(param(t, "cap", static_cast<double>(kDefaultPointCap)));
        const ColeSpace c = build_cole(s_.space(), poly_list(t), cap);
        std::string cols = "character";
        for (std::size_t j = 0; j < c.polys().size(); ++j) {
            const std::string k = std::to_string(j + 1);
            cols += ",lambda" + k + "_re,lambda" + k + "_im";
        }
        cols += ",multiplicity";
        std::string csv = detail::csv_header("extend-cole", cols);
        // Collapse repeated tuples within each character, first appearance order.
        std::size_t rows = 0;
        for (std::size_t p = 0; p < c.size();) {
            const std::size_t w = c.point(p).character;
            std::size_t q = p;
            while (q < c.size() && c.point(q).character == w) ++q;
            std::vector<std::pair<std::vector<cplx>, std::size_t>> groups;
            for (std::size_t k = p; k < q; ++k) {
                const auto& roots = c.point(k).roots;
                auto same = [&](const std::vector<cplx>& g) {
                    for (std::size_t j = 0; j < roots.size(); ++j)
                        if (std::abs(g[j] - roots[j]) > kRootClusterTolerance) return false;
                    return true;
                };
                auto it = std::find_if(groups.begin(), groups.end(), [&](const auto& g) { return same(g.first); });
                if (it == groups.end())
                    groups.emplace_back(roots, 1);
                else
                    ++it->second;
            }
            for (const auto& [roots, mult] : groups) {
                csv += c.base().id(w);
                for (auto r : roots) csv += "," + detail::num(r.real()) + "," + detail::num(r.imag());
                csv += "," + std::to_string(mult) + "\n";
                ++rows;
            }
            p = q;
        }
        ojson bounds = ojson::array();
        for (std::size_t j = 0; j < c.polys().size(); ++j) bounds.push_back(c.coordinate_bound(j));
        o.summary = {{"points", c.size()}, {"distinct_points", rows}, {"degrees", c.degrees()},
                     {"coordinate_bounds", bounds}};
        o.artifact = Artifact{".csv", csv};
        if (ex.contains("points")) expect_equal("points", ojson(c.size()), ex["points"]);
    }

    void cole_distance(const ojson& t, const Expect& ex, TaskOutcome& o) const {
        const Element& f = element(t, "f");
        std::vector<Element> basis;
        for (const auto& b : t["basis"]) basis.push_back(s_.evaluate(b));
        auto cole = std::make_shared<const ColeSpace>(build_cole(s_.space(), poly_list(t)));
        // span(basis) times the monomials prod_j p_j^{m_j}, m_j < n_j.
        std::vector<Element> lifted;
        const auto degs = cole->degrees();
        std::size_t count = 1;
        for (auto d : degs) count *= d;
        for (const auto& b : basis) {
            for (std::size_t flat = 0; flat < count; ++flat) {
                Element g = cole->pullback(b);
                std::size_t rest = flat;
                for (std::size_t j = degs.size(); j-- > 0;) {
                    const std::size_t m = rest % degs[j];
                    rest /= degs[j];
                    for (std::size_t r = 0; r < m; ++r) g = g * cole->coordinate(j);
                }
                lifted.push_back(std::move(g));
            }
        }
        if (lifted.size() > 64) throw TaskFailure("more than 64 basis vectors after extension");
        const auto before = sup_distance(f, basis);
        const auto after = sup_distance(cole->pullback(f), lifted);
        o.summary = {{"before", detail::finite(before.distance, "distance")},
                     {"before_lower", detail::finite(before.lower, "bound")},
                     {"after", detail::finite(after.distance, "distance")},
                     {"after_lower", detail::finite(after.lower, "bound")},
                     {"basis_before", basis.size()},
                     {"basis_after", lifted.size()}};
        o.artifact = Artifact{".json", o.summary.dump(2) + "\n"};
        const double tol = ex.value("tol", 1e-5);
        if (ex.contains("before")) expect_near("before", before.distance, ex["before"].get<double>(), tol);
        if (ex.contains("after")) expect_near("after", after.distance, ex["after"].get<double>(), tol);
    }

    void extend_log(const ojson& t, const Expect& ex, TaskOutcome& o) const {
        const Element& a = element(t, "element");
        const auto choice = choose_norm_param_log(a);
        const double tv = opt_param(t, "t").value_or(choice.t);
        const auto f = build_log_fibration(a, tv);
        std::string csv = detail::csv_header("extend-log", "character,branch,lambda_re,lambda_im,sheet,component");
        for (std::size_t p = 0; p < f.points.size(); ++p) {
            const auto& pt = f.points[p];
            csv += a.space().id(pt.character) + "," + std::to_string(pt.branch) + "," + detail::num(pt.lambda.real()) +
                   "," + detail::num(pt.lambda.imag()) + "," + std::to_string(f.topology.sheet_id[p]) + "," +
                   std::to_string(f.topology.component_id[p]) + "\n";
        }
        o.summary = {{"t", detail::finite(tv, "t")},
                     {"patches", choice.patches.size()},
                     {"points", f.points.size()},
                     {"components", f.topology.component_count()}};
        o.artifact = Artifact{".csv", csv};
        if (ex.contains("t")) expect_near("t", tv, Scenario::constant(ex["t"]).real(), 1e-12);
        if (ex.contains("components"))
            expect_equal("components", ojson(f.topology.component_count()), ex["components"]);
    }

    void t_operator(const ojson& t, const Expect& ex, TaskOutcome& o) const {
        const AHExtension ext(poly(t, "poly"), opt_param(t, "t"));
        const AveragingOperator op(ext);
        const AHElement u = ah_element(ext, t["element"]);
        const Element tf = t_formula(op, u);
        const Element avg = t_fibre_average(build_fibration(ext.alpha()), u);
        std::string csv = detail::csv_header("t-operator", "character,t_re,t_im,average_re,average_im,difference");
        double worst = 0.0;
        for (std::size_t w = 0; w < tf.size(); ++w) {
            const double d = std::abs(tf[w] - avg[w]);
            worst = std::max(worst, d);
            csv += ext.space().id(w) + "," + detail::num(tf[w].real()) + "," + detail::num(tf[w].imag()) + "," +
                   detail::num(avg[w].real()) + "," + detail::num(avg[w].imag()) + "," + detail::num(d) + "\n";
        }
        const double nu = ah_norm(u), nt = sup_norm(tf);
        o.summary = {{"t", ext.t()},
                     {"contraction_condition", op.condition_ok()},
                     {"norm_u", detail::finite(nu, "norm")},
                     {"norm_t", detail::finite(nt, "norm")},
                     {"max_difference", detail::finite(worst, "difference")}};
        o.artifact = Artifact{".csv", csv};
        require(worst <= 1e-8, "formula and fibre average agree within 1e-8");
        if (op.condition_ok()) require(nt <= nu * (1.0 + 1e-12), "||T(u)|| <= ||u|| under the contraction condition");
        if (ex.contains("max_difference")) require(worst <= ex["max_difference"].get<double>(), "max_difference");
    }

    void approx_invert(const ojson& t, TaskOutcome& o) const {
        const AHExtension ext(poly(t, "poly"), opt_param(t, "t"));
        const AHElement u = ah_element(ext, t["element"]);
        const double eps = param(t, "epsilon", 0.0);
        const std::string strategy = t.value("strategy", std::string("direct"));
        ojson j;
        j["strategy"] = strategy;
        j["epsilon"] = eps;
        std::optional<AHElement> v;
        if (strategy == "direct") {
            v = approx_invertible_direct(u, eps);
        } else {
            const int retries = static_cast<int>(param(t, "retries", 32.0));
            auto res = approx_invertible_chain(u, eps, retries, s_.seed());
            v = res.element;
            ojson steps = ojson::array();
            for (double s : res.trace.step_norms) steps.push_back(detail::finite(s, "step"));
            j["seed"] = res.trace.seed;
            j["draws"] = res.trace.draws;
            j["step_norms"] = std::move(steps);
        }
        const double dist = ah_norm(*v - u);
        const Element R = ah_resultant(*v);
        bool only_b0 = true;
        for (std::size_t k = 1; k < u.degree(); ++k) only_b0 = only_b0 && sup_norm(v->coeff(k) - u.coeff(k)) == 0.0;
        j["distance"] = detail::finite(dist, "distance");
        j["min_resultant"] = detail::finite(min_modulus(R), "resultant");
        j["invertible"] = has_margin(R);
        j["b0"] = ojson::array();
        for (std::size_t w = 0; w < R.size(); ++w)
            j["b0"].push_back({{"character", ext.space().id(w)},
                               {"re", detail::finite(v->coeff(0)[w].real(), "b0")},
                               {"im", detail::finite(v->coeff(0)[w].imag(), "b0")}});
        o.summary = {{"distance", dist}, {"invertible", has_margin(R)}};
        o.artifact = Artifact{".json", j.dump(2) + "\n"};
        require(only_b0, "only b0 changes");
        require(dist < eps, "||v - u|| < epsilon");
        require(has_margin(R), "resultant of the approximation is invertible");
    }

    void descent(const ojson& t, TaskOutcome& o) const {
        const AHExtension ext(poly(t, "poly"), opt_param(t, "t"));
        const AveragingOperator op(ext);
        const AHElement h = ah_element(ext, t["h"]);
        const Element& f = element(t, "f");
        const auto res = log_descent(f, h, op);
        std::string csv = detail::csv_header("log-descent", "character,log_re,log_im,class");
        for (std::size_t w = 0; w < f.size(); ++w)
            csv += f.space().id(w) + "," + detail::num(res.log[w].real()) + "," + detail::num(res.log[w].imag()) + "," +
                   std::to_string(res.classes[w]) + "\n";
        const double err = sup_norm(exp_elem(res.log) - f);
        o.summary = {{"error", detail::finite(err, "error")}};
        o.artifact = Artifact{".csv", csv};
        require(err <= 1e-8, "max |exp(g) - f| <= 1e-8");
    }

    void tower(const ojson& t, const Expect& ex, TaskOutcome& o) const {
        std::vector<Element> tests;
        for (const auto& e : t["tests"]) tests.push_back(s_.elements().at(e.get<std::string>()));
        const auto rounds = static_cast<std::size_t>(param(t, "rounds", 1.0));
        const auto samples = static_cast<std::size_t>(param(t, "samples", 4.0));
        const auto res = log_tower(s_.space(), tests, rounds, samples, s_.seed());
        ojson j;
        j["seed"] = s_.seed();
        j["rounds"] = ojson::array();
        for (const auto& r : res.rounds)
            j["rounds"].push_back({{"round", r.round},
                                   {"adjoined", r.adjoined},
                                   {"coverage", detail::finite(r.coverage, "coverage")},
                                   {"points", r.points},
                                   {"t_max", detail::finite(r.t_max, "t")},
                                   {"max_winding", r.max_winding}});
        j["stages"] = ojson::array();
        for (std::size_t k = 0; k <= res.tower.height(); ++k) {
            const auto& st = res.tower.stage(k);
            j["stages"].push_back({{"label", st.label}, {"t", st.t}, {"points", st.space.size()}});
        }
        for (std::size_t k = 1; k < res.rounds.size(); ++k)
            require(res.rounds[k].coverage >= res.rounds[k - 1].coverage, "coverage is nondecreasing");
        const auto& last = res.rounds.back();
        o.summary = {{"final_coverage", last.coverage}, {"final_winding", last.max_winding},
                     {"height", res.tower.height()}};
        o.artifact = Artifact{".json", j.dump(2) + "\n"};
        if (ex.contains("final_coverage")) expect_near("final_coverage", last.coverage, ex["final_coverage"].get<double>(), 0.0);
        if (ex.contains("final_winding")) expect_equal("final_winding", ojson(last.max_winding), ex["final_winding"]);
    }

    void region(const ojson& t, const Expect& ex, TaskOutcome& o) const {
        const double tv = param(t, "t", kTwoPi);
        double lo = -kPi / 2.0, hi = kPi / 2.0;
        if (t.contains("arc")) {
            lo = Scenario::constant(t["arc"][0]).real();
            hi = Scenario::constant(t["arc"][1]).real();
        }
        const cplx c = t.contains("centre") ? Scenario::constant(t["centre"]) : cplx(0.0, kTwoPi);
        const double r = param(t, "radius", kPi / 4.0);
        const auto arcs = example_region(tv, lo, hi, c, r);
        ojson j;
        j["t"] = tv;
        j["arcs"] = ojson::array();
        for (const auto& a : arcs)
            j["arcs"].push_back({{"lo", a.lo}, {"hi", a.hi}, {"lo_closed", a.lo_closed}, {"hi_closed", a.hi_closed}});
        o.summary = {{"arcs", arcs.size()}};
        o.artifact = Artifact{".json", j.dump(2) + "\n"};
        const double tol = ex.value("tol", 1e-12);
        if (ex.contains("lo") || ex.contains("hi") || ex.contains("lo_closed") || ex.contains("hi_closed"))
            require(arcs.size() == 1, "region is a single arc");
        if (ex.contains("lo")) expect_near("lo", arcs[0].lo, Scenario::constant(ex["lo"]).real(), tol);
        if (ex.contains("hi")) expect_near("hi", arcs[0].hi, Scenario::constant(ex["hi"]).real(), tol);
        if (ex.contains("lo_closed")) expect_equal("lo_closed", ojson(arcs[0].lo_closed), ex["lo_closed"]);
        if (ex.contains("hi_closed")) expect_equal("hi_closed", ojson(arcs[0].hi_closed), ex["hi_closed"]);
    }

    const Scenario& s_;
};

inline RunResult run(const Scenario& s) { return Runner(s).run(); }

/// Writes every file of `r` into `dir` (created if missing).
inline void write_artifacts(const RunResult& r, const std::string& dir) {
    std::filesystem::create_directories(dir);
    for (const auto& f : r.files) {
        std::ofstream out(std::filesystem::path(dir) / f.name, std::ios::binary);
        if (!out) throw TaskFailure("cannot write '" + f.name + "' in '" + dir + "'");
        out << f.content;
    }
}

}  // namespace extalg::scenario

#endif  // EXTALG_SCENARIO_HPP
