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

#include <gtest/gtest.h>

#include <cmath>
#include <string>

#include "oracles.hpp"

using namespace extalg;
namespace sc = extalg::scenario;

namespace {

std::string scenario_path(const std::string& name) { return std::string(EXTALG_SCENARIO_DIR) + "/" + name; }

const sc::Artifact* find_file(const sc::RunResult& r, const std::string& name) {
    for (const auto& f : r.files)
        if (f.name == name) return &f;
    return nullptr;
}

sc::Scenario circle_with(const std::string& tasks) {
    return sc::Scenario::from_text(R"({"version": 1, "space": {"kind": "circle", "resolution": 32},
        "elements": {"id": "z"}, "tasks": )" + tasks + "}");
}

}  // namespace

TEST(Expr, Constants) {
    EXPECT_NEAR(std::abs(expr::evaluate_constant("2 + 3*i") - cplx(2, 3)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(expr::evaluate_constant("-pi/4") + kPi / 4), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(expr::evaluate_constant("exp(pi*i)") + 1.0), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(expr::evaluate_constant("2^10") - 1024.0), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(expr::evaluate_constant("2^-2") - 0.25), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(expr::evaluate_constant("e") - std::exp(1.0)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(expr::evaluate_constant("1.5e2") - 150.0), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(expr::evaluate_constant("-(1 - 2)*3") - 3.0), 0.0, 1e-15);
}

TEST(Expr, Errors) {
    for (const char* bad : {"", "1 +", "(1", "foo", "1 / 0", "2^0.5", "2^100", "z", "1 2", "exp 1"})
        EXPECT_THROW(expr::evaluate_constant(bad), ParseError) << bad;
}

TEST(Expr, OnASpace) {
    const auto s = spaces::circle(8);
    const Element z = Element::coordinate(s);
    expr::Environment env{{"a", 2.0 * z}};
    EXPECT_LE(sup_norm(expr::evaluate("z^2 - a", s, env) - (z * z - 2.0 * z)), 1e-15);
    EXPECT_LE(sup_norm(expr::evaluate("exp(pi*i*t)", s, env) -
                       z.map([](cplx w) { return std::exp(cplx(0.0, kPi * w.real())); })),
              1e-15);
    EXPECT_LE(sup_norm(expr::evaluate("1/z", s) - invert(z)), 1e-15);
    EXPECT_THROW(expr::evaluate("b", s, env), ParseError);
}

TEST(Scenario, ParsesSamples) {
    for (const char* name : {"circle_winding.json", "circle_example.json", "empty.json", "cole_constants.json",
                             "log_circle.json", "tour.json"})
        EXPECT_NO_THROW(sc::Scenario::from_file(scenario_path(name))) << name;
}

TEST(Scenario, ParseErrors) {
    const char* bad[] = {
        "not json",
        "[]",
        R"({"version": 2, "space": {"kind": "circle", "resolution": 8}})",
        R"({"version": 1})",
        R"({"version": 1, "space": {"kind": "torus"}})",
        R"({"version": 1, "space": {"kind": "circle", "resolution": 2}})",
        R"({"version": 1, "space": {"kind": "circle", "resolution": 8}, "colour": 1})",
        R"({"version": 1, "space": {"kind": "circle", "resolution": 8}, "elements": {"z": "1"}})",
        R"({"version": 1, "space": {"kind": "circle", "resolution": 8}, "elements": {"a": "q"}})",
        R"({"version": 1, "space": {"kind": "circle", "resolution": 8}, "tasks": [{"op": "fly"}]})",
        R"({"version": 1, "space": {"kind": "circle", "resolution": 8}, "tasks": [{"op": "winding", "element": "nope"}]})",
        R"({"version": 1, "space": {"kind": "circle", "resolution": 8}, "tasks": [{"op": "winding"}]})",
        R"({"version": 1, "space": {"kind": "circle", "resolution": 8}, "elements": {"a": "z"},
            "tasks": [{"op": "winding", "element": "a", "expect": {"colour": 1}}]})",
        R"({"version": 1, "space": {"kind": "circle", "resolution": 8}, "polys": {"p": {"lower": []}}})",
    };
    for (const char* text : bad) EXPECT_THROW(sc::Scenario::from_text(text), ParseError) << text;
    EXPECT_THROW(sc::Scenario::from_file("/nonexistent/scenario.json"), ParseError);
}

TEST(Runner, EmptyTaskListWritesNothing) {
    const auto r = sc::run(sc::Scenario::from_file(scenario_path("empty.json")));
    EXPECT_TRUE(r.files.empty());
    EXPECT_TRUE(r.ok());
}

TEST(Runner, WindingArtifactAndManifest) {
    const auto r = sc::run(sc::Scenario::from_file(scenario_path("circle_winding.json")));
    ASSERT_TRUE(r.ok());
    const auto* csv = find_file(r, "01-winding.csv");
    ASSERT_NE(csv, nullptr);
    EXPECT_EQ(csv->content.rfind("# extalg winding v1\n", 0), 0u);
    EXPECT_NE(csv->content.find("loop0,1"), std::string::npos);
    const auto* man = find_file(r, "manifest.json");
    ASSERT_NE(man, nullptr);
    const auto j = nlohmann::json::parse(man->content);
    EXPECT_EQ(j["format"], "extalg-manifest");
    EXPECT_EQ(j["tasks"][0]["status"], "ok");
    EXPECT_EQ(j["tasks"][0]["artifact"], "01-winding.csv");
}

TEST(Runner, FailedExpectationIsReported) {
    const auto r = sc::run(circle_with(R"([{"op": "winding", "element": "id", "expect": {"windings": [2]}},
                                           {"op": "report"}])"));
    EXPECT_FALSE(r.ok());
    ASSERT_EQ(r.tasks.size(), 2u);
    EXPECT_FALSE(r.tasks[0].ok);
    EXPECT_NE(r.tasks[0].failure.find("expect.windings"), std::string::npos);
    EXPECT_TRUE(r.tasks[1].ok);
}

TEST(Runner, LibraryErrorFailsOnlyThatTask) {
    // z - 1 vanishes at the first sample point.
    const auto s = sc::Scenario::from_text(R"({"version": 1, "space": {"kind": "circle", "resolution": 32},
        "elements": {"bad": "z - 1", "id": "z"},
        "tasks": [{"op": "winding", "element": "bad"}, {"op": "winding", "element": "id"}]})");
    const auto r = sc::run(s);
    ASSERT_EQ(r.tasks.size(), 2u);
    EXPECT_FALSE(r.tasks[0].ok);
    EXPECT_NE(r.tasks[0].failure.find("NotInvertibleOnLoop"), std::string::npos);
    EXPECT_TRUE(r.tasks[1].ok);
}

TEST(Runner, AllSamplesPass) {
    for (const char* name : {"circle_winding.json", "circle_example.json", "cole_constants.json", "log_circle.json",
                             "tour.json"}) {
        const auto r = sc::run(sc::Scenario::from_file(scenario_path(name)));
        for (const auto& t : r.tasks) EXPECT_TRUE(t.ok) << name << " task " << t.index << ": " << t.failure;
    }
}

TEST(Runner, Deterministic) {
    const auto s = sc::Scenario::from_file(scenario_path("tour.json"));
    const auto a = sc::run(s), b = sc::run(s);
    ASSERT_EQ(a.files.size(), b.files.size());
    for (std::size_t k = 0; k < a.files.size(); ++k) {
        EXPECT_EQ(a.files[k].name, b.files[k].name);
        EXPECT_EQ(a.files[k].content, b.files[k].content);
    }
}

TEST(Runner, SeedChangesOnlySeededOutput) {
    auto s = sc::Scenario::from_file(scenario_path("circle_winding.json"));
    const auto a = sc::run(s);
    s.set_seed(99);
    const auto b = sc::run(s);
    EXPECT_EQ(find_file(a, "01-winding.csv")->content, find_file(b, "01-winding.csv")->content);
    EXPECT_NE(find_file(a, "manifest.json")->content, find_file(b, "manifest.json")->content);
}

TEST(Runner, SetTasksValidates) {
    auto s = circle_with("[]");
    EXPECT_THROW(s.set_tasks({sc::ojson{{"op", "winding"}, {"element", "missing"}}}), ParseError);
    s.set_tasks({sc::ojson{{"op", "winding"}, {"element", "id"}}});
    EXPECT_TRUE(sc::run(s).ok());
}
