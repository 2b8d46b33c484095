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

// extalg: runs scenario files, or single tasks against a scenario's space,
// elements and polynomials.
//
// Exit codes: 0 when every task passes, 1 when a task fails, 2 on bad input.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "extalg/scenario.hpp"

namespace {

using extalg::scenario::ojson;

struct Options {
    std::string scenario;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::string poly;
    std::vector<std::string> polys;
    std::string element;
    std::vector<std::string> coeffs;
    std::string f;
    std::vector<std::string> h;
    std::vector<std::string> tests;
    std::vector<std::string> basis;
    std::optional<std::string> t;
    std::optional<std::string> epsilon;
    std::string strategy = "direct";
    int retries = 32;
    int rounds = 1;
    int samples = 4;
};

// A one-point space for tasks that need no scenario.
constexpr const char* kBareScenario = R"({"version": 1, "space": {"kind": "explicit", "points": ["o"]}})";

int emit(const extalg::scenario::RunResult& r, const std::string& out, bool print_manifest) {
    if (!out.empty()) {
        extalg::scenario::write_artifacts(r, out);
    } else {
        for (const auto& f : r.files) {
            const bool manifest = f.name == "manifest.json";
            if (manifest == print_manifest) std::cout << f.content;
        }
    }
    for (const auto& t : r.tasks)
        if (!t.ok) std::cerr << "task " << t.index << " (" << t.op << ") failed: " << t.failure << "\n";
    return r.ok() ? 0 : 1;
}

int run_single(const Options& o, ojson task, bool needs_scenario = true) {
    auto s = (needs_scenario || !o.scenario.empty())
                 ? extalg::scenario::Scenario::from_file(o.scenario)
                 : extalg::scenario::Scenario::from_text(kBareScenario);
    if (o.seed) s.set_seed(*o.seed);
    std::vector<ojson> tasks;
    tasks.push_back(std::move(task));
    s.set_tasks(std::move(tasks));
    return emit(extalg::scenario::run(s), o.out, false);
}

void put_optional(ojson& task, const char* key, const std::optional<std::string>& v) {
    if (v) task[key] = *v;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Extensions of commutative algebras modelled on finite character spaces"};
    app.require_subcommand(1);
    Options o;

    auto scenario_opt = [&](CLI::App* sub, bool required = true) {
        auto* opt = sub->add_option("--scenario", o.scenario, "scenario JSON supplying space, elements, polys");
        if (required) opt->required();
        sub->add_option("--out", o.out, "output directory (default: print to stdout)");
        sub->add_option("--seed", o.seed, "override the scenario seed");
    };

    auto* run = app.add_subcommand("run", "run every task of a scenario file");
    run->add_option("scenario", o.scenario, "scenario JSON")->required();
    run->add_option("--out", o.out, "output directory (default: print the manifest)");
    run->add_option("--seed", o.seed, "override the scenario seed");

    auto* extend = app.add_subcommand("extend", "build an extension");
    extend->require_subcommand(1);
    auto* ah = extend->add_subcommand("ah", "Arens-Hoffman extension: resultants and inversion");
    scenario_opt(ah);
    ah->add_option("--poly", o.poly, "polynomial name")->required();
    ah->add_option("--t", o.t, "norm parameter (default: minimal)");
    ah->add_option("--element", o.coeffs, "coefficients b_0.. of the element (default: xbar)");
    auto* cole = extend->add_subcommand("cole", "Cole extension by one or more polynomials");
    scenario_opt(cole);
    cole->add_option("--poly", o.polys, "polynomial names")->required();
    auto* logx = extend->add_subcommand("log", "logarithmic extension of an invertible element");
    scenario_opt(logx);
    logx->add_option("--element", o.element, "element name")->required();
    logx->add_option("--t", o.t, "norm parameter (default: chosen from the element)");

    auto* fib = app.add_subcommand("fibration", "fibration, sheets and loop components");
    scenario_opt(fib);
    fib->add_option("--poly", o.poly, "polynomial name")->required();

    auto* top = app.add_subcommand("t-operator", "averaging operator against fibre averages");
    scenario_opt(top);
    top->add_option("--poly", o.poly, "polynomial name")->required();
    top->add_option("--element", o.coeffs, "coefficients b_0..")->required();
    top->add_option("--t", o.t, "norm parameter");

    auto* approx = app.add_subcommand("approx-invert", "invertible approximation by perturbing b_0");
    scenario_opt(approx);
    approx->add_option("--poly", o.poly, "polynomial name")->required();
    approx->add_option("--element", o.coeffs, "coefficients b_0..")->required();
    approx->add_option("--epsilon", o.epsilon, "approximation radius")->required();
    approx->add_option("--strategy", o.strategy, "direct or chain");
    approx->add_option("--retries", o.retries, "redraws per chain step");
    approx->add_option("--t", o.t, "norm parameter");

    auto* descent = app.add_subcommand("log-descent", "descend a logarithm from an extension");
    descent->set_help_flag("--help", "print this help");  // -h would clash with --h
    scenario_opt(descent);
    descent->add_option("--poly", o.poly, "polynomial name")->required();
    descent->add_option("--f", o.f, "invertible element name")->required();
    descent->add_option("--h", o.h, "coefficients of h with exp(h) = f")->required();
    descent->add_option("--t", o.t, "norm parameter");

    auto* wind = app.add_subcommand("winding", "winding numbers of an element around each loop");
    scenario_opt(wind);
    wind->add_option("--element", o.element, "element name")->required();

    auto* tower = app.add_subcommand("tower", "iterated logarithmic extensions");
    scenario_opt(tower);
    tower->add_option("--tests", o.tests, "test element names")->required();
    tower->add_option("--rounds", o.rounds, "rounds (at most 4)");
    tower->add_option("--samples", o.samples, "samples per round (at most 32)");

    auto* region = app.add_subcommand("region-5323", "projection of the region W on the circle");
    scenario_opt(region, false);
    region->add_option("--t", o.t, "norm parameter (default 2 pi)");

    auto* report = app.add_subcommand("report", "summary of a scenario's space, elements and polys");
    scenario_opt(report);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*run) {
            auto s = extalg::scenario::Scenario::from_file(o.scenario);
            if (o.seed) s.set_seed(*o.seed);
            return emit(extalg::scenario::run(s), o.out, true);
        }
        ojson task;
        if (*ah) {
            task = {{"op", "extend-ah"}, {"poly", o.poly}};
            put_optional(task, "t", o.t);
            if (!o.coeffs.empty()) task["element"] = o.coeffs;
        } else if (*cole) {
            task = {{"op", "extend-cole"}, {"polys", o.polys}};
        } else if (*logx) {
            task = {{"op", "extend-log"}, {"element", o.element}};
            put_optional(task, "t", o.t);
        } else if (*fib) {
            task = {{"op", "fibration"}, {"poly", o.poly}};
        } else if (*top) {
            task = {{"op", "t-operator"}, {"poly", o.poly}, {"element", o.coeffs}};
            put_optional(task, "t", o.t);
        } else if (*approx) {
            task = {{"op", "approx-invert"}, {"poly", o.poly}, {"element", o.coeffs}, {"epsilon", *o.epsilon},
                    {"strategy", o.strategy}, {"retries", o.retries}};
            put_optional(task, "t", o.t);
        } else if (*descent) {
            task = {{"op", "log-descent"}, {"poly", o.poly}, {"f", o.f}, {"h", o.h}};
            put_optional(task, "t", o.t);
        } else if (*wind) {
            task = {{"op", "winding"}, {"element", o.element}};
        } else if (*tower) {
            task = {{"op", "tower"}, {"tests", o.tests}, {"rounds", o.rounds}, {"samples", o.samples}};
        } else if (*region) {
            task = {{"op", "region-5323"}};
            put_optional(task, "t", o.t);
            return run_single(o, std::move(task), false);
        } else if (*report) {
            task = {{"op", "report"}};
        }
        return run_single(o, std::move(task));
    } catch (const extalg::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const extalg::Error& e) {
        std::cerr << e.what() << "\n";
        return 1;
    }
}
