// Copyright 2026 The ncflow Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// ncflow: simulate | spectrum | track | verify
//
// A --config JSON manifest is loaded first; any flag given on the command
// line then overrides the matching key.

#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "ncflow/cli.hpp"

namespace {

// Flag values land here untyped-by-presence; only flags the user passed are
// copied onto the config JSON.
struct Overrides {
    std::string config;
    std::map<std::string, std::string> text;
    std::map<std::string, double> real;
    std::map<std::string, long long> integer;
    std::vector<std::string> format;
};

void add_flags(CLI::App& app, Overrides& ov) {
    app.add_option("--config", ov.config, "JSON run manifest")->check(CLI::ExistingFile);
    for (const char* key : {"initial", "out", "geometry"})
        app.add_option(std::string("--") + key, ov.text[key]);
    for (const char* key : {"n", "m", "seed", "fd-stride", "n-max"})
        app.add_option(std::string("--") + key, ov.integer[key]);
    for (const char* key : {"t0", "t1", "rel-tol", "abs-tol", "max-step", "min-step", "initial-step",
                            "stride", "positivity-floor", "time", "overlap-min", "gap-threshold",
                            "residual-threshold"})
        app.add_option(std::string("--") + key, ov.real[key]);
    app.add_option("--format", ov.format, "output formats: csv,json")->delimiter(',');
}

std::string json_key(std::string flag) {
    for (auto& ch : flag)
        if (ch == '-') ch = '_';
    return flag;
}

ncflow::RunConfig build_config(const CLI::App& sub, const Overrides& ov) {
    ncflow::Json j = ov.config.empty() ? ncflow::Json::object() : ncflow::read_json_file(ov.config);
    auto given = [&sub](const std::string& flag) { return sub.count("--" + flag) > 0; };
    for (const auto& [k, v] : ov.text)
        if (given(k)) j[json_key(k)] = v;
    for (const auto& [k, v] : ov.integer)
        if (given(k)) j[json_key(k)] = v;
    for (const auto& [k, v] : ov.real)
        if (given(k)) j[json_key(k)] = v;
    if (given("format")) j["format"] = ov.format;
    return ncflow::run_config_from_json(j);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Ricci flow and Laplace-Beltrami spectra on the fuzzy torus"};
    app.require_subcommand(1);

    using Command = ncflow::CommandResult (*)(const ncflow::RunConfig&);
    const std::pair<const char*, Command> commands[] = {
        {"simulate", ncflow::cmd_simulate},
        {"spectrum", ncflow::cmd_spectrum},
        {"track", ncflow::cmd_track},
        {"verify", ncflow::cmd_verify},
    };
    const char* help[] = {
        "integrate the flow and write the trajectory",
        "Laplace-Beltrami spectrum of the metric at --time",
        "track eigenvalue curves and check the first variation",
        "run the invariant suite for all (n, m) with n <= n-max",
    };
    std::map<std::string, Overrides> overrides;
    std::vector<CLI::App*> subs;
    for (std::size_t i = 0; i < std::size(commands); ++i) {
        CLI::App* sub = app.add_subcommand(commands[i].first, help[i]);
        add_flags(*sub, overrides[commands[i].first]);
        subs.push_back(sub);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : ncflow::kExitInvalidInput;
    }

    for (std::size_t i = 0; i < subs.size(); ++i) {
        if (!subs[i]->parsed()) continue;
        try {
            const ncflow::RunConfig cfg = build_config(*subs[i], overrides[commands[i].first]);
            const ncflow::CommandResult result = commands[i].second(cfg);
            std::cout << result.summary.dump(2) << '\n';
            return result.exit_code;
        } catch (const ncflow::Error& e) {
            std::cerr << ncflow::error_json(e).dump() << '\n';
            return ncflow::exit_code_for(e.kind());
        }
    }
    return ncflow::kExitInvalidInput;
}
