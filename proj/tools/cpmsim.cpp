/*
 * cpmsim - container placement and migration simulator
 * Copyright (c) The cpmsim Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 */

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "cpmsim/errors.hpp"
#include "cpmsim/runner.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw cpmsim::IoError("cannot read scenario file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) throw cpmsim::IoError("read failed for '" + path + "'");
    return buffer.str();
}

cpmsim::OutputFormat to_format(const std::string& name) {
    if (name == "csv") return cpmsim::OutputFormat::Csv;
    if (name == "json") return cpmsim::OutputFormat::Json;
    return cpmsim::OutputFormat::Both;
}

cpmsim::SweepSpec parse_range(const std::string& text) {
    cpmsim::SweepSpec spec;
    char trailing = 0;
    int fields = std::sscanf(text.c_str(), "%lf:%lf:%lf%c", &spec.from, &spec.to,
                             &spec.step, &trailing);
    if (fields != 3) throw cpmsim::UsageError("--thresholds wants FROM:TO:STEP");
    return spec;
}

void report_error(const std::exception& e) {
    std::cerr << "cpmsim: " << e.what() << "\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"datacenter container placement and migration simulator"};
    app.require_subcommand(1);

    std::string scenario_path;
    std::string out_dir = ".";
    std::string format = "both";
    std::string algo = "ffd";
    std::string mode = "container";
    std::string range;
    std::optional<double> threshold;
    std::optional<std::uint32_t> seed;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--scenario", scenario_path, "scenario file (JSON)")->required();
        sub->add_option("--out", out_dir, "output directory (default: current)");
        sub->add_option("--format", format, "csv, json or both")
            ->check(CLI::IsMember({"csv", "json", "both"}));
    };

    CLI::App* place = app.add_subcommand("place", "pack containers onto vms");
    add_common(place);
    place->add_option("--algo", algo, "ffd or random")
        ->check(CLI::IsMember({"ffd", "random"}));
    place->add_option("--threshold", threshold, "ram fraction usable per bin");
    place->add_option("--seed", seed, "rng seed for the random baseline");

    CLI::App* consolidate = app.add_subcommand("consolidate", "drain coldspot hosts");
    add_common(consolidate);
    consolidate->add_option("--mode", mode, "vm or container")
        ->check(CLI::IsMember({"vm", "container"}));
    consolidate->add_option("--threshold", threshold, "ram fraction usable per bin");

    CLI::App* sweep = app.add_subcommand("sweep", "bin counts across a threshold range");
    add_common(sweep);
    sweep->add_option("--thresholds", range, "inclusive range FROM:TO:STEP")->required();

    CLI::App* timing = app.add_subcommand("timing", "migration timing per entity size");
    add_common(timing);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        cpmsim::Scenario scenario = cpmsim::parse_scenario(read_file(scenario_path));
        cpmsim::RunOutput output;
        if (place->parsed()) {
            cpmsim::PlaceOptions options;
            options.algo = algo == "random" ? cpmsim::PlaceAlgo::Random : cpmsim::PlaceAlgo::Ffd;
            options.threshold = threshold;
            options.seed = seed;
            options.format = to_format(format);
            output = cpmsim::run_place(scenario, options);
        } else if (consolidate->parsed()) {
            cpmsim::ConsolidateOptions options;
            options.mode = mode == "vm" ? cpmsim::ConsolidationMode::VmMigration
                                        : cpmsim::ConsolidationMode::ContainerMigration;
            options.threshold = threshold;
            options.format = to_format(format);
            output = cpmsim::run_consolidate(scenario, options);
        } else if (sweep->parsed()) {
            output = cpmsim::run_sweep(scenario, parse_range(range));
        } else {
            output = cpmsim::run_timing(scenario);
        }
        cpmsim::write_outputs(output, out_dir);
        for (const cpmsim::OutputFile& file : output.files)
            std::cout << (std::filesystem::path(out_dir) / file.filename).string() << "\n";
        return 0;
    } catch (const cpmsim::ParseError& e) {
        report_error(e);
        return 2;
    } catch (const cpmsim::UsageError& e) {
        report_error(e);
        return 2;
    } catch (const cpmsim::InfeasibleError& e) {
        report_error(e);
        return 3;
    } catch (const cpmsim::IoError& e) {
        report_error(e);
        return 4;
    } catch (const std::exception& e) {
        report_error(e);
        return 1;
    }
}
