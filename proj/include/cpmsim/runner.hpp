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

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cpmsim/consolidation.hpp"
#include "cpmsim/metrics.hpp"
#include "cpmsim/placement.hpp"
#include "cpmsim/scenario.hpp"
#include "cpmsim/timing.hpp"

namespace cpmsim {

enum class OutputFormat { Csv, Json, Both };

/// A rendered artifact, ready to land in the output directory.
struct OutputFile {
    std::string filename;
    std::string content;
};

struct SweepRow {
    double threshold = 0.0;
    int lower_bound_bins = 0;
    int ffd_bins = 0;

    bool operator==(const SweepRow&) const = default;
};

struct TimingRow {
    Id id;
    MoveKind kind = MoveKind::ContainerMove;
    std::int64_t size_mb = 0;
    int rounds = 0;
    double downtime_s = 0.0;
    double total_s = 0.0;
};

/// Everything a command produced. Commands fill the sections they use and
/// leave the rest default; files holds the text artifacts in emit order.
struct RunOutput {
    RunReport report;
    PlacementResult containers; // container -> vm assignment (placement runs)
    PlacementResult hosts;      // vm -> host assignment, informational
    MigrationPlan plan;         // consolidation runs
    PlanTiming timing;
    std::vector<SweepRow> sweep;
    std::vector<TimingRow> timings;
    std::vector<OutputFile> files;
};

struct PlaceOptions {
    PlaceAlgo algo = PlaceAlgo::Ffd;
    std::optional<double> threshold; // overrides the scenario value
    std::optional<std::uint32_t> seed;
    OutputFormat format = OutputFormat::Both;
};

struct ConsolidateOptions {
    ConsolidationMode mode = ConsolidationMode::ContainerMigration;
    std::optional<double> threshold;
    OutputFormat format = OutputFormat::Both;
};

/// Packs the scenario's containers onto an open-ended supply of VMs cloned
/// from the scenario's VM template, then stacks those VMs onto the declared
/// hosts as an informational second stage. Throws UsageError when the
/// scenario declares no VM template and InfeasibleError when a container
/// fits no empty VM at the threshold.
RunOutput run_place(const Scenario& scenario, const PlaceOptions& options);

/// Consolidates the scenario's explicit layout and reports the transition.
/// Throws UsageError when the scenario has no complete layout or the
/// starting layout breaks the effective threshold.
RunOutput run_consolidate(const Scenario& scenario, const ConsolidateOptions& options);

/// Evaluates lower_bound and FFD bin counts across an inclusive threshold
/// range. Throws UsageError on an empty or out-of-range sweep.
RunOutput run_sweep(const Scenario& scenario, const SweepSpec& sweep);

/// One migration timing row per distinct VM RAM size and per distinct
/// container resident size, in first-appearance order.
RunOutput run_timing(const Scenario& scenario);

/// Writes output.files under dir, creating the directory when missing.
/// Throws IoError naming the path on failure.
void write_outputs(const RunOutput& output, const std::string& dir);

} // namespace cpmsim
