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
#include <map>
#include <string>
#include <vector>

#include "cpmsim/consolidation.hpp"
#include "cpmsim/model.hpp"
#include "cpmsim/timing.hpp"

namespace cpmsim {

/// Flat power model: every active host burns pmax_w, idle hosts are off.
struct PowerModel {
    double pmax_w = 250.0;
};

enum class SlaHorizon { Day, Month, Year };

/// Availability target. year_minutes defaults to 365.25 days; a month is a
/// twelfth of that year.
struct SlaSpec {
    double level = 0.9999;
    SlaHorizon horizon = SlaHorizon::Year;
    double year_minutes = 525960.0;

    bool operator==(const SlaSpec&) const = default;
};

struct SlaViolations {
    int count = 0;
    std::vector<Id> offenders; // ascending id order
};

/// One simulation run flattened to the report row. Label fields (scenario,
/// mode, threshold, seed, bins_used) are the caller's context; the metric
/// fields are computed by build_report.
struct RunReport {
    std::string scenario;
    std::string mode;
    double threshold = 1.0;
    std::uint32_t seed = 0;
    int bins_used = 0;
    int hosts_before = 0;
    int hosts_after = 0;
    double power_w_before = 0.0;
    double power_w_after = 0.0;
    int vm_moves = 0;
    int cnt_moves = 0;
    double total_migration_s = 0.0;
    double sum_downtime_s = 0.0;
    double max_downtime_s = 0.0;
    double sla_level = 0.9999;
    int sla_violations = 0;

    bool operator==(const RunReport&) const = default;
};

/// pmax_w times the active host count.
double power(int active_host_count, const PowerModel& model);

/// Downtime budget in seconds: (1 - level) times the horizon length.
double allowed_downtime(const SlaSpec& sla);

/// Containers whose accumulated migration downtime exceeds the budget.
SlaViolations sla_violations(const std::map<Id, double>& per_container_downtime_s,
                             const SlaSpec& sla);

/// Downtime each container accrued under the plan: container moves hit the
/// moved container; a VM move hits every container riding the VM at that
/// point in the sequence.
std::map<Id, double> container_downtime(const DatacenterState& before,
                                        const MigrationPlan& plan,
                                        const PlanTiming& timing);

/// Replays plan over before: moves in order, then freed VMs deallocated and
/// freed hosts switched off. What committed drains do to a state.
DatacenterState replay_plan(const DatacenterState& before, const MigrationPlan& plan);

/// Assembles the metric fields of a report and cross-checks that plan and
/// timing really describe the transition from before to after.
RunReport build_report(const DatacenterState& before, const DatacenterState& after,
                       const MigrationPlan& plan, const PlanTiming& timing,
                       const SlaSpec& sla, const PowerModel& model);

/// CSV rendering of a report: fixed header and one row. Floats use %.9g so
/// rows are byte-identical across runs and platforms.
std::string report_csv_header();
std::string report_csv_row(const RunReport& report);

/// %.9g float rendering shared by every text emitter.
std::string fmt_double(double value);

} // namespace cpmsim
