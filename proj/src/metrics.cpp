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

#include "cpmsim/metrics.hpp"

#include <algorithm>
#include <cstdio>

#include "cpmsim/errors.hpp"

namespace cpmsim {

namespace {

void check_sla(const SlaSpec& sla) {
    if (!(sla.level > 0.0) || !(sla.level < 1.0))
        throw DomainError("sla: level must be in (0, 1)");
    if (!(sla.year_minutes > 0.0)) throw DomainError("sla: year_minutes must be > 0");
}

double horizon_seconds(const SlaSpec& sla) {
    switch (sla.horizon) {
    case SlaHorizon::Day: return 86400.0;
    case SlaHorizon::Month: return sla.year_minutes * 60.0 / 12.0;
    case SlaHorizon::Year: return sla.year_minutes * 60.0;
    }
    throw DomainError("sla: unknown horizon");
}

} // namespace

double power(int active_host_count, const PowerModel& model) {
    if (!(model.pmax_w > 0.0)) throw DomainError("power: pmax_w must be > 0");
    if (active_host_count < 0) throw DomainError("power: host count must be >= 0");
    return model.pmax_w * static_cast<double>(active_host_count);
}

double allowed_downtime(const SlaSpec& sla) {
    check_sla(sla);
    return (1.0 - sla.level) * horizon_seconds(sla);
}

SlaViolations sla_violations(const std::map<Id, double>& per_container_downtime_s,
                             const SlaSpec& sla) {
    double budget = allowed_downtime(sla);
    SlaViolations result;
    for (const auto& [cnt_id, downtime] : per_container_downtime_s) {
        if (downtime < 0.0)
            throw DomainError("sla_violations: negative downtime for " + cnt_id);
        if (downtime > budget) {
            ++result.count;
            result.offenders.push_back(cnt_id);
        }
    }
    return result;
}

std::map<Id, double> container_downtime(const DatacenterState& before,
                                        const MigrationPlan& plan,
                                        const PlanTiming& timing) {
    if (plan.moves.size() != timing.per_move.size())
        throw IntegrityError("container_downtime: plan and timing disagree");

    std::map<Id, double> downtime;
    DatacenterState working = before;
    for (std::size_t i = 0; i < plan.moves.size(); ++i) {
        const Move& move = plan.moves[i];
        double d = timing.per_move[i].timing.downtime_s;
        if (move.kind == MoveKind::ContainerMove) {
            downtime[move.subject_id] += d;
        } else {
            for (const auto& [cnt_id, vm_id] : working.vm_of)
                if (vm_id == move.subject_id) downtime[cnt_id] += d;
        }
        detail::apply_move_raw(working, move);
    }
    return downtime;
}

DatacenterState replay_plan(const DatacenterState& before, const MigrationPlan& plan) {
    DatacenterState state = before;
    for (const Move& move : plan.moves) detail::apply_move_raw(state, move);
    for (const Id& vm_id : plan.freed_vms) {
        state.vms.erase(vm_id);
        state.host_of.erase(vm_id);
    }
    for (const Id& host_id : plan.freed_hosts) {
        auto it = state.hosts.find(host_id);
        if (it == state.hosts.end())
            throw IntegrityError("replay_plan: freed host " + host_id + " is unknown");
        it->second.active = false;
    }
    return state;
}

RunReport build_report(const DatacenterState& before, const DatacenterState& after,
                       const MigrationPlan& plan, const PlanTiming& timing,
                       const SlaSpec& sla, const PowerModel& model) {
    if (!plan.committed)
        throw PreconditionError("build_report: plan is not committed");
    if (plan.moves.size() != timing.per_move.size())
        throw IntegrityError("build_report: plan and timing disagree in length");
    for (std::size_t i = 0; i < plan.moves.size(); ++i)
        if (!(timing.per_move[i].move == plan.moves[i]))
            throw IntegrityError("build_report: timing row " + std::to_string(i) +
                                 " does not match the plan");
    if (!(replay_plan(before, plan) == after))
        throw IntegrityError("build_report: plan does not transform before into after");

    RunReport report;
    report.hosts_before = active_hosts(before);
    report.hosts_after = active_hosts(after);
    report.power_w_before = power(report.hosts_before, model);
    report.power_w_after = power(report.hosts_after, model);
    for (const Move& move : plan.moves) {
        if (move.kind == MoveKind::VmMove)
            ++report.vm_moves;
        else
            ++report.cnt_moves;
    }
    report.total_migration_s = timing.total_s;
    report.sum_downtime_s = timing.sum_downtime_s;
    report.max_downtime_s = timing.max_downtime_s;
    report.sla_level = sla.level;
    report.sla_violations =
        sla_violations(container_downtime(before, plan, timing), sla).count;
    return report;
}

std::string fmt_double(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9g", value);
    return buf;
}

std::string report_csv_header() {
    return "scenario,mode,threshold,seed,bins_used,hosts_before,hosts_after,"
           "power_w_before,power_w_after,vm_moves,cnt_moves,total_migration_s,"
           "sum_downtime_s,max_downtime_s,sla_level,sla_violations";
}

std::string report_csv_row(const RunReport& report) {
    std::string row;
    row += report.scenario;
    row += ',';
    row += report.mode;
    row += ',';
    row += fmt_double(report.threshold);
    row += ',';
    row += std::to_string(report.seed);
    row += ',';
    row += std::to_string(report.bins_used);
    row += ',';
    row += std::to_string(report.hosts_before);
    row += ',';
    row += std::to_string(report.hosts_after);
    row += ',';
    row += fmt_double(report.power_w_before);
    row += ',';
    row += fmt_double(report.power_w_after);
    row += ',';
    row += std::to_string(report.vm_moves);
    row += ',';
    row += std::to_string(report.cnt_moves);
    row += ',';
    row += fmt_double(report.total_migration_s);
    row += ',';
    row += fmt_double(report.sum_downtime_s);
    row += ',';
    row += fmt_double(report.max_downtime_s);
    row += ',';
    row += fmt_double(report.sla_level);
    row += ',';
    row += std::to_string(report.sla_violations);
    return row;
}

} // namespace cpmsim
