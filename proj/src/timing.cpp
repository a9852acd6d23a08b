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

#include "cpmsim/timing.hpp"

#include <algorithm>

#include "cpmsim/errors.hpp"

namespace cpmsim {

namespace {

void check_params(const TimingParams& params) {
    if (!(params.bandwidth_mb_s > 0.0))
        throw DomainError("timing: bandwidth_mb_s must be > 0");
    if (params.vm_dirty_rate_mb_s < 0.0 || params.cnt_dirty_rate_mb_s < 0.0)
        throw DomainError("timing: dirty rates must be >= 0");
    if (!(params.stop_threshold_mb > 0.0))
        throw DomainError("timing: stop_threshold_mb must be > 0");
    if (params.max_rounds < 1) throw DomainError("timing: max_rounds must be >= 1");
    if (params.reservation_s < 0.0 || params.vm_resume_s < 0.0 ||
        params.cnt_freeze_s < 0.0 || params.cnt_restore_s < 0.0)
        throw DomainError("timing: overheads must be >= 0");
}

double schedule_duration(const PrecopySchedule& schedule) {
    double sum = 0.0;
    for (const PrecopyRound& round : schedule.rounds) sum += round.duration_s;
    return sum;
}

} // namespace

PrecopySchedule precopy_schedule(double size_mb, double dirty_rate_mb_s,
                                 const TimingParams& params) {
    check_params(params);
    if (!(size_mb > 0.0)) throw DomainError("precopy_schedule: size_mb must be > 0");
    if (dirty_rate_mb_s < 0.0)
        throw DomainError("precopy_schedule: dirty rate must be >= 0");

    PrecopySchedule schedule;
    double pending = size_mb;
    while (pending > params.stop_threshold_mb &&
           static_cast<int>(schedule.rounds.size()) < params.max_rounds) {
        double duration = pending / params.bandwidth_mb_s;
        double dirtied = std::min(dirty_rate_mb_s * duration, size_mb);
        schedule.rounds.push_back({static_cast<int>(schedule.rounds.size()) + 1,
                                   pending, duration, dirtied});
        if (dirtied >= pending) {
            // Not converging; force the stop-and-copy on what is left.
            pending = dirtied;
            break;
        }
        pending = dirtied;
    }
    schedule.residual_mb = pending;
    return schedule;
}

MigrationTiming vm_migration_time(double vm_ram_mb, const TimingParams& params) {
    PrecopySchedule schedule =
        precopy_schedule(vm_ram_mb, params.vm_dirty_rate_mb_s, params);
    MigrationTiming timing;
    timing.rounds = schedule.rounds;
    timing.downtime_s = schedule.residual_mb / params.bandwidth_mb_s + params.vm_resume_s;
    timing.total_s =
        params.reservation_s + schedule_duration(schedule) + timing.downtime_s;
    return timing;
}

MigrationTiming container_migration_time(double resident_mb,
                                         const TimingParams& params) {
    check_params(params);
    if (!(resident_mb > 0.0))
        throw DomainError("container_migration_time: resident_mb must be > 0");

    MigrationTiming timing;
    if (params.cnt_mode == CntMigrationMode::FreezeCopy) {
        timing.downtime_s = params.cnt_freeze_s + resident_mb / params.bandwidth_mb_s +
                            params.cnt_restore_s;
        timing.total_s = params.reservation_s + timing.downtime_s;
        return timing;
    }
    PrecopySchedule schedule =
        precopy_schedule(resident_mb, params.cnt_dirty_rate_mb_s, params);
    timing.rounds = schedule.rounds;
    timing.downtime_s = params.cnt_freeze_s +
                        schedule.residual_mb / params.bandwidth_mb_s +
                        params.cnt_restore_s;
    timing.total_s =
        params.reservation_s + schedule_duration(schedule) + timing.downtime_s;
    return timing;
}

PlanTiming plan_timing(const MigrationPlan& plan, const DatacenterState& state,
                       const TimingParams& params) {
    check_params(params);
    if (!plan.committed) throw PreconditionError("plan_timing: plan is not committed");

    PlanTiming result;
    for (const Move& move : plan.moves) {
        MigrationTiming timing;
        if (move.kind == MoveKind::VmMove) {
            auto it = state.vms.find(move.subject_id);
            if (it == state.vms.end())
                throw NotFoundError("plan_timing: unknown vm " + move.subject_id);
            timing = vm_migration_time(static_cast<double>(it->second.spec.ram_mb),
                                       params);
        } else {
            auto it = state.containers.find(move.subject_id);
            if (it == state.containers.end())
                throw NotFoundError("plan_timing: unknown container " + move.subject_id);
            timing = container_migration_time(
                static_cast<double>(it->second.resident_mb), params);
        }
        result.total_s += timing.total_s;
        result.sum_downtime_s += timing.downtime_s;
        result.max_downtime_s = std::max(result.max_downtime_s, timing.downtime_s);
        result.per_move.push_back({move, std::move(timing)});
    }
    return result;
}

} // namespace cpmsim
