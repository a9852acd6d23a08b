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

#include <vector>

#include "cpmsim/consolidation.hpp"
#include "cpmsim/model.hpp"

namespace cpmsim {

enum class CntMigrationMode { FreezeCopy, Precopy };

/// Knobs of the migration timing model. Everything is scenario-overridable;
/// the defaults approximate a 1 Gbps link with a write-heavy VM and a small
/// container checkpoint.
struct TimingParams {
    double bandwidth_mb_s = 125.0;
    double vm_dirty_rate_mb_s = 32.0;
    double cnt_dirty_rate_mb_s = 4.0;
    double stop_threshold_mb = 8.0;
    int max_rounds = 30;
    double reservation_s = 0.1;
    double vm_resume_s = 0.4;
    double cnt_freeze_s = 0.05;
    double cnt_restore_s = 0.1;
    CntMigrationMode cnt_mode = CntMigrationMode::FreezeCopy;

    bool operator==(const TimingParams&) const = default;
};

/// One iterative transfer round. residual_mb is what got dirtied while the
/// round ran and must be re-sent.
struct PrecopyRound {
    int round_index = 0; // 1-based
    double transferred_mb = 0.0;
    double duration_s = 0.0;
    double residual_mb = 0.0;
};

struct PrecopySchedule {
    std::vector<PrecopyRound> rounds;
    double residual_mb = 0.0; // moved during stop-and-copy
};

struct MigrationTiming {
    std::vector<PrecopyRound> rounds;
    double downtime_s = 0.0;
    double total_s = 0.0;
};

struct MoveTiming {
    Move move;
    MigrationTiming timing;
};

struct PlanTiming {
    double total_s = 0.0;
    double sum_downtime_s = 0.0;
    double max_downtime_s = 0.0;
    std::vector<MoveTiming> per_move;
};

/// Iterative transfer schedule: round i re-sends what round i-1 dirtied,
/// stopping at the threshold, on non-convergence (the residual stopped
/// shrinking) or after max_rounds. Dirtying is clamped to size_mb.
PrecopySchedule precopy_schedule(double size_mb, double dirty_rate_mb_s,
                                 const TimingParams& params);

/// Live VM migration: reservation, iterative rounds over the nominal RAM,
/// then a halt during which the residual moves and the VM resumes remotely.
MigrationTiming vm_migration_time(double vm_ram_mb, const TimingParams& params);

/// Container migration over the checkpointable resident set. Freeze-copy
/// (default): one frozen transfer, downtime = freeze + resident/B + restore.
/// Precopy: like a VM but with the container dirty rate, freeze and restore
/// replacing the resume step.
MigrationTiming container_migration_time(double resident_mb, const TimingParams& params);

/// Times a committed plan executed sequentially against the state the plan
/// was computed from. VM moves carry the VM's nominal RAM, container moves
/// the container's resident set.
PlanTiming plan_timing(const MigrationPlan& plan, const DatacenterState& state,
                       const TimingParams& params);

} // namespace cpmsim
