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

#include <optional>
#include <string>
#include <vector>

#include "cpmsim/model.hpp"

namespace cpmsim {

/// Outcome of a drain or consolidation attempt. When committed is false the
/// moves describe the partial attempt that was rolled back and the freed
/// lists are empty.
struct MigrationPlan {
    std::vector<Move> moves;
    std::vector<Id> freed_hosts;
    std::vector<Id> freed_vms;
    bool committed = false;
};

enum class ConsolidationMode { VmMigration, ContainerMigration };

struct ConsolidationPolicy {
    ThresholdPolicy threshold;
    ConsolidationMode mode = ConsolidationMode::ContainerMigration;
    bool atomic_drain = true;
};

struct AdmissionDecision {
    bool accepted = false;
    std::optional<Id> target_vm;
    std::string reason;
};

struct DrainResult {
    DatacenterState state;
    MigrationPlan plan;
};

struct HotspotResult {
    DatacenterState state;
    MigrationPlan plan;
    bool still_overloaded = false;
};

struct ConsolidateResult {
    DatacenterState state;
    MigrationPlan plan;
};

/// Active hosts ordered coldest first (ascending used fraction, ties by id).
/// Hosts with nothing placed are considered off and excluded.
std::vector<Id> find_coldspots(const DatacenterState& state,
                               const ConsolidationPolicy& policy);

/// Evacuates a host by relocating whole VMs, largest first, onto the
/// fullest other active hosts with threshold headroom. All-or-nothing under
/// atomic_drain: on failure the original state comes back untouched.
DrainResult drain_host_by_vm_migration(const DatacenterState& state, const Id& host_id,
                                       const ConsolidationPolicy& policy);

/// Evacuates a host container by container onto VMs of other active hosts
/// (fullest VM first). On success the emptied VMs are deallocated and the
/// host deactivated; on failure under atomic_drain the state is untouched.
DrainResult drain_host_by_container_migration(const DatacenterState& state,
                                              const Id& host_id,
                                              const ConsolidationPolicy& policy);

/// Relieves an overloaded host by pushing its smallest VMs to the emptiest
/// hosts with headroom until the host is back under the threshold. Partial
/// relief stays applied and is flagged still_overloaded.
HotspotResult distribute_hotspot(const DatacenterState& state, const Id& host_id,
                                 const ConsolidationPolicy& policy);

/// Greedy whole-datacenter pass: repeatedly drain the coldest drainable
/// host (per policy.mode) until no host can be freed. Only committed moves
/// appear in the combined plan.
ConsolidateResult consolidate(const DatacenterState& state,
                              const ConsolidationPolicy& policy);

/// First-fit admission over VMs ordered fullest first.
AdmissionDecision admit_request(const DatacenterState& state,
                                const ResourceSpec& container_spec,
                                const ConsolidationPolicy& policy);

} // namespace cpmsim
