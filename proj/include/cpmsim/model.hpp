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

namespace cpmsim {

using Id = std::string;

/// Resource tuple attached to every host, VM and container.
///
/// Only RAM constrains placement; PEs and MIPS are carried for reporting.
/// BW is an abstract unit converted to MB/s by a scenario-level factor when
/// the timing model needs it.
struct ResourceSpec {
    int pes = 1;
    std::int64_t mips = 0;
    std::int64_t ram_mb = 1;
    std::int64_t bw = 0;

    ResourceSpec() = default;
    ResourceSpec(int pes, std::int64_t mips, std::int64_t ram_mb, std::int64_t bw);

    bool operator==(const ResourceSpec&) const = default;
};

/// Physical machine. An inactive host hosts no VMs.
struct Host {
    Id id;
    ResourceSpec spec;
    double max_power_w = 250.0;
    bool active = true;

    Host() = default;
    Host(Id id, ResourceSpec spec, double max_power_w, bool active = true);

    bool operator==(const Host&) const = default;
};

struct Vm {
    Id id;
    ResourceSpec spec;

    bool operator==(const Vm&) const = default;
};

/// OS-level virtualized workload nested inside a VM. resident_mb is the
/// checkpointable state actually transferred on migration, bounded by the
/// container's nominal RAM.
struct Container {
    Id id;
    ResourceSpec spec;
    std::int64_t resident_mb = 1;

    Container() = default;
    Container(Id id, ResourceSpec spec, std::int64_t resident_mb);

    bool operator==(const Container&) const = default;
};

/// Fraction of RAM capacity usable for placement and migration targets,
/// applied to both VM RAM and host RAM.
struct ThresholdPolicy {
    double upper = 1.0;

    ThresholdPolicy() = default;
    explicit ThresholdPolicy(double upper);

    bool operator==(const ThresholdPolicy&) const = default;
};

/// Immutable snapshot of the three-level hierarchy and its placement maps.
///
/// Every container maps to exactly one VM (vm_of) and every VM to exactly
/// one host (host_of). Operations never mutate a state in place; they return
/// a new value.
struct DatacenterState {
    std::map<Id, Host> hosts;
    std::map<Id, Vm> vms;
    std::map<Id, Container> containers;
    std::map<Id, Id> vm_of;   // container id -> vm id
    std::map<Id, Id> host_of; // vm id -> host id

    bool operator==(const DatacenterState&) const = default;
};

enum class MoveKind { VmMove, ContainerMove };

/// One relocation step: a VM between hosts or a container between VMs.
struct Move {
    MoveKind kind = MoveKind::ContainerMove;
    Id subject_id;
    Id from_id;
    Id to_id;

    bool operator==(const Move&) const = default;
};

struct Violation {
    Id entity;
    std::string message;

    bool operator==(const Violation&) const = default;
};

struct ValidationReport {
    std::vector<Violation> violations;

    bool ok() const { return violations.empty(); }
};

/// Free RAM fraction, (total - used) / total.
///
/// Note the orientation: this reports the UNUSED share. The companion
/// used_fraction() is what threshold logic compares against.
double ram_utilization(std::int64_t total_mb, std::int64_t used_mb);

/// 1 - ram_utilization; the occupied share of RAM.
double used_fraction(std::int64_t total_mb, std::int64_t used_mb);

/// Sum of nominal container RAM hosted by the VM; 0 for an empty VM.
std::int64_t vm_used_ram(const DatacenterState& state, const Id& vm_id);

/// Sum of nominal VM RAM placed on the host. A VM reserves its full nominal
/// RAM on its host regardless of container load.
std::int64_t host_used_ram(const DatacenterState& state, const Id& host_id);

/// Checks structural map invariants plus the threshold bound on every VM
/// and host. Violations are data, not errors.
ValidationReport validate(const DatacenterState& state, const ThresholdPolicy& policy);

/// Number of hosts with at least one VM placed. An empty host counts as
/// deactivated whatever its flag says.
int active_hosts(const DatacenterState& state);

/// Capacity test shared by every placement and migration decision:
/// used + extra <= threshold * capacity, evaluated in real arithmetic.
bool fits(std::int64_t used_mb, std::int64_t extra_mb, std::int64_t capacity_mb,
          double threshold);

/// Applies one move and returns the new state; the input is untouched.
///
/// Throws NotFoundError for unknown ids, PreconditionError when the subject
/// is not at from_id or from equals to, RejectedMoveError when the resulting
/// state would fail validate.
DatacenterState apply_move(const DatacenterState& state, const Move& move,
                           const ThresholdPolicy& policy);

namespace detail {
/// Map update without any policy check; used by planners and replay.
void apply_move_raw(DatacenterState& state, const Move& move);
} // namespace detail

} // namespace cpmsim
