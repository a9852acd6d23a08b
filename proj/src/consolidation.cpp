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

#include "cpmsim/consolidation.hpp"

#include <algorithm>

#include "cpmsim/errors.hpp"

namespace cpmsim {

namespace {

std::vector<Id> vms_on_host(const DatacenterState& state, const Id& host_id) {
    std::vector<Id> out;
    for (const auto& [vm_id, owner] : state.host_of)
        if (owner == host_id) out.push_back(vm_id);
    return out;
}

std::vector<Id> containers_on_host(const DatacenterState& state, const Id& host_id) {
    std::vector<Id> out;
    for (const auto& [cnt_id, vm_id] : state.vm_of)
        if (state.host_of.count(vm_id) && state.host_of.at(vm_id) == host_id)
            out.push_back(cnt_id);
    return out;
}

double host_fraction(const DatacenterState& state, const Id& host_id) {
    return used_fraction(state.hosts.at(host_id).spec.ram_mb,
                         host_used_ram(state, host_id));
}

double vm_fraction(const DatacenterState& state, const Id& vm_id) {
    return used_fraction(state.vms.at(vm_id).spec.ram_mb, vm_used_ram(state, vm_id));
}

// Largest first, ties by ascending id.
template <typename SizeOf>
void sort_descending(std::vector<Id>& ids, SizeOf size_of) {
    std::sort(ids.begin(), ids.end(), [&](const Id& a, const Id& b) {
        auto sa = size_of(a), sb = size_of(b);
        if (sa != sb) return sa > sb;
        return a < b;
    });
}

// Hosts other than the source that still hold at least one VM, ordered
// fullest first (descending used fraction, ties by id).
std::vector<Id> drain_targets(const DatacenterState& state, const Id& source) {
    std::vector<Id> out;
    for (const auto& [host_id, host] : state.hosts) {
        (void)host;
        if (host_id == source) continue;
        if (vms_on_host(state, host_id).empty()) continue;
        out.push_back(host_id);
    }
    std::sort(out.begin(), out.end(), [&](const Id& a, const Id& b) {
        double fa = host_fraction(state, a), fb = host_fraction(state, b);
        if (fa != fb) return fa > fb;
        return a < b;
    });
    return out;
}

void deactivate(DatacenterState& state, const Id& host_id) {
    state.hosts.at(host_id).active = false;
}

} // namespace

std::vector<Id> find_coldspots(const DatacenterState& state,
                               const ConsolidationPolicy& policy) {
    (void)policy;
    std::vector<Id> out;
    for (const auto& [host_id, host] : state.hosts) {
        (void)host;
        if (!vms_on_host(state, host_id).empty()) out.push_back(host_id);
    }
    std::sort(out.begin(), out.end(), [&](const Id& a, const Id& b) {
        double fa = host_fraction(state, a), fb = host_fraction(state, b);
        if (fa != fb) return fa < fb;
        return a < b;
    });
    return out;
}

DrainResult drain_host_by_vm_migration(const DatacenterState& state, const Id& host_id,
                                       const ConsolidationPolicy& policy) {
    if (!state.hosts.count(host_id)) throw NotFoundError("unknown host: " + host_id);

    DrainResult result{state, {}};
    std::vector<Id> vms = vms_on_host(state, host_id);
    if (vms.empty()) {
        deactivate(result.state, host_id);
        result.plan.committed = true;
        return result;
    }
    sort_descending(vms, [&](const Id& id) { return state.vms.at(id).spec.ram_mb; });

    DatacenterState working = state;
    MigrationPlan plan;
    bool complete = true;
    for (const Id& vm_id : vms) {
        std::int64_t size = working.vms.at(vm_id).spec.ram_mb;
        bool placed = false;
        for (const Id& target : drain_targets(working, host_id)) {
            if (!fits(host_used_ram(working, target), size,
                      working.hosts.at(target).spec.ram_mb, policy.threshold.upper))
                continue;
            Move move{MoveKind::VmMove, vm_id, host_id, target};
            working = apply_move(working, move, policy.threshold);
            plan.moves.push_back(move);
            placed = true;
            break;
        }
        if (!placed) {
            complete = false;
            if (policy.atomic_drain) {
                result.plan = std::move(plan);
                return result; // original state, uncommitted plan
            }
        }
    }

    plan.committed = true;
    if (complete) {
        plan.freed_hosts.push_back(host_id);
        deactivate(working, host_id);
    }
    result.state = std::move(working);
    result.plan = std::move(plan);
    return result;
}

DrainResult drain_host_by_container_migration(const DatacenterState& state,
                                              const Id& host_id,
                                              const ConsolidationPolicy& policy) {
    if (!state.hosts.count(host_id)) throw NotFoundError("unknown host: " + host_id);

    DrainResult result{state, {}};
    std::vector<Id> vms = vms_on_host(state, host_id);
    if (vms.empty()) {
        deactivate(result.state, host_id);
        result.plan.committed = true;
        return result;
    }

    std::vector<Id> cnts = containers_on_host(state, host_id);
    sort_descending(cnts,
                    [&](const Id& id) { return state.containers.at(id).spec.ram_mb; });

    DatacenterState working = state;
    MigrationPlan plan;
    for (const Id& cnt_id : cnts) {
        std::int64_t size = working.containers.at(cnt_id).spec.ram_mb;
        Id from = working.vm_of.at(cnt_id);
        // Candidate VMs on other active hosts, fullest first.
        std::vector<Id> targets;
        for (const Id& target_host : drain_targets(working, host_id))
            for (const Id& vm_id : vms_on_host(working, target_host))
                targets.push_back(vm_id);
        std::sort(targets.begin(), targets.end(), [&](const Id& a, const Id& b) {
            double fa = vm_fraction(working, a), fb = vm_fraction(working, b);
            if (fa != fb) return fa > fb;
            return a < b;
        });
        bool placed = false;
        for (const Id& target : targets) {
            if (!fits(vm_used_ram(working, target), size,
                      working.vms.at(target).spec.ram_mb, policy.threshold.upper))
                continue;
            Move move{MoveKind::ContainerMove, cnt_id, from, target};
            working = apply_move(working, move, policy.threshold);
            plan.moves.push_back(move);
            placed = true;
            break;
        }
        if (!placed) {
            if (policy.atomic_drain) {
                result.plan = std::move(plan);
                return result; // original state, uncommitted plan
            }
        }
    }

    // Emptied VMs release their host reservation; only then can the host
    // power off.
    bool emptied = true;
    for (const Id& vm_id : vms)
        if (vm_used_ram(working, vm_id) != 0) emptied = false;
    plan.committed = true;
    if (emptied) {
        for (const Id& vm_id : vms) {
            working.vms.erase(vm_id);
            working.host_of.erase(vm_id);
            plan.freed_vms.push_back(vm_id);
        }
        plan.freed_hosts.push_back(host_id);
        deactivate(working, host_id);
    }
    result.state = std::move(working);
    result.plan = std::move(plan);
    return result;
}

HotspotResult distribute_hotspot(const DatacenterState& state, const Id& host_id,
                                 const ConsolidationPolicy& policy) {
    if (!state.hosts.count(host_id)) throw NotFoundError("unknown host: " + host_id);
    if (host_fraction(state, host_id) <= policy.threshold.upper)
        throw PreconditionError("host " + host_id + " is not overloaded");

    HotspotResult result{state, {}, false};
    DatacenterState working = state;
    MigrationPlan plan;

    while (host_fraction(working, host_id) > policy.threshold.upper) {
        std::vector<Id> vms = vms_on_host(working, host_id);
        std::sort(vms.begin(), vms.end(), [&](const Id& a, const Id& b) {
            auto sa = working.vms.at(a).spec.ram_mb, sb = working.vms.at(b).spec.ram_mb;
            if (sa != sb) return sa < sb; // smallest first
            return a < b;
        });
        // Emptiest hosts first so relief spreads instead of cascading.
        std::vector<Id> targets;
        for (const auto& [other, host] : working.hosts) {
            (void)host;
            if (other != host_id) targets.push_back(other);
        }
        std::sort(targets.begin(), targets.end(), [&](const Id& a, const Id& b) {
            double fa = host_fraction(working, a), fb = host_fraction(working, b);
            if (fa != fb) return fa < fb;
            return a < b;
        });

        bool moved = false;
        for (const Id& vm_id : vms) {
            std::int64_t size = working.vms.at(vm_id).spec.ram_mb;
            for (const Id& target : targets) {
                if (!fits(host_used_ram(working, target), size,
                          working.hosts.at(target).spec.ram_mb, policy.threshold.upper))
                    continue;
                // The source is over threshold until relief completes, so
                // whole-state validation would reject every step; the
                // target fit above is the real constraint.
                Move move{MoveKind::VmMove, vm_id, host_id, target};
                detail::apply_move_raw(working, move);
                plan.moves.push_back(move);
                moved = true;
                break;
            }
            if (moved) break;
        }
        if (!moved) {
            result.still_overloaded = true;
            break;
        }
    }

    plan.committed = true;
    if (vms_on_host(working, host_id).empty()) {
        plan.freed_hosts.push_back(host_id);
        deactivate(working, host_id);
    }
    result.state = std::move(working);
    result.plan = std::move(plan);
    return result;
}

ConsolidateResult consolidate(const DatacenterState& state,
                              const ConsolidationPolicy& policy) {
    ConsolidateResult result{state, {}};
    result.plan.committed = true;

    bool progress = true;
    while (progress) {
        progress = false;
        for (const Id& host_id : find_coldspots(result.state, policy)) {
            DrainResult drained =
                policy.mode == ConsolidationMode::VmMigration
                    ? drain_host_by_vm_migration(result.state, host_id, policy)
                    : drain_host_by_container_migration(result.state, host_id, policy);
            if (!drained.plan.committed) continue;
            result.state = std::move(drained.state);
            result.plan.moves.insert(result.plan.moves.end(), drained.plan.moves.begin(),
                                     drained.plan.moves.end());
            result.plan.freed_vms.insert(result.plan.freed_vms.end(),
                                         drained.plan.freed_vms.begin(),
                                         drained.plan.freed_vms.end());
            result.plan.freed_hosts.insert(result.plan.freed_hosts.end(),
                                           drained.plan.freed_hosts.begin(),
                                           drained.plan.freed_hosts.end());
            // Only a freed host is progress; partial non-atomic drains are
            // kept but must not spin the loop forever.
            if (!drained.plan.freed_hosts.empty()) {
                progress = true;
                break;
            }
        }
    }
    return result;
}

AdmissionDecision admit_request(const DatacenterState& state,
                                const ResourceSpec& container_spec,
                                const ConsolidationPolicy& policy) {
    std::vector<Id> vms;
    for (const auto& [vm_id, vm] : state.vms) {
        (void)vm;
        vms.push_back(vm_id);
    }
    std::sort(vms.begin(), vms.end(), [&](const Id& a, const Id& b) {
        double fa = vm_fraction(state, a), fb = vm_fraction(state, b);
        if (fa != fb) return fa > fb;
        return a < b;
    });
    for (const Id& vm_id : vms) {
        if (fits(vm_used_ram(state, vm_id), container_spec.ram_mb,
                 state.vms.at(vm_id).spec.ram_mb, policy.threshold.upper))
            return {true, vm_id, ""};
    }
    return {false, std::nullopt, "no VM headroom"};
}

} // namespace cpmsim
