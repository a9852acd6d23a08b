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

#include "cpmsim/model.hpp"

#include "cpmsim/errors.hpp"

namespace cpmsim {

ResourceSpec::ResourceSpec(int pes, std::int64_t mips, std::int64_t ram_mb, std::int64_t bw)
    : pes(pes), mips(mips), ram_mb(ram_mb), bw(bw) {
    if (pes < 1) throw DomainError("ResourceSpec: pes must be >= 1");
    if (mips < 0) throw DomainError("ResourceSpec: mips must be >= 0");
    if (ram_mb < 1) throw DomainError("ResourceSpec: ram_mb must be >= 1");
    if (bw < 0) throw DomainError("ResourceSpec: bw must be >= 0");
}

Host::Host(Id id, ResourceSpec spec, double max_power_w, bool active)
    : id(std::move(id)), spec(std::move(spec)), max_power_w(max_power_w), active(active) {
    if (!(this->max_power_w > 0.0))
        throw DomainError("Host " + this->id + ": max_power_w must be > 0");
}

Container::Container(Id id, ResourceSpec spec, std::int64_t resident_mb)
    : id(std::move(id)), spec(std::move(spec)), resident_mb(resident_mb) {
    if (resident_mb < 1 || resident_mb > this->spec.ram_mb)
        throw DomainError("Container " + this->id +
                          ": resident_mb must be in [1, ram_mb]");
}

ThresholdPolicy::ThresholdPolicy(double upper) : upper(upper) {
    if (!(upper > 0.0) || upper > 1.0)
        throw DomainError("ThresholdPolicy: upper must be in (0, 1]");
}

double ram_utilization(std::int64_t total_mb, std::int64_t used_mb) {
    if (total_mb <= 0) throw DomainError("ram_utilization: total_mb must be > 0");
    if (used_mb < 0 || used_mb > total_mb)
        throw DomainError("ram_utilization: used_mb must be in [0, total_mb]");
    return static_cast<double>(total_mb - used_mb) / static_cast<double>(total_mb);
}

double used_fraction(std::int64_t total_mb, std::int64_t used_mb) {
    return 1.0 - ram_utilization(total_mb, used_mb);
}

std::int64_t vm_used_ram(const DatacenterState& state, const Id& vm_id) {
    if (!state.vms.count(vm_id)) throw NotFoundError("unknown vm: " + vm_id);
    std::int64_t used = 0;
    for (const auto& [cnt_id, owner] : state.vm_of) {
        if (owner != vm_id) continue;
        auto it = state.containers.find(cnt_id);
        if (it == state.containers.end())
            throw IntegrityError("vm_of references unknown container: " + cnt_id);
        used += it->second.spec.ram_mb;
    }
    return used;
}

std::int64_t host_used_ram(const DatacenterState& state, const Id& host_id) {
    if (!state.hosts.count(host_id)) throw NotFoundError("unknown host: " + host_id);
    std::int64_t used = 0;
    for (const auto& [vm_id, owner] : state.host_of) {
        if (owner != host_id) continue;
        auto it = state.vms.find(vm_id);
        if (it == state.vms.end())
            throw IntegrityError("host_of references unknown vm: " + vm_id);
        used += it->second.spec.ram_mb;
    }
    return used;
}

bool fits(std::int64_t used_mb, std::int64_t extra_mb, std::int64_t capacity_mb,
          double threshold) {
    return static_cast<double>(used_mb + extra_mb) <=
           threshold * static_cast<double>(capacity_mb);
}

ValidationReport validate(const DatacenterState& state, const ThresholdPolicy& policy) {
    ValidationReport report;
    auto add = [&report](const Id& entity, std::string message) {
        report.violations.push_back({entity, std::move(message)});
    };

    for (const auto& [cnt_id, vm_id] : state.vm_of) {
        if (!state.containers.count(cnt_id))
            add(cnt_id, "vm_of entry for unknown container");
        if (!state.vms.count(vm_id))
            add(cnt_id, "container mapped to unknown vm " + vm_id);
    }
    for (const auto& [vm_id, host_id] : state.host_of) {
        if (!state.vms.count(vm_id)) add(vm_id, "host_of entry for unknown vm");
        if (!state.hosts.count(host_id))
            add(vm_id, "vm mapped to unknown host " + host_id);
    }
    for (const auto& [cnt_id, cnt] : state.containers) {
        (void)cnt;
        if (!state.vm_of.count(cnt_id)) add(cnt_id, "container not mapped to any vm");
    }
    for (const auto& [vm_id, vm] : state.vms) {
        (void)vm;
        if (!state.host_of.count(vm_id)) add(vm_id, "vm not mapped to any host");
    }
    if (!report.ok()) return report;

    for (const auto& [vm_id, vm] : state.vms) {
        std::int64_t used = vm_used_ram(state, vm_id);
        if (!fits(used, 0, vm.spec.ram_mb, policy.upper))
            add(vm_id, "vm ram over threshold: " + std::to_string(used) + " of " +
                           std::to_string(vm.spec.ram_mb));
    }
    for (const auto& [host_id, host] : state.hosts) {
        std::int64_t used = host_used_ram(state, host_id);
        if (!fits(used, 0, host.spec.ram_mb, policy.upper))
            add(host_id, "host ram over threshold: " + std::to_string(used) + " of " +
                             std::to_string(host.spec.ram_mb));
        bool has_vm = false;
        for (const auto& [vm_id, owner] : state.host_of) {
            (void)vm_id;
            if (owner == host_id) {
                has_vm = true;
                break;
            }
        }
        if (has_vm && !host.active) add(host_id, "inactive host holds vms");
    }
    return report;
}

int active_hosts(const DatacenterState& state) {
    int count = 0;
    for (const auto& [host_id, host] : state.hosts) {
        (void)host;
        for (const auto& [vm_id, owner] : state.host_of) {
            (void)vm_id;
            if (owner == host_id) {
                ++count;
                break;
            }
        }
    }
    return count;
}

namespace detail {

void apply_move_raw(DatacenterState& state, const Move& move) {
    if (move.kind == MoveKind::VmMove) {
        state.host_of[move.subject_id] = move.to_id;
        state.hosts.at(move.to_id).active = true;
    } else {
        state.vm_of[move.subject_id] = move.to_id;
    }
}

} // namespace detail

DatacenterState apply_move(const DatacenterState& state, const Move& move,
                           const ThresholdPolicy& policy) {
    if (move.kind == MoveKind::VmMove) {
        if (!state.vms.count(move.subject_id))
            throw NotFoundError("unknown vm: " + move.subject_id);
        if (!state.hosts.count(move.from_id))
            throw NotFoundError("unknown host: " + move.from_id);
        if (!state.hosts.count(move.to_id))
            throw NotFoundError("unknown host: " + move.to_id);
        if (move.from_id == move.to_id)
            throw PreconditionError("vm move with identical endpoints: " + move.from_id);
        auto at = state.host_of.find(move.subject_id);
        if (at == state.host_of.end() || at->second != move.from_id)
            throw PreconditionError("vm " + move.subject_id + " is not on host " +
                                    move.from_id);
    } else {
        if (!state.containers.count(move.subject_id))
            throw NotFoundError("unknown container: " + move.subject_id);
        if (!state.vms.count(move.from_id))
            throw NotFoundError("unknown vm: " + move.from_id);
        if (!state.vms.count(move.to_id))
            throw NotFoundError("unknown vm: " + move.to_id);
        if (move.from_id == move.to_id)
            throw PreconditionError("container move with identical endpoints: " +
                                    move.from_id);
        auto at = state.vm_of.find(move.subject_id);
        if (at == state.vm_of.end() || at->second != move.from_id)
            throw PreconditionError("container " + move.subject_id + " is not on vm " +
                                    move.from_id);
    }

    DatacenterState next = state;
    detail::apply_move_raw(next, move);
    ValidationReport report = validate(next, policy);
    if (!report.ok())
        throw RejectedMoveError("move of " + move.subject_id + " to " + move.to_id +
                                " violates " + report.violations.front().entity + ": " +
                                report.violations.front().message);
    return next;
}

} // namespace cpmsim
