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
#include <string>

#include "cpmsim/model.hpp"

namespace cpmsim::testing {

inline void add_host(DatacenterState& state, const Id& id, std::int64_t ram_mb,
                     double max_power_w = 250.0) {
    state.hosts[id] = Host(id, ResourceSpec(8, 9192, ram_mb, 1000000), max_power_w);
}

inline void add_vm(DatacenterState& state, const Id& id, std::int64_t ram_mb,
                   const Id& host_id) {
    state.vms[id] = Vm{id, ResourceSpec(2, 2048, ram_mb, 100000)};
    state.host_of[id] = host_id;
}

inline void add_cnt(DatacenterState& state, const Id& id, std::int64_t ram_mb,
                    std::int64_t resident_mb, const Id& vm_id) {
    state.containers[id] = Container(id, ResourceSpec(1, 512, ram_mb, 2500), resident_mb);
    state.vm_of[id] = vm_id;
}

inline std::string seq_id(const std::string& prefix, int n) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%03d", n);
    return prefix + "-" + buf;
}

/// Three hosts of 8192 MB, seven 2048 MB VMs packed 3/3/1, two 512 MB
/// containers per VM. The smallest arrangement where draining the
/// one-VM host is interesting.
inline DatacenterState demo_state() {
    DatacenterState state;
    for (int h = 1; h <= 3; ++h) add_host(state, seq_id("host", h), 8192);
    for (int v = 1; v <= 7; ++v) {
        Id host = seq_id("host", v <= 3 ? 1 : (v <= 6 ? 2 : 3));
        add_vm(state, seq_id("vm", v), 2048, host);
    }
    for (int c = 1; c <= 14; ++c)
        add_cnt(state, seq_id("cnt", c), 512, 32, seq_id("vm", (c + 1) / 2));
    return state;
}

} // namespace cpmsim::testing
