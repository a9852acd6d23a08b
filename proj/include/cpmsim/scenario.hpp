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

#include "cpmsim/metrics.hpp"
#include "cpmsim/model.hpp"
#include "cpmsim/placement.hpp"
#include "cpmsim/timing.hpp"

namespace cpmsim {

/// A fully expanded experiment description. Groups in the input file
/// ({"count": 25, "name": "type1", ...}) become individual entities with
/// ids type1-001, type1-002, ...; counters continue across groups sharing
/// a name prefix. Entity order follows the file.
struct Scenario {
    std::string name;
    double threshold = 1.0;
    std::uint32_t seed = 1;
    TimingParams timing;
    SlaSpec sla;
    std::vector<Host> hosts;
    std::vector<Vm> vms;
    std::vector<Container> containers;
    std::map<Id, Id> vm_host; // explicit vm -> host assignments
    std::map<Id, Id> cnt_vm;  // explicit container -> vm assignments

    bool operator==(const Scenario&) const = default;

    /// True when every vm has a host and every container a vm.
    bool has_layout() const {
        return vm_host.size() == vms.size() && cnt_vm.size() == containers.size() &&
               !vms.empty();
    }
};

/// Inclusive threshold range for sweeps.
struct SweepSpec {
    double from = 0.0;
    double to = 0.0;
    double step = 0.0;
};

/// Parses and fully validates a scenario document (JSON). Unknown fields,
/// type mismatches, bounds violations and capacity-infeasible explicit
/// layouts all raise ParseError naming the offending path.
Scenario parse_scenario(const std::string& text);

/// Serializes a scenario so that parse_scenario(emit_scenario(s)) == s.
std::string emit_scenario(const Scenario& scenario);

/// Materializes the explicit layout as a DatacenterState. Requires
/// has_layout(); throws UsageError otherwise.
DatacenterState scenario_state(const Scenario& scenario);

/// Containers as placement items, file order.
std::vector<Item> container_items(const Scenario& scenario);

/// VMs as placement items, file order.
std::vector<Item> vm_items(const Scenario& scenario);

} // namespace cpmsim
