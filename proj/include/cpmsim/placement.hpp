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
#include <variant>
#include <vector>

#include "cpmsim/model.hpp"

namespace cpmsim {

/// One thing to place: a container onto VMs, or a VM onto hosts.
struct Item {
    Id id;
    std::int64_t size_mb = 0;

    bool operator==(const Item&) const = default;
};

/// A concrete, bounded set of bins in first-fit order.
struct FixedBins {
    struct Bin {
        Id id;
        std::int64_t capacity_mb = 0;
    };
    std::vector<Bin> bins;
};

/// Unbounded supply of identical bins, opened on demand with ids
/// prefix-001, prefix-002, ...
struct BinPool {
    std::int64_t capacity_mb = 0;
    std::string id_prefix = "vm";
};

using BinSupply = std::variant<FixedBins, BinPool>;

struct PlacementResult {
    std::map<Id, Id> placement; // item id -> bin id
    int bins_used = 0;          // distinct bins appearing in placement
    std::vector<Id> leftover;   // items that fit nowhere, input order
};

/// Pure bin-packing instance for the exact oracle.
struct BinPackInstance {
    std::vector<std::int64_t> item_sizes;
    std::int64_t bin_capacity_mb = 0;
    double threshold = 1.0;
};

/// Minimum bin count by total volume: ceil(total / (bin_ram * threshold)).
int lower_bound(std::int64_t total_ram_mb, std::int64_t bin_ram_mb, double threshold);

/// First-fit decreasing. Items are sorted by size descending (ties by
/// ascending id) and each goes to the first bin with headroom at the
/// threshold. Misfits land in leftover, never throw.
PlacementResult ffd_place(const std::vector<Item>& items, const BinSupply& bins,
                          double threshold);

/// Random baseline. Items in input order; each is assigned uniformly among
/// bins that currently have headroom for it. With a pool, a fresh bin is
/// opened only when no open bin fits. Deterministic per seed.
PlacementResult random_place(const std::vector<Item>& items, const BinSupply& bins,
                             double threshold, std::uint32_t seed);

/// Exact minimum bin count via branch and bound with symmetry pruning.
/// Throws SizeError beyond 14 items and InfeasibleError when an item cannot
/// fit any bin at the threshold.
int optimal_bins(const BinPackInstance& instance);

enum class PlaceAlgo { Ffd, Random };

/// Host-level counterpart: VMs are the items, hosts the bins.
PlacementResult place_vms_on_hosts(const std::vector<Item>& vm_items,
                                   const BinSupply& hosts, double threshold,
                                   PlaceAlgo algo, std::uint32_t seed);

} // namespace cpmsim
