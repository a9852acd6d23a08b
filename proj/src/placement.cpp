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

#include "cpmsim/placement.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include "cpmsim/errors.hpp"
#include "cpmsim/rng.hpp"

namespace cpmsim {

namespace {

struct OpenBin {
    Id id;
    std::int64_t capacity_mb;
    std::int64_t used_mb = 0;
};

Id pool_bin_id(const std::string& prefix, int n) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%03d", n);
    return prefix + "-" + buf;
}

// Working view of the supply: fixed bins are all open from the start, a
// pool starts empty and grows.
struct BinState {
    std::vector<OpenBin> bins;
    const BinPool* pool = nullptr; // null in fixed mode
    int opened = 0;

    explicit BinState(const BinSupply& supply) {
        if (const auto* fixed = std::get_if<FixedBins>(&supply)) {
            for (const auto& bin : fixed->bins)
                bins.push_back({bin.id, bin.capacity_mb, 0});
        } else {
            pool = &std::get<BinPool>(supply);
        }
    }

    bool can_open(std::int64_t size_mb, double threshold) const {
        return pool && fits(0, size_mb, pool->capacity_mb, threshold);
    }

    OpenBin& open(std::int64_t size_mb) {
        bins.push_back({pool_bin_id(pool->id_prefix, ++opened), pool->capacity_mb, 0});
        bins.back().used_mb = size_mb;
        return bins.back();
    }
};

int distinct_bins(const std::map<Id, Id>& placement) {
    std::set<Id> seen;
    for (const auto& [item, bin] : placement) {
        (void)item;
        seen.insert(bin);
    }
    return static_cast<int>(seen.size());
}

} // namespace

int lower_bound(std::int64_t total_ram_mb, std::int64_t bin_ram_mb, double threshold) {
    if (total_ram_mb < 0) throw DomainError("lower_bound: total must be >= 0");
    if (bin_ram_mb <= 0) throw DomainError("lower_bound: bin ram must be > 0");
    if (!(threshold > 0.0) || threshold > 1.0)
        throw DomainError("lower_bound: threshold must be in (0, 1]");
    if (total_ram_mb == 0) return 0;

    auto enough = [&](std::int64_t n) {
        return static_cast<double>(total_ram_mb) <=
               threshold * static_cast<double>(bin_ram_mb) * static_cast<double>(n);
    };
    auto n = static_cast<std::int64_t>(std::ceil(
        static_cast<double>(total_ram_mb) /
        (threshold * static_cast<double>(bin_ram_mb))));
    // Nudge against float error so the result is exactly the least n.
    while (n > 0 && enough(n - 1)) --n;
    while (!enough(n)) ++n;
    return static_cast<int>(n);
}

PlacementResult ffd_place(const std::vector<Item>& items, const BinSupply& supply,
                          double threshold) {
    std::vector<Item> sorted = items;
    std::stable_sort(sorted.begin(), sorted.end(), [](const Item& a, const Item& b) {
        if (a.size_mb != b.size_mb) return a.size_mb > b.size_mb;
        return a.id < b.id;
    });

    BinState state(supply);
    PlacementResult result;
    for (const Item& item : sorted) {
        bool placed = false;
        for (OpenBin& bin : state.bins) {
            if (!fits(bin.used_mb, item.size_mb, bin.capacity_mb, threshold)) continue;
            bin.used_mb += item.size_mb;
            result.placement[item.id] = bin.id;
            placed = true;
            break;
        }
        if (!placed && state.can_open(item.size_mb, threshold)) {
            result.placement[item.id] = state.open(item.size_mb).id;
            placed = true;
        }
        if (!placed) result.leftover.push_back(item.id);
    }
    // Leftovers in input order, not sort order.
    if (!result.leftover.empty()) {
        std::vector<Id> ordered;
        for (const Item& item : items)
            if (std::find(result.leftover.begin(), result.leftover.end(), item.id) !=
                result.leftover.end())
                ordered.push_back(item.id);
        result.leftover = std::move(ordered);
    }
    result.bins_used = distinct_bins(result.placement);
    return result;
}

PlacementResult random_place(const std::vector<Item>& items, const BinSupply& supply,
                             double threshold, std::uint32_t seed) {
    BinState state(supply);
    Rng rng(seed);
    PlacementResult result;
    for (const Item& item : items) {
        std::vector<std::size_t> candidates;
        for (std::size_t i = 0; i < state.bins.size(); ++i)
            if (fits(state.bins[i].used_mb, item.size_mb, state.bins[i].capacity_mb,
                     threshold))
                candidates.push_back(i);
        if (!candidates.empty()) {
            OpenBin& bin = state.bins[candidates[rng.below(
                static_cast<std::uint32_t>(candidates.size()))]];
            bin.used_mb += item.size_mb;
            result.placement[item.id] = bin.id;
        } else if (state.can_open(item.size_mb, threshold)) {
            result.placement[item.id] = state.open(item.size_mb).id;
        } else {
            result.leftover.push_back(item.id);
        }
    }
    result.bins_used = distinct_bins(result.placement);
    return result;
}

namespace {

struct BnbSearch {
    const std::vector<std::int64_t>& sizes;
    std::int64_t capacity;
    double threshold;
    int best;

    void run(std::size_t idx, std::vector<std::int64_t>& loads) {
        if (static_cast<int>(loads.size()) >= best) return;
        if (idx == sizes.size()) {
            best = static_cast<int>(loads.size());
            return;
        }
        // Two equally loaded bins are interchangeable; branch on one.
        std::set<std::int64_t> tried;
        for (std::size_t b = 0; b < loads.size(); ++b) {
            if (!tried.insert(loads[b]).second) continue;
            if (!fits(loads[b], sizes[idx], capacity, threshold)) continue;
            loads[b] += sizes[idx];
            run(idx + 1, loads);
            loads[b] -= sizes[idx];
        }
        loads.push_back(sizes[idx]);
        run(idx + 1, loads);
        loads.pop_back();
    }
};

} // namespace

int optimal_bins(const BinPackInstance& instance) {
    if (instance.item_sizes.size() > 14)
        throw SizeError("optimal_bins: exact search is capped at 14 items");
    if (instance.item_sizes.empty()) return 0;
    for (std::int64_t size : instance.item_sizes)
        if (!fits(0, size, instance.bin_capacity_mb, instance.threshold))
            throw InfeasibleError("optimal_bins: item of " + std::to_string(size) +
                                  " MB fits no bin");

    std::vector<std::int64_t> sizes = instance.item_sizes;
    std::sort(sizes.begin(), sizes.end(), std::greater<>());

    // FFD as the starting incumbent; the search can only improve on it.
    std::vector<Item> items;
    for (std::size_t i = 0; i < sizes.size(); ++i)
        items.push_back({"i" + std::to_string(i), sizes[i]});
    PlacementResult ffd = ffd_place(
        items, BinPool{instance.bin_capacity_mb, "bin"}, instance.threshold);

    BnbSearch search{sizes, instance.bin_capacity_mb, instance.threshold,
                     ffd.bins_used};
    std::vector<std::int64_t> loads;
    search.run(0, loads);
    return search.best;
}

PlacementResult place_vms_on_hosts(const std::vector<Item>& vm_items,
                                   const BinSupply& hosts, double threshold,
                                   PlaceAlgo algo, std::uint32_t seed) {
    if (algo == PlaceAlgo::Ffd) return ffd_place(vm_items, hosts, threshold);
    return random_place(vm_items, hosts, threshold, seed);
}

} // namespace cpmsim
