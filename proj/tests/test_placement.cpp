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

#include <algorithm>
#include <map>
#include <set>

#include <catch2/catch_amalgamated.hpp>

#include "cpmsim/errors.hpp"
#include "cpmsim/placement.hpp"
#include "cpmsim/rng.hpp"
#include "helpers.hpp"

using namespace cpmsim;
using namespace cpmsim::testing;

namespace {

// 25 containers each of 128, 256 and 512 MB, declared smallest type first.
std::vector<Item> mixed_workload() {
    std::vector<Item> items;
    const std::int64_t sizes[3] = {128, 256, 512};
    int n = 0;
    for (std::int64_t size : sizes)
        for (int i = 0; i < 25; ++i) items.push_back({seq_id("cnt", ++n), size});
    return items;
}

std::map<Id, std::vector<std::int64_t>> bin_contents(const PlacementResult& result,
                                                     const std::vector<Item>& items) {
    std::map<Id, std::int64_t> size_of;
    for (const Item& item : items) size_of[item.id] = item.size_mb;
    std::map<Id, std::vector<std::int64_t>> contents;
    for (const auto& [item_id, bin_id] : result.placement)
        contents[bin_id].push_back(size_of.at(item_id));
    for (auto& [bin_id, sizes] : contents) {
        (void)bin_id;
        std::sort(sizes.begin(), sizes.end());
    }
    return contents;
}

// Brute force reference: smallest k such that some assignment of items to k
// bins respects every capacity. Exponential in items; keep them tiny.
int exhaustive_min_bins(const std::vector<std::int64_t>& sizes, std::int64_t capacity,
                        double threshold) {
    if (sizes.empty()) return 0;
    auto feasible = [&](int k) {
        std::vector<int> assign(sizes.size(), 0);
        for (;;) {
            std::vector<std::int64_t> load(k, 0);
            bool ok = true;
            for (std::size_t i = 0; i < sizes.size(); ++i) load[assign[i]] += sizes[i];
            for (int b = 0; b < k; ++b)
                if (!fits(load[b], 0, capacity, threshold)) ok = false;
            if (ok) return true;
            int pos = static_cast<int>(sizes.size()) - 1;
            while (pos >= 0 && assign[pos] == k - 1) assign[pos--] = 0;
            if (pos < 0) return false;
            ++assign[pos];
        }
    };
    for (int k = 1;; ++k)
        if (feasible(k)) return k;
}

} // namespace

TEST_CASE("lower_bound rounds the volume ratio up") {
    CHECK(lower_bound(22400, 1024, 1.0) == 22);
    CHECK(lower_bound(22400, 1024, 0.9) == 25);
    CHECK(lower_bound(0, 1024, 0.9) == 0);
    CHECK(lower_bound(1, 1024, 1.0) == 1);
    CHECK_THROWS_AS(lower_bound(100, 0, 1.0), DomainError);
    CHECK_THROWS_AS(lower_bound(100, 1024, 0.0), DomainError);
    CHECK_THROWS_AS(lower_bound(-1, 1024, 1.0), DomainError);
}

TEST_CASE("ffd packs the mixed workload into 22 vms at full capacity") {
    PlacementResult result = ffd_place(mixed_workload(), BinPool{1024, "vm"}, 1.0);
    CHECK(result.bins_used == 22);
    CHECK(result.leftover.empty());
    CHECK(result.placement.size() == 75);
}

TEST_CASE("ffd at threshold 0.9 needs 25 vms, one triple each") {
    std::vector<Item> items = mixed_workload();
    PlacementResult result = ffd_place(items, BinPool{1024, "vm"}, 0.9);
    CHECK(result.bins_used == 25);
    CHECK(result.leftover.empty());
    for (const auto& [bin_id, sizes] : bin_contents(result, items)) {
        (void)bin_id;
        CHECK(sizes == std::vector<std::int64_t>{128, 256, 512});
    }
}

TEST_CASE("ffd solves the classic toy instance optimally") {
    std::vector<Item> items{{"a", 5}, {"b", 4}, {"c", 3}, {"d", 2}, {"e", 1}};
    PlacementResult result = ffd_place(items, BinPool{8, "bin"}, 1.0);
    CHECK(result.bins_used == 2);
    auto contents = bin_contents(result, items);
    CHECK(contents.at("bin-001") == std::vector<std::int64_t>{3, 5});
    CHECK(contents.at("bin-002") == std::vector<std::int64_t>{1, 2, 4});
}

TEST_CASE("ffd reports misfits as leftover with fixed bins") {
    std::vector<Item> items{{"a", 512}, {"b", 512}, {"c", 512}};
    FixedBins bins{{{"v1", 1024}}};
    PlacementResult result = ffd_place(items, bins, 1.0);
    CHECK(result.bins_used == 1);
    CHECK(result.placement.size() == 2);
    CHECK(result.leftover == std::vector<Id>{"c"});
}

TEST_CASE("random placement is deterministic per seed and never beats ffd") {
    std::vector<Item> items = mixed_workload();
    PlacementResult ffd = ffd_place(items, BinPool{1024, "vm"}, 0.9);
    for (std::uint32_t seed : {1u, 2u, 3u, 17u, 42u, 1000u}) {
        PlacementResult once = random_place(items, BinPool{1024, "vm"}, 0.9, seed);
        PlacementResult twice = random_place(items, BinPool{1024, "vm"}, 0.9, seed);
        CHECK(once.placement == twice.placement);
        CHECK(once.bins_used >= 25);
        CHECK(once.bins_used >= ffd.bins_used);
        CHECK(once.leftover.empty());
    }
}

TEST_CASE("random placement uses the only vm that fits") {
    std::vector<Item> items{{"c1", 128}};
    FixedBins bins{{{"v1", 1024}}};
    PlacementResult result = random_place(items, bins, 1.0, 7);
    CHECK(result.placement.at("c1") == "v1");
    CHECK(result.bins_used == 1);
}

TEST_CASE("random placement reports misfits as leftover") {
    std::vector<Item> items{{"a", 2048}};
    CHECK(random_place(items, FixedBins{{{"v1", 1024}}}, 1.0, 1).leftover ==
          std::vector<Id>{"a"});
    CHECK(random_place(items, BinPool{1024, "vm"}, 1.0, 1).leftover ==
          std::vector<Id>{"a"});
}

TEST_CASE("optimal_bins matches hand-checked instances") {
    CHECK(optimal_bins({{4, 4, 4, 3, 3, 3}, 7, 1.0}) == 3);
    CHECK(optimal_bins({{}, 8, 1.0}) == 0);
    CHECK(optimal_bins({{5, 3, 4, 2, 1}, 8, 1.0}) == 2);
}

TEST_CASE("optimal_bins enforces its size and feasibility limits") {
    BinPackInstance huge{std::vector<std::int64_t>(15, 1), 8, 1.0};
    CHECK_THROWS_AS(optimal_bins(huge), SizeError);
    CHECK_THROWS_AS(optimal_bins({{9}, 8, 1.0}), InfeasibleError);
    CHECK_THROWS_AS(optimal_bins({{8}, 8, 0.9}), InfeasibleError);
}

TEST_CASE("optimal_bins agrees with an exhaustive assignment search") {
    Rng rng(314159);
    for (int round = 0; round < 100; ++round) {
        std::int64_t capacity = 20 + rng.below(80);
        double threshold = (round % 2 == 0) ? 1.0 : 0.9;
        int n = 1 + static_cast<int>(rng.below(8));
        std::vector<std::int64_t> sizes;
        auto limit = static_cast<std::int64_t>(threshold * static_cast<double>(capacity));
        for (int i = 0; i < n; ++i) sizes.push_back(1 + rng.below(
            static_cast<std::uint32_t>(limit)));
        int exact = optimal_bins({sizes, capacity, threshold});
        int reference = exhaustive_min_bins(sizes, capacity, threshold);
        REQUIRE(exact == reference);
    }
}

TEST_CASE("vm-to-host placement shares the bin-packing contracts") {
    std::vector<Item> vms;
    for (int v = 1; v <= 7; ++v) vms.push_back({seq_id("vm", v), 2048});
    FixedBins hosts{{{"host-001", 8192}, {"host-002", 8192}, {"host-003", 8192}}};

    PlacementResult at90 = place_vms_on_hosts(vms, hosts, 0.9, PlaceAlgo::Ffd, 1);
    CHECK(at90.bins_used == 3); // 7372.8 MB per host admits three 2048 MB vms
    CHECK(at90.leftover.empty());

    std::vector<Item> small;
    for (int v = 1; v <= 25; ++v) small.push_back({seq_id("vm", v), 1024});
    FixedBins wide;
    for (int h = 1; h <= 7; ++h) wide.bins.push_back({seq_id("host", h), 65536});
    CHECK(place_vms_on_hosts(small, wide, 1.0, PlaceAlgo::Ffd, 1).bins_used == 1);

    CHECK(place_vms_on_hosts({}, wide, 1.0, PlaceAlgo::Ffd, 1).bins_used == 0);
    CHECK(place_vms_on_hosts({}, wide, 1.0, PlaceAlgo::Random, 1).bins_used == 0);
}

namespace {

std::vector<Item> random_items(Rng& rng, int max_items, std::int64_t capacity,
                               double threshold) {
    int n = 1 + static_cast<int>(rng.below(static_cast<std::uint32_t>(max_items)));
    auto limit = static_cast<std::int64_t>(threshold * static_cast<double>(capacity));
    std::vector<Item> items;
    for (int i = 0; i < n; ++i)
        items.push_back({seq_id("it", i + 1),
                         1 + rng.below(static_cast<std::uint32_t>(limit))});
    return items;
}

} // namespace

TEST_CASE("lower_bound never exceeds the ffd bin count") {
    Rng rng(271828);
    for (int round = 0; round < 500; ++round) {
        std::int64_t capacity = 50 + rng.below(200);
        double threshold = 0.7 + 0.1 * rng.below(4);
        std::vector<Item> items = random_items(rng, 20, capacity, threshold);
        std::int64_t total = 0;
        for (const Item& item : items) total += item.size_mb;
        PlacementResult result = ffd_place(items, BinPool{capacity, "b"}, threshold);
        REQUIRE(result.leftover.empty());
        REQUIRE(lower_bound(total, capacity, threshold) <= result.bins_used);
    }
}

TEST_CASE("ffd stays within the 11/9 guarantee of optimal") {
    Rng rng(161803);
    for (int round = 0; round < 250; ++round) {
        std::int64_t capacity = 20 + rng.below(100);
        double threshold = (round % 3 == 0) ? 0.9 : 1.0;
        std::vector<Item> items = random_items(rng, 12, capacity, threshold);
        PlacementResult result = ffd_place(items, BinPool{capacity, "b"}, threshold);
        std::vector<std::int64_t> sizes;
        for (const Item& item : items) sizes.push_back(item.size_mb);
        int opt = optimal_bins({sizes, capacity, threshold});
        REQUIRE(result.bins_used <= (11.0 / 9.0) * opt + 1.0 + 1e-9);
        REQUIRE(result.bins_used >= opt);
    }
}

TEST_CASE("ffd is invariant under input permutation") {
    Rng rng(577215);
    for (int round = 0; round < 200; ++round) {
        std::int64_t capacity = 50 + rng.below(100);
        std::vector<Item> items = random_items(rng, 15, capacity, 1.0);
        PlacementResult base = ffd_place(items, BinPool{capacity, "b"}, 1.0);
        std::vector<Item> shuffled = items;
        for (std::size_t i = shuffled.size(); i > 1; --i)
            std::swap(shuffled[i - 1],
                      shuffled[rng.below(static_cast<std::uint32_t>(i))]);
        PlacementResult permuted = ffd_place(shuffled, BinPool{capacity, "b"}, 1.0);
        REQUIRE(base.bins_used == permuted.bins_used);
        REQUIRE(base.placement == permuted.placement);
    }
}

TEST_CASE("placements assemble into states that pass validate") {
    ThresholdPolicy policy(0.9);
    std::vector<Item> items = mixed_workload();
    PlacementResult result = ffd_place(items, BinPool{1024, "vm"}, policy.upper);

    DatacenterState state;
    add_host(state, "host-001", 1000000);
    std::set<Id> bins;
    for (const auto& [item_id, bin_id] : result.placement) {
        (void)item_id;
        bins.insert(bin_id);
    }
    for (const Id& bin_id : bins) add_vm(state, bin_id, 1024, "host-001");
    for (const Item& item : items) {
        state.containers[item.id] =
            Container(item.id, ResourceSpec(1, 512, item.size_mb, 2500),
                      std::min<std::int64_t>(32, item.size_mb));
        state.vm_of[item.id] = result.placement.at(item.id);
    }
    CHECK(validate(state, policy).ok());
}
