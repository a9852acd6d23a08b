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

#include "cpmsim/scenario.hpp"

#include <algorithm>
#include <cstdio>
#include <initializer_list>
#include <optional>
#include <set>
#include <utility>

#include <json.hpp>

#include "cpmsim/errors.hpp"

namespace cpmsim {
namespace {

using json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ParseError(path + ": " + what);
}

std::string elem(const std::string& base, std::size_t i) {
    return base + "[" + std::to_string(i) + "]";
}

std::string join(const std::string& path, const char* key) {
    return path.empty() ? std::string(key) : path + "." + key;
}

void expect_object(const json& node, const std::string& path) {
    if (!node.is_object()) fail(path, "expected an object");
}

void reject_unknown(const json& obj, const std::string& path,
                    std::initializer_list<const char*> allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = std::any_of(allowed.begin(), allowed.end(),
                                 [&](const char* a) { return it.key() == a; });
        if (!known) fail(join(path, it.key().c_str()), "unknown field");
    }
}

void need(const json& obj, const std::string& path, const char* key) {
    if (!obj.contains(key))
        fail(path.empty() ? "document" : path, std::string("missing field '") + key + "'");
}

double number_at(const json& obj, const std::string& path, const char* key) {
    need(obj, path, key);
    const json& v = obj.at(key);
    if (!v.is_number()) fail(join(path, key), "expected a number");
    return v.get<double>();
}

double number_or(const json& obj, const std::string& path, const char* key, double def) {
    return obj.contains(key) ? number_at(obj, path, key) : def;
}

std::int64_t integer_at(const json& obj, const std::string& path, const char* key) {
    need(obj, path, key);
    const json& v = obj.at(key);
    if (!v.is_number_integer() && !v.is_number_unsigned())
        fail(join(path, key), "expected an integer");
    return v.get<std::int64_t>();
}

std::int64_t integer_or(const json& obj, const std::string& path, const char* key,
                        std::int64_t def) {
    return obj.contains(key) ? integer_at(obj, path, key) : def;
}

std::string string_at(const json& obj, const std::string& path, const char* key) {
    need(obj, path, key);
    const json& v = obj.at(key);
    if (!v.is_string()) fail(join(path, key), "expected a string");
    return v.get<std::string>();
}

Id claim(std::set<Id>& taken, Id id, const std::string& path) {
    if (!taken.insert(id).second) fail(path, "duplicate id '" + id + "'");
    return id;
}

/// Either {"id": "x"} for a single entity or {"name": "p", "count": n} for
/// p-001 ... p-00n. Counters continue across groups sharing a prefix.
std::vector<Id> expand_ids(const json& g, const std::string& path,
                           std::map<std::string, int>& counters, std::set<Id>& taken) {
    std::vector<Id> ids;
    if (g.contains("id")) {
        if (g.contains("count") || g.contains("name"))
            fail(path, "give either id or name/count, not both");
        Id id = string_at(g, path, "id");
        if (id.empty()) fail(join(path, "id"), "must not be empty");
        ids.push_back(claim(taken, std::move(id), join(path, "id")));
        return ids;
    }
    std::string prefix = string_at(g, path, "name");
    if (prefix.empty()) fail(join(path, "name"), "must not be empty");
    std::int64_t count = integer_or(g, path, "count", 1);
    if (count < 1 || count > 100000) fail(join(path, "count"), "must be between 1 and 100000");
    ids.reserve(static_cast<std::size_t>(count));
    for (std::int64_t k = 0; k < count; ++k) {
        char suffix[16];
        std::snprintf(suffix, sizeof suffix, "-%03d", ++counters[prefix]);
        ids.push_back(claim(taken, prefix + suffix, path));
    }
    return ids;
}

ResourceSpec spec_from(const json& g, const std::string& path) {
    std::int64_t pes = integer_or(g, path, "pes", 1);
    std::int64_t mips = integer_or(g, path, "mips", 0);
    std::int64_t ram = integer_at(g, path, "ram_mb");
    std::int64_t bw = integer_or(g, path, "bw", 0);
    if (pes < 1) fail(join(path, "pes"), "must be at least 1");
    if (mips < 0) fail(join(path, "mips"), "must be nonnegative");
    if (ram < 1) fail(join(path, "ram_mb"), "must be at least 1");
    if (bw < 0) fail(join(path, "bw"), "must be nonnegative");
    return ResourceSpec(static_cast<int>(pes), mips, ram, bw);
}

TimingParams timing_from(const json& t, const std::string& path) {
    expect_object(t, path);
    reject_unknown(t, path,
                   {"bandwidth_mb_s", "vm_dirty_rate_mb_s", "cnt_dirty_rate_mb_s",
                    "stop_threshold_mb", "max_rounds", "reservation_s", "vm_resume_s",
                    "cnt_freeze_s", "cnt_restore_s", "cnt_mode"});
    TimingParams p;
    p.bandwidth_mb_s = number_or(t, path, "bandwidth_mb_s", p.bandwidth_mb_s);
    p.vm_dirty_rate_mb_s = number_or(t, path, "vm_dirty_rate_mb_s", p.vm_dirty_rate_mb_s);
    p.cnt_dirty_rate_mb_s = number_or(t, path, "cnt_dirty_rate_mb_s", p.cnt_dirty_rate_mb_s);
    p.stop_threshold_mb = number_or(t, path, "stop_threshold_mb", p.stop_threshold_mb);
    p.max_rounds = static_cast<int>(integer_or(t, path, "max_rounds", p.max_rounds));
    p.reservation_s = number_or(t, path, "reservation_s", p.reservation_s);
    p.vm_resume_s = number_or(t, path, "vm_resume_s", p.vm_resume_s);
    p.cnt_freeze_s = number_or(t, path, "cnt_freeze_s", p.cnt_freeze_s);
    p.cnt_restore_s = number_or(t, path, "cnt_restore_s", p.cnt_restore_s);
    if (t.contains("cnt_mode")) {
        std::string mode = string_at(t, path, "cnt_mode");
        if (mode == "freeze-copy")
            p.cnt_mode = CntMigrationMode::FreezeCopy;
        else if (mode == "precopy")
            p.cnt_mode = CntMigrationMode::Precopy;
        else
            fail(join(path, "cnt_mode"), "expected \"freeze-copy\" or \"precopy\"");
    }
    if (!(p.bandwidth_mb_s > 0)) fail(join(path, "bandwidth_mb_s"), "must be positive");
    if (p.vm_dirty_rate_mb_s < 0) fail(join(path, "vm_dirty_rate_mb_s"), "must be nonnegative");
    if (p.cnt_dirty_rate_mb_s < 0) fail(join(path, "cnt_dirty_rate_mb_s"), "must be nonnegative");
    if (!(p.stop_threshold_mb > 0)) fail(join(path, "stop_threshold_mb"), "must be positive");
    if (p.max_rounds < 1) fail(join(path, "max_rounds"), "must be at least 1");
    if (p.reservation_s < 0) fail(join(path, "reservation_s"), "must be nonnegative");
    if (p.vm_resume_s < 0) fail(join(path, "vm_resume_s"), "must be nonnegative");
    if (p.cnt_freeze_s < 0) fail(join(path, "cnt_freeze_s"), "must be nonnegative");
    if (p.cnt_restore_s < 0) fail(join(path, "cnt_restore_s"), "must be nonnegative");
    return p;
}

SlaSpec sla_from(const json& s, const std::string& path) {
    expect_object(s, path);
    reject_unknown(s, path, {"level", "horizon", "year_minutes"});
    SlaSpec spec;
    spec.level = number_or(s, path, "level", spec.level);
    if (!(spec.level > 0.0 && spec.level < 1.0)) fail(join(path, "level"), "must be in (0, 1)");
    if (s.contains("horizon")) {
        std::string horizon = string_at(s, path, "horizon");
        if (horizon == "day")
            spec.horizon = SlaHorizon::Day;
        else if (horizon == "month")
            spec.horizon = SlaHorizon::Month;
        else if (horizon == "year")
            spec.horizon = SlaHorizon::Year;
        else
            fail(join(path, "horizon"), "expected \"day\", \"month\" or \"year\"");
    }
    spec.year_minutes = number_or(s, path, "year_minutes", spec.year_minutes);
    if (!(spec.year_minutes > 0)) fail(join(path, "year_minutes"), "must be positive");
    return spec;
}

const char* mode_name(CntMigrationMode mode) {
    return mode == CntMigrationMode::FreezeCopy ? "freeze-copy" : "precopy";
}

const char* horizon_name(SlaHorizon horizon) {
    switch (horizon) {
    case SlaHorizon::Day: return "day";
    case SlaHorizon::Month: return "month";
    default: return "year";
    }
}

} // namespace

Scenario parse_scenario(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    expect_object(doc, "document");
    reject_unknown(doc, "",
                   {"name", "threshold", "seed", "hosts", "vms", "containers", "timing", "sla"});

    Scenario s;
    s.name = string_at(doc, "", "name");
    if (s.name.empty()) fail("name", "must not be empty");
    s.threshold = number_at(doc, "", "threshold");
    if (!(s.threshold > 0.0 && s.threshold <= 1.0)) fail("threshold", "must be in (0, 1]");
    std::int64_t seed = integer_or(doc, "", "seed", 1);
    if (seed < 0 || seed > 0xFFFFFFFFLL) fail("seed", "must fit an unsigned 32-bit integer");
    s.seed = static_cast<std::uint32_t>(seed);
    if (doc.contains("timing")) s.timing = timing_from(doc["timing"], "timing");
    if (doc.contains("sla")) s.sla = sla_from(doc["sla"], "sla");

    std::set<Id> taken;
    std::map<std::string, int> host_seq, vm_seq, cnt_seq;
    struct Link {
        std::string path;
        Id id;
        Id target;
    };
    std::vector<Link> vm_links, cnt_links;

    if (doc.contains("hosts")) {
        const json& arr = doc["hosts"];
        if (!arr.is_array()) fail("hosts", "expected an array");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            std::string path = elem("hosts", i);
            const json& g = arr[i];
            expect_object(g, path);
            reject_unknown(g, path,
                           {"count", "name", "id", "pes", "mips", "ram_mb", "bw", "max_power_w"});
            ResourceSpec spec = spec_from(g, path);
            double pmax = number_or(g, path, "max_power_w", 250.0);
            if (!(pmax > 0)) fail(join(path, "max_power_w"), "must be positive");
            for (Id& id : expand_ids(g, path, host_seq, taken))
                s.hosts.emplace_back(std::move(id), spec, pmax);
        }
    }

    if (doc.contains("vms")) {
        const json& arr = doc["vms"];
        if (!arr.is_array()) fail("vms", "expected an array");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            std::string path = elem("vms", i);
            const json& g = arr[i];
            expect_object(g, path);
            reject_unknown(g, path, {"count", "name", "id", "pes", "mips", "ram_mb", "bw", "host"});
            ResourceSpec spec = spec_from(g, path);
            std::optional<Id> host;
            if (g.contains("host")) {
                host = string_at(g, path, "host");
                if (host->empty()) fail(join(path, "host"), "must not be empty");
            }
            for (Id& id : expand_ids(g, path, vm_seq, taken)) {
                if (host) vm_links.push_back({path, id, *host});
                s.vms.push_back(Vm{std::move(id), spec});
            }
        }
    }

    if (doc.contains("containers")) {
        const json& arr = doc["containers"];
        if (!arr.is_array()) fail("containers", "expected an array");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            std::string path = elem("containers", i);
            const json& g = arr[i];
            expect_object(g, path);
            reject_unknown(g, path, {"count", "name", "id", "pes", "mips", "ram_mb", "bw",
                                     "resident_mb", "vm"});
            ResourceSpec spec = spec_from(g, path);
            std::int64_t resident =
                integer_or(g, path, "resident_mb", std::min<std::int64_t>(32, spec.ram_mb));
            if (resident < 1 || resident > spec.ram_mb)
                fail(join(path, "resident_mb"), "must be in [1, ram_mb]");
            std::optional<Id> vm;
            if (g.contains("vm")) {
                vm = string_at(g, path, "vm");
                if (vm->empty()) fail(join(path, "vm"), "must not be empty");
            }
            for (Id& id : expand_ids(g, path, cnt_seq, taken)) {
                if (vm) cnt_links.push_back({path, id, *vm});
                s.containers.emplace_back(std::move(id), spec, resident);
            }
        }
    }

    std::set<Id> host_ids, vm_ids;
    for (const Host& h : s.hosts) host_ids.insert(h.id);
    for (const Vm& v : s.vms) vm_ids.insert(v.id);
    for (const Link& link : vm_links) {
        if (!host_ids.count(link.target))
            fail(join(link.path, "host"), "unknown host '" + link.target + "'");
        s.vm_host[link.id] = link.target;
    }
    for (const Link& link : cnt_links) {
        if (!vm_ids.count(link.target))
            fail(join(link.path, "vm"), "unknown vm '" + link.target + "'");
        s.cnt_vm[link.id] = link.target;
    }
    if (!s.vm_host.empty() && s.vm_host.size() != s.vms.size())
        fail("vms", "either every vm names a host or none does");
    if (!s.cnt_vm.empty() && s.cnt_vm.size() != s.containers.size())
        fail("containers", "either every container names a vm or none does");
    if (!s.cnt_vm.empty() && s.vm_host.empty())
        fail("containers", "container assignments need vm host assignments");

    if (s.has_layout()) {
        ValidationReport report = validate(scenario_state(s), ThresholdPolicy(s.threshold));
        if (!report.ok()) {
            const Violation& v = report.violations.front();
            fail("layout", v.entity + ": " + v.message);
        }
    }
    return s;
}

std::string emit_scenario(const Scenario& s) {
    json doc;
    doc["name"] = s.name;
    doc["threshold"] = s.threshold;
    doc["seed"] = s.seed;

    json timing;
    timing["bandwidth_mb_s"] = s.timing.bandwidth_mb_s;
    timing["vm_dirty_rate_mb_s"] = s.timing.vm_dirty_rate_mb_s;
    timing["cnt_dirty_rate_mb_s"] = s.timing.cnt_dirty_rate_mb_s;
    timing["stop_threshold_mb"] = s.timing.stop_threshold_mb;
    timing["max_rounds"] = s.timing.max_rounds;
    timing["reservation_s"] = s.timing.reservation_s;
    timing["vm_resume_s"] = s.timing.vm_resume_s;
    timing["cnt_freeze_s"] = s.timing.cnt_freeze_s;
    timing["cnt_restore_s"] = s.timing.cnt_restore_s;
    timing["cnt_mode"] = mode_name(s.timing.cnt_mode);
    doc["timing"] = timing;

    json sla;
    sla["level"] = s.sla.level;
    sla["horizon"] = horizon_name(s.sla.horizon);
    sla["year_minutes"] = s.sla.year_minutes;
    doc["sla"] = sla;

    json hosts = json::array();
    for (const Host& h : s.hosts) {
        json g;
        g["id"] = h.id;
        g["pes"] = h.spec.pes;
        g["mips"] = h.spec.mips;
        g["ram_mb"] = h.spec.ram_mb;
        g["bw"] = h.spec.bw;
        g["max_power_w"] = h.max_power_w;
        hosts.push_back(std::move(g));
    }
    doc["hosts"] = std::move(hosts);

    json vms = json::array();
    for (const Vm& v : s.vms) {
        json g;
        g["id"] = v.id;
        g["pes"] = v.spec.pes;
        g["mips"] = v.spec.mips;
        g["ram_mb"] = v.spec.ram_mb;
        g["bw"] = v.spec.bw;
        auto it = s.vm_host.find(v.id);
        if (it != s.vm_host.end()) g["host"] = it->second;
        vms.push_back(std::move(g));
    }
    doc["vms"] = std::move(vms);

    json containers = json::array();
    for (const Container& c : s.containers) {
        json g;
        g["id"] = c.id;
        g["pes"] = c.spec.pes;
        g["mips"] = c.spec.mips;
        g["ram_mb"] = c.spec.ram_mb;
        g["bw"] = c.spec.bw;
        g["resident_mb"] = c.resident_mb;
        auto it = s.cnt_vm.find(c.id);
        if (it != s.cnt_vm.end()) g["vm"] = it->second;
        containers.push_back(std::move(g));
    }
    doc["containers"] = std::move(containers);

    return doc.dump(2) + "\n";
}

DatacenterState scenario_state(const Scenario& s) {
    if (!s.has_layout())
        throw UsageError("scenario '" + s.name + "' has no complete vm/container layout");
    DatacenterState state;
    for (const Host& h : s.hosts) state.hosts[h.id] = h;
    for (const Vm& v : s.vms) {
        state.vms[v.id] = v;
        state.host_of[v.id] = s.vm_host.at(v.id);
    }
    for (const Container& c : s.containers) {
        state.containers[c.id] = c;
        state.vm_of[c.id] = s.cnt_vm.at(c.id);
    }
    return state;
}

std::vector<Item> container_items(const Scenario& s) {
    std::vector<Item> items;
    items.reserve(s.containers.size());
    for (const Container& c : s.containers) items.push_back({c.id, c.spec.ram_mb});
    return items;
}

std::vector<Item> vm_items(const Scenario& s) {
    std::vector<Item> items;
    items.reserve(s.vms.size());
    for (const Vm& v : s.vms) items.push_back({v.id, v.spec.ram_mb});
    return items;
}

} // namespace cpmsim
