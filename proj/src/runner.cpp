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

#include "cpmsim/runner.hpp"

#include <algorithm>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <set>
#include <utility>

#include <json.hpp>

#include "cpmsim/errors.hpp"

namespace cpmsim {
namespace {

using json = nlohmann::ordered_json;

const char* algo_name(PlaceAlgo algo) {
    return algo == PlaceAlgo::Ffd ? "ffd" : "random";
}

const char* mode_name(ConsolidationMode mode) {
    return mode == ConsolidationMode::VmMigration ? "vm" : "container";
}

const char* kind_name(MoveKind kind) {
    return kind == MoveKind::VmMove ? "vm" : "cnt";
}

std::string iso_utc_now() {
    std::time_t now = std::time(nullptr);
    std::tm parts{};
    gmtime_r(&now, &parts);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &parts);
    return buf;
}

double effective_threshold(const Scenario& scenario, const std::optional<double>& override_t) {
    double t = override_t.value_or(scenario.threshold);
    if (!(t > 0.0 && t <= 1.0)) throw UsageError("threshold must be in (0, 1]");
    return t;
}

PowerModel scenario_power_model(const Scenario& scenario) {
    PowerModel model;
    if (!scenario.hosts.empty()) model.pmax_w = scenario.hosts.front().max_power_w;
    return model;
}

json report_json(const RunReport& r) {
    json j;
    j["scenario"] = r.scenario;
    j["mode"] = r.mode;
    j["threshold"] = r.threshold;
    j["seed"] = r.seed;
    j["bins_used"] = r.bins_used;
    j["hosts_before"] = r.hosts_before;
    j["hosts_after"] = r.hosts_after;
    j["power_w_before"] = r.power_w_before;
    j["power_w_after"] = r.power_w_after;
    j["vm_moves"] = r.vm_moves;
    j["cnt_moves"] = r.cnt_moves;
    j["total_migration_s"] = r.total_migration_s;
    j["sum_downtime_s"] = r.sum_downtime_s;
    j["max_downtime_s"] = r.max_downtime_s;
    j["sla_level"] = r.sla_level;
    j["sla_violations"] = r.sla_violations;
    return j;
}

json meta_json() {
    json meta;
    meta["generated_at"] = iso_utc_now();
    return meta;
}

std::string report_csv(const RunReport& report) {
    return report_csv_header() + "\n" + report_csv_row(report) + "\n";
}

json placement_json(const std::map<Id, Id>& placement) {
    json j = json::object();
    for (const auto& [item, bin] : placement) j[item] = bin;
    return j;
}

} // namespace

RunOutput run_place(const Scenario& scenario, const PlaceOptions& options) {
    if (scenario.vms.empty())
        throw UsageError("scenario '" + scenario.name +
                         "' declares no vm template for container placement");
    double threshold = effective_threshold(scenario, options.threshold);
    std::uint32_t seed = options.seed.value_or(scenario.seed);

    RunOutput out;
    std::vector<Item> items = container_items(scenario);
    BinSupply vm_pool = BinPool{scenario.vms.front().spec.ram_mb, "vm"};
    out.containers = options.algo == PlaceAlgo::Ffd
                         ? ffd_place(items, vm_pool, threshold)
                         : random_place(items, vm_pool, threshold, seed);
    if (!out.containers.leftover.empty())
        throw InfeasibleError("container '" + out.containers.leftover.front() +
                              "' does not fit an empty vm at threshold " +
                              fmt_double(threshold));

    // Second stage: stack the opened VMs onto the declared hosts. The host
    // count is informational; a full fleet simply reports leftover VMs.
    if (!scenario.hosts.empty() && out.containers.bins_used > 0) {
        std::set<Id> opened;
        for (const auto& [cnt, vm] : out.containers.placement) opened.insert(vm);
        std::vector<Item> vm_load;
        vm_load.reserve(opened.size());
        for (const Id& id : opened)
            vm_load.push_back({id, scenario.vms.front().spec.ram_mb});
        FixedBins host_bins;
        for (const Host& h : scenario.hosts)
            host_bins.bins.push_back({h.id, h.spec.ram_mb});
        out.hosts = place_vms_on_hosts(vm_load, host_bins, threshold, options.algo, seed);
    }

    PowerModel model = scenario_power_model(scenario);
    out.report.scenario = scenario.name;
    out.report.mode = algo_name(options.algo);
    out.report.threshold = threshold;
    out.report.seed = seed;
    out.report.bins_used = out.containers.bins_used;
    out.report.hosts_before = out.hosts.bins_used;
    out.report.hosts_after = out.hosts.bins_used;
    out.report.power_w_before = power(out.hosts.bins_used, model);
    out.report.power_w_after = out.report.power_w_before;
    out.report.sla_level = scenario.sla.level;

    std::string base = scenario.name + "-place-" + algo_name(options.algo);
    if (options.format != OutputFormat::Json)
        out.files.push_back({base + ".csv", report_csv(out.report)});
    if (options.format != OutputFormat::Csv) {
        json j = report_json(out.report);
        j["placement"] = placement_json(out.containers.placement);
        j["host_placement"] = placement_json(out.hosts.placement);
        j["host_leftover"] = out.hosts.leftover;
        j["meta"] = meta_json();
        out.files.push_back({base + ".json", j.dump(2) + "\n"});
    }
    return out;
}

RunOutput run_consolidate(const Scenario& scenario, const ConsolidateOptions& options) {
    if (!scenario.has_layout())
        throw UsageError("scenario '" + scenario.name +
                         "' carries no explicit layout; consolidation needs one");
    double threshold = effective_threshold(scenario, options.threshold);
    DatacenterState before = scenario_state(scenario);
    ThresholdPolicy bound(threshold);
    if (!validate(before, bound).ok())
        throw UsageError("starting layout breaks threshold " + fmt_double(threshold));

    ConsolidationPolicy policy;
    policy.threshold = bound;
    policy.mode = options.mode;
    ConsolidateResult result = consolidate(before, policy);

    RunOutput out;
    out.plan = result.plan;
    out.timing = plan_timing(result.plan, before, scenario.timing);
    out.report = build_report(before, result.state, result.plan, out.timing, scenario.sla,
                              scenario_power_model(scenario));
    out.report.scenario = scenario.name;
    out.report.mode = mode_name(options.mode);
    out.report.threshold = threshold;
    out.report.seed = scenario.seed;
    out.report.bins_used = 0; // placement-only metric

    std::string moves_csv = "step,kind,subject,from,to,rounds,downtime_s,total_s\n";
    json moves = json::array();
    for (std::size_t i = 0; i < out.timing.per_move.size(); ++i) {
        const MoveTiming& mt = out.timing.per_move[i];
        moves_csv += std::to_string(i + 1);
        moves_csv += ',';
        moves_csv += kind_name(mt.move.kind);
        moves_csv += ',';
        moves_csv += mt.move.subject_id;
        moves_csv += ',';
        moves_csv += mt.move.from_id;
        moves_csv += ',';
        moves_csv += mt.move.to_id;
        moves_csv += ',';
        moves_csv += std::to_string(mt.timing.rounds.size());
        moves_csv += ',';
        moves_csv += fmt_double(mt.timing.downtime_s);
        moves_csv += ',';
        moves_csv += fmt_double(mt.timing.total_s);
        moves_csv += '\n';

        json m;
        m["step"] = i + 1;
        m["kind"] = kind_name(mt.move.kind);
        m["subject"] = mt.move.subject_id;
        m["from"] = mt.move.from_id;
        m["to"] = mt.move.to_id;
        m["rounds"] = mt.timing.rounds.size();
        m["downtime_s"] = mt.timing.downtime_s;
        m["total_s"] = mt.timing.total_s;
        moves.push_back(std::move(m));
    }

    std::string base = scenario.name + "-consolidate-" + mode_name(options.mode);
    if (options.format != OutputFormat::Json) {
        out.files.push_back({base + ".csv", report_csv(out.report)});
        out.files.push_back({base + "-moves.csv", moves_csv});
    }
    if (options.format != OutputFormat::Csv) {
        json j = report_json(out.report);
        j["moves"] = std::move(moves);
        j["freed_hosts"] = result.plan.freed_hosts;
        j["freed_vms"] = result.plan.freed_vms;
        j["meta"] = meta_json();
        out.files.push_back({base + ".json", j.dump(2) + "\n"});
    }
    return out;
}

RunOutput run_sweep(const Scenario& scenario, const SweepSpec& sweep) {
    if (!(sweep.from > 0.0 && sweep.from <= sweep.to && sweep.to <= 1.0 && sweep.step > 0.0))
        throw UsageError("sweep range must satisfy 0 < from <= to <= 1 with a positive step");
    if (scenario.vms.empty())
        throw UsageError("scenario '" + scenario.name +
                         "' declares no vm template for container placement");

    std::vector<Item> items = container_items(scenario);
    std::int64_t capacity = scenario.vms.front().spec.ram_mb;
    std::int64_t total = 0;
    for (const Item& item : items) total += item.size_mb;

    RunOutput out;
    std::string csv = "threshold,lower_bound,ffd_bins\n";
    for (int i = 0;; ++i) {
        double t = sweep.from + i * sweep.step;
        if (t > sweep.to + 1e-9) break;
        t = std::min(t, sweep.to);
        if (!out.sweep.empty() && std::fabs(out.sweep.back().threshold - t) < 1e-12) continue;
        PlacementResult ffd = ffd_place(items, BinPool{capacity, "vm"}, t);
        if (!ffd.leftover.empty())
            throw InfeasibleError("container '" + ffd.leftover.front() +
                                  "' does not fit an empty vm at threshold " + fmt_double(t));
        SweepRow row{t, lower_bound(total, capacity, t), ffd.bins_used};
        csv += fmt_double(row.threshold);
        csv += ',';
        csv += std::to_string(row.lower_bound_bins);
        csv += ',';
        csv += std::to_string(row.ffd_bins);
        csv += '\n';
        out.sweep.push_back(row);
    }
    out.report.scenario = scenario.name;
    out.report.mode = "sweep";
    out.files.push_back({scenario.name + "-sweep.csv", std::move(csv)});
    return out;
}

RunOutput run_timing(const Scenario& scenario) {
    RunOutput out;
    std::vector<std::pair<Id, std::int64_t>> vm_sizes, cnt_sizes;
    for (const Vm& v : scenario.vms) {
        bool seen = std::any_of(vm_sizes.begin(), vm_sizes.end(),
                                [&](const auto& p) { return p.second == v.spec.ram_mb; });
        if (!seen) vm_sizes.emplace_back(v.id, v.spec.ram_mb);
    }
    for (const Container& c : scenario.containers) {
        bool seen = std::any_of(cnt_sizes.begin(), cnt_sizes.end(),
                                [&](const auto& p) { return p.second == c.resident_mb; });
        if (!seen) cnt_sizes.emplace_back(c.id, c.resident_mb);
    }

    std::string csv = "id,kind,size_mb,rounds,downtime_s,total_s\n";
    auto emit = [&](const Id& id, MoveKind kind, std::int64_t size, const MigrationTiming& t) {
        TimingRow row{id, kind, size, static_cast<int>(t.rounds.size()), t.downtime_s,
                      t.total_s};
        csv += row.id;
        csv += ',';
        csv += kind_name(kind);
        csv += ',';
        csv += std::to_string(size);
        csv += ',';
        csv += std::to_string(row.rounds);
        csv += ',';
        csv += fmt_double(row.downtime_s);
        csv += ',';
        csv += fmt_double(row.total_s);
        csv += '\n';
        out.timings.push_back(std::move(row));
    };
    for (const auto& [id, size] : vm_sizes)
        emit(id, MoveKind::VmMove, size,
             vm_migration_time(static_cast<double>(size), scenario.timing));
    for (const auto& [id, size] : cnt_sizes)
        emit(id, MoveKind::ContainerMove, size,
             container_migration_time(static_cast<double>(size), scenario.timing));

    out.report.scenario = scenario.name;
    out.report.mode = "timing";
    out.files.push_back({scenario.name + "-timing.csv", std::move(csv)});
    return out;
}

void write_outputs(const RunOutput& output, const std::string& dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create directory '" + dir + "': " + ec.message());
    for (const OutputFile& file : output.files) {
        fs::path path = fs::path(dir) / file.filename;
        std::ofstream stream(path, std::ios::binary | std::ios::trunc);
        if (!stream) throw IoError("cannot open '" + path.string() + "' for writing");
        stream << file.content;
        stream.flush();
        if (!stream) throw IoError("write failed for '" + path.string() + "'");
    }
}

} // namespace cpmsim
