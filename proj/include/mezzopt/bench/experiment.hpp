#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mezzopt/gen/generator.hpp"
#include "mezzopt/io.hpp"
#include "mezzopt/moo/indicators.hpp"
#include "mezzopt/pick/aco.hpp"
#include "mezzopt/storage/assign.hpp"

namespace mezzopt::bench {

enum class SettingKind { storage, picking, interaction };

SettingKind parse_setting_kind(const std::string& name);
const char* to_string(SettingKind k);

/// One benchmark setting. Storage rosters name storage policies, picking
/// rosters name routing algorithms and interaction rosters name
/// "<fill policy>:<routing algorithm>" arms.
struct ExperimentPlan {
    std::string setting = "1.a";
    SettingKind kind = SettingKind::storage;
    gen::GenSpec spec = gen::gen_spec_for("small");
    std::uint64_t instance_seed = 1;
    std::uint64_t seed = 1;
    int tasks = 5;
    int repetitions = 10;
    std::vector<std::string> roster;
    storage::AssignOptions assign;
    pick::AcoParams aco;

    void validate() const;
    /// Seed of one (task, repetition) cell; distinct per repetition.
    std::uint64_t cell_seed(int task, int repetition) const;
};

ExperimentPlan plan_from_json(const io::Json& doc);
io::Json plan_to_json(const ExperimentPlan& plan);

/// Indicators of one front in one problem instance.
struct ResultRow {
    std::string setting;
    std::string policy;
    int task = 0;
    int floor = 0;  // storage: floor of the per-floor problem; 0 otherwise
    int repetition = 0;
    moo::IndicatorReport report;
};

struct TimingRow {
    std::string setting;
    std::string policy;
    int task = 0;
    int repetition = 0;
    double seconds = 0.0;
};

/// A cell whose solve threw; the run continues without its rows.
struct FailureRow {
    std::string policy;
    int task = 0;
    int repetition = 0;
    std::string message;
};

struct Aggregate {
    std::string setting;
    std::string policy;
    int samples = 0;
    double mean[6] = {};
    double sd[6] = {};
    bool has_spread = false;  // false when no sample has a defined spread
};

struct ResultTable {
    std::vector<ResultRow> rows;
    std::vector<TimingRow> timings;
    std::vector<FailureRow> failures;
    /// Reference front size per problem instance, for diagnostics.
    std::vector<std::pair<std::string, long>> reference_sizes;

    /// Mean and population standard deviation per (setting, policy), in
    /// roster order.
    std::vector<Aggregate> aggregate(const std::vector<std::string>& roster) const;
};

/// Work-pool size: MEZZOPT_THREADS when set and positive, else the hardware
/// concurrency.
int worker_count();

/// Runs `count` jobs on up to `workers` threads. Jobs must write to disjoint
/// outputs.
void parallel_for(int count, int workers, const std::function<void(int)>& job);

struct StorageTask {
    storage::AssignmentTask task;
    std::uint64_t split_seed = 0;
};

/// Random stocked products whose whole stock can be stored once more; the
/// quantity equals the current stock.
std::vector<StorageTask> storage_tasks(const WarehouseState& state, int count, std::uint64_t seed);

/// Random orders that the given states can all fulfil.
std::vector<Order> pick_tasks(const std::vector<const WarehouseState*>& states, const std::vector<Order>& orders,
                              int count, std::uint64_t seed);

ResultTable run_setting(const ExperimentPlan& plan);
ResultTable run_interaction(const ExperimentPlan& plan);
/// Dispatches on the plan kind.
ResultTable run_plan(const ExperimentPlan& plan);

struct Documents {
    std::string summary_mean;
    std::string summary_sd;
    std::string raw;
    std::string timing;
    std::string failures;
};

Documents summarize(const ResultTable& table, const std::vector<std::string>& roster);

/// Writes summary_mean.csv, summary_sd.csv, raw.csv, timing.csv,
/// failures.csv and the plan manifest into `dir`.
void write_documents(const std::filesystem::path& dir, const ExperimentPlan& plan, const Documents& docs);

/// Indicator columns in table order.
inline constexpr const char* kIndicatorNames[6] = {"C", "GD", "ED", "PFS", "GS", "IGD"};

}  // namespace mezzopt::bench
