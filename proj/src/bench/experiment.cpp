#include "mezzopt/bench/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <map>
#include <mutex>
#include <numeric>
#include <set>
#include <sstream>
#include <thread>

#include "mezzopt/random.hpp"
#include "mezzopt/storage/nsga2.hpp"

namespace mezzopt::bench {

SettingKind parse_setting_kind(const std::string& name) {
    if (name == "storage") return SettingKind::storage;
    if (name == "picking") return SettingKind::picking;
    if (name == "interaction") return SettingKind::interaction;
    throw ConfigurationError("unknown setting kind '" + name + "'");
}

const char* to_string(SettingKind k) {
    switch (k) {
        case SettingKind::storage: return "storage";
        case SettingKind::picking: return "picking";
        case SettingKind::interaction: return "interaction";
    }
    return "?";
}

namespace {

bool deterministic(const std::string& policy) { return policy == "closest" || policy == "rank" || policy == "sshape"; }

std::pair<std::string, std::string> split_arm(const std::string& arm) {
    const auto colon = arm.find(':');
    if (colon == std::string::npos) throw ConfigurationError("interaction arm '" + arm + "' must read <fill>:<routing>");
    return {arm.substr(0, colon), arm.substr(colon + 1)};
}

void check_routing(const std::string& name) {
    if (name != "aco3" && name != "aco4" && name != "sshape") throw ConfigurationError("unknown routing algorithm '" + name + "'");
}

void check_storage(const std::string& name) {
    try {
        storage::parse_storage_policy(name);
    } catch (const UsageError& e) {
        throw ConfigurationError(e.what());
    }
}

}  // namespace

void ExperimentPlan::validate() const {
    if (roster.empty()) throw ConfigurationError("plan roster is empty");
    if (tasks < 1) throw ConfigurationError("plan needs at least one task");
    if (repetitions < 1) throw ConfigurationError("plan needs at least one repetition");
    std::set<std::string> seen;
    for (const auto& r : roster) {
        if (!seen.insert(r).second) throw ConfigurationError("roster lists '" + r + "' twice");
        switch (kind) {
            case SettingKind::storage: check_storage(r); break;
            case SettingKind::picking: check_routing(r); break;
            case SettingKind::interaction: {
                const auto [fill, routing] = split_arm(r);
                check_storage(fill);
                check_routing(routing);
                break;
            }
        }
    }
    spec.validate();
    assign.nsga.validate();
    aco.validate();
}

std::uint64_t ExperimentPlan::cell_seed(int task, int repetition) const {
    return derive_seed(seed, {static_cast<std::uint64_t>(task), static_cast<std::uint64_t>(repetition)});
}

ExperimentPlan plan_from_json(const io::Json& doc) {
    try {
        ExperimentPlan plan;
        for (const auto& [k, v] : doc.items()) {
            static const std::set<std::string> keys{"setting", "kind",  "spec",   "instance_seed", "seed",
                                                    "tasks",   "repetitions", "roster", "storage_params", "aco_params"};
            if (!keys.contains(k)) throw ConfigurationError("unknown key '" + k + "' in plan");
        }
        plan.setting = doc.value("setting", plan.setting);
        plan.kind = parse_setting_kind(doc.at("kind").get<std::string>());
        if (doc.contains("spec")) plan.spec = io::gen_spec_from_json(doc.at("spec"));
        plan.instance_seed = doc.value("instance_seed", plan.instance_seed);
        plan.seed = doc.value("seed", plan.seed);
        plan.tasks = doc.value("tasks", plan.tasks);
        plan.repetitions = doc.value("repetitions", plan.repetitions);
        plan.roster = doc.at("roster").get<std::vector<std::string>>();
        storage::AssignOptions base;
        if (plan.spec.size == "medium") base.nsga = storage::nsga_params_medium();
        if (plan.spec.size == "large") base.nsga = storage::nsga_params_large();
        plan.assign = doc.contains("storage_params") ? io::assign_options_from_json(doc.at("storage_params"), base) : base;
        if (doc.contains("aco_params")) plan.aco = io::aco_params_from_json(doc.at("aco_params"));
        plan.validate();
        return plan;
    } catch (const io::Json::exception& e) {
        throw ConfigurationError(std::string("malformed plan: ") + e.what());
    }
}

io::Json plan_to_json(const ExperimentPlan& plan) {
    io::Json storage_params = io::nsga_params_to_json(plan.assign.nsga);
    storage_params["random_samples"] = plan.assign.random_samples;
    storage_params["areas"] = plan.assign.score.areas;
    auto aco = io::aco_params_to_json(plan.aco);
    aco.erase("variant");
    return {{"setting", plan.setting},
            {"kind", to_string(plan.kind)},
            {"spec", io::gen_spec_to_json(plan.spec)},
            {"instance_seed", plan.instance_seed},
            {"seed", plan.seed},
            {"tasks", plan.tasks},
            {"repetitions", plan.repetitions},
            {"roster", plan.roster},
            {"storage_params", storage_params},
            {"aco_params", aco}};
}

int worker_count() {
    if (const char* env = std::getenv("MEZZOPT_THREADS")) {
        char* end = nullptr;
        const long n = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && n > 0) return static_cast<int>(n);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(int count, int workers, const std::function<void(int)>& job) {
    workers = std::clamp(workers, 1, std::max(1, count));
    if (workers == 1) {
        for (int i = 0; i < count; ++i) job(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (int i = next++; i < count; i = next++) {
                try {
                    job(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

std::vector<StorageTask> storage_tasks(const WarehouseState& state, int count, std::uint64_t seed) {
    std::vector<ProductNumber> stocked;
    for (const auto& p : state.products())
        if (state.total_quantity(p.number) > 0) stocked.push_back(p.number);
    std::mt19937_64 rng(derive_seed(seed, {0}));
    std::shuffle(stocked.begin(), stocked.end(), rng);
    std::vector<StorageTask> out;
    for (auto p : stocked) {
        if (static_cast<int>(out.size()) == count) break;
        StorageTask t{{p, state.total_quantity(p)}, derive_seed(seed, {1, static_cast<std::uint64_t>(p)})};
        try {
            storage::Rng split(t.split_seed);
            storage::split_across_floors(state, t.task, split);
        } catch (const InfeasibleTaskError&) {
            continue;
        }
        out.push_back(t);
    }
    if (static_cast<int>(out.size()) < count) throw ConfigurationError("not enough storable products for the task count");
    return out;
}

std::vector<Order> pick_tasks(const std::vector<const WarehouseState*>& states, const std::vector<Order>& orders, int count,
                              std::uint64_t seed) {
    std::vector<std::size_t> idx(orders.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::mt19937_64 rng(derive_seed(seed, {2}));
    std::shuffle(idx.begin(), idx.end(), rng);
    std::vector<Order> out;
    for (auto i : idx) {
        if (static_cast<int>(out.size()) == count) break;
        const auto lines = pick::pick_list(orders[i]);
        const bool ok = std::all_of(states.begin(), states.end(), [&](const WarehouseState* s) {
            return std::all_of(lines.begin(), lines.end(), [&](const OrderLine& l) {
                return s->has_product(l.product) && s->total_quantity(l.product) >= l.quantity;
            });
        });
        if (ok) out.push_back(orders[i]);
    }
    if (static_cast<int>(out.size()) < count) throw ConfigurationError("not enough feasible orders for the task count");
    return out;
}

namespace {

/// Fronts of every (policy, repetition) on one problem instance.
struct InstanceFronts {
    int task = 0;
    int floor = 0;
    moo::Orientation orientation;
    // indexed [policy][repetition]; empty optional = failed or skipped
    std::vector<std::vector<std::optional<Eigen::MatrixXd>>> fronts;
};

struct CellOutput {
    // (floor, front) per problem instance solved in this cell
    std::vector<std::pair<int, Eigen::MatrixXd>> fronts;
    double seconds = 0.0;
    std::optional<std::string> failure;
};

struct Cell {
    int policy = 0;
    int task = 0;
    int repetition = 0;
};

std::vector<Cell> make_cells(const ExperimentPlan& plan) {
    std::vector<Cell> cells;
    for (int p = 0; p < static_cast<int>(plan.roster.size()); ++p) {
        const auto& name = plan.roster[static_cast<std::size_t>(p)];
        const auto routing = plan.kind == SettingKind::interaction ? split_arm(name).second : name;
        const int reps = deterministic(routing) ? 1 : plan.repetitions;
        for (int t = 0; t < plan.tasks; ++t)
            for (int r = 0; r < reps; ++r) cells.push_back({p, t, r});
    }
    return cells;
}

template <typename Solve>
ResultTable execute(const ExperimentPlan& plan, const moo::Orientation& orientation, Solve solve) {
    const auto cells = make_cells(plan);
    std::vector<CellOutput> outputs(cells.size());
    parallel_for(static_cast<int>(cells.size()), worker_count(), [&](int i) {
        const auto& c = cells[static_cast<std::size_t>(i)];
        auto& out = outputs[static_cast<std::size_t>(i)];
        try {
            out = solve(c, plan.cell_seed(c.task, c.repetition));
        } catch (const std::exception& e) {
            out.fronts.clear();
            out.failure = e.what();
        }
    });

    ResultTable table;
    const auto npol = plan.roster.size();
    const auto nrep = static_cast<std::size_t>(plan.repetitions);
    std::map<std::pair<int, int>, InstanceFronts> instances;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        const auto& c = cells[i];
        const auto& out = outputs[i];
        const auto& name = plan.roster[static_cast<std::size_t>(c.policy)];
        if (out.failure) {
            table.failures.push_back({name, c.task, c.repetition, *out.failure});
            continue;
        }
        table.timings.push_back({plan.setting, name, c.task, c.repetition, out.seconds});
        const auto routing = plan.kind == SettingKind::interaction ? split_arm(name).second : name;
        for (const auto& [floor, front] : out.fronts) {
            auto& inst = instances[{c.task, floor}];
            if (inst.fronts.empty()) {
                inst.task = c.task;
                inst.floor = floor;
                inst.orientation = orientation;
                inst.fronts.assign(npol, std::vector<std::optional<Eigen::MatrixXd>>(nrep));
            }
            auto& slots = inst.fronts[static_cast<std::size_t>(c.policy)];
            if (deterministic(routing)) {
                for (auto& s : slots) s = front;
            } else {
                slots[static_cast<std::size_t>(c.repetition)] = front;
            }
        }
    }

    for (const auto& [key, inst] : instances) {
        std::vector<Eigen::MatrixXd> all;
        Eigen::Index total = 0;
        for (const auto& per_policy : inst.fronts)
            for (const auto& f : per_policy)
                if (f && f->rows() > 0) {
                    all.push_back(*f);
                    total += f->rows();
                }
        if (all.empty()) continue;
        Eigen::MatrixXd joined(total, all.front().cols());
        Eigen::Index at = 0;
        for (const auto& f : all) {
            joined.middleRows(at, f.rows()) = f;
            at += f.rows();
        }
        const Eigen::MatrixXd reference = moo::reference_front(all, inst.orientation);
        const Eigen::VectorXd ideal = moo::ideal_point(joined, inst.orientation);
        const Eigen::VectorXd hv_ref = moo::nadir_with_margin(joined, inst.orientation);
        std::ostringstream label;
        label << "task " << inst.task;
        if (inst.floor > 0) label << " floor " << inst.floor;
        table.reference_sizes.push_back({label.str(), static_cast<long>(reference.rows())});
        for (std::size_t p = 0; p < npol; ++p)
            for (std::size_t r = 0; r < nrep; ++r) {
                const auto& f = inst.fronts[p][r];
                if (!f) continue;
                ResultRow row{plan.setting, plan.roster[p], inst.task, inst.floor, static_cast<int>(r), {}};
                row.report = moo::compute_indicators<double>(*f, reference, ideal, hv_ref, inst.orientation);
                table.rows.push_back(std::move(row));
            }
    }
    std::stable_sort(table.rows.begin(), table.rows.end(), [&](const ResultRow& a, const ResultRow& b) {
        const auto pa = std::find(plan.roster.begin(), plan.roster.end(), a.policy) - plan.roster.begin();
        const auto pb = std::find(plan.roster.begin(), plan.roster.end(), b.policy) - plan.roster.begin();
        return std::tie(pa, a.task, a.floor, a.repetition) < std::tie(pb, b.task, b.floor, b.repetition);
    });
    return table;
}

template <typename F>
double timed(F&& f) {
    const auto start = std::chrono::steady_clock::now();
    f();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

Eigen::MatrixXd route_matrix(const std::vector<pick::PickRoute>& routes) {
    Eigen::MatrixXd m(static_cast<Eigen::Index>(routes.size()), 2);
    for (std::size_t i = 0; i < routes.size(); ++i) m.row(static_cast<Eigen::Index>(i)) = routes[i].objectives().transpose();
    return m;
}

std::vector<pick::PickRoute> solve_routing(const std::string& algo, const pick::PickProblem& problem,
                                           const pick::AcoParams& base, std::uint64_t seed, double& seconds) {
    std::vector<pick::PickRoute> front;
    if (algo == "sshape") {
        seconds = timed([&] { front = pick::s_shape_routes(problem); });
    } else {
        auto params = base;
        params.variant = pick::parse_aco_variant(algo);
        seconds = timed([&] { front = pick::aco_optimize(problem, params, seed).front; });
    }
    return front;
}

}  // namespace

ResultTable run_setting(const ExperimentPlan& plan) {
    plan.validate();
    if (plan.kind == SettingKind::interaction) return run_interaction(plan);
    const auto instance = gen::generate_instance(plan.spec, plan.instance_seed);
    const auto& state = instance.state;

    if (plan.kind == SettingKind::storage) {
        const auto tasks = storage_tasks(state, plan.tasks, derive_seed(plan.seed, {1u << 30}));
        return execute(plan, storage::storage_orientation(), [&](const Cell& c, std::uint64_t seed) {
            const auto& t = tasks[static_cast<std::size_t>(c.task)];
            auto options = plan.assign;
            options.split_seed = t.split_seed;
            const auto policy = storage::parse_storage_policy(plan.roster[static_cast<std::size_t>(c.policy)]);
            CellOutput out;
            storage::AssignmentResult result;
            out.seconds = timed([&] { result = storage::assign_product(state, t.task, policy, options, seed); });
            for (const auto& f : result.floors) out.fronts.push_back({f.floor, storage::objective_matrix(f.front)});
            return out;
        });
    }

    const auto orders = pick_tasks({&state}, instance.orders, plan.tasks, derive_seed(plan.seed, {1u << 30}));
    const pick::MarketGraph graph(state, plan.aco.floor_penalty);
    std::vector<pick::PickProblem> problems;
    for (const auto& o : orders) problems.emplace_back(graph, pick::pick_list(o), plan.aco.allowed_weight_difference);
    return execute(plan, moo::minimize_all(2), [&](const Cell& c, std::uint64_t seed) {
        CellOutput out;
        const auto front = solve_routing(plan.roster[static_cast<std::size_t>(c.policy)],
                                         problems[static_cast<std::size_t>(c.task)], plan.aco, seed, out.seconds);
        out.fronts.push_back({0, route_matrix(front)});
        return out;
    });
}

ResultTable run_interaction(const ExperimentPlan& plan) {
    plan.validate();
    if (plan.kind != SettingKind::interaction) throw ConfigurationError("plan is not an interaction setting");
    const auto instance = gen::generate_instance(plan.spec, plan.instance_seed);

    // One warehouse per fill policy: same layout, assortment, schedule and orders.
    std::map<std::string, WarehouseState> filled;
    std::vector<std::string> fills;
    for (const auto& arm : plan.roster) {
        const auto fill = split_arm(arm).first;
        if (!filled.contains(fill)) fills.push_back(fill), filled.emplace(fill, WarehouseState{});
    }
    parallel_for(static_cast<int>(fills.size()), worker_count(), [&](int i) {
        const auto& name = fills[static_cast<std::size_t>(i)];
        const auto policy = storage::parse_storage_policy(name);
        if (policy == storage::StoragePolicy::random) {
            filled.at(name) = instance.state;
            return;
        }
        auto state = gen::generate_empty_warehouse(plan.spec, plan.instance_seed);
        gen::FillOptions options{policy, plan.assign};
        gen::fill_warehouse(state, plan.spec, derive_seed(plan.instance_seed, {13}), options);
        filled.at(name) = std::move(state);
    });

    std::vector<const WarehouseState*> states;
    for (const auto& f : fills) states.push_back(&filled.at(f));
    const auto orders = pick_tasks(states, instance.orders, plan.tasks, derive_seed(plan.seed, {1u << 30}));

    std::map<std::string, pick::MarketGraph> graphs;
    for (const auto& f : fills) graphs.emplace(f, pick::MarketGraph(filled.at(f), plan.aco.floor_penalty));
    std::map<std::pair<std::string, int>, pick::PickProblem> problems;
    for (const auto& f : fills)
        for (int t = 0; t < plan.tasks; ++t)
            problems.emplace(std::pair{f, t}, pick::PickProblem(graphs.at(f), pick::pick_list(orders[static_cast<std::size_t>(t)]),
                                                                plan.aco.allowed_weight_difference));

    return execute(plan, moo::minimize_all(2), [&](const Cell& c, std::uint64_t seed) {
        const auto [fill, routing] = split_arm(plan.roster[static_cast<std::size_t>(c.policy)]);
        CellOutput out;
        const auto front = solve_routing(routing, problems.at({fill, c.task}), plan.aco, seed, out.seconds);
        out.fronts.push_back({0, route_matrix(front)});
        return out;
    });
}

ResultTable run_plan(const ExperimentPlan& plan) {
    return plan.kind == SettingKind::interaction ? run_interaction(plan) : run_setting(plan);
}

std::vector<Aggregate> ResultTable::aggregate(const std::vector<std::string>& roster) const {
    std::vector<Aggregate> out;
    for (const auto& policy : roster) {
        std::vector<const ResultRow*> mine;
        for (const auto& r : rows)
            if (r.policy == policy) mine.push_back(&r);
        if (mine.empty()) continue;
        Aggregate a;
        a.setting = mine.front()->setting;
        a.policy = policy;
        a.samples = static_cast<int>(mine.size());
        for (int k = 0; k < 6; ++k) {
            std::vector<double> v;
            for (const auto* r : mine) {
                const auto& rep = r->report;
                switch (k) {
                    case 0: v.push_back(rep.coverage); break;
                    case 1: v.push_back(rep.generational_distance); break;
                    case 2: v.push_back(rep.euclidean_distance); break;
                    case 3: v.push_back(static_cast<double>(rep.pareto_front_size)); break;
                    case 4:
                        if (rep.generated_spread) v.push_back(*rep.generated_spread);
                        break;
                    case 5: v.push_back(rep.inverted_generational_distance); break;
                }
            }
            if (k == 4) a.has_spread = !v.empty();
            if (v.empty()) continue;
            const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
            double sq = 0.0;
            for (double x : v) sq += (x - mean) * (x - mean);
            a.mean[k] = mean;
            a.sd[k] = std::sqrt(sq / static_cast<double>(v.size()));
        }
        out.push_back(a);
    }
    return out;
}

Documents summarize(const ResultTable& table, const std::vector<std::string>& roster) {
    Documents d;
    const auto aggregates = table.aggregate(roster);
    const auto table_doc = [&](bool sd) {
        std::ostringstream out;
        out << "setting,policy";
        for (const auto* n : kIndicatorNames) out << ',' << n;
        out << '\n';
        for (const auto& a : aggregates) {
            out << a.setting << ',' << a.policy;
            for (int k = 0; k < 6; ++k) {
                out << ',';
                if (k == 4 && !a.has_spread) continue;
                out << io::format_number(sd ? a.sd[k] : a.mean[k]);
            }
            out << '\n';
        }
        return out.str();
    };
    d.summary_mean = table_doc(false);
    d.summary_sd = table_doc(true);

    std::ostringstream raw;
    raw << "setting,policy,task,floor,repetition,C,GD,ED,PFS,GS,IGD,HV\n";
    for (const auto& r : table.rows) {
        const auto& p = r.report;
        raw << r.setting << ',' << r.policy << ',' << r.task << ',' << r.floor << ',' << r.repetition << ','
            << io::format_number(p.coverage) << ',' << io::format_number(p.generational_distance) << ','
            << io::format_number(p.euclidean_distance) << ',' << p.pareto_front_size << ','
            << (p.generated_spread ? io::format_number(*p.generated_spread) : "") << ','
            << io::format_number(p.inverted_generational_distance) << ',' << io::format_number(p.hypervolume) << '\n';
    }
    d.raw = raw.str();

    std::ostringstream timing;
    timing << "setting,policy,task,repetition,seconds\n";
    for (const auto& t : table.timings)
        timing << t.setting << ',' << t.policy << ',' << t.task << ',' << t.repetition << ',' << io::format_number(t.seconds) << '\n';
    d.timing = timing.str();

    std::ostringstream failures;
    failures << "policy,task,repetition,message\n";
    for (const auto& f : table.failures) {
        std::string msg = f.message;
        std::replace(msg.begin(), msg.end(), ',', ';');
        std::replace(msg.begin(), msg.end(), '\n', ' ');
        failures << f.policy << ',' << f.task << ',' << f.repetition << ',' << msg << '\n';
    }
    d.failures = failures.str();
    return d;
}

void write_documents(const std::filesystem::path& dir, const ExperimentPlan& plan, const Documents& docs) {
    std::filesystem::create_directories(dir);
    io::write_text(dir / "summary_mean.csv", docs.summary_mean);
    io::write_text(dir / "summary_sd.csv", docs.summary_sd);
    io::write_text(dir / "raw.csv", docs.raw);
    io::write_text(dir / "timing.csv", docs.timing);
    io::write_text(dir / "failures.csv", docs.failures);
    io::save_json(dir / "plan.json", plan_to_json(plan));
}

}  // namespace mezzopt::bench
