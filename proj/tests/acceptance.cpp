// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <CLI11.hpp>

#include <array>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <set>
#include <sstream>

#include "fixtures.hpp"
#include "mezzopt/bench/experiment.hpp"
#include "mezzopt/io.hpp"
#include "mezzopt/moo/hypervolume.hpp"
#include "mezzopt/moo/indicators.hpp"
#include "mezzopt/random.hpp"
#include "mezzopt/storage/nsga2.hpp"
#include "mezzopt/validation.hpp"

using namespace mezzopt;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(double v, int precision = 4) {
    std::ostringstream s;
    s << std::setprecision(precision) << v;
    return s.str();
}

Eigen::MatrixXd rows(std::initializer_list<std::initializer_list<double>> r) {
    Eigen::MatrixXd m(static_cast<Eigen::Index>(r.size()), 2);
    Eigen::Index i = 0;
    for (const auto& row : r) {
        Eigen::Index j = 0;
        for (double v : row) m(i, j++) = v;
        ++i;
    }
    return m;
}

Outcome indicator_fixture() {
    const auto ref = rows({{1, 3}, {2, 2}, {3, 1}});
    const auto pc = rows({{1, 3}, {3, 3}});
    const auto o = moo::minimize_all(2);
    const Eigen::Vector2d ideal(1, 1), hv_ref(4, 4);
    const double c = moo::coverage(pc, ref);
    const double gd = moo::generational_distance(pc, ref);
    const double ed = moo::euclidean_distance_indicator(pc, Eigen::VectorXd(ideal));
    const long pfs = moo::pareto_front_size(pc);
    const double gs = moo::generated_spread(ref, ref, o).value();
    const double igd = moo::inverted_generational_distance(rows({{1, 3}}), ref);
    const double hv = moo::hypervolume(ref, Eigen::VectorXd(hv_ref), o);
    const double tol = 1e-9;
    const bool pass = std::abs(c - 1.0 / 3.0) <= tol && std::abs(gd - std::sqrt(0.5)) <= tol && std::abs(ed - 2.0) <= tol &&
                      pfs == 2 && std::abs(gs) <= tol && std::abs(igd - std::sqrt(10.0) / 3.0) <= tol &&
                      std::abs(hv - 6.0) <= tol;
    return {pass, "C=" + fmt(c, 10) + " GD=" + fmt(gd, 10) + " ED=" + fmt(ed, 10) + " PFS=" + std::to_string(pfs) +
                      " GS=" + fmt(gs, 10) + " IGD=" + fmt(igd, 10) + " HV=" + fmt(hv, 10) + " (tol 1e-9)"};
}

Outcome brute_force_pareto() {
    int exact = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto t = fixtures::tiny_task(seed);
        storage::FloorProblem p(t.state, t.product, 1, t.incoming);
        storage::Rng rng(derive_seed(seed, {2}));
        const auto result = storage::nsga2_assign(p, storage::nsga_params_small(), rng);
        exact += moo::coverage(storage::objective_matrix(result.front), fixtures::brute_force_front(p)) == 1.0;
    }
    return {exact >= 18, "C=1 on " + std::to_string(exact) + "/20 tasks (need >= 18)"};
}

Outcome tsp_oracle() {
    int exact = 0, within = 0, cases = 0;
    int max_markets = 0;
    for (std::uint64_t seed = 1; cases < 20; ++seed) {
        const auto pc = fixtures::random_pick_case(seed * 7919);
        const pick::MarketGraph g(pc.state);
        max_markets = std::max(max_markets, g.size());
        const pick::PickProblem problem(g, pc.lines);
        const double oracle = fixtures::tsp_optimum(problem);
        const auto front = pick::aco_optimize(problem, pick::AcoParams{}, seed).front;
        double best = 1e300;
        for (const auto& r : front) best = std::min(best, r.distance);
        exact += std::abs(best - oracle) <= 1e-9;
        within += best <= 1.05 * oracle + 1e-9;
        ++cases;
    }
    return {exact >= 16 && within == 20 && max_markets <= 6,
            "exact " + std::to_string(exact) + "/20 (need >= 16), within 5% " + std::to_string(within) +
                "/20 (need 20), markets <= " + std::to_string(max_markets)};
}

bench::ExperimentPlan desk_plan(const std::string& setting, bench::SettingKind kind, std::vector<std::string> roster) {
    bench::ExperimentPlan plan;
    plan.setting = setting;
    plan.kind = kind;
    plan.instance_seed = 42;
    plan.seed = 7;
    plan.tasks = 5;
    plan.repetitions = 3;
    plan.roster = std::move(roster);
    return plan;
}

std::map<std::string, bench::Aggregate> aggregates(const bench::ExperimentPlan& plan, bench::ResultTable* keep = nullptr) {
    const auto table = bench::run_plan(plan);
    std::map<std::string, bench::Aggregate> out;
    for (const auto& a : table.aggregate(plan.roster)) out[a.policy] = a;
    if (keep) *keep = table;
    return out;
}

Outcome setting_storage() {
    const auto plan = desk_plan("1.a", bench::SettingKind::storage, {"nsga2", "random", "closest", "rank"});
    bench::ResultTable table;
    auto agg = aggregates(plan, &table);
    bool pass = table.failures.empty() && agg.size() == 4 && agg["nsga2"].mean[0] >= 0.5;
    std::string detail = "muC";
    for (const auto& p : plan.roster) {
        detail += " " + p + "=" + fmt(agg[p].mean[0]);
        if (p != "nsga2") {
            pass = pass && agg[p].mean[0] <= 0.2;
            pass = pass && agg["nsga2"].mean[1] < agg[p].mean[1] && agg["nsga2"].mean[5] < agg[p].mean[5];
        }
    }
    detail += "; muGD nsga2=" + fmt(agg["nsga2"].mean[1]) + " best other=";
    double gd = 1e300, igd = 1e300;
    for (const auto& p : plan.roster)
        if (p != "nsga2") gd = std::min(gd, agg[p].mean[1]), igd = std::min(igd, agg[p].mean[5]);
    detail += fmt(gd) + "; muIGD nsga2=" + fmt(agg["nsga2"].mean[5]) + " best other=" + fmt(igd);
    return {pass, detail + " (need nsga2 >= 0.5, baselines <= 0.2, nsga2 best GD and IGD)"};
}

Outcome setting_picking() {
    const auto plan = desk_plan("2.a", bench::SettingKind::picking, {"aco3", "aco4", "sshape"});
    bench::ResultTable table;
    auto agg = aggregates(plan, &table);
    const auto& s = agg["sshape"];
    bool pass = table.failures.empty() && s.mean[0] <= 0.05;
    std::string detail = "muC";
    for (const auto& p : plan.roster) detail += " " + p + "=" + fmt(agg[p].mean[0]);
    detail += "; muPFS";
    for (const auto& p : plan.roster) detail += " " + p + "=" + fmt(agg[p].mean[3]);
    for (const char* p : {"aco3", "aco4"}) pass = pass && agg[p].mean[0] >= 0.4 && agg[p].mean[3] >= 2.0 * s.mean[3];
    return {pass, detail + " (need sshape C <= 0.05, aco C >= 0.4, aco PFS >= 2x sshape)"};
}

Outcome interaction() {
    bool pass = true;
    std::string detail = "muC";
    for (const auto& [setting, algo] : {std::pair{"3.a", "aco3"}, std::pair{"4.a", "aco4"}}) {
        const std::string nsga = std::string("nsga2:") + algo, rnd = std::string("random:") + algo;
        const auto plan = desk_plan(setting, bench::SettingKind::interaction, {nsga, rnd});
        bench::ResultTable table;
        auto agg = aggregates(plan, &table);
        pass = pass && table.failures.empty() && agg[nsga].mean[0] >= 0.8 && agg[rnd].mean[0] <= 0.2;
        detail += " " + nsga + "=" + fmt(agg[nsga].mean[0]) + " " + rnd + "=" + fmt(agg[rnd].mean[0]);
    }
    return {pass, detail + " (need nsga-filled >= 0.8, random-filled <= 0.2)"};
}

Outcome fuzz() {
    int storage_solves = 0, storage_violations = 0, infeasible = 0;
    const std::array policies{storage::StoragePolicy::nsga2, storage::StoragePolicy::random,
                              storage::StoragePolicy::closest_open, storage::StoragePolicy::rank_based};
    std::mt19937_64 rng(2024);
    for (std::uint64_t inst_seed = 100; storage_solves < 1000; ++inst_seed) {
        auto state = gen::generate_instance(gen::gen_spec_for("small"), inst_seed).state;
        for (int k = 0; k < 50 && storage_solves < 1000; ++k) {
            const storage::AssignmentTask task{1 + static_cast<int>(rng() % 500), 1 + static_cast<int>(rng() % 12)};
            storage::AssignOptions options;
            options.random_samples = 50;
            try {
                const auto r = storage::assign_product(state, task, policies[rng() % 4], options, rng());
                const auto v = validate_storage_solution(state, r.allocation);
                storage_violations += static_cast<int>(v.size());
                if (v.empty()) apply_allocation(state, r.allocation);
                ++storage_solves;
            } catch (const InfeasibleTaskError&) {
                ++infeasible;
            }
        }
    }

    int pick_solves = 0, pick_violations = 0, routes = 0, rejected = 0;
    for (std::uint64_t inst_seed = 300; pick_solves < 500; ++inst_seed) {
        const auto inst = gen::generate_instance(gen::gen_spec_for("small"), inst_seed);
        const pick::MarketGraph g(inst.state);
        for (const auto& order : inst.orders) {
            if (pick_solves == 500) break;
            std::optional<pick::PickProblem> maybe;
            try {
                maybe.emplace(g, pick::pick_list(order));
            } catch (const InfeasibleOrderError&) {
                ++rejected;
                continue;
            }
            const auto& problem = *maybe;
            std::vector<pick::PickRoute> front;
            const int algo = pick_solves % 3;
            if (algo == 2) {
                front = pick::s_shape_routes(problem);
            } else {
                pick::AcoParams params;
                params.variant = algo == 0 ? pick::AcoVariant::aco3 : pick::AcoVariant::aco4;
                front = pick::aco_optimize(problem, params, rng()).front;
            }
            for (const auto& r : front) pick_violations += static_cast<int>(pick::validate_pick_route(problem, r).size());
            routes += static_cast<int>(front.size());
            ++pick_solves;
        }
    }
    return {storage_violations == 0 && pick_violations == 0,
            std::to_string(storage_solves) + " storage solves (" + std::to_string(infeasible) +
                " infeasible tasks rejected), " + std::to_string(storage_violations) + " violations; " +
                std::to_string(pick_solves) + " pick solves (" + std::to_string(routes) + " routes, " + std::to_string(rejected) +
                " infeasible orders rejected), " +
                std::to_string(pick_violations) + " violations"};
}

int run(const std::string& command) { return std::system((command + " > /dev/null 2>&1").c_str()); }

std::map<std::string, std::string> snapshot(const fs::path& dir) {
    std::map<std::string, std::string> out;
    for (const auto& e : fs::recursive_directory_iterator(dir))
        if (e.is_regular_file() && e.path().filename() != "timing.csv")
            out[fs::relative(e.path(), dir).string()] = io::read_text(e.path());
    return out;
}

Outcome cli_determinism(std::string cli) {
    if (cli.empty() || !fs::exists(cli)) return {false, "CLI binary not found (pass --cli)"};
    cli = fs::absolute(cli).string();
    const fs::path root = fs::temp_directory_path() / "mezzopt_acceptance_cli";
    fs::remove_all(root);
    fs::create_directories(root);
    io::save_json(root / "spec.json", io::Json{{"size", "small"}});
    io::save_json(root / "task.json", io::Json{{"product", 7}, {"quantity", 5}});
    io::save_json(root / "plan.json", io::Json::parse(R"({"setting": "2.d", "kind": "picking", "instance_seed": 3,
        "seed": 4, "tasks": 2, "repetitions": 2, "roster": ["aco3", "aco4", "sshape"]})"));

    // identical invocations from the same directory, one after the other
    const std::string wh = "out/gen/warehouse.json", orders = "out/gen/orders.json";
    const std::vector<std::string> commands{
        cli + " generate --spec spec.json --seed 11 --out out/gen",
        cli + " assign --warehouse " + wh + " --task task.json --algo nsga2 --seed 5 --out out/nsga2",
        cli + " assign --warehouse " + wh + " --task task.json --algo random --seed 5 --out out/random",
        cli + " pick --warehouse " + wh + " --order " + orders + " --algo aco3 --seed 5 --out out/aco3",
        cli + " pick --warehouse " + wh + " --order " + orders + " --algo aco4 --seed 5 --out out/aco4",
        cli + " pick --warehouse " + wh + " --order " + orders + " --algo sshape --seed 5 --out out/sshape",
        cli + " indicators --fronts 'out/*/front.csv' --ref auto --out out/indicators.csv",
        cli + " experiment --plan plan.json --out out/experiment"};
    int failed = 0;
    std::array<std::map<std::string, std::string>, 2> snaps;
    for (auto& snap : snaps) {
        fs::remove_all(root / "out");
        for (const auto& c : commands) failed += run("cd '" + root.string() + "' && " + c) != 0;
        snap = snapshot(root / "out");
    }
    auto& sa = snaps[0];
    auto& sb = snaps[1];
    int differing = sa.size() != sb.size();
    for (const auto& [name, text] : sa) differing += !sb.contains(name) || sb[name] != text;
    fs::remove_all(root);
    return {failed == 0 && differing == 0 && commands.size() >= 5 && !sa.empty(),
            std::to_string(commands.size()) + " commands twice, " + std::to_string(failed) + " non-zero exits, " +
                std::to_string(sa.size()) + " files compared, " + std::to_string(differing) + " differ (timing.csv excluded)"};
}

Outcome pheromone_invariants() {
    const auto inst = gen::generate_instance(gen::gen_spec_for("small"), 42);
    const pick::MarketGraph g(inst.state);
    double worst_sum = 0.0, lo = 1e300, hi = -1e300;
    long vectors = 0, samples = 0;
    for (auto v : {pick::AcoVariant::aco3, pick::AcoVariant::aco4}) {
        for (int k = 0; k < 3; ++k) {
            const pick::PickProblem problem(g, pick::pick_list(inst.orders[static_cast<std::size_t>(k)]));
            pick::AcoParams params;
            params.variant = v;
            pick::AcoObserver obs;
            obs.on_probabilities = [&](const std::vector<double>& p) {
                double s = 0.0;
                for (double x : p) s += x;
                worst_sum = std::max(worst_sum, std::abs(s - 1.0));
                ++vectors;
            };
            obs.on_iteration = [&](const pick::AcoIteration& it) {
                for (const auto& t : *it.pheromones) {
                    lo = std::min(lo, t.minCoeff());
                    hi = std::max(hi, t.maxCoeff());
                    samples += t.size();
                }
            };
            pick::aco_optimize(problem, params, static_cast<std::uint64_t>(k), obs);
        }
    }
    return {lo >= 1.0 && hi <= 25.0 && worst_sum <= 1e-12 && vectors > 0,
            "tau in [" + fmt(lo) + ", " + fmt(hi) + "] over " + std::to_string(samples) + " samples, max |sum p - 1| = " +
                fmt(worst_sum, 3) + " over " + std::to_string(vectors) + " vectors (need [1, 25], 1e-12)"};
}

Outcome generator_statistics() {
    const auto spec = gen::gen_spec_for("small");
    gen::Rng rng(10);
    const int n = 100000;
    std::array<int, 3> mix{};
    for (int i = 0; i < n; ++i) {
        int k = -1;
        gen::draw_weight(spec.weight_mixture, spec.min_weight, rng, &k);
        ++mix[static_cast<std::size_t>(k)];
    }
    double mix_err = 0.0;
    const std::array<double, 3> mix_expected{0.25, 0.50, 0.25};
    for (std::size_t k = 0; k < 3; ++k) mix_err = std::max(mix_err, std::abs(mix[k] / double(n) - mix_expected[k]));

    auto big = spec;
    big.assortment_size = n;
    const auto products = gen::generate_products(big, rng);
    const auto rules = gen::generate_correlations(products, big, rng);
    std::map<ProductNumber, std::set<ProductNumber>> partners;
    for (const auto& r : rules) partners[r.lhs].insert(r.rhs);
    std::array<int, 4> counts{};
    counts[0] = n - static_cast<int>(partners.size());
    for (const auto& [p, s] : partners) ++counts[std::min<std::size_t>(s.size(), 3)];
    double partner_err = 0.0;
    const std::array<double, 4> partner_expected{0.30, 0.40, 0.20, 0.10};
    for (std::size_t k = 0; k < 4; ++k) partner_err = std::max(partner_err, std::abs(counts[k] / double(n) - partner_expected[k]));

    const auto assortment = gen::generate_products(spec, rng);
    auto corpus_spec = spec;
    corpus_spec.orders = n / spec.order_lines;
    const auto corpus = gen::generate_orders(assortment, corpus_spec, rng);
    std::map<ProductNumber, int> rank_of;
    for (const auto& p : assortment) rank_of[p.number] = p.rank;
    std::array<int, 4> quartile{};
    int lines = 0;
    for (const auto& o : corpus)
        for (const auto& l : o.lines) {
            ++quartile[static_cast<std::size_t>(gen::rank_quartile(rank_of[l.product], spec.assortment_size))];
            ++lines;
        }
    double quartile_err = 0.0;
    const std::array<double, 4> quartile_expected{0.40, 0.30, 0.20, 0.10};
    for (std::size_t k = 0; k < 4; ++k)
        quartile_err = std::max(quartile_err, std::abs(quartile[k] / double(lines) - quartile_expected[k]));
    return {mix_err <= 0.01 && partner_err <= 0.01 && quartile_err <= 0.02 && lines >= n,
            "max deviation: mixture " + fmt(mix_err, 3) + " (<= 0.01), partners " + fmt(partner_err, 3) +
                " (<= 0.01), quartiles " + fmt(quartile_err, 3) + " over " + std::to_string(lines) + " lines (<= 0.02)"};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Acceptance criteria"};
    std::string cli;
    std::vector<int> only;
    app.add_option("--cli", cli, "Path to the mezzopt binary");
    app.add_option("--only", only, "Criteria to run (default all)");
    CLI11_PARSE(app, argc, argv);

    struct Criterion {
        int id;
        const char* name;
        double limit_seconds;
        std::function<Outcome()> check;
    };
    const std::vector<Criterion> criteria{
        {1, "indicator fixture", 1, indicator_fixture},
        {2, "brute-force Pareto equivalence", 60, brute_force_pareto},
        {3, "TSP oracle", 120, tsp_oracle},
        {4, "storage setting direction", 900, setting_storage},
        {5, "picking setting direction", 900, setting_picking},
        {6, "interaction direction", 1200, interaction},
        {7, "hard-constraint fuzz", 1e300, fuzz},
        {8, "CLI determinism", 1e300, [&] { return cli_determinism(cli); }},
        {9, "pheromone invariants", 1e300, pheromone_invariants},
        {10, "generator statistics", 30, generator_statistics},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.check();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_time = seconds < c.limit_seconds;
        const bool pass = o.pass && in_time;
        failures += !pass;
        std::cout << "criterion " << std::setw(2) << c.id << ' ' << (pass ? "PASS" : "FAIL") << "  " << c.name << ": "
                  << o.detail << "; " << fmt(seconds, 3) << " s";
        if (c.limit_seconds < 1e300) std::cout << " (limit " << c.limit_seconds << " s)";
        if (!in_time) std::cout << " TOO SLOW";
        std::cout << std::endl;
    }
    return failures == 0 ? 0 : 1;
}
