#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <set>

#include "mezzopt/bench/experiment.hpp"
#include "mezzopt/io.hpp"
#include "mezzopt/moo/pareto.hpp"
#include "mezzopt/random.hpp"

using namespace mezzopt;

namespace {

const gen::Instance& small_instance() {
    static const auto inst = gen::generate_instance(gen::gen_spec_for("small"), 42);
    return inst;
}

bench::ExperimentPlan quick_picking_plan() {
    bench::ExperimentPlan plan;
    plan.setting = "2.t";
    plan.kind = bench::SettingKind::picking;
    plan.instance_seed = 42;
    plan.seed = 5;
    plan.tasks = 2;
    plan.repetitions = 2;
    plan.roster = {"aco3", "aco4", "sshape"};
    plan.aco.max_iter = 30;
    return plan;
}

bench::ExperimentPlan quick_storage_plan() {
    bench::ExperimentPlan plan;
    plan.setting = "1.t";
    plan.kind = bench::SettingKind::storage;
    plan.instance_seed = 42;
    plan.seed = 9;
    plan.tasks = 2;
    plan.repetitions = 2;
    plan.roster = {"nsga2", "random", "closest", "rank"};
    plan.assign.nsga.population = 12;
    plan.assign.nsga.max_generations = 15;
    plan.assign.random_samples = 40;
    return plan;
}

bench::ResultRow row(const std::string& policy, int rep, double c) {
    bench::ResultRow r{"x", policy, 0, 0, rep, {}};
    r.report.coverage = c;
    r.report.pareto_front_size = 3;
    return r;
}

}  // namespace

TEST_CASE("warehouse documents round trip") {
    const auto& state = small_instance().state;
    const auto doc = io::warehouse_to_json(state);
    const auto back = io::warehouse_from_json(io::Json::parse(doc.dump()));
    CHECK(io::warehouse_to_json(back) == doc);
    CHECK(back.racks().size() == state.racks().size());
    CHECK(back.assignments().size() == state.assignments().size());
    for (const auto& p : state.products()) CHECK(back.total_quantity(p.number) == state.total_quantity(p.number));

    SUBCASE("bad documents") {
        auto bad = doc;
        bad["version"] = 99;
        CHECK_THROWS_AS(io::warehouse_from_json(bad), ConfigurationError);
        bad = doc;
        bad.erase("racks");
        CHECK_THROWS_AS(io::warehouse_from_json(bad), ConfigurationError);
        bad = doc;
        bad["assignments"][0]["quantity"] = 100000;
        CHECK_THROWS_AS(io::warehouse_from_json(bad), ConfigurationError);
        CHECK_THROWS_AS(io::warehouse_from_json(io::Json::object()), ConfigurationError);
    }
}

TEST_CASE("orders, tasks and specs") {
    const auto& orders = small_instance().orders;
    const auto back = io::orders_from_json(io::orders_to_json(orders));
    REQUIRE(back.size() == orders.size());
    for (std::size_t i = 0; i < orders.size(); ++i) {
        CHECK(back[i].order_number == orders[i].order_number);
        CHECK(back[i].lines.size() == orders[i].lines.size());
    }
    CHECK(io::orders_from_json(io::order_to_json(orders[0])).size() == 1);
    CHECK(io::orders_from_json(io::Json::array({io::order_to_json(orders[0])})).size() == 1);
    CHECK_THROWS_AS(io::order_from_json(io::Json::parse(R"({"lines": []})")), ConfigurationError);

    const auto t = io::task_from_json(io::Json{{"product", 4}, {"quantity", 7}});
    CHECK(t.product == 4);
    CHECK(t.quantity == 7);
    CHECK_THROWS_AS(io::task_from_json(io::Json{{"product", 4}, {"qty", 7}}), ConfigurationError);

    const auto spec = io::gen_spec_from_json(io::Json{{"size", "small"}, {"assortment_size", 80}, {"layout", {{"floors", 3}}}});
    CHECK(spec.assortment_size == 80);
    CHECK(spec.layout.floors == 3);
    CHECK(io::gen_spec_to_json(io::gen_spec_from_json(io::gen_spec_to_json(spec))) == io::gen_spec_to_json(spec));
    CHECK_THROWS_AS(io::gen_spec_from_json(io::Json{{"colour", 1}}), ConfigurationError);
    CHECK_THROWS_AS(io::gen_spec_from_json(io::Json{{"fill_fraction", 2.0}}), ConfigurationError);

    const auto aco = io::aco_params_from_json(io::Json{{"variant", "aco4"}, {"max_iter", 9}});
    CHECK(aco.variant == pick::AcoVariant::aco4);
    CHECK(aco.max_iter == 9);
    CHECK_THROWS_AS(io::aco_params_from_json(io::Json{{"tau_min", 30.0}}), ConfigurationError);
}

TEST_CASE("front CSV reading") {
    const auto f = io::read_front_csv("distance,violations,markets\n10,2,1 4 5\n12.5,0,3\n");
    const auto& m = f.points;
    REQUIRE(m.rows() == 2);
    REQUIRE(m.cols() == 2);
    CHECK(m(1, 0) == 12.5);
    CHECK(m(0, 1) == 2.0);
    CHECK(f.orientation == moo::minimize_all(2));
    const auto s = io::read_front_csv("spread,distance,quantity,correlation,racks\n0.5,0.25,1,0,7\n");
    CHECK(s.points.cols() == 4);
    CHECK(s.orientation == storage::storage_orientation());
    CHECK_THROWS_AS(io::read_front_csv(""), ConfigurationError);
    CHECK_THROWS_AS(io::read_front_csv("a,b\n1,2\n"), ConfigurationError);
    CHECK_THROWS_AS(io::read_front_csv("distance,violations\n1,2\n3\n"), ConfigurationError);
    CHECK_THROWS_AS(io::read_front_csv("distance,violations\n1,x\n"), ConfigurationError);
    CHECK(io::format_number(0.1) == "0.1");
    CHECK(io::format_number(2.0) == "2");
}

TEST_CASE("plan documents") {
    const auto plan = bench::plan_from_json(io::Json::parse(R"({
        "setting": "2.a", "kind": "picking", "seed": 3, "tasks": 4, "repetitions": 2,
        "roster": ["aco3", "sshape"], "aco_params": {"max_iter": 40}})"));
    CHECK(plan.kind == bench::SettingKind::picking);
    CHECK(plan.tasks == 4);
    CHECK(plan.aco.max_iter == 40);
    const auto again = bench::plan_from_json(bench::plan_to_json(plan));
    CHECK(bench::plan_to_json(again) == bench::plan_to_json(plan));

    const auto medium = bench::plan_from_json(io::Json::parse(
        R"({"kind": "storage", "spec": {"size": "medium"}, "roster": ["nsga2"]})"));
    CHECK(medium.assign.nsga.population == storage::nsga_params_medium().population);

    CHECK_THROWS_AS(bench::plan_from_json(io::Json::parse(R"({"kind": "picking", "roster": []})")), ConfigurationError);
    CHECK_THROWS_AS(bench::plan_from_json(io::Json::parse(R"({"kind": "picking", "roster": ["nsga2"]})")), ConfigurationError);
    CHECK_THROWS_AS(bench::plan_from_json(io::Json::parse(R"({"kind": "storage", "roster": ["aco3"]})")), ConfigurationError);
    CHECK_THROWS_AS(bench::plan_from_json(io::Json::parse(R"({"kind": "interaction", "roster": ["nsga2"]})")),
                    ConfigurationError);
    CHECK_THROWS_AS(bench::plan_from_json(io::Json::parse(R"({"kind": "picking", "roster": ["aco3", "aco3"]})")),
                    ConfigurationError);
    CHECK_THROWS_AS(bench::plan_from_json(io::Json::parse(R"({"kind": "picking", "roster": ["aco3"], "speed": 1})")),
                    ConfigurationError);

    bench::ExperimentPlan p;
    std::set<std::uint64_t> seeds;
    for (int t = 0; t < 5; ++t)
        for (int r = 0; r < 10; ++r) seeds.insert(p.cell_seed(t, r));
    CHECK(seeds.size() == 50);
}

TEST_CASE("summaries") {
    bench::ResultTable table;
    for (int r = 0; r < 10; ++r) table.rows.push_back(row("same", r, 0.5));
    table.rows.push_back(row("pair", 0, 0.8));
    table.rows.push_back(row("pair", 1, 1.0));
    const auto agg = table.aggregate({"same", "pair", "absent"});
    REQUIRE(agg.size() == 2);
    CHECK(agg[0].samples == 10);
    for (int k = 0; k < 6; ++k) CHECK(agg[0].sd[k] == 0.0);
    CHECK(agg[1].mean[0] == doctest::Approx(0.9).epsilon(1e-15));
    CHECK(agg[1].sd[0] == doctest::Approx(0.1).epsilon(1e-12));
    CHECK_FALSE(agg[1].has_spread);

    const auto docs = bench::summarize(table, {"same", "pair"});
    CHECK(docs.summary_mean.substr(0, docs.summary_mean.find('\n')) == "setting,policy,C,GD,ED,PFS,GS,IGD");
    CHECK(docs.summary_sd.substr(0, docs.summary_sd.find('\n')) == "setting,policy,C,GD,ED,PFS,GS,IGD");
    CHECK(docs.raw.substr(0, docs.raw.find('\n')) == "setting,policy,task,floor,repetition,C,GD,ED,PFS,GS,IGD,HV");
    CHECK(docs.timing == "setting,policy,task,repetition,seconds\n");
    CHECK(docs.summary_mean.find("x,pair,0.9,0,0,3,,0\n") != std::string::npos);
}

TEST_CASE("work pool") {
    std::vector<int> out(100, 0);
    bench::parallel_for(100, 4, [&](int i) { out[static_cast<std::size_t>(i)] = i * i; });
    for (int i = 0; i < 100; ++i) CHECK(out[static_cast<std::size_t>(i)] == i * i);
    CHECK_THROWS_AS(bench::parallel_for(10, 3, [](int i) {
                        if (i == 7) throw InfeasibleOrderError("boom");
                    }),
                    InfeasibleOrderError);
    CHECK(bench::worker_count() >= 1);
}

TEST_CASE("task selection") {
    const auto& inst = small_instance();
    const auto tasks = bench::storage_tasks(inst.state, 5, 3);
    REQUIRE(tasks.size() == 5);
    for (const auto& t : tasks) CHECK(t.task.quantity == inst.state.total_quantity(t.task.product));
    const auto orders = bench::pick_tasks({&inst.state}, inst.orders, 5, 3);
    CHECK(orders.size() == 5);
    CHECK_THROWS_AS(bench::pick_tasks({&inst.state}, inst.orders, 100000, 3), ConfigurationError);
}

TEST_CASE("single-algorithm roster covers its own reference") {
    auto plan = quick_picking_plan();
    plan.roster = {"aco3"};
    plan.repetitions = 1;
    auto table = bench::run_setting(plan);
    REQUIRE(table.rows.size() == 2);
    for (const auto& r : table.rows) CHECK(r.report.coverage == 1.0);
    plan.roster = {"sshape"};
    plan.repetitions = 3;
    table = bench::run_setting(plan);
    REQUIRE(table.rows.size() == 6);
    for (const auto& r : table.rows) CHECK(r.report.coverage == 1.0);
}

TEST_CASE("picking setting: determinism and reference dominance") {
    const auto plan = quick_picking_plan();
    const auto a = bench::run_setting(plan);
    CHECK(a.failures.empty());
    CHECK(a.rows.size() == 3 * 2 * 2);
    CHECK(bench::summarize(a, plan.roster).raw == bench::summarize(bench::run_setting(plan), plan.roster).raw);

    // replicated deterministic fronts
    std::vector<const bench::ResultRow*> sshape;
    for (const auto& r : a.rows)
        if (r.policy == "sshape" && r.task == 0) sshape.push_back(&r);
    REQUIRE(sshape.size() == 2);
    CHECK(sshape[0]->report.coverage == sshape[1]->report.coverage);
    for (const auto& r : a.rows) {
        CHECK(r.report.coverage >= 0.0);
        CHECK(r.report.coverage <= 1.0);
        CHECK(r.report.generational_distance >= 0.0);
    }

    // joint reference rebuilt from the same fronts; none of its members is
    // strictly dominated by any algorithm front member
    const auto& inst = small_instance();
    const auto orders = bench::pick_tasks({&inst.state}, inst.orders, plan.tasks, derive_seed(plan.seed, {1u << 30}));
    const pick::MarketGraph graph(inst.state);
    const pick::PickProblem problem(graph, pick::pick_list(orders[0]));
    std::vector<Eigen::MatrixXd> fronts;
    for (const auto& name : plan.roster)
        for (int r = 0; r < plan.repetitions; ++r) {
            std::vector<pick::PickRoute> routes;
            if (name == "sshape") {
                routes = pick::s_shape_routes(problem);
            } else {
                auto params = plan.aco;
                params.variant = pick::parse_aco_variant(name);
                routes = pick::aco_optimize(problem, params, plan.cell_seed(0, r)).front;
            }
            Eigen::MatrixXd m(static_cast<Eigen::Index>(routes.size()), 2);
            for (std::size_t i = 0; i < routes.size(); ++i) m.row(static_cast<Eigen::Index>(i)) = routes[i].objectives().transpose();
            fronts.push_back(m);
        }
    const auto o = moo::minimize_all(2);
    const auto ref = moo::reference_front(fronts, o);
    for (const auto& f : fronts)
        for (Eigen::Index i = 0; i < f.rows(); ++i)
            for (Eigen::Index j = 0; j < ref.rows(); ++j)
                CHECK_FALSE(moo::dominates(f.row(i), ref.row(j), o));
    for (const auto& r : a.rows)
        if (r.policy == "aco3" && r.task == 0 && r.repetition == 0)
            CHECK(r.report.coverage * static_cast<double>(ref.rows()) ==
                  doctest::Approx(std::round(r.report.coverage * static_cast<double>(ref.rows()))));
}

TEST_CASE("storage setting runs every policy per floor") {
    const auto plan = quick_storage_plan();
    const auto table = bench::run_setting(plan);
    CHECK(table.failures.empty());
    std::map<std::string, int> per_policy;
    for (const auto& r : table.rows) {
        ++per_policy[r.policy];
        CHECK(r.floor >= 1);
    }
    CHECK(per_policy.size() == 4);
    CHECK(per_policy["nsga2"] == per_policy["closest"]);
    CHECK(table.timings.size() == 2 * 2 + 2 * 2 + 2 + 2);
    CHECK(bench::summarize(table, plan.roster).raw == bench::summarize(bench::run_setting(plan), plan.roster).raw);
}

TEST_CASE("results do not depend on the thread count") {
    auto plan = quick_picking_plan();
    plan.roster = {"aco3", "sshape"};
    ::setenv("MEZZOPT_THREADS", "1", 1);
    const auto one = bench::summarize(bench::run_setting(plan), plan.roster);
    ::setenv("MEZZOPT_THREADS", "3", 1);
    const auto three = bench::summarize(bench::run_setting(plan), plan.roster);
    ::unsetenv("MEZZOPT_THREADS");
    CHECK(one.raw == three.raw);
    CHECK(one.summary_mean == three.summary_mean);
}

TEST_CASE("write_documents") {
    const auto dir = std::filesystem::temp_directory_path() / "mezzopt_docs_test";
    std::filesystem::remove_all(dir);
    bench::Documents docs{"m\n", "s\n", "r\n", "t\n", "f\n"};
    bench::write_documents(dir, quick_picking_plan(), docs);
    for (const char* f : {"summary_mean.csv", "summary_sd.csv", "raw.csv", "timing.csv", "failures.csv", "plan.json"})
        CHECK(std::filesystem::exists(dir / f));
    const auto plan = bench::plan_from_json(io::load_json(dir / "plan.json"));
    CHECK(plan.aco.max_iter == 30);
    std::filesystem::remove_all(dir);
}
