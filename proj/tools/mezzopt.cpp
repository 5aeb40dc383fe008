#include <CLI11.hpp>
#include <glob.h>

#include <filesystem>
#include <iostream>
#include <sstream>

#include "mezzopt/bench/experiment.hpp"
#include "mezzopt/io.hpp"
#include "mezzopt/validation.hpp"

using namespace mezzopt;
namespace fs = std::filesystem;

namespace {

enum ExitCode { ok = 0, usage = 1, infeasible = 2, configuration = 3 };

std::vector<std::string> expand_glob(const std::string& pattern) {
    glob_t g{};
    const int rc = ::glob(pattern.c_str(), 0, nullptr, &g);
    std::vector<std::string> out;
    if (rc == 0)
        for (std::size_t i = 0; i < g.gl_pathc; ++i) out.emplace_back(g.gl_pathv[i]);
    ::globfree(&g);
    if (out.empty()) throw UsageError("no front files match '" + pattern + "'");
    return out;
}

void run_generate(const std::string& spec_file, std::uint64_t seed, const fs::path& out) {
    const auto spec = io::gen_spec_from_json(io::load_json(spec_file));
    const auto inst = gen::generate_instance(spec, seed);
    io::save_warehouse(out / "warehouse.json", inst.state);
    io::save_json(out / "orders.json", io::orders_to_json(inst.orders));
    std::cout << "generated " << inst.state.racks().size() << " racks, " << inst.state.products().size() << " products, "
              << inst.orders.size() << " orders\n";
}

void run_assign(const std::string& warehouse, const std::string& task_file, const std::string& algo, std::uint64_t seed,
                const std::string& params, const fs::path& out) {
    auto state = io::load_warehouse(warehouse);
    const auto task = io::task_from_json(io::load_json(task_file));
    const auto policy = storage::parse_storage_policy(algo);
    storage::AssignOptions options;
    if (!params.empty()) options = io::assign_options_from_json(io::load_json(params), options);
    const auto result = storage::assign_product(state, task, policy, options, seed);
    const auto violations = validate_storage_solution(state, result.allocation);
    if (!violations.empty()) throw std::logic_error("allocation violates " + violations.front().detail);
    io::save_json(out / "allocation.json", io::allocation_to_json(result));
    for (const auto& f : result.floors)
        io::write_text(out / ("front_floor" + std::to_string(f.floor) + ".csv"), io::storage_front_csv(state, f));
    apply_allocation(state, result.allocation);
    io::save_warehouse(out / "warehouse.json", state);
    std::cout << "placed " << result.allocation.incoming << " items of product " << task.product << " in "
              << result.allocation.placements.size() << " compartments\n";
}

void run_pick(const std::string& warehouse, const std::string& order_file, const std::string& algo, std::uint64_t seed,
              const std::string& params, int order_number, const fs::path& out) {
    const auto state = io::load_warehouse(warehouse);
    const auto orders = io::orders_from_json(io::load_json(order_file));
    const Order* order = &orders.front();
    if (order_number >= 0) {
        const auto it = std::find_if(orders.begin(), orders.end(), [&](const Order& o) { return o.order_number == order_number; });
        if (it == orders.end()) throw UsageError("order " + std::to_string(order_number) + " not in " + order_file);
        order = &*it;
    }
    pick::AcoParams aco;
    if (!params.empty()) aco = io::aco_params_from_json(io::load_json(params), aco);
    const pick::MarketGraph graph(state, aco.floor_penalty);
    const pick::PickProblem problem(graph, pick::pick_list(*order), aco.allowed_weight_difference);
    std::vector<pick::PickRoute> front;
    if (algo == "sshape") {
        front = pick::s_shape_routes(problem);
    } else {
        aco.variant = pick::parse_aco_variant(algo);
        front = pick::aco_optimize(problem, aco, seed).front;
    }
    io::Json routes = io::Json::array();
    for (const auto& r : front) routes.push_back(io::route_to_json(state, graph, r));
    io::save_json(out / "routes.json", {{"order_number", order->order_number}, {"algorithm", algo}, {"routes", routes}});
    io::write_text(out / "front.csv", io::pick_front_csv(front));
    std::cout << front.size() << " routes for order " << order->order_number << "\n";
}

void run_indicators(const std::string& pattern, const std::string& ref, const std::string& out) {
    const auto files = expand_glob(pattern);
    std::vector<io::FrontFile> fronts;
    for (const auto& f : files) fronts.push_back(io::read_front_csv(io::read_text(f)));
    for (const auto& f : fronts)
        if (f.objectives != fronts.front().objectives) throw UsageError("front files mix storage and pick objectives");
    const auto& o = fronts.front().orientation;
    std::vector<Eigen::MatrixXd> points;
    for (const auto& f : fronts)
        if (f.points.rows() > 0) points.push_back(f.points);
    Eigen::MatrixXd reference;
    if (ref == "auto") {
        if (points.empty()) throw UsageError("all front files are empty");
        reference = moo::reference_front(points, o);
    } else {
        const auto r = io::read_front_csv(io::read_text(ref));
        if (r.objectives != fronts.front().objectives) throw UsageError("reference front has different objectives");
        reference = r.points;
        if (reference.rows() == 0) throw UsageError("reference front is empty");
    }
    points.push_back(reference);
    Eigen::Index total = 0;
    for (const auto& p : points) total += p.rows();
    Eigen::MatrixXd joined(total, reference.cols());
    Eigen::Index at = 0;
    for (const auto& p : points) {
        joined.middleRows(at, p.rows()) = p;
        at += p.rows();
    }
    const Eigen::VectorXd ideal = moo::ideal_point(joined, o);
    const Eigen::VectorXd hv_ref = moo::nadir_with_margin(joined, o);

    std::ostringstream csv;
    csv << "file,C,GD,ED,PFS,GS,IGD,HV\n";
    for (std::size_t i = 0; i < files.size(); ++i) {
        csv << files[i] << ',';
        if (fronts[i].points.rows() == 0) {
            csv << "0,,,0,,,0\n";
            continue;
        }
        const auto r = moo::compute_indicators<double>(fronts[i].points, reference, ideal, hv_ref, o);
        csv << io::format_number(r.coverage) << ',' << io::format_number(r.generational_distance) << ','
            << io::format_number(r.euclidean_distance) << ',' << r.pareto_front_size << ','
            << (r.generated_spread ? io::format_number(*r.generated_spread) : "") << ','
            << io::format_number(r.inverted_generational_distance) << ',' << io::format_number(r.hypervolume) << '\n';
    }
    if (out.empty()) {
        std::cout << csv.str();
    } else {
        io::write_text(out, csv.str());
    }
}

void run_experiment(const std::string& plan_file, const fs::path& out) {
    const auto plan = bench::plan_from_json(io::load_json(plan_file));
    const auto table = bench::run_plan(plan);
    bench::write_documents(out, plan, bench::summarize(table, plan.roster));
    std::cout << "setting " << plan.setting << ": " << table.rows.size() << " rows, " << table.failures.size() << " failures\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Storage assignment and order picking for mezzanine warehouses"};
    app.require_subcommand(1);

    std::string spec_file, warehouse, task_file, order_file, algo, params, fronts, ref = "auto", plan_file, out_file;
    std::string out_dir = ".";
    std::uint64_t seed = 1;
    int order_number = -1;

    auto* generate = app.add_subcommand("generate", "Generate a filled warehouse and an order corpus");
    generate->add_option("--spec", spec_file, "Generator spec (JSON)")->required()->check(CLI::ExistingFile);
    generate->add_option("--seed", seed, "Random seed")->required();
    generate->add_option("--out", out_dir, "Output directory");

    auto* assign = app.add_subcommand("assign", "Store one product");
    assign->add_option("--warehouse", warehouse, "Warehouse document")->required()->check(CLI::ExistingFile);
    assign->add_option("--task", task_file, "Task document {product, quantity}")->required()->check(CLI::ExistingFile);
    assign->add_option("--algo", algo, "Storage policy")->required()->check(CLI::IsMember({"nsga2", "random", "closest", "rank"}));
    assign->add_option("--seed", seed, "Random seed")->required();
    assign->add_option("--params", params, "Storage parameters (JSON)")->check(CLI::ExistingFile);
    assign->add_option("--out", out_dir, "Output directory");

    auto* pick_cmd = app.add_subcommand("pick", "Route one order");
    pick_cmd->add_option("--warehouse", warehouse, "Warehouse document")->required()->check(CLI::ExistingFile);
    pick_cmd->add_option("--order", order_file, "Order document or order list")->required()->check(CLI::ExistingFile);
    pick_cmd->add_option("--order-number", order_number, "Order to route when the file holds several");
    pick_cmd->add_option("--algo", algo, "Routing algorithm")->required()->check(CLI::IsMember({"aco3", "aco4", "sshape"}));
    pick_cmd->add_option("--seed", seed, "Random seed")->required();
    pick_cmd->add_option("--params", params, "ACO parameters (JSON)")->check(CLI::ExistingFile);
    pick_cmd->add_option("--out", out_dir, "Output directory");

    auto* indicators = app.add_subcommand("indicators", "Quality indicators of front CSV files");
    indicators->add_option("--fronts", fronts, "Glob of front CSV files")->required();
    indicators->add_option("--ref", ref, "'auto' or a reference front CSV");
    indicators->add_option("--out", out_file, "Output CSV (default stdout)");

    auto* experiment = app.add_subcommand("experiment", "Run a benchmark plan");
    experiment->add_option("--plan", plan_file, "Plan document")->required()->check(CLI::ExistingFile);
    experiment->add_option("--out", out_dir, "Output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return usage;
    }

    try {
        if (*generate) run_generate(spec_file, seed, out_dir);
        if (*assign) run_assign(warehouse, task_file, algo, seed, params, out_dir);
        if (*pick_cmd) run_pick(warehouse, order_file, algo, seed, params, order_number, out_dir);
        if (*indicators) run_indicators(fronts, ref, out_file);
        if (*experiment) run_experiment(plan_file, out_dir);
    } catch (const InfeasibleTaskError& e) {
        std::cerr << "infeasible task: " << e.what() << "\n";
        return infeasible;
    } catch (const InfeasibleOrderError& e) {
        std::cerr << "infeasible order: " << e.what() << "\n";
        return infeasible;
    } catch (const ConfigurationError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return configuration;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return usage;
    }
    return ok;
}
