#pragma once

#include <functional>
#include <map>
#include <random>

#include "mezzopt/warehouse.hpp"

namespace fixtures {

using namespace mezzopt;

/// One shelf level at grip height, `n` compartments of 1 x 1 x 1 m.
inline RackConfiguration cube_configuration(int id, int n, double bottom = 0.8) {
    RackConfiguration cfg{id, 1, n, {}};
    for (int i = 0; i < n; ++i) cfg.compartments.push_back({i + 1, {1.0, 1.0, 1.0}, 0, i, bottom});
    return cfg;
}

inline Product unit_product(ProductNumber number, int rank = 1, double weight = 2.0, double mu = 2.0, double sigma = 1.0) {
    return {number, {1.0, 1.0, 1.0}, weight, rank, {mu, sigma}};
}

inline FloorLayout strip_layout(double width, double height) {
    FloorLayout layout;
    layout.width = width;
    layout.height = height;
    layout.pd_points = {Point2(0.0, 0.0)};
    layout.cross_aisle_rows = {0.0, height};
    return layout;
}

inline Rack rack_at(RackId id, double x, double y, int sub_aisle = 0, int bay = 1, Side side = Side::left,
                    FloorId floor = 1, int configuration = 1) {
    return {id, floor, Point2(x, y), bay, sub_aisle * 2 + (side == Side::left ? 0 : 1), sub_aisle, side, configuration};
}

}  // namespace fixtures

#include "mezzopt/gen/generator.hpp"

namespace fixtures {

/// Generated layout with `products` random products and no stock.
inline WarehouseState small_generated(const gen::LayoutSpec& layout, int products, std::uint64_t seed,
                                      bool with_rules = true) {
    gen::GenSpec spec = gen::gen_spec_for("small");
    spec.layout = layout;
    spec.assortment_size = products;
    spec.order_lines = std::min(spec.order_lines, products);
    gen::Rng rng(seed);
    auto shell = gen::generate_layout(layout, rng);
    auto prods = gen::generate_products(spec, rng);
    std::vector<AssociationRule> rules;
    if (with_rules) rules = gen::generate_correlations(prods, spec, rng);
    return WarehouseState(shell.layout, shell.floors, shell.configurations, shell.racks, prods, rules);
}

}  // namespace fixtures

namespace fixtures {

/// Single-floor state with hand-placed racks that all use one configuration.
inline WarehouseState hand_state(std::vector<Rack> racks, std::vector<Product> products, RackConfiguration configuration,
                                 std::vector<AssociationRule> rules = {},
                                 const std::vector<ProductAssignment>& assignments = {}, double width = 100.0,
                                 double height = 20.0) {
    return WarehouseState(strip_layout(width, height), 1, {std::move(configuration)}, std::move(racks),
                          std::move(products), std::move(rules), assignments);
}

/// Products 1..n, all unit boxes, rank = number.
inline std::vector<Product> unit_products(int n, double mu = 2.0, double sigma = 1.0) {
    std::vector<Product> out;
    for (int i = 1; i <= n; ++i) out.push_back(unit_product(i, i, 2.0, mu, sigma));
    return out;
}

struct TinyTask {
    WarehouseState state;
    ProductNumber product = 0;
    int incoming = 0;
};

/// One floor, one narrow aisle, 3 bays per side (6 racks), partially filled,
/// 1 to 3 incoming items of a product that has correlation rules if possible.
inline TinyTask tiny_task(std::uint64_t seed) {
    auto spec = gen::gen_spec_for("small");
    spec.layout = {1, 1, 1, 2, 3, {1.0, 1.0, 1.0}};
    spec.assortment_size = 12;
    spec.fill_fraction = 0.3;
    spec.order_lines = 5;
    auto state = gen::generate_empty_warehouse(spec, seed);
    gen::FillOptions fill;
    fill.assign.random_samples = 1;
    gen::fill_warehouse(state, spec, seed + 1, fill);
    std::mt19937_64 rng(seed);
    ProductNumber product = 1 + static_cast<int>(rng() % 12);
    for (int k = 0; k < 12; ++k) {
        const ProductNumber cand = 1 + (product - 1 + k) % 12;
        if (!state.rules_for(cand).empty()) {
            product = cand;
            break;
        }
    }
    return {std::move(state), product, 1 + static_cast<int>(seed % 3)};
}

}  // namespace fixtures

#include "mezzopt/moo/pareto.hpp"

namespace fixtures {

/// Exhaustive Pareto front of a floor problem: every multiset of incoming
/// items over fitting racks that respects capacity.
inline Eigen::MatrixXd brute_force_front(const storage::FloorProblem& problem) {
    std::vector<Eigen::Vector4d> all;
    storage::Counts counts(static_cast<std::size_t>(problem.rack_count()), 0);
    const auto fitting = problem.fitting_racks();
    std::function<void(std::size_t, int)> rec = [&](std::size_t k, int left) {
        if (k == fitting.size()) {
            if (left == 0) all.push_back(problem.evaluate(counts));
            return;
        }
        const int r = fitting[k];
        for (int q = 0; q <= std::min(left, problem.capacity(r)); ++q) {
            counts[static_cast<std::size_t>(r)] = q;
            rec(k + 1, left - q);
        }
        counts[static_cast<std::size_t>(r)] = 0;
    };
    rec(0, problem.incoming());
    Eigen::MatrixXd m(static_cast<Eigen::Index>(all.size()), 4);
    for (std::size_t i = 0; i < all.size(); ++i) m.row(static_cast<Eigen::Index>(i)) = all[i].transpose();
    const auto o = moo::maximize_all(4);
    return moo::unique_rows(moo::select_rows(m, moo::nondominated_indices(m, o)));
}

}  // namespace fixtures

namespace fixtures {

/// Generated 1-floor grid (2 lanes of one narrow aisle, 3 cross aisles, 2 bays)
/// with every rack holding ten deep unit compartments. Markets are
/// index = cross_aisle * 2 + lane; rack ids 1,3 sit at market 0, ids 2,4,9,11
/// at market 2, ids 10,12 at market 4, and +4 on the ids for lane 1.
inline WarehouseState pick_fixture(std::vector<Product> products, const std::vector<ProductAssignment>& stock,
                                   int floors = 1) {
    gen::Rng rng(1);
    auto shell = gen::generate_layout({floors, 2, 1, 3, 2, {1.0, 1.0, 1.0}}, rng);
    RackConfiguration deep{1, 1, 10, {}};
    for (int i = 0; i < 10; ++i) deep.compartments.push_back({i + 1, {1.0, 1.0, 10.0}, 0, i, 0.8});
    for (auto& r : shell.racks) r.configuration_id = 1;
    return WarehouseState(shell.layout, shell.floors, {deep}, shell.racks, std::move(products), {}, stock);
}

inline Product weighted_product(ProductNumber n, double weight) { return unit_product(n, n, weight); }

}  // namespace fixtures

#include "mezzopt/pick/aco.hpp"

namespace fixtures {

/// Travel distance replayed from raw layout coordinates: p/d-point to the
/// first cross lane center, one round trip per rack entry, a lane crossing
/// whenever the exit side differs from the entry side, centre-to-centre moves
/// (plus the floor penalty) and back to a p/d-point.
inline double segment_sum(const WarehouseState& state, const pick::MarketGraph& graph, const pick::PickRoute& route,
                          double floor_penalty = 50.0) {
    if (route.markets.empty()) return 0.0;
    const auto& layout = state.layout();
    const auto bounds = layout.lane_boundaries();
    struct Pos {
        double x, y, left, right;
        FloorId floor;
    };
    std::vector<Pos> pos;
    for (const auto& v : route.markets) {
        const auto& m = graph.market(v.market);
        const double left = bounds[static_cast<std::size_t>(m.lane)];
        const double right = bounds[static_cast<std::size_t>(m.lane + 1)];
        pos.push_back({(left + right) / 2, layout.cross_aisle_rows[static_cast<std::size_t>(m.cross_aisle)], left, right, m.floor});
    }
    const auto l1 = [](double ax, double ay, double bx, double by) { return std::abs(ax - bx) + std::abs(ay - by); };
    const auto nearest_pd = [&](const Pos& p) {
        double best = 1e300;
        for (const auto& pd : layout.pd_points) best = std::min(best, l1(p.x, p.y, pd.x(), pd.y()));
        return best;
    };
    const auto pd_x = [&](const Pos& p) {
        double best = 1e300, x = 0;
        for (const auto& pd : layout.pd_points)
            if (const double d = l1(p.x, p.y, pd.x(), pd.y()); d < best) best = d, x = pd.x();
        return x;
    };
    double total = nearest_pd(pos.front()) + nearest_pd(pos.back());
    for (const auto& r : route.racks) {
        const auto& rack = state.rack(r.rack_index);
        const auto& p = pos[static_cast<std::size_t>(r.visit)];
        total += 2.0 * std::abs(rack.access_point.y() - p.y);
    }
    for (std::size_t i = 0; i < pos.size(); ++i) {
        const double next_x = i + 1 < pos.size() ? pos[i + 1].x : pd_x(pos.back());
        Side exit = route.markets[i].entry;
        if (next_x < pos[i].x) exit = Side::left;
        if (next_x > pos[i].x) exit = Side::right;
        if (exit != route.markets[i].entry) total += pos[i].right - pos[i].left;
        if (i + 1 < pos.size())
            total += l1(pos[i].x, pos[i].y, pos[i + 1].x, pos[i + 1].y) + (pos[i].floor != pos[i + 1].floor ? floor_penalty : 0.0);
    }
    return total;
}

/// Shortest travel distance any constructed or reversed route can reach:
/// every ordering of markets that still provide a missing item, each taken
/// forward (sides from geometry) and reversed (sides toggled).
inline double tsp_optimum(const pick::PickProblem& problem) {
    const int n = problem.graph().size();
    double best = 1e300;
    std::vector<int> seq;
    std::vector<char> used(static_cast<std::size_t>(n), 0);
    std::function<void(std::vector<int>)> rec = [&](std::vector<int> need) {
        if (std::all_of(need.begin(), need.end(), [](int q) { return q == 0; })) {
            const auto r = problem.route_along(seq);
            best = std::min({best, r.distance, pick::reverse_route(problem, r).distance});
            return;
        }
        for (int m = 0; m < n; ++m) {
            if (used[static_cast<std::size_t>(m)] || problem.availability(m, need) == 0.0) continue;
            auto next = need;
            std::vector<pick::RackVisit> scratch;
            problem.collect(m, 0, next, scratch);
            used[static_cast<std::size_t>(m)] = 1;
            seq.push_back(m);
            rec(next);
            seq.pop_back();
            used[static_cast<std::size_t>(m)] = 0;
        }
    };
    rec(problem.initial_need());
    return best;
}

}  // namespace fixtures

namespace fixtures {

struct PickCase {
    WarehouseState state;
    std::vector<OrderLine> lines;
};

/// pick_fixture with 6 products of random weight stocked in random racks and
/// an order over 1 to 4 of them.
inline PickCase random_pick_case(std::uint64_t seed, int floors = 1) {
    std::mt19937_64 rng(seed);
    std::vector<Product> products;
    for (int p = 1; p <= 6; ++p) products.push_back(weighted_product(p, 1.0 + static_cast<double>(rng() % 8)));
    const int racks = 16 * floors;
    std::vector<ProductAssignment> stock;
    std::map<int, int> next_compartment;
    for (int p = 1; p <= 6; ++p) {
        const int copies = 1 + static_cast<int>(rng() % 3);
        for (int c = 0; c < copies; ++c) {
            const int rack = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(racks));
            const int comp = ++next_compartment[rack];
            if (comp > 10) continue;
            stock.push_back({1 + (rack - 1) / 16, 1 + (rack - 1) % 16, comp, p, 1 + static_cast<int>(rng() % 4)});
        }
    }
    auto state = pick_fixture(std::move(products), stock, floors);
    std::vector<OrderLine> lines;
    const int n = 1 + static_cast<int>(rng() % 4);
    std::vector<int> ids{1, 2, 3, 4, 5, 6};
    std::shuffle(ids.begin(), ids.end(), rng);
    for (int k = 0; k < n; ++k) {
        const int have = state.total_quantity(ids[static_cast<std::size_t>(k)]);
        if (have > 0) lines.push_back({ids[static_cast<std::size_t>(k)], 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(have))});
    }
    if (lines.empty()) lines.push_back({stock.front().product, 1});
    return {std::move(state), std::move(lines)};
}

}  // namespace fixtures
