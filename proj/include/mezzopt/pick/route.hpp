#pragma once

#include <Eigen/Core>

#include <string>
#include <vector>

#include "mezzopt/pick/market_graph.hpp"

namespace mezzopt::pick {

struct MarketVisit {
    int market = 0;
    Side entry = Side::left;
};

struct PickLine {
    ProductNumber product = 0;
    int quantity = 0;
};

/// One sub-aisle entry: a round trip from the cross lane to one rack.
struct RackVisit {
    int visit = 0;  // position in the market sequence
    std::size_t rack_index = 0;
    double depth = 0.0;
    std::vector<PickLine> picks;
};

struct PickRoute {
    std::vector<MarketVisit> markets;
    std::vector<RackVisit> racks;
    int start_pd = -1;
    int end_pd = -1;
    double distance = 0.0;
    int weight_violations = 0;

    /// (travel distance, weight violations), both minimized.
    Eigen::Vector2d objectives() const { return {distance, static_cast<double>(weight_violations)}; }
    std::vector<int> market_sequence() const;
};

/// Pick list of one order prepared against a market graph: merged lines,
/// product weights and per-market stock of every line.
class PickProblem {
public:
    PickProblem(const MarketGraph& graph, const std::vector<OrderLine>& lines, double allowed_weight_difference = 3.0);

    const MarketGraph& graph() const { return *graph_; }
    const std::vector<PickLine>& lines() const { return lines_; }
    double weight(int line) const { return weights_[static_cast<std::size_t>(line)]; }
    double allowed_weight_difference() const { return allowed_weight_difference_; }
    /// Items still missing per line before anything is picked.
    std::vector<int> initial_need() const;
    int line_of(ProductNumber p) const;

    /// Stock of a line's product in a market zone.
    int supply(int market, int line) const { return supply_(market, line); }
    /// Share of the missing items available at the market, in [0, 1].
    double availability(int market, const std::vector<int>& need) const;
    /// Visits racks of one market by the priority rules and reduces `need`.
    /// Returns false when nothing was picked.
    bool collect(int market, int visit, std::vector<int>& need, std::vector<RackVisit>& out) const;

    /// Route along a market sequence: collects greedily, drops markets that
    /// provide nothing and evaluates both objectives. A market is entered on
    /// the side facing the previous position; when that lies straight ahead
    /// the side facing the next position is used, so the cross lane is only
    /// traversed between opposite neighbours. Throws InfeasibleOrderError when the
    /// sequence leaves items missing.
    PickRoute route_along(const std::vector<int>& sequence) const;
    /// Route with given market order and entry sides; only racks are recomputed.
    PickRoute route_with_sides(const std::vector<MarketVisit>& visits) const;

    /// Sets pd-points, distance and weight violations of a route.
    void evaluate(PickRoute& route) const;

private:
    struct Candidate {
        std::size_t rack_index;
        double depth;
        std::vector<std::pair<int, int>> stock;  // (line, quantity)
    };

    const MarketGraph* graph_;
    std::vector<PickLine> lines_;
    std::vector<double> weights_;
    double allowed_weight_difference_;
    Eigen::MatrixXi supply_;
    std::vector<std::vector<Candidate>> candidates_;
};

/// Exit side of the i-th market: toward the next market (or end pd), the
/// entry side when both share an x coordinate.
Side exit_side(const MarketGraph& graph, const PickRoute& route, std::size_t i);

/// pd to first market + 2 x depth per rack visit + lane width per market
/// crossed + market edges + last market to pd.
double travel_distance(const MarketGraph& graph, const PickRoute& route);

/// A pick violates when its weight exceeds the lightest earlier pick by more
/// than `allowed_difference`.
int weight_violations(const std::vector<double>& pick_weights, double allowed_difference);
int weight_violations(const WarehouseState& state, const PickRoute& route, double allowed_difference);

/// Reversed market order: every market is entered where the original route
/// left it. Racks and objectives are recomputed; markets that no longer
/// provide anything are dropped.
PickRoute reverse_route(const PickProblem& problem, const PickRoute& route);

/// Empty iff the route starts and ends at pd-points, collects exactly the pick
/// list from stock within each market zone, and never repeats a market.
std::vector<std::string> validate_pick_route(const PickProblem& problem, const PickRoute& route);

/// Non-dominated routes with distinct objective vectors, ordered by distance.
std::vector<PickRoute> pareto_routes(std::vector<PickRoute> routes);

/// Pick list of an order with duplicate products merged.
std::vector<OrderLine> pick_list(const Order& order);

}  // namespace mezzopt::pick
