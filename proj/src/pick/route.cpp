#include "mezzopt/pick/route.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <limits>
#include <set>

namespace mezzopt::pick {

std::vector<int> PickRoute::market_sequence() const {
    std::vector<int> out;
    out.reserve(markets.size());
    for (const auto& m : markets) out.push_back(m.market);
    return out;
}

std::vector<OrderLine> pick_list(const Order& order) {
    std::map<ProductNumber, int> merged;
    for (const auto& l : order.lines) {
        if (l.quantity < 1) throw UsageError("pick quantity must be >= 1");
        merged[l.product] += l.quantity;
    }
    std::vector<OrderLine> out;
    for (const auto& [p, q] : merged) out.push_back({p, q});
    return out;
}

PickProblem::PickProblem(const MarketGraph& graph, const std::vector<OrderLine>& lines, double allowed_weight_difference)
    : graph_(&graph), allowed_weight_difference_(allowed_weight_difference) {
    if (allowed_weight_difference < 0.0) throw ConfigurationError("allowed weight difference must be >= 0");
    const auto& state = graph.state();
    std::map<ProductNumber, int> merged;
    for (const auto& l : lines) {
        if (l.quantity < 1) throw UsageError("pick quantity must be >= 1");
        if (!state.has_product(l.product)) throw UsageError("pick list names unknown product " + std::to_string(l.product));
        merged[l.product] += l.quantity;
    }
    for (const auto& [p, q] : merged) {
        lines_.push_back({p, q});
        weights_.push_back(state.product(p).weight);
    }

    const int n = graph.size();
    const int k = static_cast<int>(lines_.size());
    supply_ = Eigen::MatrixXi::Zero(n, k);
    candidates_.resize(static_cast<std::size_t>(n));
    for (int m = 0; m < n; ++m) {
        const auto& market = graph.market(m);
        for (int l = 0; l < k; ++l) {
            const auto it = market.supply.find(lines_[static_cast<std::size_t>(l)].product);
            if (it != market.supply.end()) supply_(m, l) = it->second;
        }
        for (const auto& zr : market.racks) {
            Candidate c{zr.rack_index, zr.depth, {}};
            for (int l = 0; l < k; ++l)
                if (const int q = state.quantity_in_rack(zr.rack_index, lines_[static_cast<std::size_t>(l)].product); q > 0)
                    c.stock.push_back({l, q});
            if (!c.stock.empty()) candidates_[static_cast<std::size_t>(m)].push_back(std::move(c));
        }
    }
    for (int l = 0; l < k; ++l)
        if (supply_.col(l).sum() < lines_[static_cast<std::size_t>(l)].quantity)
            throw InfeasibleOrderError("not enough stock of product " + std::to_string(lines_[static_cast<std::size_t>(l)].product));
}

std::vector<int> PickProblem::initial_need() const {
    std::vector<int> need;
    need.reserve(lines_.size());
    for (const auto& l : lines_) need.push_back(l.quantity);
    return need;
}

int PickProblem::line_of(ProductNumber p) const {
    for (std::size_t i = 0; i < lines_.size(); ++i)
        if (lines_[i].product == p) return static_cast<int>(i);
    return -1;
}

double PickProblem::availability(int market, const std::vector<int>& need) const {
    int total = 0;
    int found = 0;
    for (std::size_t l = 0; l < need.size(); ++l) {
        total += need[l];
        found += std::min(need[l], supply_(market, static_cast<Eigen::Index>(l)));
    }
    return total == 0 ? 0.0 : static_cast<double>(found) / total;
}

bool PickProblem::collect(int market, int visit, std::vector<int>& need, std::vector<RackVisit>& out) const {
    struct Keyed {
        const Candidate* c;
        double weight;
        int quantity;
    };
    std::vector<Keyed> keyed;
    for (const auto& c : candidates_[static_cast<std::size_t>(market)]) {
        double heaviest = -1.0;
        int quantity = 0;
        for (const auto& [l, q] : c.stock) {
            if (need[static_cast<std::size_t>(l)] == 0) continue;
            heaviest = std::max(heaviest, weight(l));
            quantity += std::min(q, need[static_cast<std::size_t>(l)]);
        }
        if (quantity > 0) keyed.push_back({&c, heaviest, quantity});
    }
    std::sort(keyed.begin(), keyed.end(), [](const Keyed& a, const Keyed& b) {
        if (a.weight != b.weight) return a.weight > b.weight;
        if (a.c->depth != b.c->depth) return a.c->depth < b.c->depth;
        if (a.quantity != b.quantity) return a.quantity > b.quantity;
        return a.c->rack_index < b.c->rack_index;
    });

    bool picked = false;
    for (const auto& k : keyed) {
        std::vector<std::pair<int, int>> stock = k.c->stock;
        std::stable_sort(stock.begin(), stock.end(), [&](const auto& a, const auto& b) { return weight(a.first) > weight(b.first); });
        RackVisit rv{visit, k.c->rack_index, k.c->depth, {}};
        for (const auto& [l, q] : stock) {
            auto& n = need[static_cast<std::size_t>(l)];
            const int take = std::min(n, q);
            if (take == 0) continue;
            n -= take;
            rv.picks.push_back({lines_[static_cast<std::size_t>(l)].product, take});
        }
        if (!rv.picks.empty()) {
            out.push_back(std::move(rv));
            picked = true;
        }
    }
    return picked;
}

namespace {

Side toward(double from_x, double to_x, Side tie) {
    if (to_x < from_x - 1e-9) return Side::left;
    if (to_x > from_x + 1e-9) return Side::right;
    return tie;
}

int closest_pd(const MarketGraph& graph, int market) { return graph.market(market).closest_pd; }

}  // namespace

Side exit_side(const MarketGraph& graph, const PickRoute& route, std::size_t i) {
    const auto& m = graph.market(route.markets[i].market);
    const double next_x = i + 1 < route.markets.size() ? graph.market(route.markets[i + 1].market).center.x()
                                                       : graph.pd_point(route.end_pd).x();
    return toward(m.center.x(), next_x, route.markets[i].entry);
}

PickRoute PickProblem::route_along(const std::vector<int>& sequence) const {
    PickRoute route;
    std::vector<int> need = initial_need();
    std::set<int> seen;
    for (int m : sequence) {
        if (!seen.insert(m).second) throw UsageError("market sequence repeats a market");
        if (std::all_of(need.begin(), need.end(), [](int q) { return q == 0; })) break;
        const auto visit = static_cast<int>(route.markets.size());
        if (collect(m, visit, need, route.racks)) route.markets.push_back({m, Side::left});
    }
    if (std::any_of(need.begin(), need.end(), [](int q) { return q > 0; }))
        throw InfeasibleOrderError("market sequence does not cover the pick list");
    if (route.markets.empty()) return route;

    route.start_pd = closest_pd(*graph_, route.markets.front().market);
    route.end_pd = closest_pd(*graph_, route.markets.back().market);
    for (std::size_t i = 0; i < route.markets.size(); ++i) {
        const auto& m = graph_->market(route.markets[i].market);
        const double prev_x =
            i == 0 ? graph_->pd_point(route.start_pd).x() : graph_->market(route.markets[i - 1].market).center.x();
        const double next_x = i + 1 < route.markets.size() ? graph_->market(route.markets[i + 1].market).center.x()
                                                           : graph_->pd_point(route.end_pd).x();
        route.markets[i].entry = toward(m.center.x(), prev_x, toward(m.center.x(), next_x, Side::left));
    }
    evaluate(route);
    return route;
}

PickRoute PickProblem::route_with_sides(const std::vector<MarketVisit>& visits) const {
    PickRoute route;
    std::vector<int> need = initial_need();
    for (const auto& v : visits) {
        const auto visit = static_cast<int>(route.markets.size());
        if (collect(v.market, visit, need, route.racks)) route.markets.push_back(v);
    }
    if (std::any_of(need.begin(), need.end(), [](int q) { return q > 0; }))
        throw InfeasibleOrderError("market sequence does not cover the pick list");
    evaluate(route);
    return route;
}

void PickProblem::evaluate(PickRoute& route) const {
    if (route.markets.empty()) {
        route.start_pd = route.end_pd = -1;
        route.distance = 0.0;
        route.weight_violations = 0;
        return;
    }
    route.start_pd = closest_pd(*graph_, route.markets.front().market);
    route.end_pd = closest_pd(*graph_, route.markets.back().market);
    route.distance = travel_distance(*graph_, route);
    route.weight_violations = weight_violations(graph_->state(), route, allowed_weight_difference_);
}

double travel_distance(const MarketGraph& graph, const PickRoute& route) {
    if (route.markets.empty()) return 0.0;
    double d = graph.market(route.markets.front().market).pd_distance;
    for (const auto& r : route.racks) d += 2.0 * r.depth;
    for (std::size_t i = 0; i < route.markets.size(); ++i) {
        const auto& m = graph.market(route.markets[i].market);
        if (route.markets[i].entry != exit_side(graph, route, i)) d += m.lane_width();
        if (i + 1 < route.markets.size()) d += graph.distance(route.markets[i].market, route.markets[i + 1].market);
    }
    d += graph.market(route.markets.back().market).pd_distance;
    return d;
}

int weight_violations(const std::vector<double>& pick_weights, double allowed_difference) {
    int violations = 0;
    double lightest = std::numeric_limits<double>::infinity();
    for (double w : pick_weights) {
        if (w > lightest + allowed_difference) ++violations;
        lightest = std::min(lightest, w);
    }
    return violations;
}

int weight_violations(const WarehouseState& state, const PickRoute& route, double allowed_difference) {
    std::vector<double> weights;
    for (const auto& r : route.racks)
        for (const auto& p : r.picks) weights.push_back(state.product(p.product).weight);
    return weight_violations(weights, allowed_difference);
}

PickRoute reverse_route(const PickProblem& problem, const PickRoute& route) {
    auto sequence = route.market_sequence();
    std::reverse(sequence.begin(), sequence.end());
    return problem.route_along(sequence);
}

std::vector<std::string> validate_pick_route(const PickProblem& problem, const PickRoute& route) {
    std::vector<std::string> out;
    const auto& graph = problem.graph();
    const auto& state = graph.state();
    const auto pd_count = static_cast<int>(state.layout().pd_points.size());
    if (!route.markets.empty()) {
        if (route.start_pd < 0 || route.start_pd >= pd_count) out.push_back("route does not start at a p/d-point");
        if (route.end_pd < 0 || route.end_pd >= pd_count) out.push_back("route does not end at a p/d-point");
    }
    std::set<int> seen;
    for (const auto& m : route.markets) {
        if (m.market < 0 || m.market >= graph.size()) {
            out.push_back("unknown market " + std::to_string(m.market));
            return out;
        }
        if (!seen.insert(m.market).second) out.push_back("market " + std::to_string(m.market) + " visited twice");
    }
    std::map<ProductNumber, int> picked;
    std::map<std::pair<std::size_t, ProductNumber>, int> taken;
    for (const auto& r : route.racks) {
        if (r.visit < 0 || r.visit >= static_cast<int>(route.markets.size())) {
            out.push_back("rack visit outside the market sequence");
            continue;
        }
        if (graph.market_of_rack(r.rack_index) != route.markets[static_cast<std::size_t>(r.visit)].market)
            out.push_back("rack " + std::to_string(state.rack(r.rack_index).rack_id) + " outside the market zone");
        for (const auto& p : r.picks) {
            picked[p.product] += p.quantity;
            taken[{r.rack_index, p.product}] += p.quantity;
        }
    }
    for (const auto& [key, q] : taken)
        if (q > state.quantity_in_rack(key.first, key.second))
            out.push_back("rack " + std::to_string(state.rack(key.first).rack_id) + " lacks product " + std::to_string(key.second));
    for (const auto& l : problem.lines()) {
        const auto it = picked.find(l.product);
        const int q = it == picked.end() ? 0 : it->second;
        if (q != l.quantity)
            out.push_back("product " + std::to_string(l.product) + " picked " + std::to_string(q) + " of " + std::to_string(l.quantity));
    }
    for (const auto& [p, q] : picked)
        if (problem.line_of(p) < 0) out.push_back("product " + std::to_string(p) + " not on the pick list");
    return out;
}

std::vector<PickRoute> pareto_routes(std::vector<PickRoute> routes) {
    if (routes.empty()) return routes;
    std::stable_sort(routes.begin(), routes.end(), [](const PickRoute& a, const PickRoute& b) {
        if (a.distance != b.distance) return a.distance < b.distance;
        if (a.weight_violations != b.weight_violations) return a.weight_violations < b.weight_violations;
        return a.market_sequence() < b.market_sequence();
    });
    std::vector<PickRoute> out;
    for (auto& r : routes) {
        bool dominated = false;
        for (const auto& o : out) {
            if (o.distance <= r.distance + 1e-9 && o.weight_violations <= r.weight_violations) {
                dominated = true;
                break;
            }
        }
        if (!dominated) out.push_back(std::move(r));
    }
    return out;
}

}  // namespace mezzopt::pick
