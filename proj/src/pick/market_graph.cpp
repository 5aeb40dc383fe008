#include "mezzopt/pick/market_graph.hpp"

#include <cmath>
#include <limits>

namespace mezzopt::pick {

MarketGraph::MarketGraph(const WarehouseState& state, double floor_penalty)
    : state_(&state), floor_penalty_(floor_penalty) {
    if (floor_penalty < 0.0) throw ConfigurationError("floor penalty must be >= 0");
    const auto& layout = state.layout();
    if (layout.cross_aisle_rows.empty()) throw ConfigurationError("floor has no cross aisles");
    if (layout.pd_points.empty()) throw ConfigurationError("floor has no p/d-point");
    const auto bounds = layout.lane_boundaries();
    lanes_ = static_cast<int>(bounds.size()) - 1;
    cross_aisles_ = static_cast<int>(layout.cross_aisle_rows.size());

    for (FloorId f = 1; f <= state.floor_count(); ++f) {
        for (int c = 0; c < cross_aisles_; ++c) {
            for (int l = 0; l < lanes_; ++l) {
                Market m;
                m.index = static_cast<int>(markets_.size());
                m.floor = f;
                m.cross_aisle = c;
                m.lane = l;
                m.left_x = bounds[static_cast<std::size_t>(l)];
                m.right_x = bounds[static_cast<std::size_t>(l + 1)];
                m.center = Point2((m.left_x + m.right_x) / 2.0, layout.cross_aisle_rows[static_cast<std::size_t>(c)]);
                m.pd_distance = std::numeric_limits<double>::infinity();
                for (std::size_t p = 0; p < layout.pd_points.size(); ++p) {
                    const double d = manhattan_distance(m.center, layout.pd_points[p]);
                    if (d < m.pd_distance) {
                        m.pd_distance = d;
                        m.closest_pd = static_cast<int>(p);
                    }
                }
                markets_.push_back(std::move(m));
            }
        }
    }

    rack_market_.assign(state.racks().size(), -1);
    for (std::size_t r = 0; r < state.racks().size(); ++r) {
        const auto& rack = state.rack(r);
        const double y = rack.access_point.y();
        int best = 0;
        double depth = std::numeric_limits<double>::infinity();
        for (int c = 0; c < cross_aisles_; ++c) {
            const double d = std::abs(y - layout.cross_aisle_rows[static_cast<std::size_t>(c)]);
            if (d < depth - 1e-9) {
                depth = d;
                best = c;
            }
        }
        const int m = index_of(rack.floor_id, best, layout.lane_of(rack.access_point.x()));
        auto& market = markets_[static_cast<std::size_t>(m)];
        market.racks.push_back({r, rack.sub_aisle_id, depth});
        for (const auto& slot : state.slots_of(r))
            if (!slot.empty()) market.supply[slot.product] += slot.quantity;
        rack_market_[r] = m;
    }

    const int n = size();
    distance_.resize(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const auto& a = markets_[static_cast<std::size_t>(i)];
            const auto& b = markets_[static_cast<std::size_t>(j)];
            distance_(i, j) = manhattan_distance(a.center, b.center) + (a.floor != b.floor ? floor_penalty_ : 0.0);
        }
    }
}

int MarketGraph::index_of(FloorId floor, int cross_aisle, int lane) const {
    if (floor < 1 || floor > state_->floor_count() || cross_aisle < 0 || cross_aisle >= cross_aisles_ || lane < 0 ||
        lane >= lanes_)
        throw UsageError("market coordinates out of range");
    return ((floor - 1) * cross_aisles_ + cross_aisle) * lanes_ + lane;
}

}  // namespace mezzopt::pick
