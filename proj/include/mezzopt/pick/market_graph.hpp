#pragma once

#include <Eigen/Core>

#include <map>
#include <vector>

#include "mezzopt/warehouse.hpp"

namespace mezzopt::pick {

/// A rack reachable from a market's cross lane.
struct ZoneRack {
    std::size_t rack_index = 0;
    int sub_aisle = 0;
    double depth = 0.0;  // distance from the cross lane to the rack's access point
};

/// One cross lane of one lane on one floor, with the racks up to the
/// sub-aisle midpoints on either side.
struct Market {
    int index = 0;
    FloorId floor = 1;
    int cross_aisle = 0;
    int lane = 0;
    Point2 center = Point2::Zero();
    double left_x = 0.0;
    double right_x = 0.0;
    int closest_pd = 0;
    double pd_distance = 0.0;
    std::vector<ZoneRack> racks;
    std::map<ProductNumber, int> supply;

    double lane_width() const { return right_x - left_x; }
};

/// Complete directed graph over all markets of all floors. Edge weight is the
/// Manhattan distance between market centers plus the floor penalty when the
/// floors differ.
class MarketGraph {
public:
    MarketGraph(const WarehouseState& state, double floor_penalty = 50.0);

    const WarehouseState& state() const { return *state_; }
    double floor_penalty() const { return floor_penalty_; }
    int size() const { return static_cast<int>(markets_.size()); }
    const Market& market(int i) const { return markets_.at(static_cast<std::size_t>(i)); }
    const std::vector<Market>& markets() const { return markets_; }
    double distance(int from, int to) const { return distance_(from, to); }
    const Eigen::MatrixXd& distances() const { return distance_; }

    int lane_count() const { return lanes_; }
    int cross_aisle_count() const { return cross_aisles_; }
    /// Market index of (floor, cross aisle, lane).
    int index_of(FloorId floor, int cross_aisle, int lane) const;
    const Point2& pd_point(int pd) const { return state_->layout().pd_points.at(static_cast<std::size_t>(pd)); }
    int market_of_rack(std::size_t rack_index) const { return rack_market_.at(rack_index); }

private:
    const WarehouseState* state_;
    double floor_penalty_;
    int lanes_ = 0;
    int cross_aisles_ = 0;
    std::vector<Market> markets_;
    std::vector<int> rack_market_;
    Eigen::MatrixXd distance_;
};

inline MarketGraph build_market_graph(const WarehouseState& state, double floor_penalty = 50.0) {
    return MarketGraph(state, floor_penalty);
}

}  // namespace mezzopt::pick
