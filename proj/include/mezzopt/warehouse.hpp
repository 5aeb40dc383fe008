#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "mezzopt/errors.hpp"
#include "mezzopt/geometry.hpp"

namespace mezzopt {

using FloorId = int;
using RackId = int;
using CompartmentId = int;
using ProductNumber = int;

enum class AisleKind { wide, narrow };
enum class Side { left, right };

inline Side opposite(Side s) { return s == Side::left ? Side::right : Side::left; }

struct PickAisle {
    double x = 0.0;
    AisleKind kind = AisleKind::narrow;
};

/// Top-down grid of one floor. Periphery aisles run along x = 0, x = width
/// and the first/last cross aisle; they are implied and not listed in
/// `pick_aisles`.
struct FloorLayout {
    double width = 0.0;
    double height = 0.0;
    std::vector<Point2> pd_points;
    std::vector<double> cross_aisle_rows;  // ascending y
    std::vector<PickAisle> pick_aisles;    // ascending x

    /// x-coordinates of the lane boundaries: periphery plus every wide aisle.
    std::vector<double> lane_boundaries() const;
    int lane_of(double x) const;
};

struct Rack {
    RackId rack_id = 0;
    FloorId floor_id = 1;
    Point2 access_point = Point2::Zero();
    int bay_number = 1;
    int block_id = 0;
    int sub_aisle_id = 0;
    Side side = Side::left;
    int configuration_id = 0;
};

/// Width, height, depth in meters.
struct Dimensions {
    double width = 0.0;
    double height = 0.0;
    double depth = 0.0;

    double volume() const { return width * height * depth; }
};

struct Compartment {
    CompartmentId compartment_id = 0;
    Dimensions size;
    int shelf_level = 0;
    int shelf_position = 0;
    double bottom_height = 0.0;
};

struct RackConfiguration {
    int configuration_id = 0;
    int shelf_levels = 0;
    int compartments_per_shelf = 0;
    std::vector<Compartment> compartments;
};

struct OrderFrequency {
    double mean = 1.0;
    double stddev = 0.0;
};

struct Product {
    ProductNumber number = 0;
    Dimensions size;
    double weight = 1.0;  // kg
    int rank = 1;         // 1 = most frequently ordered
    OrderFrequency order_frequency;
};

/// ceil(mu + 2 sigma), never below 1.
int target_quantity(const Product& p);

struct ProductAssignment {
    FloorId floor_id = 1;
    RackId rack_id = 0;
    CompartmentId compartment_id = 0;
    ProductNumber product = 0;
    int quantity = 0;
};

struct OrderLine {
    ProductNumber product = 0;
    int quantity = 1;
};

struct Order {
    int order_number = 0;
    std::vector<OrderLine> lines;
};

struct AssociationRule {
    ProductNumber lhs = 0;
    ProductNumber rhs = 0;
    double confidence = 0.0;
};

/// Content of one compartment. `quantity == 0` means empty.
struct Slot {
    ProductNumber product = 0;
    int quantity = 0;

    bool empty() const { return quantity == 0; }
};

/// Addresses a compartment by position in the state's rack and
/// configuration vectors.
struct SlotIndex {
    std::size_t rack = 0;
    std::size_t compartment = 0;

    friend bool operator==(const SlotIndex&, const SlotIndex&) = default;
};

/// Layout, racks, assortment, rules and stock of a multi-floor mezzanine
/// warehouse. All floors share one layout. The object is read-only during an
/// optimization run; `store` is the only mutator and is used between runs.
class WarehouseState {
public:
    WarehouseState() = default;
    WarehouseState(FloorLayout layout, int floor_count, std::vector<RackConfiguration> configurations,
                   std::vector<Rack> racks, std::vector<Product> products,
                   std::vector<AssociationRule> rules,
                   const std::vector<ProductAssignment>& assignments = {});

    const FloorLayout& layout() const { return layout_; }
    int floor_count() const { return floor_count_; }

    std::span<const Rack> racks() const { return racks_; }
    const Rack& rack(std::size_t index) const { return racks_.at(index); }
    /// Indices into `racks()` of the racks on `floor`, ordered by rack id.
    std::span<const std::size_t> racks_on_floor(FloorId floor) const;
    std::size_t rack_index(FloorId floor, RackId rack) const;

    std::span<const RackConfiguration> configurations() const { return configurations_; }
    const RackConfiguration& configuration_of(std::size_t rack_index) const;
    const Compartment& compartment(SlotIndex s) const;
    std::size_t compartment_index(std::size_t rack_index, CompartmentId id) const;

    std::span<const Product> products() const { return products_; }
    bool has_product(ProductNumber p) const { return product_index_.contains(p); }
    const Product& product(ProductNumber p) const;

    std::span<const AssociationRule> rules() const { return rules_; }
    /// Rules whose left-hand side is `p`.
    std::vector<AssociationRule> rules_for(ProductNumber p) const;

    const Slot& slot(SlotIndex s) const { return slots_.at(s.rack).at(s.compartment); }
    std::span<const Slot> slots_of(std::size_t rack_index) const { return slots_.at(rack_index); }

    /// Stock of `p` in one rack.
    int quantity_in_rack(std::size_t rack_index, ProductNumber p) const;
    int quantity_on_floor(ProductNumber p, FloorId floor) const;
    int total_quantity(ProductNumber p) const;

    std::vector<ProductAssignment> assignments() const;

    /// Adds `quantity` items of `p` to a compartment. Throws InfeasibleTaskError
    /// when the compartment holds another product or lacks the space.
    void store(SlotIndex s, ProductNumber p, int quantity);

    /// Stored item volume over total compartment volume.
    double volume_fill_ratio() const;
    /// Occupied compartments over all compartments.
    double compartment_fill_ratio() const;

private:
    FloorLayout layout_;
    int floor_count_ = 0;
    std::vector<RackConfiguration> configurations_;
    std::vector<Rack> racks_;
    std::vector<Product> products_;
    std::vector<AssociationRule> rules_;

    std::vector<std::vector<Slot>> slots_;
    std::vector<std::vector<std::size_t>> floor_racks_;
    std::unordered_map<long long, std::size_t> rack_lookup_;
    std::unordered_map<int, std::size_t> configuration_lookup_;
    std::unordered_map<ProductNumber, std::size_t> product_index_;
    std::unordered_map<ProductNumber, std::vector<std::size_t>> rules_by_lhs_;
};

/// Walking distance from a rack's access point to its closest p/d-point.
double rack_walk_distance(const Rack& rack, const FloorLayout& layout);

/// Axis-aligned packing count without rotation.
int compartment_capacity(const Compartment& compartment, const Product& product);

/// Items of `p` that still fit; 0 when the compartment holds another product.
int remaining_capacity(const WarehouseState& state, SlotIndex s, const Product& product);

/// Sum of remaining_capacity over the compartments of one rack.
int rack_remaining_capacity(const WarehouseState& state, std::size_t rack_index, const Product& product);

}  // namespace mezzopt
