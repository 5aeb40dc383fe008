#pragma once

#include <Eigen/Core>

#include <map>
#include <string>
#include <vector>

#include "mezzopt/warehouse.hpp"

namespace mezzopt {

/// Spread, distance, quantity and correlation score of one floor (all maximized).
using StorageObjectives = Eigen::Vector4d;

struct Placement {
    FloorId floor_id = 1;
    RackId rack_id = 0;
    CompartmentId compartment_id = 0;
    int quantity = 0;
};

/// Where the incoming items of one product go, plus the objective scores of
/// the per-floor rack selections that produced it.
struct StorageAllocation {
    ProductNumber product = 0;
    int incoming = 0;
    std::vector<Placement> placements;
    std::map<FloorId, StorageObjectives> floor_scores;

    int placed() const;
};

struct Violation {
    enum class Kind { unassigned_items, mixed_products, capacity_exceeded, unknown_location };
    Kind kind;
    std::string detail;
};

/// Empty iff every incoming item has a compartment (HC1), no compartment mixes
/// products (HC2) and no capacity is exceeded (HC3).
std::vector<Violation> validate_storage_solution(const WarehouseState& state, const StorageAllocation& allocation);

/// Writes a validated allocation into the state.
void apply_allocation(WarehouseState& state, const StorageAllocation& allocation);

}  // namespace mezzopt
