#include "mezzopt/validation.hpp"

#include <map>
#include <numeric>

namespace mezzopt {

int StorageAllocation::placed() const {
    return std::accumulate(placements.begin(), placements.end(), 0,
                           [](int acc, const Placement& p) { return acc + p.quantity; });
}

std::vector<Violation> validate_storage_solution(const WarehouseState& state, const StorageAllocation& allocation) {
    std::vector<Violation> out;
    if (!state.has_product(allocation.product)) {
        out.push_back({Violation::Kind::unknown_location, "unknown product"});
        return out;
    }
    const auto& product = state.product(allocation.product);

    std::map<std::pair<std::size_t, std::size_t>, int> per_slot;
    int placed = 0;
    for (const auto& p : allocation.placements) {
        if (p.quantity < 1) {
            out.push_back({Violation::Kind::unassigned_items, "placement with non-positive quantity"});
            continue;
        }
        try {
            const auto r = state.rack_index(p.floor_id, p.rack_id);
            const auto c = state.compartment_index(r, p.compartment_id);
            per_slot[{r, c}] += p.quantity;
            placed += p.quantity;
        } catch (const ConfigurationError& e) {
            out.push_back({Violation::Kind::unknown_location, e.what()});
        }
    }
    if (placed != allocation.incoming)
        out.push_back({Violation::Kind::unassigned_items,
                       std::to_string(allocation.incoming - placed) + " item(s) without compartment"});

    for (const auto& [key, qty] : per_slot) {
        const SlotIndex s{key.first, key.second};
        const auto& slot = state.slot(s);
        const auto& rack = state.rack(s.rack);
        const std::string where = "floor " + std::to_string(rack.floor_id) + " rack " +
                                  std::to_string(rack.rack_id) + " compartment " +
                                  std::to_string(state.compartment(s).compartment_id);
        if (!slot.empty() && slot.product != allocation.product) {
            out.push_back({Violation::Kind::mixed_products, where + " holds product " + std::to_string(slot.product)});
            continue;
        }
        if (qty > remaining_capacity(state, s, product))
            out.push_back({Violation::Kind::capacity_exceeded, where});
    }
    return out;
}

void apply_allocation(WarehouseState& state, const StorageAllocation& allocation) {
    if (const auto v = validate_storage_solution(state, allocation); !v.empty())
        throw InfeasibleTaskError("allocation violates hard constraints: " + v.front().detail);
    for (const auto& p : allocation.placements) {
        const auto r = state.rack_index(p.floor_id, p.rack_id);
        state.store({r, state.compartment_index(r, p.compartment_id)}, allocation.product, p.quantity);
    }
}

}  // namespace mezzopt
