#pragma once

#include <array>
#include <span>
#include <vector>

#include "mezzopt/validation.hpp"
#include "mezzopt/warehouse.hpp"

namespace mezzopt::storage {

/// Chromosome genes: one local rack index per incoming item, ascending.
using Genes = std::vector<int>;
/// Incoming items per local rack.
using Counts = std::vector<int>;

struct ScoreConfig {
    int areas = 0;  // 0 means one area per block
    std::array<double, 4> mask_mods{1.0, 0.75, 0.5, 0.25};
};

enum class Direction { left, right, up, down };

/// Rack selection for one product on one floor. Racks are addressed by local
/// index 0..rack_count()-1 in the order of WarehouseState::racks_on_floor.
class FloorProblem {
public:
    FloorProblem(const WarehouseState& state, ProductNumber product, FloorId floor, int incoming,
                 ScoreConfig config = {});

    const WarehouseState& state() const { return *state_; }
    const Product& product() const { return *product_; }
    FloorId floor() const { return floor_; }
    int incoming() const { return incoming_; }
    int target_quantity() const { return tq_; }
    const ScoreConfig& config() const { return config_; }

    int rack_count() const { return static_cast<int>(global_.size()); }
    std::size_t global_rack(int local) const { return global_[static_cast<std::size_t>(local)]; }
    /// Remaining capacity of the rack for the product.
    int capacity(int local) const { return capacity_[static_cast<std::size_t>(local)]; }
    bool fitting(int local) const { return capacity(local) > 0; }
    std::span<const int> fitting_racks() const { return fitting_; }
    /// Existing stock of the product in the rack.
    int existing(int local) const { return existing_[static_cast<std::size_t>(local)]; }
    double walk_distance(int local) const { return walk_[static_cast<std::size_t>(local)]; }
    double distance_between(int a, int b) const;

    int sub_aisle_count() const { return static_cast<int>(sub_aisles_.size()); }
    int sub_aisle_of(int local) const { return rack_sa_[static_cast<std::size_t>(local)]; }
    std::span<const int> racks_in_sub_aisle(int sa) const { return sa_racks_[static_cast<std::size_t>(sa)]; }
    /// Rack at the same bay position and side in another sub-aisle, or -1.
    int counterpart(int local, int other_sa) const;
    /// Next rack in a direction: up/down along the rack's column, left/right
    /// along its row. -1 at the edge.
    int neighbor(int local, Direction d) const;

    int area_count() const { return area_count_; }
    int area_of(int local) const { return area_[static_cast<std::size_t>(local)]; }
    /// Walking distance the product's relative rank maps to.
    double ideal_distance() const { return ideal_distance_; }

    Counts counts(const Genes& genes) const;
    Genes genes(const Counts& counts) const;

    double spread_score(const Counts& c) const;
    double distance_score(const Counts& c) const;
    double quantity_score(const Counts& c) const;
    double correlation_score(const Counts& c) const;
    StorageObjectives evaluate(const Counts& c) const;
    StorageObjectives evaluate_genes(const Genes& g) const { return evaluate(counts(g)); }

private:
    struct Bay {
        int left = -1;
        int right = -1;
    };
    struct CorrelationTerm {
        double confidence = 0.0;
        int partner_tq = 1;
        std::vector<std::pair<int, int>> stock;  // (local rack, quantity of partner)
    };

    // Per sub-aisle bay sums of existing + incoming stock.
    std::vector<std::vector<int>> bay_totals(const Counts& c) const;
    // max over masks of maskMod * min(1, q / tq) for a mask placed around `local`.
    double centered_mask_factor(int local, const Counts& c, const std::vector<std::vector<int>>& bays) const;
    int window_bays(int sa) const;

    const WarehouseState* state_;
    const Product* product_;
    FloorId floor_;
    int incoming_;
    int tq_;
    ScoreConfig config_;

    std::vector<std::size_t> global_;
    std::vector<int> capacity_;
    std::vector<int> existing_;
    std::vector<double> walk_;
    std::vector<int> fitting_;

    std::vector<std::vector<Bay>> sub_aisles_;
    std::vector<std::vector<int>> sa_racks_;
    std::vector<int> rack_sa_;
    std::vector<int> rack_bay_;
    std::vector<int> up_, down_, left_, right_;

    int area_count_ = 1;
    std::vector<int> area_;
    std::vector<int> area_existing_;
    int floor_existing_ = 0;
    double ideal_distance_ = 0.0;
    std::vector<CorrelationTerm> correlations_;
};

}  // namespace mezzopt::storage
