#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "mezzopt/storage/nsga2.hpp"

namespace mezzopt::storage {

struct AssignmentTask {
    ProductNumber product = 0;
    int quantity = 1;
};

enum class StoragePolicy { nsga2, random, closest_open, rank_based };

StoragePolicy parse_storage_policy(const std::string& name);
const char* to_string(StoragePolicy p);

struct AssignOptions {
    NsgaParams nsga = nsga_params_small();
    ScoreConfig score;
    /// Random allocations sampled per floor to form the random policy's front.
    int random_samples = 500;
    /// Seeds the floor split instead of the run seed, so that runs of
    /// different policies share one split.
    std::optional<std::uint64_t> split_seed;
};

/// Phase 1: items per floor so that every floor ends close to the same stock
/// of the product. Index 0 is floor 1.
std::vector<int> split_across_floors(const WarehouseState& state, const AssignmentTask& task, Rng& rng);

/// Phase 3: compartments for `count` items in one rack. Compartments already
/// holding the product are topped up first (ascending id), then free fitting
/// compartments by ascending zone penalty (ties: lowest id).
std::vector<Placement> assign_compartments(const WarehouseState& state, std::size_t rack_index,
                                           ProductNumber product, int count);

/// Placements for a whole per-floor rack selection.
std::vector<Placement> place_floor(const FloorProblem& problem, const Genes& genes);

struct FloorOutcome {
    FloorId floor = 1;
    int incoming = 0;
    std::vector<Individual> front;  // the policy's front on this floor
    Individual chosen;              // the selection that was placed
    int generations = 0;
};

struct AssignmentResult {
    StorageAllocation allocation;
    std::vector<FloorOutcome> floors;
};

/// Rack selection of a baseline policy on one floor.
Genes random_selection(const FloorProblem& problem, Rng& rng);
Genes closest_open_selection(const FloorProblem& problem);
Genes rank_based_selection(const FloorProblem& problem);

/// Full 3-phase pipeline for one task under one policy. Deterministic in `seed`.
AssignmentResult assign_product(const WarehouseState& state, const AssignmentTask& task, StoragePolicy policy,
                                const AssignOptions& options, std::uint64_t seed);

}  // namespace mezzopt::storage
