#pragma once

#include <random>
#include <utility>

#include "mezzopt/storage/floor_problem.hpp"

namespace mezzopt::storage {

using Rng = std::mt19937_64;

enum class Mutator {
    fill_rack,
    move_rack,
    fill_sub_aisle,
    clear_sub_aisle,
    redistribute_exceeding,
    shift_racks,
    swap_sub_aisles,
    swap_racks,
};

inline constexpr int kMutatorCount = 8;

const char* to_string(Mutator m);

/// Moves items of over-full racks to the nearest rack with spare capacity
/// (random choice among equally near ones) until no rack exceeds its
/// capacity. Returns sorted genes.
Genes repair(Genes genes, const FloorProblem& problem, Rng& rng);
void repair_counts(Counts& counts, const FloorProblem& problem, Rng& rng);

/// Random fitting rack per item, repaired.
Genes random_chromosome(const FloorProblem& problem, Rng& rng);

/// Cut point uniform in [1, len-1]; children repaired. Shorter than two genes
/// returns the parents.
std::pair<Genes, Genes> single_point_crossover(const Genes& a, const Genes& b, const FloorProblem& problem, Rng& rng);
/// Same with a given cut point, without repair.
std::pair<Genes, Genes> crossover_at(const Genes& a, const Genes& b, std::size_t cut);

/// Applies one mutator and repairs. Inapplicable mutators leave the genes unchanged.
Genes apply_mutator(Mutator m, const Genes& genes, const FloorProblem& problem, Rng& rng);
Genes shift_racks(const Genes& genes, Direction d, const FloorProblem& problem, Rng& rng);

/// With `probability`, applies a uniformly chosen mutator.
Genes mutate(const Genes& genes, const FloorProblem& problem, double probability, Rng& rng);

/// Binary tournament on (rank ascending, crowding distance descending), coin on ties.
std::size_t tournament_select(const std::vector<int>& rank, const std::vector<double>& crowding, Rng& rng);

}  // namespace mezzopt::storage
