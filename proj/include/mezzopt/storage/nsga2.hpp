#pragma once

#include <functional>

#include "mezzopt/moo/pareto.hpp"
#include "mezzopt/storage/operators.hpp"

namespace mezzopt::storage {

struct NsgaParams {
    int population = 50;
    double mutation_probability = 0.95;
    int window = 10;            // L
    double delta_limit = 0.01;  // std threshold on the last L max crowding distances
    int max_generations = 200;

    void validate() const;
};

/// Default parameter sets per warehouse size.
NsgaParams nsga_params_small();
NsgaParams nsga_params_medium();
NsgaParams nsga_params_large();

struct Individual {
    Genes genes;
    StorageObjectives scores = StorageObjectives::Zero();
};

struct NsgaResult {
    std::vector<Individual> front;  // rank 1, one entry per objective vector
    int generations = 0;
};

/// Called once per generation with the parent population after selection.
using GenerationObserver = std::function<void(int generation, const std::vector<Individual>& parents)>;

/// All four storage objectives are maximized.
const moo::Orientation& storage_orientation();

Eigen::MatrixXd objective_matrix(const std::vector<Individual>& individuals);

/// NSGA-II over the rack selections of one floor.
NsgaResult nsga2_assign(const FloorProblem& problem, const NsgaParams& params, Rng& rng,
                        const GenerationObserver& observer = {});

/// Index of the solution closest to the per-objective maxima after min-max
/// normalization over the front; ties go to the lexicographically smallest genes.
std::size_t select_tradeoff(const std::vector<Individual>& front);

/// Unique objective vectors of the non-dominated members, each represented
/// by its lexicographically smallest gene sequence, ordered by genes.
std::vector<Individual> pareto_filter(std::vector<Individual> individuals);

}  // namespace mezzopt::storage
