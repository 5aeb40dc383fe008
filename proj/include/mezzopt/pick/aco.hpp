#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "mezzopt/pick/route.hpp"

namespace mezzopt::pick {

using Rng = std::mt19937_64;

enum class AcoVariant { aco3, aco4 };

AcoVariant parse_aco_variant(const std::string& name);
const char* to_string(AcoVariant v);

struct AcoParams {
    double alpha = 1.0;
    double beta = 2.0;
    double rho = 0.02;
    double tau_min = 1.0;
    double tau_max = 25.0;
    double floor_penalty = 50.0;
    double allowed_weight_difference = 3.0;
    int max_cataclysms = 3;
    int max_cons_iter_wo_impr = 20;
    int max_iter = 250;
    AcoVariant variant = AcoVariant::aco3;

    void validate() const;
};

/// One value per directed market edge.
using Pheromones = Eigen::MatrixXd;

/// eta = availability / distance.
double heuristic_value(double distance, double availability);

/// Probability of moving from `current` to every market; zero for visited
/// markets. Falls back to uniform over the unvisited markets when every
/// numerator vanishes.
std::vector<double> transition_probabilities(const PickProblem& problem, int current, const std::vector<char>& visited,
                                             const std::vector<int>& need, const Pheromones& tau, const AcoParams& params);

/// Probability vectors seen while constructing routes; for instrumentation.
using ProbabilityObserver = std::function<void(const std::vector<double>&)>;

/// One ant's walk from `start`. ACO4 draws the pheromone matrix per step.
PickRoute construct_pick_route(const PickProblem& problem, int start, const std::vector<Pheromones>& tau,
                               const AcoParams& params, Rng& rng, const ProbabilityObserver& observer = {});

/// Market-to-market edges of a route.
std::vector<std::pair<int, int>> route_edges(const PickRoute& route);

/// Evaporate all edges, add 1 to edges on any route of the rewarded front
/// (iteration-best with probability 0.9, else global-best), clamp.
void pheromone_update_aco3(Pheromones& tau, const std::vector<PickRoute>& iteration_front,
                           const std::vector<PickRoute>& global_front, const AcoParams& params, Rng& rng);
/// Same with an explicit reward front.
void reward_front(Pheromones& tau, const std::vector<PickRoute>& front, const AcoParams& params);

/// Matrix i evaporates and the edges of the iteration-best route for
/// objective i gain 1 / (1 + of_i(ib) - of_i(gb)); clamp.
void pheromone_update_aco4(std::vector<Pheromones>& tau, const std::vector<const PickRoute*>& iteration_best,
                           const std::vector<const PickRoute*>& global_best, const AcoParams& params);

/// Best route for objective i (0 = distance, 1 = violations); ties by the
/// other objective, then fewer markets, then market sequence.
const PickRoute* best_for_objective(const std::vector<PickRoute>& routes, int objective);
bool better_for_objective(const PickRoute& a, const PickRoute& b, int objective);

/// True when `next` holds an objective vector not weakly dominated by `current`.
bool front_improved(const std::vector<PickRoute>& current, const std::vector<PickRoute>& next);

struct AcoIteration {
    int iteration = 0;
    int cataclysms = 0;
    const std::vector<Pheromones>* pheromones = nullptr;
    const std::vector<PickRoute>* global_best = nullptr;
    bool cataclysm = false;
};

struct AcoObserver {
    ProbabilityObserver on_probabilities;
    std::function<void(const AcoIteration&)> on_iteration;
};

struct AcoResult {
    std::vector<PickRoute> front;
    int iterations = 0;
    int cataclysms = 0;
};

AcoResult aco_optimize(const PickProblem& problem, const AcoParams& params, std::uint64_t seed,
                       const AcoObserver& observer = {});

/// Serpentine order over all markets: floors ascending, lanes left to right,
/// cross aisles alternating direction per lane.
std::vector<int> serpentine_order(const MarketGraph& graph);

/// Modified S-shape: every market as start of the serpentine walk plus the
/// reversed routes, Pareto-filtered.
std::vector<PickRoute> s_shape_routes(const PickProblem& problem);

}  // namespace mezzopt::pick
