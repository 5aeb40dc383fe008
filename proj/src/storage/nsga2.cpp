#include "mezzopt/storage/nsga2.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>

namespace mezzopt::storage {

void NsgaParams::validate() const {
    if (population < 2 || population % 2 != 0) throw ConfigurationError("population size must be even and >= 2");
    if (mutation_probability < 0.0 || mutation_probability > 1.0)
        throw ConfigurationError("mutation probability outside [0,1]");
    if (window < 2) throw ConfigurationError("crowding-distance window L must be >= 2");
    if (delta_limit < 0.0) throw ConfigurationError("delta limit must be >= 0");
    if (max_generations < 0) throw ConfigurationError("max generations must be >= 0");
}

NsgaParams nsga_params_small() { return {50, 0.95, 10, 0.01, 200}; }
NsgaParams nsga_params_medium() { return {60, 0.95, 10, 0.01, 250}; }
NsgaParams nsga_params_large() { return {70, 0.95, 10, 0.01, 300}; }

const moo::Orientation& storage_orientation() {
    static const moo::Orientation o = moo::maximize_all(4);
    return o;
}

Eigen::MatrixXd objective_matrix(const std::vector<Individual>& individuals) {
    Eigen::MatrixXd m(static_cast<Eigen::Index>(individuals.size()), 4);
    for (std::size_t i = 0; i < individuals.size(); ++i) m.row(static_cast<Eigen::Index>(i)) = individuals[i].scores.transpose();
    return m;
}

namespace {

struct Ranked {
    std::vector<int> rank;
    std::vector<double> crowding;
    std::vector<moo::IndexList> fronts;
};

Ranked rank_population(const std::vector<Individual>& pop) {
    const auto objectives = objective_matrix(pop);
    auto sorted = moo::nondominated_sort(objectives, storage_orientation());
    Ranked r;
    r.rank = std::move(sorted.rank);
    r.crowding.assign(pop.size(), 0.0);
    for (const auto& front : sorted.fronts) {
        const auto cd = moo::crowding_distance(moo::select_rows(objectives, front));
        for (std::size_t k = 0; k < front.size(); ++k)
            r.crowding[static_cast<std::size_t>(front[k])] = cd(static_cast<Eigen::Index>(k));
    }
    r.fronts = std::move(sorted.fronts);
    return r;
}

double max_finite(const std::vector<double>& crowding, const moo::IndexList& front) {
    double best = 0.0;
    for (auto i : front)
        if (std::isfinite(crowding[static_cast<std::size_t>(i)])) best = std::max(best, crowding[static_cast<std::size_t>(i)]);
    return best;
}

double population_std(const std::deque<double>& values) {
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
    double sq = 0.0;
    for (double v : values) sq += (v - mean) * (v - mean);
    return std::sqrt(sq / static_cast<double>(values.size()));
}

std::vector<Individual> survivors(std::vector<Individual> merged, std::size_t keep) {
    const auto r = rank_population(merged);
    std::vector<std::size_t> order(merged.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (r.rank[a] != r.rank[b]) return r.rank[a] < r.rank[b];
        return r.crowding[a] > r.crowding[b];
    });
    std::vector<Individual> out;
    out.reserve(keep);
    for (std::size_t k = 0; k < keep && k < order.size(); ++k) out.push_back(std::move(merged[order[k]]));
    return out;
}

}  // namespace

std::vector<Individual> pareto_filter(std::vector<Individual> individuals) {
    if (individuals.empty()) return individuals;
    std::sort(individuals.begin(), individuals.end(), [](const Individual& a, const Individual& b) { return a.genes < b.genes; });
    const auto objectives = objective_matrix(individuals);
    const auto nd = moo::nondominated_indices(objectives, storage_orientation());
    std::vector<Individual> out;
    for (auto i : nd) {
        const auto& cand = individuals[static_cast<std::size_t>(i)];
        const bool seen = std::any_of(out.begin(), out.end(), [&](const Individual& o) {
            return moo::nearly_equal(o.scores, cand.scores, 0.0);
        });
        if (!seen) out.push_back(cand);
    }
    return out;
}

NsgaResult nsga2_assign(const FloorProblem& problem, const NsgaParams& params, Rng& rng,
                        const GenerationObserver& observer) {
    params.validate();
    NsgaResult result;
    if (problem.incoming() == 0) return result;

    const auto size = static_cast<std::size_t>(params.population);
    std::vector<Individual> pop;
    pop.reserve(size);
    for (std::size_t i = 0; i < size; ++i) {
        Individual ind{random_chromosome(problem, rng), {}};
        ind.scores = problem.evaluate_genes(ind.genes);
        pop.push_back(std::move(ind));
    }

    std::deque<double> history;
    int gen = 0;
    while (true) {
        const auto ranked = rank_population(pop);
        history.push_back(max_finite(ranked.crowding, ranked.fronts.front()));
        if (history.size() > static_cast<std::size_t>(params.window)) history.pop_front();
        if (gen >= params.max_generations) break;
        if (history.size() == static_cast<std::size_t>(params.window) && population_std(history) <= params.delta_limit)
            break;

        std::vector<Individual> merged = pop;
        merged.reserve(2 * size);
        while (merged.size() < 2 * size) {
            const auto& a = pop[tournament_select(ranked.rank, ranked.crowding, rng)];
            const auto& b = pop[tournament_select(ranked.rank, ranked.crowding, rng)];
            auto [c1, c2] = single_point_crossover(a.genes, b.genes, problem, rng);
            for (auto* child : {&c1, &c2}) {
                if (merged.size() >= 2 * size) break;
                Individual ind{mutate(*child, problem, params.mutation_probability, rng), {}};
                ind.scores = problem.evaluate_genes(ind.genes);
                merged.push_back(std::move(ind));
            }
        }
        pop = survivors(std::move(merged), size);
        ++gen;
        if (observer) observer(gen, pop);
    }

    result.generations = gen;
    result.front = pareto_filter(std::move(pop));
    return result;
}

std::size_t select_tradeoff(const std::vector<Individual>& front) {
    if (front.empty()) throw UsageError("select_tradeoff: empty front");
    const auto m = objective_matrix(front);
    const Eigen::RowVectorXd lo = m.colwise().minCoeff();
    const Eigen::RowVectorXd hi = m.colwise().maxCoeff();
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < front.size(); ++i) {
        double sq = 0.0;
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            const double span = hi(j) - lo(j);
            const double norm = span > 0.0 ? (m(static_cast<Eigen::Index>(i), j) - lo(j)) / span : 1.0;
            sq += (1.0 - norm) * (1.0 - norm);
        }
        const double d = std::sqrt(sq);
        if (d < best_d - 1e-12 || (d <= best_d + 1e-12 && front[i].genes < front[best].genes)) {
            best = i;
            best_d = std::min(best_d, d);
        }
    }
    return best;
}

}  // namespace mezzopt::storage
