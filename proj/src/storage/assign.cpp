#include "mezzopt/storage/assign.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "mezzopt/classify.hpp"
#include "mezzopt/random.hpp"

namespace mezzopt::storage {

StoragePolicy parse_storage_policy(const std::string& name) {
    if (name == "nsga2") return StoragePolicy::nsga2;
    if (name == "random") return StoragePolicy::random;
    if (name == "closest") return StoragePolicy::closest_open;
    if (name == "rank") return StoragePolicy::rank_based;
    throw UsageError("unknown storage policy '" + name + "'");
}

const char* to_string(StoragePolicy p) {
    switch (p) {
        case StoragePolicy::nsga2: return "nsga2";
        case StoragePolicy::random: return "random";
        case StoragePolicy::closest_open: return "closest";
        case StoragePolicy::rank_based: return "rank";
    }
    return "?";
}

std::vector<int> split_across_floors(const WarehouseState& state, const AssignmentTask& task, Rng& rng) {
    if (task.quantity < 1) throw UsageError("task quantity must be >= 1");
    const auto& product = state.product(task.product);
    const int floors = state.floor_count();
    std::vector<int> total(static_cast<std::size_t>(floors));
    std::vector<int> room(static_cast<std::size_t>(floors), 0);
    for (int f = 1; f <= floors; ++f) {
        total[static_cast<std::size_t>(f - 1)] = state.quantity_on_floor(task.product, f);
        for (auto r : state.racks_on_floor(f)) room[static_cast<std::size_t>(f - 1)] += rack_remaining_capacity(state, r, product);
    }
    if (std::accumulate(room.begin(), room.end(), 0) < task.quantity)
        throw InfeasibleTaskError("warehouse cannot absorb " + std::to_string(task.quantity) + " items of product " +
                                  std::to_string(task.product));

    // Level the floors one item at a time; equal floors draw a random one.
    std::vector<int> out(static_cast<std::size_t>(floors), 0);
    for (int item = 0; item < task.quantity; ++item) {
        int lowest = std::numeric_limits<int>::max();
        std::vector<int> candidates;
        for (int f = 0; f < floors; ++f) {
            const auto i = static_cast<std::size_t>(f);
            if (out[i] >= room[i]) continue;
            if (total[i] < lowest) {
                lowest = total[i];
                candidates.assign(1, f);
            } else if (total[i] == lowest) {
                candidates.push_back(f);
            }
        }
        const int f = candidates[static_cast<std::size_t>(
            std::uniform_int_distribution<int>(0, static_cast<int>(candidates.size()) - 1)(rng))];
        ++out[static_cast<std::size_t>(f)];
        ++total[static_cast<std::size_t>(f)];
    }
    return out;
}

std::vector<Placement> assign_compartments(const WarehouseState& state, std::size_t rack_index, ProductNumber product,
                                           int count) {
    const auto& prod = state.product(product);
    const auto& rack = state.rack(rack_index);
    const auto& comps = state.configuration_of(rack_index).compartments;
    const auto slots = state.slots_of(rack_index);
    const auto weight = weight_class(prod);
    const auto movement = movement_class(prod, state.products().size());

    std::vector<std::size_t> same, free;
    for (std::size_t c = 0; c < comps.size(); ++c) {
        if (remaining_capacity(state, {rack_index, c}, prod) <= 0) continue;
        (slots[c].empty() ? free : same).push_back(c);
    }
    const auto by_id = [&](std::size_t a, std::size_t b) { return comps[a].compartment_id < comps[b].compartment_id; };
    std::sort(same.begin(), same.end(), by_id);
    std::sort(free.begin(), free.end(), [&](std::size_t a, std::size_t b) {
        const int pa = weight_penalty(zone_of(comps[a]), weight) + rank_penalty(zone_of(comps[a]), movement);
        const int pb = weight_penalty(zone_of(comps[b]), weight) + rank_penalty(zone_of(comps[b]), movement);
        return pa != pb ? pa < pb : by_id(a, b);
    });

    std::vector<Placement> out;
    int left = count;
    for (const auto* list : {&same, &free}) {
        for (auto c : *list) {
            if (left == 0) break;
            const int q = std::min(left, remaining_capacity(state, {rack_index, c}, prod));
            out.push_back({rack.floor_id, rack.rack_id, comps[c].compartment_id, q});
            left -= q;
        }
    }
    if (left > 0) throw InfeasibleTaskError("rack " + std::to_string(rack.rack_id) + " cannot absorb its items");
    return out;
}

std::vector<Placement> place_floor(const FloorProblem& problem, const Genes& genes) {
    std::vector<Placement> out;
    const auto c = problem.counts(genes);
    for (int r = 0; r < problem.rack_count(); ++r) {
        if (c[static_cast<std::size_t>(r)] == 0) continue;
        auto p = assign_compartments(problem.state(), problem.global_rack(r), problem.product().number,
                                     c[static_cast<std::size_t>(r)]);
        out.insert(out.end(), p.begin(), p.end());
    }
    return out;
}

Genes random_selection(const FloorProblem& problem, Rng& rng) {
    Counts c(static_cast<std::size_t>(problem.rack_count()), 0);
    int left = problem.incoming();
    std::vector<int> open(problem.fitting_racks().begin(), problem.fitting_racks().end());
    while (left > 0) {
        int cluster = std::min(left, problem.target_quantity());
        left -= cluster;
        while (cluster > 0) {
            if (open.empty()) throw InfeasibleTaskError("no rack with spare capacity left");
            const auto k = static_cast<std::size_t>(std::uniform_int_distribution<int>(0, static_cast<int>(open.size()) - 1)(rng));
            const int r = open[k];
            const int q = std::min(cluster, problem.capacity(r) - c[static_cast<std::size_t>(r)]);
            c[static_cast<std::size_t>(r)] += q;
            cluster -= q;
            if (c[static_cast<std::size_t>(r)] >= problem.capacity(r)) open.erase(open.begin() + static_cast<long>(k));
        }
    }
    return problem.genes(c);
}

namespace {

std::vector<int> racks_by_distance(const FloorProblem& problem) {
    std::vector<int> order(problem.fitting_racks().begin(), problem.fitting_racks().end());
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return problem.walk_distance(a) < problem.walk_distance(b); });
    return order;
}

Genes first_fit(const FloorProblem& problem, const std::vector<int>& order, std::size_t start) {
    Counts c(static_cast<std::size_t>(problem.rack_count()), 0);
    int left = problem.incoming();
    for (std::size_t k = 0; k < order.size() && left > 0; ++k) {
        const int r = order[(start + k) % order.size()];
        const int q = std::min(left, problem.capacity(r));
        c[static_cast<std::size_t>(r)] += q;
        left -= q;
    }
    if (left > 0) throw InfeasibleTaskError("floor cannot absorb its items");
    return problem.genes(c);
}

}  // namespace

Genes closest_open_selection(const FloorProblem& problem) { return first_fit(problem, racks_by_distance(problem), 0); }

Genes rank_based_selection(const FloorProblem& problem) {
    const auto order = racks_by_distance(problem);
    if (order.empty()) return first_fit(problem, order, 0);
    const double rel = static_cast<double>(problem.product().rank) /
                       static_cast<double>(problem.state().products().size());
    const int n = static_cast<int>(order.size());
    const auto start = static_cast<std::size_t>(std::clamp(static_cast<int>(std::floor(rel * n)), 0, n - 1));
    return first_fit(problem, order, start);
}

AssignmentResult assign_product(const WarehouseState& state, const AssignmentTask& task, StoragePolicy policy,
                                const AssignOptions& options, std::uint64_t seed) {
    Rng split_rng(options.split_seed ? *options.split_seed : derive_seed(seed, {0}));
    const auto per_floor = split_across_floors(state, task, split_rng);

    AssignmentResult result;
    result.allocation.product = task.product;
    result.allocation.incoming = task.quantity;
    for (int f = 1; f <= state.floor_count(); ++f) {
        const int incoming = per_floor[static_cast<std::size_t>(f - 1)];
        if (incoming == 0) continue;
        const FloorProblem problem(state, task.product, f, incoming, options.score);
        Rng rng(derive_seed(seed, {1, static_cast<std::uint64_t>(f)}));
        FloorOutcome outcome;
        outcome.floor = f;
        outcome.incoming = incoming;
        const auto scored = [&](Genes g) { return Individual{g, problem.evaluate_genes(g)}; };
        switch (policy) {
            case StoragePolicy::nsga2: {
                auto run = nsga2_assign(problem, options.nsga, rng);
                outcome.generations = run.generations;
                outcome.front = std::move(run.front);
                outcome.chosen = outcome.front[select_tradeoff(outcome.front)];
                break;
            }
            case StoragePolicy::random: {
                std::vector<Individual> samples;
                const int n = std::max(1, options.random_samples);
                for (int s = 0; s < n; ++s) samples.push_back(scored(random_selection(problem, rng)));
                outcome.chosen = samples.front();
                outcome.front = pareto_filter(std::move(samples));
                break;
            }
            case StoragePolicy::closest_open:
                outcome.chosen = scored(closest_open_selection(problem));
                outcome.front = {outcome.chosen};
                break;
            case StoragePolicy::rank_based:
                outcome.chosen = scored(rank_based_selection(problem));
                outcome.front = {outcome.chosen};
                break;
        }
        auto placements = place_floor(problem, outcome.chosen.genes);
        result.allocation.placements.insert(result.allocation.placements.end(), placements.begin(), placements.end());
        result.allocation.floor_scores[f] = outcome.chosen.scores;
        result.floors.push_back(std::move(outcome));
    }
    return result;
}

}  // namespace mezzopt::storage
