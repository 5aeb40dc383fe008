#include "mezzopt/pick/aco.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "mezzopt/random.hpp"

namespace mezzopt::pick {

AcoVariant parse_aco_variant(const std::string& name) {
    if (name == "aco3") return AcoVariant::aco3;
    if (name == "aco4") return AcoVariant::aco4;
    throw UsageError("unknown ACO variant '" + name + "'");
}

const char* to_string(AcoVariant v) { return v == AcoVariant::aco3 ? "aco3" : "aco4"; }

void AcoParams::validate() const {
    if (!(rho > 0.0 && rho < 1.0)) throw ConfigurationError("rho must lie in (0,1)");
    if (!(tau_min > 0.0 && tau_min < tau_max)) throw ConfigurationError("need 0 < tau_min < tau_max");
    if (alpha < 0.0 || beta < 0.0) throw ConfigurationError("alpha and beta must be >= 0");
    if (floor_penalty < 0.0) throw ConfigurationError("floor penalty must be >= 0");
    if (allowed_weight_difference < 0.0) throw ConfigurationError("allowed weight difference must be >= 0");
    if (max_cataclysms < 1 || max_cons_iter_wo_impr < 1 || max_iter < 1)
        throw ConfigurationError("ACO counters must be >= 1");
}

double heuristic_value(double distance, double availability) {
    if (!(distance > 0.0)) throw UsageError("heuristic needs a positive distance");
    return availability / distance;
}

std::vector<double> transition_probabilities(const PickProblem& problem, int current, const std::vector<char>& visited,
                                             const std::vector<int>& need, const Pheromones& tau, const AcoParams& params) {
    const auto& graph = problem.graph();
    const int n = graph.size();
    std::vector<double> p(static_cast<std::size_t>(n), 0.0);
    double sum = 0.0;
    int open = 0;
    for (int m = 0; m < n; ++m) {
        if (visited[static_cast<std::size_t>(m)]) continue;
        ++open;
        const double eta = heuristic_value(graph.distance(current, m), problem.availability(m, need));
        const double v = std::pow(tau(current, m), params.alpha) * std::pow(eta, params.beta);
        p[static_cast<std::size_t>(m)] = v;
        sum += v;
    }
    if (open == 0) throw UsageError("no unvisited market left");
    for (int m = 0; m < n; ++m) {
        if (visited[static_cast<std::size_t>(m)]) continue;
        p[static_cast<std::size_t>(m)] = sum > 0.0 ? p[static_cast<std::size_t>(m)] / sum : 1.0 / open;
    }
    return p;
}

namespace {

int roulette(const std::vector<double>& p, Rng& rng) {
    const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    double acc = 0.0;
    int last = -1;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] <= 0.0) continue;
        acc += p[i];
        last = static_cast<int>(i);
        if (u < acc) return last;
    }
    return last;
}

bool done(const std::vector<int>& need) {
    return std::all_of(need.begin(), need.end(), [](int q) { return q == 0; });
}

void clamp(Pheromones& tau, const AcoParams& params) { tau = tau.cwiseMax(params.tau_min).cwiseMin(params.tau_max); }

}  // namespace

PickRoute construct_pick_route(const PickProblem& problem, int start, const std::vector<Pheromones>& tau,
                               const AcoParams& params, Rng& rng, const ProbabilityObserver& observer) {
    const auto& graph = problem.graph();
    if (start < 0 || start >= graph.size()) throw UsageError("start market out of range");
    std::vector<char> visited(static_cast<std::size_t>(graph.size()), 0);
    std::vector<int> need = problem.initial_need();
    std::vector<int> sequence{start};
    visited[static_cast<std::size_t>(start)] = 1;
    {
        std::vector<RackVisit> scratch;
        problem.collect(start, 0, need, scratch);
    }
    int current = start;
    while (!done(need)) {
        const auto& matrix = tau.size() > 1 ? tau[static_cast<std::size_t>(std::uniform_int_distribution<int>(0, 1)(rng))]
                                            : tau.front();
        const auto p = transition_probabilities(problem, current, visited, need, matrix, params);
        if (observer) observer(p);
        current = roulette(p, rng);
        visited[static_cast<std::size_t>(current)] = 1;
        sequence.push_back(current);
        std::vector<RackVisit> scratch;
        problem.collect(current, 0, need, scratch);
    }
    return problem.route_along(sequence);
}

std::vector<std::pair<int, int>> route_edges(const PickRoute& route) {
    std::vector<std::pair<int, int>> out;
    for (std::size_t i = 0; i + 1 < route.markets.size(); ++i) out.push_back({route.markets[i].market, route.markets[i + 1].market});
    return out;
}

void reward_front(Pheromones& tau, const std::vector<PickRoute>& front, const AcoParams& params) {
    std::set<std::pair<int, int>> edges;
    for (const auto& r : front)
        for (const auto& e : route_edges(r)) edges.insert(e);
    tau *= (1.0 - params.rho);
    for (const auto& [a, b] : edges) tau(a, b) += 1.0;
    clamp(tau, params);
}

void pheromone_update_aco3(Pheromones& tau, const std::vector<PickRoute>& iteration_front,
                           const std::vector<PickRoute>& global_front, const AcoParams& params, Rng& rng) {
    const bool iteration = std::bernoulli_distribution(0.9)(rng) || global_front.empty();
    reward_front(tau, iteration ? iteration_front : global_front, params);
}

void pheromone_update_aco4(std::vector<Pheromones>& tau, const std::vector<const PickRoute*>& iteration_best,
                           const std::vector<const PickRoute*>& global_best, const AcoParams& params) {
    if (tau.size() != 2 || iteration_best.size() != 2 || global_best.size() != 2)
        throw UsageError("ACO4 update needs two matrices and two best routes per kind");
    for (int i = 0; i < 2; ++i) {
        auto& t = tau[static_cast<std::size_t>(i)];
        t *= (1.0 - params.rho);
        const auto* ib = iteration_best[static_cast<std::size_t>(i)];
        const auto* gb = global_best[static_cast<std::size_t>(i)];
        if (ib && gb) {
            const double delta = 1.0 / (1.0 + ib->objectives()(i) - gb->objectives()(i));
            for (const auto& [a, b] : route_edges(*ib)) t(a, b) += delta;
        }
        clamp(t, params);
    }
}

bool better_for_objective(const PickRoute& a, const PickRoute& b, int objective) {
    const auto oa = a.objectives();
    const auto ob = b.objectives();
    const int other = 1 - objective;
    if (oa(objective) != ob(objective)) return oa(objective) < ob(objective);
    if (oa(other) != ob(other)) return oa(other) < ob(other);
    if (a.markets.size() != b.markets.size()) return a.markets.size() < b.markets.size();
    return a.market_sequence() < b.market_sequence();
}

const PickRoute* best_for_objective(const std::vector<PickRoute>& routes, int objective) {
    const PickRoute* best = nullptr;
    for (const auto& r : routes)
        if (!best || better_for_objective(r, *best, objective)) best = &r;
    return best;
}

bool front_improved(const std::vector<PickRoute>& current, const std::vector<PickRoute>& next) {
    for (const auto& n : next) {
        bool covered = false;
        for (const auto& c : current) {
            if (c.distance <= n.distance + 1e-9 && c.weight_violations <= n.weight_violations) {
                covered = true;
                break;
            }
        }
        if (!covered) return true;
    }
    return false;
}

AcoResult aco_optimize(const PickProblem& problem, const AcoParams& params, std::uint64_t seed, const AcoObserver& observer) {
    params.validate();
    AcoResult result;
    if (done(problem.initial_need())) {
        result.front.push_back(problem.route_along({}));
        return result;
    }
    const auto& graph = problem.graph();
    const int n = graph.size();
    const std::size_t matrices = params.variant == AcoVariant::aco4 ? 2 : 1;
    std::vector<Pheromones> tau(matrices, Pheromones::Constant(n, n, params.tau_max));

    std::vector<PickRoute> global;
    std::vector<PickRoute> archive;
    PickRoute best[2];
    bool have_best = false;
    int cons = 0;
    int iter = 0;
    int cataclysms = 0;
    while (cataclysms < params.max_cataclysms && iter < params.max_iter) {
        ++iter;
        std::vector<PickRoute> routes;
        routes.reserve(static_cast<std::size_t>(2 * n));
        for (int ant = 0; ant < n; ++ant) {
            Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(iter), static_cast<std::uint64_t>(ant)}));
            auto r = construct_pick_route(problem, ant, tau, params, rng, observer.on_probabilities);
            auto rev = reverse_route(problem, r);
            routes.push_back(std::move(r));
            routes.push_back(std::move(rev));
        }
        const auto iteration_front = pareto_routes(routes);
        std::vector<PickRoute> merged = iteration_front;
        merged.insert(merged.end(), global.begin(), global.end());
        auto next = pareto_routes(std::move(merged));

        if (params.variant == AcoVariant::aco3) {
            Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(iter), 1u << 20}));
            pheromone_update_aco3(tau.front(), iteration_front, next, params, rng);
        } else {
            const PickRoute* ib[2] = {best_for_objective(routes, 0), best_for_objective(routes, 1)};
            for (int i = 0; i < 2; ++i)
                if (!have_best || better_for_objective(*ib[i], best[i], i)) best[i] = *ib[i];
            have_best = true;
            pheromone_update_aco4(tau, {ib[0], ib[1]}, {&best[0], &best[1]}, params);
        }

        bool cataclysm = false;
        if (global.empty() || front_improved(global, next)) {
            global = std::move(next);
            cons = 0;
        } else if (++cons >= params.max_cons_iter_wo_impr) {
            archive.insert(archive.end(), global.begin(), global.end());
            for (const auto& r : global)
                for (const auto& [a, b] : route_edges(r))
                    for (auto& t : tau) t(a, b) = params.tau_min;
            global.clear();
            have_best = false;
            ++cataclysms;
            cons = 0;
            cataclysm = true;
        }
        if (observer.on_iteration) observer.on_iteration({iter, cataclysms, &tau, &global, cataclysm});
    }
    archive.insert(archive.end(), global.begin(), global.end());
    result.front = pareto_routes(std::move(archive));
    result.iterations = iter;
    result.cataclysms = cataclysms;
    return result;
}

std::vector<int> serpentine_order(const MarketGraph& graph) {
    std::vector<int> out;
    int lane_counter = 0;
    for (FloorId f = 1; f <= graph.state().floor_count(); ++f) {
        for (int l = 0; l < graph.lane_count(); ++l, ++lane_counter) {
            for (int k = 0; k < graph.cross_aisle_count(); ++k) {
                const int c = lane_counter % 2 == 0 ? k : graph.cross_aisle_count() - 1 - k;
                out.push_back(graph.index_of(f, c, l));
            }
        }
    }
    return out;
}

std::vector<PickRoute> s_shape_routes(const PickProblem& problem) {
    const auto order = serpentine_order(problem.graph());
    std::vector<PickRoute> routes;
    if (done(problem.initial_need())) return {problem.route_along({})};
    for (std::size_t s = 0; s < order.size(); ++s) {
        std::vector<int> seq(order.begin() + static_cast<long>(s), order.end());
        seq.insert(seq.end(), order.begin(), order.begin() + static_cast<long>(s));
        auto r = problem.route_along(seq);
        auto rev = reverse_route(problem, r);
        routes.push_back(std::move(r));
        routes.push_back(std::move(rev));
    }
    return pareto_routes(std::move(routes));
}

}  // namespace mezzopt::pick
