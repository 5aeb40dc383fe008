#include "mezzopt/storage/operators.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace mezzopt::storage {

namespace {

int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

template <typename T>
const T& pick(const std::vector<T>& v, Rng& rng) {
    return v[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(v.size()) - 1))];
}

int spare(const Counts& c, const FloorProblem& p, int rack) { return p.capacity(rack) - c[static_cast<std::size_t>(rack)]; }

// Local racks of one sub-aisle that accept the product.
std::vector<int> fitting_in(const FloorProblem& p, int sa) {
    std::vector<int> out;
    for (int r : p.racks_in_sub_aisle(sa))
        if (p.fitting(r)) out.push_back(r);
    return out;
}

std::vector<int> occupied(const Counts& c) {
    std::vector<int> out;
    for (std::size_t i = 0; i < c.size(); ++i)
        if (c[i] > 0) out.push_back(static_cast<int>(i));
    return out;
}

Genes finish(Counts c, const FloorProblem& p, Rng& rng) {
    repair_counts(c, p, rng);
    return p.genes(c);
}

Genes fill_rack(const Genes& genes, const FloorProblem& p, Rng& rng) {
    Counts c = p.counts(genes);
    const int sa = p.sub_aisle_of(genes[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(genes.size()) - 1))]);
    std::vector<int> targets;
    for (int r : fitting_in(p, sa))
        if (spare(c, p, r) > 0) targets.push_back(r);
    if (targets.empty()) return genes;
    const int target = pick(targets, rng);
    std::vector<int> donors;
    for (int r : p.racks_in_sub_aisle(sa))
        for (int k = 0; r != target && k < c[static_cast<std::size_t>(r)]; ++k) donors.push_back(r);
    std::shuffle(donors.begin(), donors.end(), rng);
    for (int r : donors) {
        if (spare(c, p, target) <= 0) break;
        --c[static_cast<std::size_t>(r)];
        ++c[static_cast<std::size_t>(target)];
    }
    return finish(std::move(c), p, rng);
}

Genes move_rack(const Genes& genes, const FloorProblem& p, Rng& rng) {
    Counts c = p.counts(genes);
    const int source = pick(genes, rng);
    std::vector<int> targets;
    for (int r : fitting_in(p, p.sub_aisle_of(source)))
        if (r != source) targets.push_back(r);
    if (targets.empty()) return genes;
    const int target = pick(targets, rng);
    c[static_cast<std::size_t>(target)] += c[static_cast<std::size_t>(source)];
    c[static_cast<std::size_t>(source)] = 0;
    return finish(std::move(c), p, rng);
}

Genes fill_sub_aisle(const Genes& genes, const FloorProblem& p, Rng& rng) {
    Counts c = p.counts(genes);
    std::vector<int> candidates;
    for (int sa = 0; sa < p.sub_aisle_count(); ++sa)
        if (!fitting_in(p, sa).empty()) candidates.push_back(sa);
    if (candidates.empty()) return genes;
    const int sa = pick(candidates, rng);
    int have = 0;
    for (int r : p.racks_in_sub_aisle(sa)) have += p.existing(r) + c[static_cast<std::size_t>(r)];
    std::vector<int> donors;
    for (int g : genes)
        if (p.sub_aisle_of(g) != sa) donors.push_back(g);
    std::shuffle(donors.begin(), donors.end(), rng);
    const auto targets = fitting_in(p, sa);
    for (int donor : donors) {
        if (have >= p.target_quantity()) break;
        // Prefer the rack that already holds most of the product.
        int best = -1;
        int best_q = -1;
        for (int r : targets) {
            if (spare(c, p, r) <= 0) continue;
            const int q = p.existing(r) + c[static_cast<std::size_t>(r)];
            if (q > best_q) {
                best = r;
                best_q = q;
            }
        }
        if (best < 0) break;
        --c[static_cast<std::size_t>(donor)];
        ++c[static_cast<std::size_t>(best)];
        ++have;
    }
    return finish(std::move(c), p, rng);
}

Genes clear_sub_aisle(const Genes& genes, const FloorProblem& p, Rng& rng) {
    Counts c = p.counts(genes);
    const int sa = p.sub_aisle_of(pick(genes, rng));
    std::vector<int> targets;
    for (int r : p.fitting_racks())
        if (p.sub_aisle_of(r) != sa) targets.push_back(r);
    if (targets.empty()) return genes;
    for (int r : p.racks_in_sub_aisle(sa)) {
        for (; c[static_cast<std::size_t>(r)] > 0; --c[static_cast<std::size_t>(r)]) ++c[static_cast<std::size_t>(pick(targets, rng))];
    }
    return finish(std::move(c), p, rng);
}

Genes redistribute_exceeding(const Genes& genes, const FloorProblem& p, Rng& rng) {
    Counts c = p.counts(genes);
    const int tq = p.target_quantity();
    const auto total = [&](int r) { return p.existing(r) + c[static_cast<std::size_t>(r)]; };
    std::vector<int> receivers;
    for (int r : p.fitting_racks())
        if (total(r) > 0 && total(r) < tq) receivers.push_back(r);
    if (receivers.empty()) return genes;
    std::stable_sort(receivers.begin(), receivers.end(), [&](int a, int b) { return tq - total(a) < tq - total(b); });
    bool moved = false;
    for (int donor : occupied(c)) {
        int movable = std::min(c[static_cast<std::size_t>(donor)], total(donor) - tq);
        for (int r : receivers) {
            while (movable > 0 && total(r) < tq && spare(c, p, r) > 0) {
                --c[static_cast<std::size_t>(donor)];
                ++c[static_cast<std::size_t>(r)];
                --movable;
                moved = true;
            }
        }
    }
    if (!moved) return genes;
    return finish(std::move(c), p, rng);
}

Genes swap_sub_aisles(const Genes& genes, const FloorProblem& p, Rng& rng) {
    std::vector<int> sas;
    for (int sa = 0; sa < p.sub_aisle_count(); ++sa)
        if (!fitting_in(p, sa).empty()) sas.push_back(sa);
    if (sas.size() < 2) return genes;
    std::shuffle(sas.begin(), sas.end(), rng);
    const Counts before = p.counts(genes);
    Counts c = before;
    std::bernoulli_distribution coin(0.5);
    const auto move_all = [&](int from, int to) {
        const auto targets = fitting_in(p, to);
        for (int r : p.racks_in_sub_aisle(from)) {
            const int q = before[static_cast<std::size_t>(r)];
            if (q == 0) continue;
            c[static_cast<std::size_t>(r)] -= q;
            int dest = p.counterpart(r, to);
            if (dest < 0 || !p.fitting(dest)) dest = pick(targets, rng);
            c[static_cast<std::size_t>(dest)] += q;
        }
    };
    for (std::size_t k = 0; k + 1 < sas.size(); k += 2) {
        if (!coin(rng)) continue;
        move_all(sas[k], sas[k + 1]);
        move_all(sas[k + 1], sas[k]);
    }
    return finish(std::move(c), p, rng);
}

Genes swap_racks(const Genes& genes, const FloorProblem& p, Rng& rng) {
    std::vector<int> racks(p.fitting_racks().begin(), p.fitting_racks().end());
    if (racks.size() < 2) return genes;
    std::shuffle(racks.begin(), racks.end(), rng);
    Counts c = p.counts(genes);
    std::bernoulli_distribution coin(0.5);
    for (std::size_t k = 0; k + 1 < racks.size(); k += 2)
        if (coin(rng)) std::swap(c[static_cast<std::size_t>(racks[k])], c[static_cast<std::size_t>(racks[k + 1])]);
    return finish(std::move(c), p, rng);
}

}  // namespace

const char* to_string(Mutator m) {
    switch (m) {
        case Mutator::fill_rack: return "FillRack";
        case Mutator::move_rack: return "MoveRack";
        case Mutator::fill_sub_aisle: return "FillSubAisle";
        case Mutator::clear_sub_aisle: return "ClearSubAisle";
        case Mutator::redistribute_exceeding: return "RedistributeExceedingQuantities";
        case Mutator::shift_racks: return "ShiftRacks";
        case Mutator::swap_sub_aisles: return "SwapSubAisles";
        case Mutator::swap_racks: return "SwapRacks";
    }
    return "?";
}

void repair_counts(Counts& c, const FloorProblem& p, Rng& rng) {
    const int n = p.rack_count();
    for (int r = 0; r < n; ++r) {
        int excess = c[static_cast<std::size_t>(r)] - p.capacity(r);
        while (excess > 0) {
            double best = std::numeric_limits<double>::infinity();
            std::vector<int> nearest;
            for (int t : p.fitting_racks()) {
                if (t == r || spare(c, p, t) <= 0) continue;
                const double d = p.distance_between(r, t);
                if (d < best - 1e-9) {
                    best = d;
                    nearest.assign(1, t);
                } else if (d <= best + 1e-9) {
                    nearest.push_back(t);
                }
            }
            if (nearest.empty()) throw InfeasibleTaskError("floor capacity insufficient for incoming items");
            const int t = pick(nearest, rng);
            const int moved = std::min(excess, spare(c, p, t));
            c[static_cast<std::size_t>(t)] += moved;
            c[static_cast<std::size_t>(r)] -= moved;
            excess -= moved;
        }
    }
}

Genes repair(Genes genes, const FloorProblem& p, Rng& rng) {
    Counts c = p.counts(genes);
    repair_counts(c, p, rng);
    return p.genes(c);
}

Genes random_chromosome(const FloorProblem& p, Rng& rng) {
    if (p.incoming() == 0) return {};
    std::vector<int> fitting(p.fitting_racks().begin(), p.fitting_racks().end());
    if (fitting.empty()) throw InfeasibleTaskError("no fitting rack on floor");
    Genes g(static_cast<std::size_t>(p.incoming()));
    for (auto& x : g) x = pick(fitting, rng);
    return repair(std::move(g), p, rng);
}

std::pair<Genes, Genes> crossover_at(const Genes& a, const Genes& b, std::size_t cut) {
    if (a.size() != b.size()) throw UsageError("crossover: parents differ in length");
    if (cut == 0 || cut >= a.size()) throw UsageError("crossover: cut outside [1, len-1]");
    Genes c1(a.begin(), a.begin() + static_cast<long>(cut));
    Genes c2(b.begin(), b.begin() + static_cast<long>(cut));
    c1.insert(c1.end(), b.begin() + static_cast<long>(cut), b.end());
    c2.insert(c2.end(), a.begin() + static_cast<long>(cut), a.end());
    return {std::move(c1), std::move(c2)};
}

std::pair<Genes, Genes> single_point_crossover(const Genes& a, const Genes& b, const FloorProblem& p, Rng& rng) {
    if (a.size() < 2) return {a, b};
    const auto cut = static_cast<std::size_t>(uniform_int(rng, 1, static_cast<int>(a.size()) - 1));
    auto [c1, c2] = crossover_at(a, b, cut);
    return {repair(std::move(c1), p, rng), repair(std::move(c2), p, rng)};
}

Genes shift_racks(const Genes& genes, Direction d, const FloorProblem& p, Rng& rng) {
    const Counts before = p.counts(genes);
    Counts c(before.size(), 0);
    for (int r : occupied(before)) {
        int target = p.neighbor(r, d);
        while (target >= 0 && !p.fitting(target)) target = p.neighbor(target, d);
        c[static_cast<std::size_t>(target >= 0 ? target : r)] += before[static_cast<std::size_t>(r)];
    }
    return finish(std::move(c), p, rng);
}

Genes apply_mutator(Mutator m, const Genes& genes, const FloorProblem& p, Rng& rng) {
    if (genes.empty()) return genes;
    switch (m) {
        case Mutator::fill_rack: return fill_rack(genes, p, rng);
        case Mutator::move_rack: return move_rack(genes, p, rng);
        case Mutator::fill_sub_aisle: return fill_sub_aisle(genes, p, rng);
        case Mutator::clear_sub_aisle: return clear_sub_aisle(genes, p, rng);
        case Mutator::redistribute_exceeding: return redistribute_exceeding(genes, p, rng);
        case Mutator::shift_racks: return shift_racks(genes, static_cast<Direction>(uniform_int(rng, 0, 3)), p, rng);
        case Mutator::swap_sub_aisles: return swap_sub_aisles(genes, p, rng);
        case Mutator::swap_racks: return swap_racks(genes, p, rng);
    }
    return genes;
}

Genes mutate(const Genes& genes, const FloorProblem& p, double probability, Rng& rng) {
    if (probability <= 0.0 || !std::bernoulli_distribution(probability)(rng)) return genes;
    return apply_mutator(static_cast<Mutator>(uniform_int(rng, 0, kMutatorCount - 1)), genes, p, rng);
}

std::size_t tournament_select(const std::vector<int>& rank, const std::vector<double>& crowding, Rng& rng) {
    if (rank.empty() || rank.size() != crowding.size()) throw UsageError("tournament: empty or inconsistent population");
    const int n = static_cast<int>(rank.size());
    const auto a = static_cast<std::size_t>(uniform_int(rng, 0, n - 1));
    const auto b = static_cast<std::size_t>(uniform_int(rng, 0, n - 1));
    if (rank[a] != rank[b]) return rank[a] < rank[b] ? a : b;
    if (crowding[a] != crowding[b]) return crowding[a] > crowding[b] ? a : b;
    return std::bernoulli_distribution(0.5)(rng) ? a : b;
}

}  // namespace mezzopt::storage
