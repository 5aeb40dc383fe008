#include "mezzopt/storage/floor_problem.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <tuple>

namespace mezzopt::storage {

namespace {

long long grid_key(double v) { return std::llround(v * 1000.0); }

}  // namespace

FloorProblem::FloorProblem(const WarehouseState& state, ProductNumber product, FloorId floor, int incoming,
                           ScoreConfig config)
    : state_(&state),
      product_(&state.product(product)),
      floor_(floor),
      incoming_(incoming),
      tq_(mezzopt::target_quantity(*product_)),
      config_(config) {
    if (incoming < 0) throw UsageError("incoming quantity must be >= 0");
    if (config.areas < 0) throw UsageError("area count must be >= 0");

    const auto racks = state.racks_on_floor(floor);
    global_.assign(racks.begin(), racks.end());
    const int n = rack_count();
    capacity_.resize(static_cast<std::size_t>(n));
    existing_.resize(static_cast<std::size_t>(n));
    walk_.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const auto g = global_rack(i);
        capacity_[static_cast<std::size_t>(i)] = rack_remaining_capacity(state, g, *product_);
        existing_[static_cast<std::size_t>(i)] = state.quantity_in_rack(g, product);
        walk_[static_cast<std::size_t>(i)] = rack_walk_distance(state.rack(g), state.layout());
        if (capacity_[static_cast<std::size_t>(i)] > 0) fitting_.push_back(i);
    }
    floor_existing_ = std::accumulate(existing_.begin(), existing_.end(), 0);
    const int total_capacity = std::accumulate(capacity_.begin(), capacity_.end(), 0);
    if (incoming > total_capacity)
        throw InfeasibleTaskError("floor " + std::to_string(floor) + " cannot absorb " + std::to_string(incoming) +
                                  " items of product " + std::to_string(product));

    // Sub-aisles and bays.
    std::map<int, int> sa_index;
    for (int i = 0; i < n; ++i) sa_index.emplace(state.rack(global_rack(i)).sub_aisle_id, 0);
    int next = 0;
    for (auto& [id, idx] : sa_index) idx = next++;
    std::vector<std::map<int, Bay>> bays(sa_index.size());
    rack_sa_.resize(static_cast<std::size_t>(n));
    rack_bay_.resize(static_cast<std::size_t>(n));
    sa_racks_.resize(sa_index.size());
    for (int i = 0; i < n; ++i) {
        const auto& r = state.rack(global_rack(i));
        const int sa = sa_index.at(r.sub_aisle_id);
        rack_sa_[static_cast<std::size_t>(i)] = sa;
        sa_racks_[static_cast<std::size_t>(sa)].push_back(i);
        auto& bay = bays[static_cast<std::size_t>(sa)][r.bay_number];
        (r.side == Side::left ? bay.left : bay.right) = i;
    }
    sub_aisles_.resize(bays.size());
    for (std::size_t sa = 0; sa < bays.size(); ++sa) {
        int pos = 0;
        for (const auto& [number, bay] : bays[sa]) {
            sub_aisles_[sa].push_back(bay);
            if (bay.left >= 0) rack_bay_[static_cast<std::size_t>(bay.left)] = pos;
            if (bay.right >= 0) rack_bay_[static_cast<std::size_t>(bay.right)] = pos;
            ++pos;
        }
    }

    // Columns (same x and side, ordered by y) and rows (same y, ordered by x then side).
    up_.assign(static_cast<std::size_t>(n), -1);
    down_.assign(static_cast<std::size_t>(n), -1);
    left_.assign(static_cast<std::size_t>(n), -1);
    right_.assign(static_cast<std::size_t>(n), -1);
    std::map<std::pair<long long, int>, std::vector<std::pair<long long, int>>> columns;
    std::map<long long, std::vector<std::tuple<long long, int, int>>> rows;
    for (int i = 0; i < n; ++i) {
        const auto& r = state.rack(global_rack(i));
        const int side = r.side == Side::left ? 0 : 1;
        columns[{grid_key(r.access_point.x()), side}].push_back({grid_key(r.access_point.y()), i});
        rows[grid_key(r.access_point.y())].push_back({grid_key(r.access_point.x()), side, i});
    }
    for (auto& [key, col] : columns) {
        std::sort(col.begin(), col.end());
        for (std::size_t k = 0; k + 1 < col.size(); ++k) {
            up_[static_cast<std::size_t>(col[k].second)] = col[k + 1].second;
            down_[static_cast<std::size_t>(col[k + 1].second)] = col[k].second;
        }
    }
    for (auto& [key, row] : rows) {
        std::sort(row.begin(), row.end());
        for (std::size_t k = 0; k + 1 < row.size(); ++k) {
            right_[static_cast<std::size_t>(std::get<2>(row[k]))] = std::get<2>(row[k + 1]);
            left_[static_cast<std::size_t>(std::get<2>(row[k + 1]))] = std::get<2>(row[k]);
        }
    }

    // Areas.
    area_.resize(static_cast<std::size_t>(n));
    if (config.areas == 0) {
        std::map<int, int> blocks;
        for (int i = 0; i < n; ++i) blocks.emplace(state.rack(global_rack(i)).block_id, 0);
        int b = 0;
        for (auto& [id, idx] : blocks) idx = b++;
        for (int i = 0; i < n; ++i) area_[static_cast<std::size_t>(i)] = blocks.at(state.rack(global_rack(i)).block_id);
        area_count_ = std::max(1, b);
    } else {
        std::vector<int> order(static_cast<std::size_t>(n));
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
            const auto& ra = state.rack(global_rack(a));
            const auto& rb = state.rack(global_rack(b));
            return std::tuple(rack_sa_[static_cast<std::size_t>(a)], ra.side, ra.bay_number) <
                   std::tuple(rack_sa_[static_cast<std::size_t>(b)], rb.side, rb.bay_number);
        });
        area_count_ = config.areas;
        for (int k = 0; k < n; ++k)
            area_[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])] =
                static_cast<int>(static_cast<long long>(k) * config.areas / std::max(1, n));
    }
    area_existing_.assign(static_cast<std::size_t>(area_count_), 0);
    for (int i = 0; i < n; ++i) area_existing_[static_cast<std::size_t>(area_of(i))] += existing(i);

    // Distance ideal.
    if (n > 0) {
        std::vector<double> sorted = walk_;
        std::sort(sorted.begin(), sorted.end());
        const double rel = static_cast<double>(product_->rank) / static_cast<double>(state.products().size());
        const int idx = std::clamp(static_cast<int>(std::floor(rel * n)), 0, n - 1);
        ideal_distance_ = sorted[static_cast<std::size_t>(idx)];
    }

    // Correlated partners.
    for (const auto& rule : state.rules_for(product)) {
        CorrelationTerm term;
        term.confidence = rule.confidence;
        term.partner_tq = mezzopt::target_quantity(state.product(rule.rhs));
        for (int i = 0; i < n; ++i)
            if (const int q = state.quantity_in_rack(global_rack(i), rule.rhs); q > 0) term.stock.push_back({i, q});
        correlations_.push_back(std::move(term));
    }
}

double FloorProblem::distance_between(int a, int b) const {
    return manhattan_distance(state_->rack(global_rack(a)).access_point, state_->rack(global_rack(b)).access_point);
}

int FloorProblem::counterpart(int local, int other_sa) const {
    const auto& bays = sub_aisles_[static_cast<std::size_t>(other_sa)];
    const int pos = rack_bay_[static_cast<std::size_t>(local)];
    if (pos >= static_cast<int>(bays.size())) return -1;
    const bool left = state_->rack(global_rack(local)).side == Side::left;
    return left ? bays[static_cast<std::size_t>(pos)].left : bays[static_cast<std::size_t>(pos)].right;
}

int FloorProblem::neighbor(int local, Direction d) const {
    const auto i = static_cast<std::size_t>(local);
    switch (d) {
        case Direction::left: return left_[i];
        case Direction::right: return right_[i];
        case Direction::up: return up_[i];
        case Direction::down: return down_[i];
    }
    return -1;
}

Counts FloorProblem::counts(const Genes& genes) const {
    Counts c(static_cast<std::size_t>(rack_count()), 0);
    for (int g : genes) {
        if (g < 0 || g >= rack_count()) throw UsageError("gene references unknown rack");
        ++c[static_cast<std::size_t>(g)];
    }
    return c;
}

Genes FloorProblem::genes(const Counts& counts) const {
    Genes g;
    for (std::size_t i = 0; i < counts.size(); ++i) g.insert(g.end(), static_cast<std::size_t>(counts[i]), static_cast<int>(i));
    return g;
}

double FloorProblem::spread_score(const Counts& c) const {
    std::vector<int> totals = area_existing_;
    int incoming = 0;
    for (int i = 0; i < rack_count(); ++i) {
        totals[static_cast<std::size_t>(area_of(i))] += c[static_cast<std::size_t>(i)];
        incoming += c[static_cast<std::size_t>(i)];
    }
    const double ideal = static_cast<double>(floor_existing_ + incoming) / area_count_;
    double score = 0.0;
    for (int t : totals) score -= std::abs(ideal - t);
    return score;
}

double FloorProblem::distance_score(const Counts& c) const {
    double score = 0.0;
    for (int i = 0; i < rack_count(); ++i)
        if (c[static_cast<std::size_t>(i)] > 0)
            score -= c[static_cast<std::size_t>(i)] * std::abs(ideal_distance_ - walk_distance(i));
    return score;
}

int FloorProblem::window_bays(int sa) const {
    const auto b = static_cast<int>(sub_aisles_[static_cast<std::size_t>(sa)].size());
    return std::max(1, (b + 1) / 2);
}

std::vector<std::vector<int>> FloorProblem::bay_totals(const Counts& c) const {
    std::vector<std::vector<int>> out(sub_aisles_.size());
    const auto q = [&](int r) { return r < 0 ? 0 : existing(r) + c[static_cast<std::size_t>(r)]; };
    for (std::size_t sa = 0; sa < sub_aisles_.size(); ++sa) {
        out[sa].reserve(sub_aisles_[sa].size());
        for (const auto& bay : sub_aisles_[sa]) out[sa].push_back(q(bay.left) + q(bay.right));
    }
    return out;
}

double FloorProblem::quantity_score(const Counts& c) const {
    const auto bays = bay_totals(c);
    const auto& mods = config_.mask_mods;
    const auto factor = [&](int q) { return std::min(1.0, static_cast<double>(q) / tq_); };
    double score = 0.0;
    for (int sa = 0; sa < sub_aisle_count(); ++sa) {
        const auto& t = bays[static_cast<std::size_t>(sa)];
        int m1 = 0;
        for (int r : racks_in_sub_aisle(sa)) m1 = std::max(m1, existing(r) + c[static_cast<std::size_t>(r)]);
        const int m2 = t.empty() ? 0 : *std::max_element(t.begin(), t.end());
        const int w = window_bays(sa);
        int m3 = 0;
        int window = 0;
        for (std::size_t b = 0; b < t.size(); ++b) {
            window += t[b];
            if (b >= static_cast<std::size_t>(w)) window -= t[b - static_cast<std::size_t>(w)];
            m3 = std::max(m3, window);
        }
        const int m4 = std::accumulate(t.begin(), t.end(), 0);
        score += std::max({mods[0] * factor(m1), mods[1] * factor(m2), mods[2] * factor(m3), mods[3] * factor(m4)});
    }
    return score;
}

double FloorProblem::centered_mask_factor(int local, const Counts& c, const std::vector<std::vector<int>>& bays) const {
    const auto& mods = config_.mask_mods;
    const auto factor = [&](int q) { return std::min(1.0, static_cast<double>(q) / tq_); };
    const int sa = sub_aisle_of(local);
    const auto& t = bays[static_cast<std::size_t>(sa)];
    const int pos = rack_bay_[static_cast<std::size_t>(local)];
    const int nb = static_cast<int>(t.size());
    const int w = std::min(window_bays(sa), nb);
    const int start = std::clamp(pos - (w - 1) / 2, 0, nb - w);
    const int m1 = existing(local) + c[static_cast<std::size_t>(local)];
    const int m2 = t[static_cast<std::size_t>(pos)];
    const int m3 = std::accumulate(t.begin() + start, t.begin() + start + w, 0);
    const int m4 = std::accumulate(t.begin(), t.end(), 0);
    return std::max({mods[0] * factor(m1), mods[1] * factor(m2), mods[2] * factor(m3), mods[3] * factor(m4)});
}

double FloorProblem::correlation_score(const Counts& c) const {
    if (correlations_.empty()) return 0.0;
    const auto bays = bay_totals(c);
    int total = floor_existing_;
    for (int v : c) total += v;
    const int clusters = total / tq_;
    double score = 0.0;
    for (const auto& term : correlations_) {
        const double ideal = std::ceil(clusters * term.partner_tq * term.confidence - 1e-9);
        double found = 0.0;
        for (const auto& [rack, q] : term.stock) found += q * centered_mask_factor(rack, c, bays);
        score -= std::max(0.0, ideal - found);
    }
    return score;
}

StorageObjectives FloorProblem::evaluate(const Counts& c) const {
    if (static_cast<int>(c.size()) != rack_count()) throw UsageError("count vector does not match floor");
    return {spread_score(c), distance_score(c), quantity_score(c), correlation_score(c)};
}

}  // namespace mezzopt::storage
