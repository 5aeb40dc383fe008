#include <doctest.h>

#include <algorithm>
#include <array>
#include <map>
#include <set>

#include "fixtures.hpp"
#include "mezzopt/gen/generator.hpp"
#include "mezzopt/validation.hpp"

using namespace mezzopt;
using namespace mezzopt::gen;

TEST_CASE("layout geometry") {
    const auto spec = gen_spec_for("small");
    Rng rng(1);
    const auto shell = generate_layout(spec.layout, rng);
    const auto& l = spec.layout;
    CHECK(shell.racks.size() == static_cast<std::size_t>(l.floors * (l.cross_aisles - 1) * l.lanes * l.aisles_per_lane * 2 * l.bays));
    std::set<double> narrow;
    for (const auto& a : shell.layout.pick_aisles)
        if (a.kind == AisleKind::narrow) narrow.insert(a.x);
    CHECK(narrow.size() == static_cast<std::size_t>(l.lanes * l.aisles_per_lane));
    std::map<int, std::vector<int>> config_by_id;
    for (const auto& r : shell.racks) {
        CHECK(narrow.contains(r.access_point.x()));
        CHECK(r.access_point.y() > 0.0);
        CHECK(r.access_point.y() < shell.layout.height);
        for (double y : shell.layout.cross_aisle_rows) CHECK(r.access_point.y() != y);
        config_by_id[r.rack_id].push_back(r.configuration_id);
    }
    // every floor uses the same configuration at the same position
    for (const auto& [id, cfgs] : config_by_id) {
        CHECK(cfgs.size() == static_cast<std::size_t>(l.floors));
        CHECK(std::all_of(cfgs.begin(), cfgs.end(), [&](int c) { return c == cfgs.front(); }));
    }
    CHECK(shell.layout.lane_boundaries().size() == static_cast<std::size_t>(l.lanes + 1));
}

TEST_CASE("every item box fits every compartment") {
    for (const auto& cfg : standard_configurations())
        for (const auto& c : cfg.compartments)
            for (const auto& box : item_boxes()) CHECK(compartment_capacity(c, {1, box, 1.0, 1, {1, 1}}) >= 1);
    std::vector<std::size_t> sizes;
    for (const auto& cfg : standard_configurations()) sizes.push_back(cfg.compartments.size());
    CHECK(sizes == std::vector<std::size_t>{6, 12, 24});
}

TEST_CASE("assortment sizes and ranks") {
    for (auto [size, n] : std::array<std::pair<const char*, int>, 3>{{{"small", 500}, {"medium", 1000}, {"large", 1500}}}) {
        const auto spec = gen_spec_for(size);
        Rng rng(2);
        const auto products = generate_products(spec, rng);
        CHECK(static_cast<int>(products.size()) == n);
        std::vector<int> ranks;
        for (const auto& p : products) {
            ranks.push_back(p.rank);
            CHECK(p.weight >= spec.min_weight);
            CHECK(p.order_frequency.mean >= spec.mu_min);
            CHECK(p.order_frequency.mean <= spec.mu_max);
            CHECK(p.order_frequency.stddev >= spec.sigma_min);
            CHECK(p.order_frequency.stddev <= spec.sigma_max);
            CHECK(target_quantity(p) >= 2);
            CHECK(target_quantity(p) <= 9);
        }
        std::sort(ranks.begin(), ranks.end());
        for (int i = 0; i < n; ++i) CHECK(ranks[static_cast<std::size_t>(i)] == i + 1);
    }
    CHECK_THROWS_AS(gen_spec_for("huge"), ConfigurationError);
}

TEST_CASE("weight mixture proportions") {
    const auto spec = gen_spec_for("small");
    Rng rng(3);
    const int n = 100000;
    std::array<int, 3> counts{};
    for (int i = 0; i < n; ++i) {
        int k = -1;
        const double w = draw_weight(spec.weight_mixture, spec.min_weight, rng, &k);
        CHECK(w >= spec.min_weight);
        ++counts[static_cast<std::size_t>(k)];
    }
    CHECK(std::abs(counts[0] / double(n) - 0.25) <= 0.01);
    CHECK(std::abs(counts[1] / double(n) - 0.50) <= 0.01);
    CHECK(std::abs(counts[2] / double(n) - 0.25) <= 0.01);
}

TEST_CASE("correlation rules") {
    auto spec = gen_spec_for("small");
    spec.assortment_size = 100000;
    Rng rng(4);
    const auto products = generate_products(spec, rng);
    const auto rules = generate_correlations(products, spec, rng);
    std::map<ProductNumber, std::set<ProductNumber>> partners;
    for (const auto& r : rules) {
        CHECK(r.lhs != r.rhs);
        CHECK(r.confidence >= 0.1);
        CHECK(r.confidence <= 0.9);
        CHECK(partners[r.lhs].insert(r.rhs).second);
    }
    std::array<int, 4> counts{};
    counts[0] = spec.assortment_size - static_cast<int>(partners.size());
    for (const auto& [p, s] : partners) ++counts[s.size()];
    const std::array<double, 4> expected{0.30, 0.40, 0.20, 0.10};
    for (std::size_t k = 0; k < 4; ++k) CHECK(std::abs(counts[k] / double(spec.assortment_size) - expected[k]) <= 0.01);
}

TEST_CASE("orders") {
    const auto spec = gen_spec_for("small");
    Rng rng(5);
    const auto products = generate_products(spec, rng);
    const auto orders = generate_orders(products, spec, rng);
    REQUIRE(orders.size() == 100);
    for (const auto& o : orders) {
        CHECK(o.lines.size() == 20);
        std::set<ProductNumber> seen;
        for (const auto& line : o.lines) {
            CHECK(line.quantity >= 1);
            CHECK(seen.insert(line.product).second);
        }
    }

    auto big = spec;
    big.orders = 5000;
    const auto corpus = generate_orders(products, big, rng);
    std::map<ProductNumber, int> rank_of;
    for (const auto& p : products) rank_of[p.number] = p.rank;
    std::array<int, 4> quartile{};
    std::map<int, int> by_rank;
    int lines = 0;
    for (const auto& o : corpus)
        for (const auto& line : o.lines) {
            ++quartile[static_cast<std::size_t>(rank_quartile(rank_of[line.product], 500))];
            ++by_rank[rank_of[line.product]];
            ++lines;
        }
    REQUIRE(lines == 100000);
    const std::array<double, 4> expected{0.40, 0.30, 0.20, 0.10};
    for (std::size_t k = 0; k < 4; ++k) CHECK(std::abs(quartile[k] / double(lines) - expected[k]) <= 0.02);
    // rank 1 is drawn more often than any product outside the top quartile
    int best_outside = 0;
    for (const auto& [rank, count] : by_rank)
        if (rank_quartile(rank, 500) > 0) best_outside = std::max(best_outside, count);
    CHECK(by_rank[1] > best_outside);

    CHECK(rank_quartile(1, 500) == 0);
    CHECK(rank_quartile(125, 500) == 0);
    CHECK(rank_quartile(126, 500) == 1);
    CHECK(rank_quartile(500, 500) == 3);
}

TEST_CASE("random fill reaches the band and stays valid") {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const auto spec = gen_spec_for("small");
        const auto inst = generate_instance(spec, seed);
        const double ratio = inst.state.volume_fill_ratio();
        CHECK(ratio >= 0.50);
        CHECK(ratio <= 0.55);
        // rebuilding from the assignment list re-runs every hard-constraint check
        CHECK_NOTHROW(WarehouseState(inst.state.layout(), inst.state.floor_count(),
                                     {inst.state.configurations().begin(), inst.state.configurations().end()},
                                     {inst.state.racks().begin(), inst.state.racks().end()},
                                     {inst.state.products().begin(), inst.state.products().end()},
                                     {inst.state.rules().begin(), inst.state.rules().end()}, inst.state.assignments()));
    }
}

TEST_CASE("compartment fill mode") {
    auto spec = gen_spec_for("small");
    spec.fill_mode = FillMode::compartments;
    auto state = generate_empty_warehouse(spec, 6);
    fill_warehouse(state, spec, 7, {});
    CHECK(state.compartment_fill_ratio() >= 0.50);
    CHECK(state.compartment_fill_ratio() <= 0.55);
}

TEST_CASE("NSGA-II fill lands in the same band with a different placement") {
    auto spec = gen_spec_for("small");
    spec.layout = {1, 2, 2, 3, 4, {1.0, 1.0, 1.0}};
    spec.assortment_size = 60;
    auto random_state = generate_empty_warehouse(spec, 8);
    auto nsga_state = random_state;
    fill_warehouse(random_state, spec, 9, {});
    FillOptions nsga;
    nsga.policy = storage::StoragePolicy::nsga2;
    nsga.assign.nsga.max_generations = 30;
    fill_warehouse(nsga_state, spec, 9, nsga);
    for (const auto* s : {&random_state, &nsga_state}) {
        CHECK(s->volume_fill_ratio() >= 0.50);
        CHECK(s->volume_fill_ratio() <= 0.55);
    }
    const auto a = random_state.assignments();
    const auto b = nsga_state.assignments();
    bool differ = a.size() != b.size();
    for (std::size_t i = 0; !differ && i < a.size(); ++i)
        differ = a[i].rack_id != b[i].rack_id || a[i].compartment_id != b[i].compartment_id || a[i].product != b[i].product;
    CHECK(differ);
}

TEST_CASE("fill errors") {
    auto spec = gen_spec_for("small");
    spec.layout = {1, 1, 1, 2, 3, {1.0, 1.0, 1.0}};
    spec.assortment_size = 10;
    spec.order_lines = 5;
    spec.fill_fraction = 1.0;
    auto state = generate_empty_warehouse(spec, 1);
    CHECK_THROWS_AS(fill_warehouse(state, spec, 1, {}), ConfigurationError);
    spec.fill_fraction = 0.0;
    CHECK_THROWS_AS(spec.validate(), ConfigurationError);
    spec.fill_fraction = 0.5;
    spec.partner_distribution = {0.5, 0.4};
    CHECK_THROWS_AS(spec.validate(), ConfigurationError);
}

TEST_CASE("generation is reproducible") {
    const auto spec = gen_spec_for("small");
    const auto a = generate_instance(spec, 11);
    const auto b = generate_instance(spec, 11);
    const auto aa = a.state.assignments();
    const auto ba = b.state.assignments();
    REQUIRE(aa.size() == ba.size());
    for (std::size_t i = 0; i < aa.size(); ++i) {
        CHECK(aa[i].rack_id == ba[i].rack_id);
        CHECK(aa[i].compartment_id == ba[i].compartment_id);
        CHECK(aa[i].quantity == ba[i].quantity);
    }
    REQUIRE(a.orders.size() == b.orders.size());
    for (std::size_t i = 0; i < a.orders.size(); ++i)
        for (std::size_t j = 0; j < a.orders[i].lines.size(); ++j) {
            CHECK(a.orders[i].lines[j].product == b.orders[i].lines[j].product);
            CHECK(a.orders[i].lines[j].quantity == b.orders[i].lines[j].quantity);
        }
    const auto c = generate_instance(spec, 12);
    CHECK(c.state.assignments().size() != aa.size());
}
