#include "mezzopt/gen/generator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "mezzopt/random.hpp"
#include "mezzopt/validation.hpp"

namespace mezzopt::gen {

namespace {

void check_distribution(const std::vector<double>& p, const char* what) {
    if (p.empty()) throw ConfigurationError(std::string(what) + " is empty");
    double sum = 0.0;
    for (double v : p) {
        if (v < 0.0) throw ConfigurationError(std::string(what) + " has a negative probability");
        sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-6) throw ConfigurationError(std::string(what) + " does not sum to 1");
}

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

int categorical(const std::vector<double>& weights, Rng& rng) {
    return std::discrete_distribution<int>(weights.begin(), weights.end())(rng);
}

RackConfiguration grid_configuration(int id, int levels, int per_shelf) {
    constexpr double width = 1.0, height = 2.0, depth = 0.5;
    RackConfiguration cfg{id, levels, per_shelf, {}};
    const double h = height / levels;
    const double w = width / per_shelf;
    int cid = 1;
    for (int level = 0; level < levels; ++level)
        for (int pos = 0; pos < per_shelf; ++pos) cfg.compartments.push_back({cid++, {w, h, depth}, level, pos, level * h});
    return cfg;
}

}  // namespace

void GenSpec::validate() const {
    if (layout.floors < 1 || layout.lanes < 1 || layout.aisles_per_lane < 1 || layout.bays < 1)
        throw ConfigurationError("layout counts must be >= 1");
    if (layout.cross_aisles < 2) throw ConfigurationError("layout needs at least two cross aisles");
    if (layout.configuration_mix.size() != 3) throw ConfigurationError("configuration mix needs three weights");
    if (std::accumulate(layout.configuration_mix.begin(), layout.configuration_mix.end(), 0.0) <= 0.0)
        throw ConfigurationError("configuration mix has no positive weight");
    if (assortment_size < 4) throw ConfigurationError("assortment needs at least four products");
    std::vector<double> mix;
    for (const auto& c : weight_mixture) {
        if (c.stddev < 0.0) throw ConfigurationError("weight mixture stddev must be >= 0");
        mix.push_back(c.probability);
    }
    check_distribution(mix, "weight mixture");
    check_distribution(partner_distribution, "partner distribution");
    check_distribution(quartile_weights, "quartile weights");
    if (quartile_weights.size() != 4) throw ConfigurationError("quartile weights need four entries");
    if (min_weight <= 0.0) throw ConfigurationError("minimum weight must be positive");
    if (mu_min <= 0.0 || mu_max < mu_min || sigma_min < 0.0 || sigma_max < sigma_min)
        throw ConfigurationError("order-frequency ranges are invalid");
    if (confidence_min < 0.0 || confidence_max > 1.0 || confidence_max < confidence_min)
        throw ConfigurationError("confidence range must lie in [0,1]");
    if (!(fill_fraction > 0.0 && fill_fraction <= 1.0)) throw ConfigurationError("fill fraction outside (0,1]");
    if (orders < 0 || order_lines < 1) throw ConfigurationError("order counts are invalid");
    if (order_lines > assortment_size) throw ConfigurationError("order lines exceed assortment size");
    if (static_cast<int>(partner_distribution.size()) > assortment_size)
        throw ConfigurationError("more correlation partners than products");
}

GenSpec gen_spec_for(const std::string& size) {
    GenSpec spec;
    spec.size = size;
    if (size == "small") {
        spec.layout = {2, 2, 2, 3, 8, {1.0, 1.0, 1.0}};
        spec.assortment_size = 500;
    } else if (size == "medium") {
        spec.layout = {2, 3, 2, 3, 10, {1.0, 1.0, 1.0}};
        spec.assortment_size = 1000;
    } else if (size == "large") {
        spec.layout = {3, 3, 2, 4, 12, {1.0, 1.0, 1.0}};
        spec.assortment_size = 1500;
    } else {
        throw ConfigurationError("unknown warehouse size '" + size + "'");
    }
    return spec;
}

const std::vector<Dimensions>& item_boxes() {
    static const std::vector<Dimensions> boxes{
        {0.25, 0.30, 0.25}, {0.25, 0.30, 0.50}, {0.25, 0.15, 0.25}, {0.20, 0.30, 0.40}};
    return boxes;
}

std::vector<RackConfiguration> standard_configurations() {
    return {grid_configuration(1, 3, 2), grid_configuration(2, 6, 2), grid_configuration(3, 6, 4)};
}

Shell generate_layout(const LayoutSpec& spec, Rng& rng) {
    Shell shell;
    shell.floors = spec.floors;
    shell.configurations = standard_configurations();
    const int a = spec.aisles_per_lane;
    const int lane_width = a + 1;
    auto& layout = shell.layout;
    layout.width = spec.lanes * lane_width;
    layout.height = (spec.cross_aisles - 1) * (spec.bays + 1);
    layout.pd_points = {Point2(0.0, 0.0), Point2(layout.width, 0.0)};
    for (int c = 0; c < spec.cross_aisles; ++c) layout.cross_aisle_rows.push_back(c * (spec.bays + 1));
    for (int l = 0; l < spec.lanes; ++l) {
        if (l > 0) layout.pick_aisles.push_back({static_cast<double>(l * lane_width), AisleKind::wide});
        for (int k = 1; k <= a; ++k) layout.pick_aisles.push_back({static_cast<double>(l * lane_width + k), AisleKind::narrow});
    }

    // One configuration draw per rack position, shared by all floors.
    std::vector<Rack> floor_racks;
    int id = 1;
    for (int row = 0; row + 1 < spec.cross_aisles; ++row) {
        for (int l = 0; l < spec.lanes; ++l) {
            for (int k = 1; k <= a; ++k) {
                const int sub_aisle = row * (spec.lanes * a) + l * a + (k - 1);
                for (Side side : {Side::left, Side::right}) {
                    for (int bay = 1; bay <= spec.bays; ++bay) {
                        Rack r;
                        r.rack_id = id++;
                        r.access_point = Point2(l * lane_width + k, row * (spec.bays + 1) + bay);
                        r.bay_number = bay;
                        r.sub_aisle_id = sub_aisle;
                        r.side = side;
                        r.block_id = sub_aisle * 2 + (side == Side::left ? 0 : 1);
                        r.configuration_id = 1 + categorical(spec.configuration_mix, rng);
                        floor_racks.push_back(r);
                    }
                }
            }
        }
    }
    for (int f = 1; f <= spec.floors; ++f) {
        for (auto r : floor_racks) {
            r.floor_id = f;
            shell.racks.push_back(r);
        }
    }
    return shell;
}

double draw_weight(const std::vector<MixtureComponent>& mixture, double min_weight, Rng& rng, int* component) {
    std::vector<double> p;
    for (const auto& c : mixture) p.push_back(c.probability);
    const int k = categorical(p, rng);
    if (component) *component = k;
    const auto& c = mixture[static_cast<std::size_t>(k)];
    std::normal_distribution<double> normal(c.mean, c.stddev);
    for (int attempt = 0; attempt < 1000; ++attempt)
        if (const double w = normal(rng); w >= min_weight) return w;
    return min_weight;
}

std::vector<Product> generate_products(const GenSpec& spec, Rng& rng) {
    spec.validate();
    const int n = spec.assortment_size;
    std::vector<int> ranks(static_cast<std::size_t>(n));
    std::iota(ranks.begin(), ranks.end(), 1);
    std::shuffle(ranks.begin(), ranks.end(), rng);
    const auto& boxes = item_boxes();
    std::vector<Product> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        Product p;
        p.number = i + 1;
        p.rank = ranks[static_cast<std::size_t>(i)];
        p.weight = draw_weight(spec.weight_mixture, spec.min_weight, rng);
        p.order_frequency = {uniform(rng, spec.mu_min, spec.mu_max), uniform(rng, spec.sigma_min, spec.sigma_max)};
        p.size = boxes[static_cast<std::size_t>(std::uniform_int_distribution<int>(0, static_cast<int>(boxes.size()) - 1)(rng))];
        out.push_back(p);
    }
    return out;
}

int draw_partner_count(const std::vector<double>& distribution, Rng& rng) { return categorical(distribution, rng); }

std::vector<AssociationRule> generate_correlations(const std::vector<Product>& products, const GenSpec& spec, Rng& rng) {
    std::vector<AssociationRule> out;
    const int n = static_cast<int>(products.size());
    for (int i = 0; i < n; ++i) {
        const int k = std::min(draw_partner_count(spec.partner_distribution, rng), n - 1);
        std::set<int> chosen;
        while (static_cast<int>(chosen.size()) < k) {
            const int j = std::uniform_int_distribution<int>(0, n - 2)(rng);
            chosen.insert(j >= i ? j + 1 : j);
        }
        for (int j : chosen)
            out.push_back({products[static_cast<std::size_t>(i)].number, products[static_cast<std::size_t>(j)].number,
                           uniform(rng, spec.confidence_min, spec.confidence_max)});
    }
    return out;
}

int rank_quartile(int rank, int assortment_size) {
    if (rank < 1 || rank > assortment_size) throw UsageError("rank outside assortment");
    return std::min(3, static_cast<int>((static_cast<long long>(rank - 1) * 4) / assortment_size));
}

std::vector<Order> generate_orders(const std::vector<Product>& products, const GenSpec& spec, Rng& rng) {
    const int n = static_cast<int>(products.size());
    if (n < 4) throw UsageError("orders need at least four products");
    if (spec.order_lines > n) throw ConfigurationError("order lines exceed assortment size");
    std::vector<std::vector<const Product*>> quartiles(4);
    for (const auto& p : products) quartiles[static_cast<std::size_t>(rank_quartile(p.rank, n))].push_back(&p);
    for (auto& q : quartiles) {
        std::sort(q.begin(), q.end(), [](const Product* a, const Product* b) { return a->number < b->number; });
        if (q.empty()) throw UsageError("empty rank quartile");
    }

    std::vector<Order> out;
    for (int o = 0; o < spec.orders; ++o) {
        Order order{o + 1, {}};
        std::set<ProductNumber> used;
        while (static_cast<int>(order.lines.size()) < spec.order_lines) {
            const auto& q = quartiles[static_cast<std::size_t>(categorical(spec.quartile_weights, rng))];
            const Product* p = q[static_cast<std::size_t>(std::uniform_int_distribution<int>(0, static_cast<int>(q.size()) - 1)(rng))];
            std::normal_distribution<double> freq(p->order_frequency.mean, p->order_frequency.stddev);
            const int quantity = std::max(1, static_cast<int>(std::lround(freq(rng))));
            if (!used.insert(p->number).second) continue;
            order.lines.push_back({p->number, quantity});
        }
        out.push_back(std::move(order));
    }
    return out;
}

double fill_ratio(const WarehouseState& state, FillMode mode) {
    return mode == FillMode::volume ? state.volume_fill_ratio() : state.compartment_fill_ratio();
}

std::vector<storage::AssignmentTask> fill_schedule(const WarehouseState& state, Rng& rng, int rounds) {
    std::vector<ProductNumber> order;
    for (const auto& p : state.products()) order.push_back(p.number);
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<storage::AssignmentTask> out;
    for (int r = 0; r < rounds; ++r)
        for (auto p : order) out.push_back({p, target_quantity(state.product(p))});
    return out;
}

void fill_warehouse(WarehouseState& state, const GenSpec& spec, std::uint64_t seed, const FillOptions& options) {
    if (!(spec.fill_fraction > 0.0 && spec.fill_fraction <= 1.0)) throw ConfigurationError("fill fraction outside (0,1]");
    Rng schedule_rng(derive_seed(seed, {0}));
    // Enough rounds to fill any warehouse; the loop stops at the target.
    constexpr int kMaxRounds = 64;
    const auto tasks = fill_schedule(state, schedule_rng, kMaxRounds);
    const std::size_t per_round = state.products().size();
    std::size_t placed_in_round = 0;
    for (std::size_t k = 0; k < tasks.size(); ++k) {
        if (fill_ratio(state, spec.fill_mode) >= spec.fill_fraction) return;
        if (k % per_round == 0) {
            if (k > 0 && placed_in_round == 0) break;
            placed_in_round = 0;
        }
        try {
            const auto result = storage::assign_product(state, tasks[k], options.policy, options.assign,
                                                        derive_seed(seed, {1, static_cast<std::uint64_t>(k)}));
            apply_allocation(state, result.allocation);
            ++placed_in_round;
        } catch (const InfeasibleTaskError&) {
            // No room left for this product; others may still fit.
        }
    }
    if (fill_ratio(state, spec.fill_mode) < spec.fill_fraction)
        throw ConfigurationError("fill fraction unreachable");
}

WarehouseState generate_empty_warehouse(const GenSpec& spec, std::uint64_t seed) {
    spec.validate();
    Rng layout_rng(derive_seed(seed, {10}));
    Rng product_rng(derive_seed(seed, {11}));
    Rng rule_rng(derive_seed(seed, {12}));
    auto shell = generate_layout(spec.layout, layout_rng);
    auto products = generate_products(spec, product_rng);
    auto rules = generate_correlations(products, spec, rule_rng);
    return WarehouseState(std::move(shell.layout), shell.floors, std::move(shell.configurations), std::move(shell.racks),
                          std::move(products), std::move(rules));
}

Instance generate_instance(const GenSpec& spec, std::uint64_t seed) {
    Instance out{generate_empty_warehouse(spec, seed), {}};
    FillOptions fill;
    fill.policy = storage::StoragePolicy::random;
    fill.assign.random_samples = 1;
    fill_warehouse(out.state, spec, derive_seed(seed, {13}), fill);
    Rng order_rng(derive_seed(seed, {14}));
    out.orders = generate_orders({out.state.products().begin(), out.state.products().end()}, spec, order_rng);
    return out;
}

}  // namespace mezzopt::gen
