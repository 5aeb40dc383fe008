#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "mezzopt/storage/assign.hpp"
#include "mezzopt/warehouse.hpp"

namespace mezzopt::gen {

using Rng = std::mt19937_64;

struct MixtureComponent {
    double probability = 1.0;
    double mean = 0.0;
    double stddev = 1.0;
};

struct LayoutSpec {
    int floors = 2;
    int lanes = 2;
    int aisles_per_lane = 2;  // narrow pick aisles per lane
    int cross_aisles = 3;
    int bays = 8;  // bays per sub-aisle and side
    /// Relative frequency of rack configurations 1 (3x2), 2 (6x2), 3 (6x4).
    std::vector<double> configuration_mix{1.0, 1.0, 1.0};
};

enum class FillMode { volume, compartments };

struct GenSpec {
    std::string size = "small";
    LayoutSpec layout;
    int assortment_size = 500;
    std::vector<MixtureComponent> weight_mixture{{0.25, 2.0, 1.0}, {0.50, 5.0, 2.0}, {0.25, 8.0, 1.0}};
    double min_weight = 0.1;
    double mu_min = 1.0, mu_max = 5.0;
    double sigma_min = 0.5, sigma_max = 2.0;
    /// Probability of 0, 1, 2, 3 correlated partners.
    std::vector<double> partner_distribution{0.30, 0.40, 0.20, 0.10};
    double confidence_min = 0.10, confidence_max = 0.90;
    double fill_fraction = 0.5;
    FillMode fill_mode = FillMode::volume;
    int orders = 100;
    int order_lines = 20;
    /// Rank quartile weights, fastest-moving quartile first.
    std::vector<double> quartile_weights{0.40, 0.30, 0.20, 0.10};

    void validate() const;
};

/// Desk-scale defaults for "small", "medium" and "large".
GenSpec gen_spec_for(const std::string& size);

/// Item box sizes; each fits at least once into every compartment type.
const std::vector<Dimensions>& item_boxes();
/// The three rack configurations (6, 12 and 24 compartments).
std::vector<RackConfiguration> standard_configurations();

/// Empty warehouse shell: layout, racks, configurations; no products.
struct Shell {
    FloorLayout layout;
    int floors = 1;
    std::vector<RackConfiguration> configurations;
    std::vector<Rack> racks;
};
Shell generate_layout(const LayoutSpec& spec, Rng& rng);

/// Index of the mixture component a weight draw came from is reported
/// through `component` when non-null.
double draw_weight(const std::vector<MixtureComponent>& mixture, double min_weight, Rng& rng, int* component = nullptr);
std::vector<Product> generate_products(const GenSpec& spec, Rng& rng);
int draw_partner_count(const std::vector<double>& distribution, Rng& rng);
std::vector<AssociationRule> generate_correlations(const std::vector<Product>& products, const GenSpec& spec, Rng& rng);
/// Rank quartile (0 = fastest) of a product rank within an assortment.
int rank_quartile(int rank, int assortment_size);
std::vector<Order> generate_orders(const std::vector<Product>& products, const GenSpec& spec, Rng& rng);

/// Stored share of capacity in the chosen mode.
double fill_ratio(const WarehouseState& state, FillMode mode);

/// Tasks of one target quantity per product, round-robin over a seeded
/// shuffle of the assortment. Independent of the storage policy.
std::vector<storage::AssignmentTask> fill_schedule(const WarehouseState& state, Rng& rng, int rounds);

struct FillOptions {
    storage::StoragePolicy policy = storage::StoragePolicy::random;
    storage::AssignOptions assign;
};

/// Stores products until the fill ratio reaches `spec.fill_fraction`.
void fill_warehouse(WarehouseState& state, const GenSpec& spec, std::uint64_t seed, const FillOptions& options);

struct Instance {
    WarehouseState state;
    std::vector<Order> orders;
};

/// Layout, assortment, rules, random-policy fill and orders from one seed.
Instance generate_instance(const GenSpec& spec, std::uint64_t seed);
/// Same without stock.
WarehouseState generate_empty_warehouse(const GenSpec& spec, std::uint64_t seed);

}  // namespace mezzopt::gen
