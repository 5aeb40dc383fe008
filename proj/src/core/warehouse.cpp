#include "mezzopt/warehouse.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace mezzopt {

namespace {

long long rack_key(FloorId floor, RackId rack) {
    return (static_cast<long long>(floor) << 32) ^ static_cast<unsigned int>(rack);
}

}  // namespace

std::vector<double> FloorLayout::lane_boundaries() const {
    std::vector<double> bounds{0.0};
    for (const auto& a : pick_aisles)
        if (a.kind == AisleKind::wide && a.x > 0.0 && a.x < width) bounds.push_back(a.x);
    bounds.push_back(width);
    std::sort(bounds.begin(), bounds.end());
    return bounds;
}

int FloorLayout::lane_of(double x) const {
    const auto bounds = lane_boundaries();
    for (std::size_t i = 1; i < bounds.size(); ++i)
        if (x < bounds[i]) return static_cast<int>(i - 1);
    return static_cast<int>(bounds.size()) - 2;
}

int target_quantity(const Product& p) {
    const double tq = std::ceil(p.order_frequency.mean + 2.0 * p.order_frequency.stddev - 1e-9);
    return std::max(1, static_cast<int>(tq));
}

WarehouseState::WarehouseState(FloorLayout layout, int floor_count,
                               std::vector<RackConfiguration> configurations, std::vector<Rack> racks,
                               std::vector<Product> products, std::vector<AssociationRule> rules,
                               const std::vector<ProductAssignment>& assignments)
    : layout_(std::move(layout)),
      floor_count_(floor_count),
      configurations_(std::move(configurations)),
      racks_(std::move(racks)),
      products_(std::move(products)),
      rules_(std::move(rules)) {
    if (floor_count_ < 1) throw ConfigurationError("warehouse needs at least one floor");
    if (layout_.width <= 0.0 || layout_.height <= 0.0) throw ConfigurationError("layout has no extent");

    for (std::size_t i = 0; i < configurations_.size(); ++i) {
        const auto& cfg = configurations_[i];
        if (!configuration_lookup_.emplace(cfg.configuration_id, i).second)
            throw ConfigurationError("duplicate rack configuration id");
        std::set<std::pair<int, int>> positions;
        std::set<CompartmentId> ids;
        for (const auto& c : cfg.compartments) {
            if (c.size.width <= 0.0 || c.size.height <= 0.0 || c.size.depth <= 0.0)
                throw ConfigurationError("compartment dimensions must be positive");
            if (c.bottom_height < 0.0) throw ConfigurationError("compartment below floor level");
            if (!positions.emplace(c.shelf_level, c.shelf_position).second)
                throw ConfigurationError("compartments share a shelf position");
            if (!ids.insert(c.compartment_id).second) throw ConfigurationError("duplicate compartment id");
        }
    }

    std::stable_sort(racks_.begin(), racks_.end(), [](const Rack& a, const Rack& b) {
        return a.floor_id != b.floor_id ? a.floor_id < b.floor_id : a.rack_id < b.rack_id;
    });
    floor_racks_.assign(static_cast<std::size_t>(floor_count_), {});
    for (std::size_t i = 0; i < racks_.size(); ++i) {
        const auto& r = racks_[i];
        if (r.floor_id < 1 || r.floor_id > floor_count_) throw ConfigurationError("rack on unknown floor");
        if (r.bay_number < 1) throw ConfigurationError("bay numbers start at 1");
        if (r.access_point.x() < 0.0 || r.access_point.x() > layout_.width || r.access_point.y() < 0.0 ||
            r.access_point.y() > layout_.height)
            throw ConfigurationError("rack access point outside floor bounds");
        if (!configuration_lookup_.contains(r.configuration_id))
            throw ConfigurationError("rack references unknown configuration");
        if (!rack_lookup_.emplace(rack_key(r.floor_id, r.rack_id), i).second)
            throw ConfigurationError("rack id not unique within floor");
        floor_racks_[static_cast<std::size_t>(r.floor_id - 1)].push_back(i);
    }

    for (std::size_t i = 0; i < products_.size(); ++i) {
        const auto& p = products_[i];
        if (p.weight <= 0.0) throw ConfigurationError("product weight must be positive");
        if (p.rank < 1) throw ConfigurationError("product rank must be >= 1");
        if (p.order_frequency.stddev < 0.0) throw ConfigurationError("negative order-frequency deviation");
        if (p.size.width <= 0.0 || p.size.height <= 0.0 || p.size.depth <= 0.0)
            throw ConfigurationError("product dimensions must be positive");
        if (!product_index_.emplace(p.number, i).second) throw ConfigurationError("duplicate product number");
    }

    for (std::size_t i = 0; i < rules_.size(); ++i) {
        const auto& r = rules_[i];
        if (r.lhs == r.rhs) throw ConfigurationError("association rule relates a product to itself");
        if (r.confidence < 0.0 || r.confidence > 1.0) throw ConfigurationError("rule confidence outside [0,1]");
        if (!has_product(r.lhs) || !has_product(r.rhs)) throw ConfigurationError("rule references unknown product");
        rules_by_lhs_[r.lhs].push_back(i);
    }

    slots_.resize(racks_.size());
    for (std::size_t i = 0; i < racks_.size(); ++i) slots_[i].resize(configuration_of(i).compartments.size());

    for (const auto& a : assignments) {
        if (a.quantity < 1) throw ConfigurationError("assignment quantity must be >= 1");
        if (!has_product(a.product)) throw ConfigurationError("assignment references unknown product");
        const std::size_t r = rack_index(a.floor_id, a.rack_id);
        const SlotIndex s{r, compartment_index(r, a.compartment_id)};
        try {
            store(s, a.product, a.quantity);
        } catch (const InfeasibleTaskError& e) {
            throw ConfigurationError(std::string("invalid assignment: ") + e.what());
        }
    }
}

std::span<const std::size_t> WarehouseState::racks_on_floor(FloorId floor) const {
    if (floor < 1 || floor > floor_count_) throw UsageError("unknown floor");
    return floor_racks_[static_cast<std::size_t>(floor - 1)];
}

std::size_t WarehouseState::rack_index(FloorId floor, RackId rack) const {
    const auto it = rack_lookup_.find(rack_key(floor, rack));
    if (it == rack_lookup_.end()) throw ConfigurationError("unknown rack " + std::to_string(rack));
    return it->second;
}

const RackConfiguration& WarehouseState::configuration_of(std::size_t rack_index) const {
    return configurations_[configuration_lookup_.at(racks_.at(rack_index).configuration_id)];
}

const Compartment& WarehouseState::compartment(SlotIndex s) const {
    return configuration_of(s.rack).compartments.at(s.compartment);
}

std::size_t WarehouseState::compartment_index(std::size_t rack_index, CompartmentId id) const {
    const auto& comps = configuration_of(rack_index).compartments;
    for (std::size_t i = 0; i < comps.size(); ++i)
        if (comps[i].compartment_id == id) return i;
    throw ConfigurationError("unknown compartment " + std::to_string(id));
}

const Product& WarehouseState::product(ProductNumber p) const {
    const auto it = product_index_.find(p);
    if (it == product_index_.end()) throw UsageError("unknown product " + std::to_string(p));
    return products_[it->second];
}

std::vector<AssociationRule> WarehouseState::rules_for(ProductNumber p) const {
    std::vector<AssociationRule> out;
    if (const auto it = rules_by_lhs_.find(p); it != rules_by_lhs_.end())
        for (auto i : it->second) out.push_back(rules_[i]);
    return out;
}

int WarehouseState::quantity_in_rack(std::size_t rack_index, ProductNumber p) const {
    int q = 0;
    for (const auto& s : slots_.at(rack_index))
        if (!s.empty() && s.product == p) q += s.quantity;
    return q;
}

int WarehouseState::quantity_on_floor(ProductNumber p, FloorId floor) const {
    int q = 0;
    for (auto r : racks_on_floor(floor)) q += quantity_in_rack(r, p);
    return q;
}

int WarehouseState::total_quantity(ProductNumber p) const {
    int q = 0;
    for (std::size_t r = 0; r < racks_.size(); ++r) q += quantity_in_rack(r, p);
    return q;
}

std::vector<ProductAssignment> WarehouseState::assignments() const {
    std::vector<ProductAssignment> out;
    for (std::size_t r = 0; r < racks_.size(); ++r) {
        const auto& comps = configuration_of(r).compartments;
        for (std::size_t c = 0; c < slots_[r].size(); ++c) {
            const auto& s = slots_[r][c];
            if (s.empty()) continue;
            out.push_back({racks_[r].floor_id, racks_[r].rack_id, comps[c].compartment_id, s.product, s.quantity});
        }
    }
    return out;
}

void WarehouseState::store(SlotIndex s, ProductNumber p, int quantity) {
    if (quantity < 1) throw UsageError("store: quantity must be >= 1");
    const auto& prod = product(p);
    auto& slot = slots_.at(s.rack).at(s.compartment);
    if (!slot.empty() && slot.product != p)
        throw InfeasibleTaskError("compartment already holds product " + std::to_string(slot.product));
    const int cap = compartment_capacity(compartment(s), prod);
    if (slot.quantity + quantity > cap) throw InfeasibleTaskError("compartment capacity exceeded");
    slot.product = p;
    slot.quantity += quantity;
}

double WarehouseState::volume_fill_ratio() const {
    double stored = 0.0;
    double total = 0.0;
    for (std::size_t r = 0; r < racks_.size(); ++r) {
        const auto& comps = configuration_of(r).compartments;
        for (std::size_t c = 0; c < comps.size(); ++c) {
            total += comps[c].size.volume();
            if (!slots_[r][c].empty()) stored += slots_[r][c].quantity * product(slots_[r][c].product).size.volume();
        }
    }
    return total > 0.0 ? stored / total : 0.0;
}

double WarehouseState::compartment_fill_ratio() const {
    std::size_t used = 0;
    std::size_t total = 0;
    for (const auto& rack : slots_) {
        total += rack.size();
        used += static_cast<std::size_t>(std::count_if(rack.begin(), rack.end(), [](const Slot& s) { return !s.empty(); }));
    }
    return total > 0 ? static_cast<double>(used) / static_cast<double>(total) : 0.0;
}

double rack_walk_distance(const Rack& rack, const FloorLayout& layout) {
    if (layout.pd_points.empty()) throw ConfigurationError("floor has no p/d-point");
    double best = std::numeric_limits<double>::infinity();
    for (const auto& pd : layout.pd_points) best = std::min(best, manhattan_distance(rack.access_point, pd));
    return best;
}

int compartment_capacity(const Compartment& compartment, const Product& product) {
    constexpr double eps = 1e-9;
    const auto fit = [](double room, double item) { return static_cast<int>(std::floor(room / item + eps)); };
    const int w = fit(compartment.size.width, product.size.width);
    const int h = fit(compartment.size.height, product.size.height);
    const int d = fit(compartment.size.depth, product.size.depth);
    if (w < 1 || h < 1 || d < 1) return 0;
    return w * h * d;
}

int remaining_capacity(const WarehouseState& state, SlotIndex s, const Product& product) {
    const auto& slot = state.slot(s);
    if (!slot.empty() && slot.product != product.number) return 0;
    return std::max(0, compartment_capacity(state.compartment(s), product) - slot.quantity);
}

int rack_remaining_capacity(const WarehouseState& state, std::size_t rack_index, const Product& product) {
    int total = 0;
    const auto n = state.configuration_of(rack_index).compartments.size();
    for (std::size_t c = 0; c < n; ++c) total += remaining_capacity(state, {rack_index, c}, product);
    return total;
}

}  // namespace mezzopt
