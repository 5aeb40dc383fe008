#include "mezzopt/io.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace mezzopt::io {

namespace {

Json point_json(const Point2& p) { return Json::array({p.x(), p.y()}); }

Point2 point_from(const Json& j) {
    if (!j.is_array() || j.size() != 2) throw ConfigurationError("point must be [x, y]");
    return {j[0].get<double>(), j[1].get<double>()};
}

Json dims_json(const Dimensions& d) { return Json::array({d.width, d.height, d.depth}); }

Dimensions dims_from(const Json& j) {
    if (!j.is_array() || j.size() != 3) throw ConfigurationError("dimensions must be [width, height, depth]");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

const char* side_name(Side s) { return s == Side::left ? "left" : "right"; }

Side side_from(const std::string& s) {
    if (s == "left") return Side::left;
    if (s == "right") return Side::right;
    throw ConfigurationError("unknown side '" + s + "'");
}

void check_keys(const Json& doc, std::initializer_list<const char*> allowed, const std::string& what) {
    if (!doc.is_object()) throw ConfigurationError(what + " must be an object");
    std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [k, v] : doc.items())
        if (!ok.contains(k)) throw ConfigurationError("unknown key '" + k + "' in " + what);
}

template <typename T>
void read_if(const Json& doc, const char* key, T& out) {
    if (doc.contains(key)) out = doc.at(key).get<T>();
}

template <typename F>
auto guarded(const std::string& what, F&& f) {
    try {
        return f();
    } catch (const Json::exception& e) {
        throw ConfigurationError("malformed " + what + ": " + e.what());
    }
}

}  // namespace

std::string format_number(double v) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

Json warehouse_to_json(const WarehouseState& state) {
    const auto& l = state.layout();
    Json layout{{"width", l.width}, {"height", l.height}, {"pd_points", Json::array()},
                {"cross_aisle_rows", l.cross_aisle_rows}, {"pick_aisles", Json::array()}};
    for (const auto& p : l.pd_points) layout["pd_points"].push_back(point_json(p));
    for (const auto& a : l.pick_aisles)
        layout["pick_aisles"].push_back({{"x", a.x}, {"kind", a.kind == AisleKind::wide ? "wide" : "narrow"}});

    Json configs = Json::array();
    for (const auto& c : state.configurations()) {
        Json comps = Json::array();
        for (const auto& k : c.compartments)
            comps.push_back({{"id", k.compartment_id}, {"size", dims_json(k.size)}, {"shelf_level", k.shelf_level},
                             {"shelf_position", k.shelf_position}, {"bottom_height", k.bottom_height}});
        configs.push_back({{"id", c.configuration_id}, {"shelf_levels", c.shelf_levels},
                           {"compartments_per_shelf", c.compartments_per_shelf}, {"compartments", comps}});
    }
    Json racks = Json::array();
    for (const auto& r : state.racks())
        racks.push_back({{"id", r.rack_id}, {"floor", r.floor_id}, {"access_point", point_json(r.access_point)},
                         {"bay", r.bay_number}, {"block", r.block_id}, {"sub_aisle", r.sub_aisle_id},
                         {"side", side_name(r.side)}, {"configuration", r.configuration_id}});
    Json products = Json::array();
    for (const auto& p : state.products())
        products.push_back({{"number", p.number}, {"size", dims_json(p.size)}, {"weight", p.weight}, {"rank", p.rank},
                            {"order_frequency", {{"mean", p.order_frequency.mean}, {"stddev", p.order_frequency.stddev}}}});
    Json assignments = Json::array();
    for (const auto& a : state.assignments())
        assignments.push_back({{"floor", a.floor_id}, {"rack", a.rack_id}, {"compartment", a.compartment_id},
                               {"product", a.product}, {"quantity", a.quantity}});
    return Json{{"format", "mezzopt-warehouse"},
                {"version", kWarehouseFormatVersion},
                {"floors", state.floor_count()},
                {"layout", layout},
                {"configurations", configs},
                {"racks", racks},
                {"products", products},
                {"rules", rules_to_json(state.rules())},
                {"assignments", assignments}};
}

WarehouseState warehouse_from_json(const Json& doc) {
    return guarded("warehouse document", [&] {
        if (doc.value("format", std::string()) != "mezzopt-warehouse")
            throw ConfigurationError("not a warehouse document");
        if (doc.at("version").get<int>() != kWarehouseFormatVersion)
            throw ConfigurationError("unsupported warehouse format version " + doc.at("version").dump());
        const auto& jl = doc.at("layout");
        FloorLayout layout;
        layout.width = jl.at("width").get<double>();
        layout.height = jl.at("height").get<double>();
        for (const auto& p : jl.at("pd_points")) layout.pd_points.push_back(point_from(p));
        layout.cross_aisle_rows = jl.at("cross_aisle_rows").get<std::vector<double>>();
        for (const auto& a : jl.at("pick_aisles")) {
            const auto kind = a.at("kind").get<std::string>();
            if (kind != "wide" && kind != "narrow") throw ConfigurationError("unknown aisle kind '" + kind + "'");
            layout.pick_aisles.push_back({a.at("x").get<double>(), kind == "wide" ? AisleKind::wide : AisleKind::narrow});
        }
        std::vector<RackConfiguration> configs;
        for (const auto& c : doc.at("configurations")) {
            RackConfiguration rc{c.at("id").get<int>(), c.at("shelf_levels").get<int>(),
                                 c.at("compartments_per_shelf").get<int>(), {}};
            for (const auto& k : c.at("compartments"))
                rc.compartments.push_back({k.at("id").get<int>(), dims_from(k.at("size")), k.at("shelf_level").get<int>(),
                                           k.at("shelf_position").get<int>(), k.at("bottom_height").get<double>()});
            configs.push_back(std::move(rc));
        }
        std::vector<Rack> racks;
        for (const auto& r : doc.at("racks"))
            racks.push_back({r.at("id").get<int>(), r.at("floor").get<int>(), point_from(r.at("access_point")),
                             r.at("bay").get<int>(), r.at("block").get<int>(), r.at("sub_aisle").get<int>(),
                             side_from(r.at("side").get<std::string>()), r.at("configuration").get<int>()});
        std::vector<Product> products;
        for (const auto& p : doc.at("products")) {
            const auto& f = p.at("order_frequency");
            products.push_back({p.at("number").get<int>(), dims_from(p.at("size")), p.at("weight").get<double>(),
                                p.at("rank").get<int>(), {f.at("mean").get<double>(), f.at("stddev").get<double>()}});
        }
        std::vector<AssociationRule> rules;
        for (const auto& r : doc.at("rules"))
            rules.push_back({r.at("lhs").get<int>(), r.at("rhs").get<int>(), r.at("confidence").get<double>()});
        std::vector<ProductAssignment> assignments;
        for (const auto& a : doc.at("assignments"))
            assignments.push_back({a.at("floor").get<int>(), a.at("rack").get<int>(), a.at("compartment").get<int>(),
                                   a.at("product").get<int>(), a.at("quantity").get<int>()});
        try {
            return WarehouseState(std::move(layout), doc.at("floors").get<int>(), std::move(configs), std::move(racks),
                                  std::move(products), std::move(rules), assignments);
        } catch (const InfeasibleTaskError& e) {
            throw ConfigurationError(std::string("inconsistent stock: ") + e.what());
        } catch (const UsageError& e) {
            throw ConfigurationError(std::string("inconsistent warehouse: ") + e.what());
        }
    });
}

Json rules_to_json(std::span<const AssociationRule> rules) {
    Json out = Json::array();
    for (const auto& r : rules) out.push_back({{"lhs", r.lhs}, {"rhs", r.rhs}, {"confidence", r.confidence}});
    return out;
}

Json order_to_json(const Order& order) {
    Json lines = Json::array();
    for (const auto& l : order.lines) lines.push_back({{"product", l.product}, {"quantity", l.quantity}});
    return {{"order_number", order.order_number}, {"lines", lines}};
}

Order order_from_json(const Json& doc) {
    return guarded("order document", [&] {
        Order o;
        o.order_number = doc.value("order_number", 0);
        for (const auto& l : doc.at("lines")) o.lines.push_back({l.at("product").get<int>(), l.at("quantity").get<int>()});
        if (o.lines.empty()) throw ConfigurationError("order has no lines");
        return o;
    });
}

std::vector<Order> orders_from_json(const Json& doc) {
    const Json* list = &doc;
    if (doc.is_object() && doc.contains("orders")) list = &doc.at("orders");
    std::vector<Order> out;
    if (list->is_array()) {
        for (const auto& o : *list) out.push_back(order_from_json(o));
    } else {
        out.push_back(order_from_json(*list));
    }
    return out;
}

Json orders_to_json(const std::vector<Order>& orders) {
    Json list = Json::array();
    for (const auto& o : orders) list.push_back(order_to_json(o));
    return {{"orders", list}};
}

Json task_to_json(const storage::AssignmentTask& task) { return {{"product", task.product}, {"quantity", task.quantity}}; }

storage::AssignmentTask task_from_json(const Json& doc) {
    return guarded("task document", [&] {
        check_keys(doc, {"product", "quantity"}, "task");
        return storage::AssignmentTask{doc.at("product").get<int>(), doc.at("quantity").get<int>()};
    });
}

gen::GenSpec gen_spec_from_json(const Json& doc) {
    return guarded("generator spec", [&] {
        check_keys(doc,
                   {"size", "layout", "assortment_size", "weight_mixture", "min_weight", "mu_min", "mu_max", "sigma_min",
                    "sigma_max", "partner_distribution", "confidence_min", "confidence_max", "fill_fraction", "fill_mode",
                    "orders", "order_lines", "quartile_weights"},
                   "generator spec");
        auto spec = gen::gen_spec_for(doc.value("size", std::string("small")));
        if (doc.contains("layout")) {
            const auto& l = doc.at("layout");
            check_keys(l, {"floors", "lanes", "aisles_per_lane", "cross_aisles", "bays", "configuration_mix"}, "layout");
            read_if(l, "floors", spec.layout.floors);
            read_if(l, "lanes", spec.layout.lanes);
            read_if(l, "aisles_per_lane", spec.layout.aisles_per_lane);
            read_if(l, "cross_aisles", spec.layout.cross_aisles);
            read_if(l, "bays", spec.layout.bays);
            read_if(l, "configuration_mix", spec.layout.configuration_mix);
        }
        read_if(doc, "assortment_size", spec.assortment_size);
        if (doc.contains("weight_mixture")) {
            spec.weight_mixture.clear();
            for (const auto& c : doc.at("weight_mixture"))
                spec.weight_mixture.push_back({c.at("probability").get<double>(), c.at("mean").get<double>(),
                                               c.at("stddev").get<double>()});
        }
        read_if(doc, "min_weight", spec.min_weight);
        read_if(doc, "mu_min", spec.mu_min);
        read_if(doc, "mu_max", spec.mu_max);
        read_if(doc, "sigma_min", spec.sigma_min);
        read_if(doc, "sigma_max", spec.sigma_max);
        read_if(doc, "partner_distribution", spec.partner_distribution);
        read_if(doc, "confidence_min", spec.confidence_min);
        read_if(doc, "confidence_max", spec.confidence_max);
        read_if(doc, "fill_fraction", spec.fill_fraction);
        if (doc.contains("fill_mode")) {
            const auto m = doc.at("fill_mode").get<std::string>();
            if (m != "volume" && m != "compartments") throw ConfigurationError("unknown fill mode '" + m + "'");
            spec.fill_mode = m == "volume" ? gen::FillMode::volume : gen::FillMode::compartments;
        }
        read_if(doc, "orders", spec.orders);
        read_if(doc, "order_lines", spec.order_lines);
        read_if(doc, "quartile_weights", spec.quartile_weights);
        spec.validate();
        return spec;
    });
}

Json gen_spec_to_json(const gen::GenSpec& spec) {
    Json mixture = Json::array();
    for (const auto& c : spec.weight_mixture) mixture.push_back({{"probability", c.probability}, {"mean", c.mean}, {"stddev", c.stddev}});
    const auto& l = spec.layout;
    return {{"size", spec.size},
            {"layout",
             {{"floors", l.floors}, {"lanes", l.lanes}, {"aisles_per_lane", l.aisles_per_lane},
              {"cross_aisles", l.cross_aisles}, {"bays", l.bays}, {"configuration_mix", l.configuration_mix}}},
            {"assortment_size", spec.assortment_size},
            {"weight_mixture", mixture},
            {"min_weight", spec.min_weight},
            {"mu_min", spec.mu_min},
            {"mu_max", spec.mu_max},
            {"sigma_min", spec.sigma_min},
            {"sigma_max", spec.sigma_max},
            {"partner_distribution", spec.partner_distribution},
            {"confidence_min", spec.confidence_min},
            {"confidence_max", spec.confidence_max},
            {"fill_fraction", spec.fill_fraction},
            {"fill_mode", spec.fill_mode == gen::FillMode::volume ? "volume" : "compartments"},
            {"orders", spec.orders},
            {"order_lines", spec.order_lines},
            {"quartile_weights", spec.quartile_weights}};
}

storage::AssignOptions assign_options_from_json(const Json& doc, storage::AssignOptions base) {
    return guarded("storage parameters", [&] {
        check_keys(doc, {"population", "mutation_probability", "window", "delta_limit", "max_generations", "random_samples", "areas"},
                   "storage parameters");
        read_if(doc, "population", base.nsga.population);
        read_if(doc, "mutation_probability", base.nsga.mutation_probability);
        read_if(doc, "window", base.nsga.window);
        read_if(doc, "delta_limit", base.nsga.delta_limit);
        read_if(doc, "max_generations", base.nsga.max_generations);
        read_if(doc, "random_samples", base.random_samples);
        read_if(doc, "areas", base.score.areas);
        base.nsga.validate();
        if (base.random_samples < 1) throw ConfigurationError("random_samples must be >= 1");
        return base;
    });
}

pick::AcoParams aco_params_from_json(const Json& doc, pick::AcoParams base) {
    return guarded("ACO parameters", [&] {
        check_keys(doc,
                   {"alpha", "beta", "rho", "tau_min", "tau_max", "floor_penalty", "allowed_weight_difference",
                    "max_cataclysms", "max_cons_iter_wo_impr", "max_iter", "variant"},
                   "ACO parameters");
        read_if(doc, "alpha", base.alpha);
        read_if(doc, "beta", base.beta);
        read_if(doc, "rho", base.rho);
        read_if(doc, "tau_min", base.tau_min);
        read_if(doc, "tau_max", base.tau_max);
        read_if(doc, "floor_penalty", base.floor_penalty);
        read_if(doc, "allowed_weight_difference", base.allowed_weight_difference);
        read_if(doc, "max_cataclysms", base.max_cataclysms);
        read_if(doc, "max_cons_iter_wo_impr", base.max_cons_iter_wo_impr);
        read_if(doc, "max_iter", base.max_iter);
        if (doc.contains("variant")) {
            try {
                base.variant = pick::parse_aco_variant(doc.at("variant").get<std::string>());
            } catch (const UsageError& e) {
                throw ConfigurationError(e.what());
            }
        }
        base.validate();
        return base;
    });
}

Json nsga_params_to_json(const storage::NsgaParams& p) {
    return {{"population", p.population}, {"mutation_probability", p.mutation_probability}, {"window", p.window},
            {"delta_limit", p.delta_limit}, {"max_generations", p.max_generations}};
}

Json aco_params_to_json(const pick::AcoParams& p) {
    return {{"alpha", p.alpha},
            {"beta", p.beta},
            {"rho", p.rho},
            {"tau_min", p.tau_min},
            {"tau_max", p.tau_max},
            {"floor_penalty", p.floor_penalty},
            {"allowed_weight_difference", p.allowed_weight_difference},
            {"max_cataclysms", p.max_cataclysms},
            {"max_cons_iter_wo_impr", p.max_cons_iter_wo_impr},
            {"max_iter", p.max_iter},
            {"variant", pick::to_string(p.variant)}};
}

Json allocation_to_json(const storage::AssignmentResult& result) {
    const auto& a = result.allocation;
    Json placements = Json::array();
    for (const auto& p : a.placements)
        placements.push_back({{"floor", p.floor_id}, {"rack", p.rack_id}, {"compartment", p.compartment_id}, {"quantity", p.quantity}});
    Json floors = Json::array();
    for (const auto& f : result.floors) {
        const auto& s = f.chosen.scores;
        floors.push_back({{"floor", f.floor},
                          {"incoming", f.incoming},
                          {"front_size", f.front.size()},
                          {"generations", f.generations},
                          {"scores", {{"spread", s(0)}, {"distance", s(1)}, {"quantity", s(2)}, {"correlation", s(3)}}}});
    }
    return {{"product", a.product}, {"incoming", a.incoming}, {"placements", placements}, {"floors", floors}};
}

Json route_to_json(const WarehouseState& state, const pick::MarketGraph& graph, const pick::PickRoute& route) {
    Json markets = Json::array();
    for (const auto& v : route.markets) {
        const auto& m = graph.market(v.market);
        markets.push_back({{"market", v.market}, {"floor", m.floor}, {"cross_aisle", m.cross_aisle}, {"lane", m.lane},
                           {"entry", side_name(v.entry)}});
    }
    Json racks = Json::array();
    for (const auto& r : route.racks) {
        Json picks = Json::array();
        for (const auto& p : r.picks) picks.push_back({{"product", p.product}, {"quantity", p.quantity}});
        const auto& rack = state.rack(r.rack_index);
        racks.push_back({{"visit", r.visit}, {"floor", rack.floor_id}, {"rack", rack.rack_id}, {"depth", r.depth}, {"picks", picks}});
    }
    return {{"start_pd", route.start_pd}, {"end_pd", route.end_pd}, {"distance", route.distance},
            {"weight_violations", route.weight_violations}, {"markets", markets}, {"racks", racks}};
}

std::string storage_front_csv(const WarehouseState& state, const storage::FloorOutcome& floor) {
    std::ostringstream out;
    out << "spread,distance,quantity,correlation,racks\n";
    const auto floor_racks = state.racks_on_floor(floor.floor);
    for (const auto& ind : floor.front) {
        for (int k = 0; k < 4; ++k) out << format_number(ind.scores(k)) << ',';
        for (std::size_t i = 0; i < ind.genes.size(); ++i)
            out << (i ? " " : "") << state.rack(floor_racks[static_cast<std::size_t>(ind.genes[i])]).rack_id;
        out << '\n';
    }
    return out.str();
}

std::string pick_front_csv(const std::vector<pick::PickRoute>& routes) {
    std::ostringstream out;
    out << "distance,violations,markets\n";
    for (const auto& r : routes) {
        out << format_number(r.distance) << ',' << r.weight_violations << ',';
        for (std::size_t i = 0; i < r.markets.size(); ++i) out << (i ? " " : "") << r.markets[i].market;
        out << '\n';
    }
    return out.str();
}

FrontFile read_front_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw ConfigurationError("empty front file");
    const auto split = [](const std::string& l) {
        std::vector<std::string> cells;
        std::stringstream ss(l);
        for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
        if (!l.empty() && l.back() == ',') cells.emplace_back();
        return cells;
    };
    const auto header = split(line);
    FrontFile out;
    if (header.size() >= 4 && header[0] == "spread" && header[1] == "distance" && header[2] == "quantity" &&
        header[3] == "correlation") {
        out.objectives = {"spread", "distance", "quantity", "correlation"};
        out.orientation = storage::storage_orientation();
    } else if (header.size() >= 2 && header[0] == "distance" && header[1] == "violations") {
        out.objectives = {"distance", "violations"};
        out.orientation = moo::minimize_all(2);
    } else {
        throw ConfigurationError("unrecognised front header '" + line + "'");
    }
    const auto m = out.objectives.size();
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto cells = split(line);
        if (cells.size() != header.size()) throw ConfigurationError("ragged front file");
        std::vector<double> row(m);
        for (std::size_t i = 0; i < m; ++i) {
            const auto* b = cells[i].data();
            const auto r = std::from_chars(b, b + cells[i].size(), row[i]);
            if (r.ec != std::errc() || r.ptr != b + cells[i].size())
                throw ConfigurationError("non-numeric objective '" + cells[i] + "'");
        }
        rows.push_back(std::move(row));
    }
    out.points.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(m));
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < m; ++c) out.points(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    return out;
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw UsageError("cannot write " + path.string());
    out << text;
}

Json load_json(const std::filesystem::path& path) {
    const auto text = read_text(path);
    try {
        return Json::parse(text);
    } catch (const Json::exception& e) {
        throw ConfigurationError(path.string() + ": " + e.what());
    }
}

void save_json(const std::filesystem::path& path, const Json& doc) { write_text(path, doc.dump(2) + "\n"); }

WarehouseState load_warehouse(const std::filesystem::path& path) { return warehouse_from_json(load_json(path)); }

void save_warehouse(const std::filesystem::path& path, const WarehouseState& state) {
    save_json(path, warehouse_to_json(state));
}

}  // namespace mezzopt::io
