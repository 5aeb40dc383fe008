#pragma once

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

#include "mezzopt/gen/generator.hpp"
#include "mezzopt/pick/aco.hpp"
#include "mezzopt/storage/assign.hpp"

namespace mezzopt::io {

using Json = nlohmann::ordered_json;

inline constexpr int kWarehouseFormatVersion = 1;

Json warehouse_to_json(const WarehouseState& state);
/// Throws ConfigurationError on a malformed document or unknown version.
WarehouseState warehouse_from_json(const Json& doc);

Json order_to_json(const Order& order);
Order order_from_json(const Json& doc);
/// Accepts `{"orders": [...]}`, a bare array or a single order document.
std::vector<Order> orders_from_json(const Json& doc);
Json orders_to_json(const std::vector<Order>& orders);

Json rules_to_json(std::span<const AssociationRule> rules);

Json task_to_json(const storage::AssignmentTask& task);
storage::AssignmentTask task_from_json(const Json& doc);

/// Size preset with optional overrides of any field.
gen::GenSpec gen_spec_from_json(const Json& doc);
Json gen_spec_to_json(const gen::GenSpec& spec);

/// Overrides on top of `base`; unknown keys are rejected.
storage::AssignOptions assign_options_from_json(const Json& doc, storage::AssignOptions base);
pick::AcoParams aco_params_from_json(const Json& doc, pick::AcoParams base = {});
Json nsga_params_to_json(const storage::NsgaParams& p);
Json aco_params_to_json(const pick::AcoParams& p);

Json allocation_to_json(const storage::AssignmentResult& result);
Json route_to_json(const WarehouseState& state, const pick::MarketGraph& graph, const pick::PickRoute& route);

/// Storage front of one floor: spread, distance, quantity, correlation and the
/// selected rack ids per row.
std::string storage_front_csv(const WarehouseState& state, const storage::FloorOutcome& floor);
/// Pick front: distance and violations per row.
std::string pick_front_csv(const std::vector<pick::PickRoute>& routes);

struct FrontFile {
    Eigen::MatrixXd points;
    moo::Orientation orientation;
    std::vector<std::string> objectives;
};

/// Reads a storage or pick front CSV; the kind is recognised from the header
/// and only the objective columns are kept.
FrontFile read_front_csv(const std::string& text);

Json load_json(const std::filesystem::path& path);
void save_json(const std::filesystem::path& path, const Json& doc);
std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

WarehouseState load_warehouse(const std::filesystem::path& path);
void save_warehouse(const std::filesystem::path& path, const WarehouseState& state);

/// Shortest round-trip rendering used by every CSV writer.
std::string format_number(double v);

}  // namespace mezzopt::io
