#pragma once

#include "mezzopt/warehouse.hpp"

namespace mezzopt {

enum class Zone { low, grip, high };
enum class WeightClass { light, medium, heavy };
enum class MovementClass { fast, moderate, slow };

/// Grip band in meters above floor.
inline constexpr double kGripLow = 0.75;
inline constexpr double kGripHigh = 1.25;

/// A compartment touching the grip band (boundaries inclusive) is grip zone.
Zone zone_of(const Compartment& compartment);

/// light <= 3 kg < medium <= 7 kg < heavy
WeightClass weight_class(const Product& product);

/// Relative rank rank/|P| split at 1/3 and 2/3.
MovementClass movement_class(const Product& product, std::size_t assortment_size);

/// Phase-3 penalty tables, values 0..3.
int weight_penalty(Zone zone, WeightClass weight);
int rank_penalty(Zone zone, MovementClass movement);

const char* to_string(Zone z);
const char* to_string(WeightClass w);
const char* to_string(MovementClass m);

}  // namespace mezzopt
