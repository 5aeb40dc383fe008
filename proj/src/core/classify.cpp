#include "mezzopt/classify.hpp"

namespace mezzopt {

Zone zone_of(const Compartment& compartment) {
    const double bottom = compartment.bottom_height;
    const double top = bottom + compartment.size.height;
    if (top < kGripLow) return Zone::low;
    if (bottom > kGripHigh) return Zone::high;
    return Zone::grip;
}

WeightClass weight_class(const Product& product) {
    if (product.weight <= 3.0) return WeightClass::light;
    if (product.weight <= 7.0) return WeightClass::medium;
    return WeightClass::heavy;
}

MovementClass movement_class(const Product& product, std::size_t assortment_size) {
    if (assortment_size == 0) throw UsageError("movement_class: empty assortment");
    const double rel = static_cast<double>(product.rank) / static_cast<double>(assortment_size);
    if (rel <= 1.0 / 3.0) return MovementClass::fast;
    if (rel <= 2.0 / 3.0) return MovementClass::moderate;
    return MovementClass::slow;
}

int weight_penalty(Zone zone, WeightClass weight) {
    //                                 light medium heavy
    static constexpr int table[3][3] = {{0, 1, 1},   // low
                                        {1, 0, 0},   // grip
                                        {0, 2, 3}};  // high
    return table[static_cast<int>(zone)][static_cast<int>(weight)];
}

int rank_penalty(Zone zone, MovementClass movement) {
    //                                 fast moderate slow
    static constexpr int table[3][3] = {{2, 0, 0},   // low
                                        {0, 1, 3},   // grip
                                        {2, 0, 0}};  // high
    return table[static_cast<int>(zone)][static_cast<int>(movement)];
}

const char* to_string(Zone z) {
    switch (z) {
        case Zone::low: return "low";
        case Zone::grip: return "grip";
        case Zone::high: return "high";
    }
    return "?";
}

const char* to_string(WeightClass w) {
    switch (w) {
        case WeightClass::light: return "light";
        case WeightClass::medium: return "medium";
        case WeightClass::heavy: return "heavy";
    }
    return "?";
}

const char* to_string(MovementClass m) {
    switch (m) {
        case MovementClass::fast: return "fast";
        case MovementClass::moderate: return "moderate";
        case MovementClass::slow: return "slow";
    }
    return "?";
}

}  // namespace mezzopt
