#pragma once

#include <cstdint>
#include <string>

namespace wtpleak {

// All monetary amounts are integer cents; only inference estimates are whole dollars.
using Cents = std::int64_t;

constexpr Cents cents_from_dollars(std::int64_t dollars) { return dollars * 100; }

constexpr double dollars(Cents amount) { return static_cast<double>(amount) / 100.0; }

// "$49.99" for fractional amounts, "$200" for whole-dollar amounts.
std::string format_usd(Cents amount);

}  // namespace wtpleak
