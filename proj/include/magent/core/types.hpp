#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>

namespace magent {

/// Simulation ticks. Dimensionless; scenario files may attach a unit label.
using Ticks = std::uint64_t;
using VirtualTime = std::uint64_t;

/// Open upper bound for time windows.
inline constexpr VirtualTime kUnbounded = std::numeric_limits<VirtualTime>::max();

inline constexpr VirtualTime saturating_add(VirtualTime a, Ticks b) noexcept
{
    return (kUnbounded - a < b) ? kUnbounded : a + b;
}

/// Opaque byte payload.
using Bytes = std::string;

struct AgentId
{
    std::uint64_t value = 0;

    constexpr auto operator<=>(const AgentId&) const = default;
};

struct LocationId
{
    std::uint64_t value = 0;

    constexpr auto operator<=>(const LocationId&) const = default;
};

inline std::string to_string(AgentId id) { return "agent#" + std::to_string(id.value); }
inline std::string to_string(LocationId id) { return "loc#" + std::to_string(id.value); }

} // namespace magent

template <>
struct std::hash<magent::AgentId>
{
    std::size_t operator()(magent::AgentId id) const noexcept { return std::hash<std::uint64_t>{}(id.value); }
};

template <>
struct std::hash<magent::LocationId>
{
    std::size_t operator()(magent::LocationId id) const noexcept { return std::hash<std::uint64_t>{}(id.value); }
};
