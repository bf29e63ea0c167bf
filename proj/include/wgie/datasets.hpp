#pragma once

#include <array>
#include <optional>
#include <span>
#include <string_view>

namespace wgie::datasets {

/// Hours of flying time between successive air-conditioning failures,
/// Boeing 720 plane 7912 (Proschan, 1963).
inline constexpr std::array<double, 30> plane7912{
    1,  3,  5,  7,  11, 11, 11, 12,  14,  14,  14,  16,  16,  20,  21,
    23, 42, 47, 52, 62, 71, 71, 87, 90, 95, 120, 120, 225, 246, 261};

/// Millions of revolutions to failure, 23 deep groove ball bearings
/// (Lawless, 1986, p. 228).
inline constexpr std::array<double, 23> bearings{
    17.88, 28.92, 33.00,  41.52,  42.12,  45.60,  48.80,  51.84,  51.96,  54.12,  55.56, 67.80,
    68.64, 68.64, 68.88, 84.12, 93.12, 98.64, 105.12, 105.84, 127.92, 128.04, 173.40};

struct NamedDataset {
  std::string_view name;
  std::span<const double> values;
};

inline constexpr std::array<NamedDataset, 2> all{{
    {"plane7912", plane7912},
    {"bearings", bearings},
}};

inline std::optional<NamedDataset> find(std::string_view name) {
  for (const auto& d : all) {
    if (d.name == name) return d;
  }
  return std::nullopt;
}

}  // namespace wgie::datasets
