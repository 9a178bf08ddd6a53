#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace classifly {

/// 24-bit ICAO transponder address. Printed as six lowercase hex digits.
struct Icao24 {
    std::uint32_t value = 0;

    static std::optional<Icao24> try_parse(std::string_view text) noexcept;
    /// Throws Error(InvalidArgument) when `text` is not six hex digits.
    static Icao24 parse(std::string_view text);

    std::string str() const;

    auto operator<=>(const Icao24&) const = default;
};

/// One timestamped kinematic observation of one aircraft.
struct StateVector {
    Icao24 icao24;
    std::int64_t time = 0;              // unix seconds
    std::optional<double> lat;          // degrees
    std::optional<double> lon;          // degrees
    std::optional<double> baro_alt;     // meters
    std::optional<double> ground_speed; // m/s
    std::optional<double> heading;      // degrees clockwise from north, [0, 360)
    std::optional<double> vert_rate;    // m/s

    bool operator==(const StateVector&) const = default;
};

/// A time-ordered run of one aircraft's state vectors between arrival splits.
struct Flight {
    Icao24 icao24;
    std::vector<StateVector> states;

    std::int64_t start_time() const { return states.front().time; }
    std::int64_t end_time() const { return states.back().time; }
    std::int64_t duration() const { return end_time() - start_time(); }

    bool operator==(const Flight&) const = default;
};

enum class Category : std::uint8_t {
    Business,
    Commercial,
    Fighter,
    SmallUtility,
    Surveillance,
    Tanker,
    Trainer,
    Transport,
};

inline constexpr std::size_t kCategoryCount = 8;

inline constexpr std::array<Category, kCategoryCount> kAllCategories = {
    Category::Business,     Category::Commercial, Category::Fighter, Category::SmallUtility,
    Category::Surveillance, Category::Tanker,     Category::Trainer, Category::Transport,
};

std::string_view to_string(Category category) noexcept;

/// Accepts the canonical names case-insensitively, ignoring spaces,
/// underscores and hyphens ("Small Utility", "small_utility").
std::optional<Category> parse_category(std::string_view text) noexcept;

/// Canonical names in ordinal order, used as dataset class names.
std::vector<std::string> category_names();

}  // namespace classifly
