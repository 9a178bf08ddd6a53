#include "classifly/types.hpp"

#include <cctype>
#include <cstdio>

#include "classifly/error.hpp"

namespace classifly {

std::optional<Icao24> Icao24::try_parse(std::string_view text) noexcept {
    if (text.size() != 6) return std::nullopt;
    std::uint32_t value = 0;
    for (char c : text) {
        int digit;
        if (c >= '0' && c <= '9') digit = c - '0';
        else if (c >= 'a' && c <= 'f') digit = c - 'a' + 10;
        else if (c >= 'A' && c <= 'F') digit = c - 'A' + 10;
        else return std::nullopt;
        value = (value << 4) | static_cast<std::uint32_t>(digit);
    }
    return Icao24{value};
}

Icao24 Icao24::parse(std::string_view text) {
    if (auto parsed = try_parse(text)) return *parsed;
    throw Error(ErrorKind::InvalidArgument, "invalid icao24 address '" + std::string(text) + "'");
}

std::string Icao24::str() const {
    char buffer[8];
    std::snprintf(buffer, sizeof buffer, "%06x", static_cast<unsigned>(value & 0xffffffu));
    return buffer;
}

std::string_view to_string(Category category) noexcept {
    switch (category) {
        case Category::Business: return "Business";
        case Category::Commercial: return "Commercial";
        case Category::Fighter: return "Fighter";
        case Category::SmallUtility: return "SmallUtility";
        case Category::Surveillance: return "Surveillance";
        case Category::Tanker: return "Tanker";
        case Category::Trainer: return "Trainer";
        case Category::Transport: return "Transport";
    }
    return "Unknown";
}

std::optional<Category> parse_category(std::string_view text) noexcept {
    std::string folded;
    for (char c : text) {
        if (c == ' ' || c == '_' || c == '-') continue;
        folded.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    for (Category c : kAllCategories) {
        std::string name;
        for (char ch : to_string(c)) name.push_back(static_cast<char>(std::tolower(ch)));
        if (name == folded) return c;
    }
    return std::nullopt;
}

std::vector<std::string> category_names() {
    std::vector<std::string> names;
    for (Category c : kAllCategories) names.emplace_back(to_string(c));
    return names;
}

}  // namespace classifly
