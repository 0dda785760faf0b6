#pragma once

#include "posterforge/core/rational.hpp"
#include "posterforge/typography/document.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace posterforge::typography::css {

/// "12px", "12.5px", "0", "calc(100px/3)". Returns nullopt on anything else.
std::optional<Rational> parse_length(std::string_view text);
/// Inverse of parse_length: terminating values as decimals, others via calc().
std::string format_length(const Rational& value);

/// Unitless: "1.2", "2", "calc(4/3)".
std::optional<Rational> parse_number(std::string_view text);
std::string format_number(const Rational& value);

/// The closed property vocabulary accepted in inline styles.
bool is_known_property(std::string_view property);
/// font-family, font-size, font-weight, color, letter-spacing, line-height, text-align
bool is_font_property(std::string_view property);

/// Splits an inline style into (property, value) pairs. Property names are
/// lowercased, both sides trimmed; separators inside quotes or parentheses
/// are respected.
std::vector<std::pair<std::string, std::string>> split_declarations(std::string_view style);

/// Updates one font property. Throws Error(InvalidStyleValue) on a bad value
/// and Error(UnknownProperty) on a non-font property.
void set_font_property(Font& font, std::string_view property, std::string_view value);

/// Updates one box property (left, top, width, height, z-index,
/// background-color, background-image, border-radius, position) of a node.
void set_box_property(Node& node, std::string_view property, std::string_view value);

/// Parses `url(id)`, `url('id')` or `url("id")`.
std::optional<std::string> parse_url(std::string_view text);
bool is_valid_font_family(std::string_view family);
bool is_valid_id(std::string_view id);

}  // namespace posterforge::typography::css
