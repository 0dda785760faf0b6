#include "posterforge/typography/css.hpp"

#include "posterforge/blueprint.hpp"
#include "posterforge/core/error.hpp"
#include "posterforge/core/unicode.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>

namespace posterforge::typography::css {
namespace {

constexpr std::array<std::string_view, 16> kProperties = {
    "position", "left", "top", "width", "height", "z-index", "background-color", "background-image",
    "border-radius", "font-family", "font-size", "font-weight", "color", "letter-spacing", "line-height", "text-align",
};

constexpr std::array<std::string_view, 7> kFontProperties = {
    "font-family", "font-size", "font-weight", "color", "letter-spacing", "line-height", "text-align",
};

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

bool strip_suffix(std::string_view& s, std::string_view suffix) {
    if (s.size() < suffix.size()) return false;
    auto tail = s.substr(s.size() - suffix.size());
    if (lower(tail) != suffix) return false;
    s.remove_suffix(suffix.size());
    return true;
}

// calc(<num><unit>/<int>) with unit being "px" or "" depending on the caller.
std::optional<Rational> parse_calc(std::string_view text, std::string_view unit) {
    if (text.size() < 6 || lower(text.substr(0, 5)) != "calc(" || text.back() != ')') return std::nullopt;
    auto inner = unicode::trim(text.substr(5, text.size() - 6));
    auto slash = inner.find('/');
    if (slash == std::string_view::npos) return std::nullopt;
    auto lhs = unicode::trim(inner.substr(0, slash));
    auto rhs = unicode::trim(inner.substr(slash + 1));
    if (!unit.empty() && !strip_suffix(lhs, unit)) return std::nullopt;
    auto n = Rational::parse(lhs);
    auto d = Rational::parse(rhs);
    if (!n || !d || !d->is_positive() || lhs.find('/') != std::string_view::npos || rhs.find('/') != std::string_view::npos) {
        return std::nullopt;
    }
    try {
        return *n / *d;
    } catch (const Error&) {
        return std::nullopt;
    }
}

[[noreturn]] void bad_value(std::string_view property, std::string_view value) {
    throw Error(ErrorCode::InvalidStyleValue,
                "invalid value '" + std::string(value) + "' for " + std::string(property),
                {std::string(property), std::string(value)});
}

Rational require_length(std::string_view property, std::string_view value) {
    auto v = parse_length(value);
    if (!v) bad_value(property, value);
    return *v;
}

}  // namespace

std::optional<Rational> parse_length(std::string_view text) {
    text = unicode::trim(text);
    if (auto calc = parse_calc(text, "px")) return calc;
    if (text == "0") return Rational(0);
    if (!strip_suffix(text, "px")) return std::nullopt;
    if (text.find('/') != std::string_view::npos) return std::nullopt;
    return Rational::parse(text);
}

std::string format_length(const Rational& value) {
    if (value.has_terminating_decimal()) return value.to_string() + "px";
    return "calc(" + std::to_string(value.num()) + "px/" + std::to_string(value.den()) + ")";
}

std::optional<Rational> parse_number(std::string_view text) {
    text = unicode::trim(text);
    if (auto calc = parse_calc(text, "")) return calc;
    if (text.find('/') != std::string_view::npos) return std::nullopt;
    return Rational::parse(text);
}

std::string format_number(const Rational& value) {
    if (value.has_terminating_decimal()) return value.to_string();
    return "calc(" + std::to_string(value.num()) + "/" + std::to_string(value.den()) + ")";
}

bool is_known_property(std::string_view property) {
    return std::find(kProperties.begin(), kProperties.end(), property) != kProperties.end();
}

bool is_font_property(std::string_view property) {
    return std::find(kFontProperties.begin(), kFontProperties.end(), property) != kFontProperties.end();
}

std::vector<std::pair<std::string, std::string>> split_declarations(std::string_view style) {
    std::vector<std::pair<std::string, std::string>> out;
    std::vector<std::string_view> decls;
    char quote = 0;
    int depth = 0;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= style.size(); ++i) {
        char c = i < style.size() ? style[i] : ';';
        if (quote) {
            if (c == quote) quote = 0;
            continue;
        }
        if (c == '\'' || c == '"') quote = c;
        else if (c == '(') ++depth;
        else if (c == ')') depth = std::max(0, depth - 1);
        else if (c == ';' && depth == 0) {
            decls.push_back(style.substr(start, i - start));
            start = i + 1;
        }
    }
    for (auto decl : decls) {
        decl = unicode::trim(decl);
        if (decl.empty()) continue;
        auto colon = decl.find(':');
        if (colon == std::string_view::npos) {
            out.emplace_back(lower(decl), std::string());
            continue;
        }
        out.emplace_back(lower(unicode::trim(decl.substr(0, colon))), std::string(unicode::trim(decl.substr(colon + 1))));
    }
    return out;
}

std::optional<std::string> parse_url(std::string_view text) {
    text = unicode::trim(text);
    if (text.size() < 5 || lower(text.substr(0, 4)) != "url(" || text.back() != ')') return std::nullopt;
    auto inner = unicode::trim(text.substr(4, text.size() - 5));
    if (inner.size() >= 2 && (inner.front() == '\'' || inner.front() == '"') && inner.back() == inner.front()) {
        inner = inner.substr(1, inner.size() - 2);
    }
    if (!is_valid_id(inner)) return std::nullopt;
    return std::string(inner);
}

bool is_valid_font_family(std::string_view family) {
    if (unicode::trim(family).empty() || unicode::trim(family).size() != family.size()) return false;
    return std::none_of(family.begin(), family.end(), [](char c) {
        return c == ';' || c == '"' || c == '<' || c == '>' || c == '{' || c == '}' || c == '&' || c == '\n' || c == '\r';
    });
}

bool is_valid_id(std::string_view id) {
    if (id.empty()) return false;
    return std::none_of(id.begin(), id.end(), [](unsigned char c) {
        return std::isspace(c) || c == '"' || c == '\'' || c == '<' || c == '>' || c == '&' || c == '(' || c == ')' ||
               c == ';';
    });
}

void set_font_property(Font& font, std::string_view property, std::string_view value) {
    std::string prop = lower(property);
    value = unicode::trim(value);
    if (prop == "font-family") {
        if (!is_valid_font_family(value)) bad_value(prop, value);
        font.family = std::string(value);
    } else if (prop == "font-size") {
        Rational v = require_length(prop, value);
        if (!v.is_positive()) bad_value(prop, value);
        font.size = v;
    } else if (prop == "font-weight") {
        std::string v = lower(value);
        if (v == "400" || v == "normal") font.weight = 400;
        else if (v == "700" || v == "bold") font.weight = 700;
        else bad_value(prop, value);
    } else if (prop == "color") {
        if (!is_hex_color(value)) bad_value(prop, value);
        font.color = normalize_hex_color(value);
    } else if (prop == "letter-spacing") {
        if (lower(value) == "normal") font.letter_spacing = 0;
        else font.letter_spacing = require_length(prop, value);
    } else if (prop == "line-height") {
        auto v = parse_number(value);
        if (!v || *v < Rational(1)) bad_value(prop, value);
        font.line_height = *v;
    } else if (prop == "text-align") {
        std::string v = lower(value);
        if (v == "left" || v == "start") font.align = TextAlign::Left;
        else if (v == "center") font.align = TextAlign::Center;
        else if (v == "right" || v == "end") font.align = TextAlign::Right;
        else bad_value(prop, value);
    } else {
        throw Error(ErrorCode::UnknownProperty, "not a font property: " + prop, {prop});
    }
}

void set_box_property(Node& node, std::string_view property, std::string_view value) {
    std::string prop = lower(property);
    value = unicode::trim(value);
    if (prop == "position") {
        if (lower(value) != "absolute") bad_value(prop, value);
    } else if (prop == "left") {
        node.rect.left = require_length(prop, value);
    } else if (prop == "top") {
        node.rect.top = require_length(prop, value);
    } else if (prop == "width" || prop == "height") {
        Rational v = require_length(prop, value);
        if (v.is_negative()) bad_value(prop, value);
        (prop == "width" ? node.rect.width : node.rect.height) = v;
    } else if (prop == "z-index") {
        std::int64_t z = 0;
        auto r = std::from_chars(value.data(), value.data() + value.size(), z);
        if (r.ec != std::errc{} || r.ptr != value.data() + value.size()) bad_value(prop, value);
        node.z_index = z;
    } else if (prop == "background-color") {
        if (lower(value) == "transparent" || lower(value) == "none") node.style.background_color.reset();
        else if (!is_hex_color(value)) bad_value(prop, value);
        else node.style.background_color = normalize_hex_color(value);
    } else if (prop == "background-image") {
        if (lower(value) == "none") {
            if (node.kind == NodeKind::Img) bad_value(prop, value);
            node.style.background_image.reset();
        } else {
            auto url = parse_url(value);
            if (!url) bad_value(prop, value);
            node.style.background_image = *url;
        }
    } else if (prop == "border-radius") {
        Rational v = require_length(prop, value);
        if (v.is_negative()) bad_value(prop, value);
        node.style.border_radius = v;
    } else {
        throw Error(ErrorCode::UnknownProperty, "not a box property: " + prop, {prop});
    }
}

}  // namespace posterforge::typography::css
