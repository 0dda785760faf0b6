#include "posterforge/blueprint.hpp"

#include "posterforge/core/unicode.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <regex>

namespace posterforge {
namespace {

using nlohmann::json;

[[noreturn]] void schema_violation(const std::string& path, const std::string& reason) {
    throw Error(ErrorCode::SchemaViolation, "schema violation at " + path + ": " + reason, {path, reason});
}

struct Reader {
    ParseMode mode;
    std::vector<Warning> warnings;

    void check_keys(const json& obj, const std::string& path, std::initializer_list<std::string_view> known) {
        for (const auto& [key, _] : obj.items()) {
            if (std::find(known.begin(), known.end(), key) != known.end()) continue;
            std::string where = path.empty() ? key : path + "." + key;
            if (mode == ParseMode::Strict) schema_violation(where, "unknown key");
            warnings.push_back({"unknown-key", 0, "ignored unknown key " + where});
        }
    }

    const json& object_at(const json& parent, const std::string& key, const std::string& path) {
        auto it = parent.find(key);
        if (it == parent.end()) schema_violation(path, "required object missing");
        if (!it->is_object()) schema_violation(path, "expected an object");
        return *it;
    }

    std::string string_at(const json& parent, const std::string& key, const std::string& path, bool required) {
        auto it = parent.find(key);
        if (it == parent.end() || it->is_null()) {
            if (required) schema_violation(path, "required string missing");
            return {};
        }
        if (!it->is_string()) schema_violation(path, "expected a string");
        return it->get<std::string>();
    }

    std::vector<std::string> string_list_at(const json& parent, const std::string& key, const std::string& path) {
        std::vector<std::string> out;
        auto it = parent.find(key);
        if (it == parent.end() || it->is_null()) return out;
        if (!it->is_array()) schema_violation(path, "expected an array");
        for (std::size_t i = 0; i < it->size(); ++i) {
            const auto& item = (*it)[i];
            if (!item.is_string()) schema_violation(path + "[" + std::to_string(i) + "]", "expected a string");
            out.push_back(item.get<std::string>());
        }
        return out;
    }

    std::int64_t integer_at(const json& parent, const std::string& key, const std::string& path) {
        auto it = parent.find(key);
        if (it == parent.end()) schema_violation(path, "required integer missing");
        if (!it->is_number_integer()) schema_violation(path, "expected an integer");
        return it->get<std::int64_t>();
    }
};

json to_json(const DesignBlueprint& bp) {
    json textual = {
        {"title", bp.textual.title},
        {"body", bp.textual.body},
        {"contact", bp.textual.contact},
    };
    if (bp.textual.subtitle) textual["subtitle"] = *bp.textual.subtitle;

    std::vector<std::string> colors;
    colors.reserve(bp.params.colors.size());
    for (const auto& c : bp.params.colors) {
        std::string upper = c;
        std::transform(upper.begin(), upper.end(), upper.begin(), [](unsigned char ch) { return std::toupper(ch); });
        colors.push_back(std::move(upper));
    }

    return json{
        {"textual_content", textual},
        {"background", {{"style", std::string(to_string(bp.background.style))}, {"caption", bp.background.caption}}},
        {"key_parameters",
         {
             {"resolution", {{"width", bp.params.resolution.width}, {"height", bp.params.resolution.height}}},
             {"theme", bp.params.theme},
             {"elements", bp.params.elements},
             {"colors", colors},
             {"purpose", bp.params.purpose},
         }},
    };
}

void check_list(const std::vector<std::string>& items, const std::string& path, std::vector<Violation>& out) {
    for (std::size_t i = 0; i < items.size(); ++i) {
        std::string where = path + "[" + std::to_string(i) + "]";
        if (items[i].empty()) out.push_back({where, "empty string"});
        else if (!unicode::is_valid_utf8(items[i])) out.push_back({where, "invalid UTF-8"});
    }
}

void check_text(const std::string& value, const std::string& path, std::vector<Violation>& out) {
    if (value.empty()) out.push_back({path, "must be non-empty"});
    else if (!unicode::is_valid_utf8(value)) out.push_back({path, "invalid UTF-8"});
}

void check_dimension(std::int64_t value, const std::string& path, std::vector<Violation>& out) {
    if (value < kMinResolution) out.push_back({path, "below minimum " + std::to_string(kMinResolution)});
    else if (value > kMaxResolution) out.push_back({path, "above maximum " + std::to_string(kMaxResolution)});
}

}  // namespace

std::string_view to_string(DetailLevel level) {
    switch (level) {
        case DetailLevel::Basic: return "basic";
        case DetailLevel::Medium: return "medium";
        case DetailLevel::Detailed: return "detailed";
    }
    return "basic";
}

std::optional<DetailLevel> detail_level_from_string(std::string_view text) {
    if (text == "basic") return DetailLevel::Basic;
    if (text == "medium") return DetailLevel::Medium;
    if (text == "detailed") return DetailLevel::Detailed;
    return std::nullopt;
}

std::string_view to_string(StyleId style) {
    switch (style) {
        case StyleId::Illustrative: return "Illustrative";
        case StyleId::DesignOriented: return "Design-Oriented";
        case StyleId::Minimalistic: return "Minimalistic";
        case StyleId::Photorealistic: return "Photorealistic";
    }
    return "Minimalistic";
}

std::optional<StyleId> style_from_string(std::string_view text) {
    for (StyleId s : kAllStyles) {
        if (to_string(s) == text) return s;
    }
    return std::nullopt;
}

bool is_valid_locale(std::string_view tag) {
    // language[-script][-region][-variant...], checked for shape only.
    static const std::regex kTag(R"(^[A-Za-z]{2,3}(-[A-Za-z]{4})?(-([A-Za-z]{2}|[0-9]{3}))?(-([A-Za-z0-9]{5,8}|[0-9][A-Za-z0-9]{3}))*$)");
    return std::regex_match(tag.begin(), tag.end(), kTag);
}

void validate_requirement(const UserRequirement& req) {
    if (unicode::trim(req.text).empty()) {
        throw Error(ErrorCode::InvalidRequirement, "requirement text is empty", {"text"});
    }
    if (!unicode::is_valid_utf8(req.text)) throw Error(ErrorCode::InvalidRequirement, "requirement is not UTF-8", {"text"});
    if (!is_valid_locale(req.locale)) {
        throw Error(ErrorCode::InvalidRequirement, "invalid locale tag '" + req.locale + "'", {"locale"});
    }
    if (req.canonical_key && req.canonical_key->empty()) {
        throw Error(ErrorCode::InvalidRequirement, "canonical key is empty", {"canonical_key"});
    }
}

std::vector<std::string> TextualContent::strings() const {
    std::vector<std::string> out;
    if (!title.empty()) out.push_back(title);
    if (subtitle && !subtitle->empty()) out.push_back(*subtitle);
    for (const auto& s : body) {
        if (!s.empty()) out.push_back(s);
    }
    for (const auto& s : contact) {
        if (!s.empty()) out.push_back(s);
    }
    return out;
}

bool is_hex_color(std::string_view text) {
    if (text.size() != 7 || text[0] != '#') return false;
    return std::all_of(text.begin() + 1, text.end(), [](unsigned char c) { return std::isxdigit(c) != 0; });
}

std::string normalize_hex_color(std::string_view text) {
    if (!is_hex_color(text)) throw Error(ErrorCode::InvalidColor, "invalid color '" + std::string(text) + "'", {std::string(text)});
    std::string out(text);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::toupper(c); });
    return out;
}

std::vector<Violation> validate_blueprint(const DesignBlueprint& bp) {
    std::vector<Violation> out;
    check_text(bp.textual.title, "textual.title", out);
    if (bp.textual.subtitle) check_text(*bp.textual.subtitle, "textual.subtitle", out);
    check_list(bp.textual.body, "textual.body", out);
    check_list(bp.textual.contact, "textual.contact", out);
    check_text(bp.background.caption, "background.caption", out);
    check_dimension(bp.params.resolution.width, "params.resolution.width", out);
    check_dimension(bp.params.resolution.height, "params.resolution.height", out);
    if (!unicode::is_valid_utf8(bp.params.theme)) out.push_back({"params.theme", "invalid UTF-8"});
    if (!unicode::is_valid_utf8(bp.params.purpose)) out.push_back({"params.purpose", "invalid UTF-8"});
    check_list(bp.params.elements, "params.elements", out);
    for (std::size_t i = 0; i < bp.params.colors.size(); ++i) {
        if (!is_hex_color(bp.params.colors[i])) {
            out.push_back({"params.colors[" + std::to_string(i) + "]", "not a #RRGGBB color"});
        }
    }
    return out;
}

Parsed<DesignBlueprint> parse_blueprint_with_warnings(std::string_view text, ParseMode mode) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::MalformedDocument, std::string("malformed blueprint document: ") + e.what());
    }
    if (!doc.is_object()) throw Error(ErrorCode::MalformedDocument, "blueprint document must be a JSON object");

    Reader r{mode, {}};
    r.check_keys(doc, "", {"textual_content", "background", "key_parameters"});

    DesignBlueprint bp;

    const json& textual = r.object_at(doc, "textual_content", "textual_content");
    r.check_keys(textual, "textual_content", {"title", "subtitle", "body", "contact"});
    bp.textual.title = r.string_at(textual, "title", "textual_content.title", true);
    if (auto it = textual.find("subtitle"); it != textual.end() && !it->is_null()) {
        std::string subtitle = r.string_at(textual, "subtitle", "textual_content.subtitle", false);
        if (!subtitle.empty()) {
            bp.textual.subtitle = std::move(subtitle);
        } else if (mode == ParseMode::Strict) {
            schema_violation("textual_content.subtitle", "must be non-empty when present");
        } else {
            r.warnings.push_back({"empty-subtitle", 0, "treated empty subtitle as absent"});
        }
    }
    bp.textual.body = r.string_list_at(textual, "body", "textual_content.body");
    bp.textual.contact = r.string_list_at(textual, "contact", "textual_content.contact");

    const json& background = r.object_at(doc, "background", "background");
    r.check_keys(background, "background", {"style", "caption"});
    std::string style = r.string_at(background, "style", "background.style", true);
    auto style_id = style_from_string(style);
    if (!style_id) schema_violation("background.style", "unknown style '" + style + "'");
    bp.background.style = *style_id;
    bp.background.caption = r.string_at(background, "caption", "background.caption", true);

    const json& params = r.object_at(doc, "key_parameters", "key_parameters");
    r.check_keys(params, "key_parameters", {"resolution", "theme", "elements", "colors", "purpose"});
    const json& res = r.object_at(params, "resolution", "key_parameters.resolution");
    r.check_keys(res, "key_parameters.resolution", {"width", "height"});
    bp.params.resolution.width = r.integer_at(res, "width", "key_parameters.resolution.width");
    bp.params.resolution.height = r.integer_at(res, "height", "key_parameters.resolution.height");
    bp.params.theme = r.string_at(params, "theme", "key_parameters.theme", false);
    bp.params.elements = r.string_list_at(params, "elements", "key_parameters.elements");
    for (const auto& c : r.string_list_at(params, "colors", "key_parameters.colors")) {
        bp.params.colors.push_back(normalize_hex_color(c));
    }
    bp.params.purpose = r.string_at(params, "purpose", "key_parameters.purpose", false);

    if (auto violations = validate_blueprint(bp); !violations.empty()) {
        std::vector<std::string> details;
        for (const auto& v : violations) details.push_back(v.path + ": " + v.reason);
        throw Error(ErrorCode::SchemaViolation,
                    "schema violation at " + violations.front().path + ": " + violations.front().reason,
                    std::move(details));
    }
    return {std::move(bp), std::move(r.warnings)};
}

DesignBlueprint parse_blueprint(std::string_view text, ParseMode mode) {
    return parse_blueprint_with_warnings(text, mode).value;
}

std::string serialize_blueprint(const DesignBlueprint& bp) { return to_json(bp).dump(); }

}  // namespace posterforge
