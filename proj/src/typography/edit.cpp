#include "posterforge/typography/edit.hpp"

#include "posterforge/core/error.hpp"
#include "posterforge/typography/css.hpp"

#include <algorithm>
#include <set>

namespace posterforge::typography {
namespace {

using nlohmann::json;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

[[noreturn]] void bad_edit(const std::string& message) { throw Error(ErrorCode::InvalidEdit, message); }

Node& require_node(PosterDocument& doc, const std::string& id) {
    Node* n = find_node(doc, id);
    if (!n) throw Error(ErrorCode::UnknownNode, "no node with id '" + id + "'", {id});
    return *n;
}

bool remove_from(std::vector<Node>& nodes, std::string_view id) {
    for (auto it = nodes.begin(); it != nodes.end(); ++it) {
        if (it->id == id) {
            nodes.erase(it);
            return true;
        }
        if (remove_from(it->children, id)) return true;
    }
    return false;
}

void check_new_node(const PosterDocument& doc, const Node& node) {
    std::set<std::string, std::less<>> ids;
    for_each_node(doc.nodes, [&](const Node& n) { ids.insert(n.id); });
    std::vector<Node> probe{node};
    for_each_node(probe, [&](const Node& n) {
        if (!css::is_valid_id(n.id)) bad_edit("invalid node id '" + n.id + "'");
        if (!ids.insert(n.id).second) throw Error(ErrorCode::DuplicateId, "duplicate node id '" + n.id + "'", {n.id});
    });
    PosterDocument single;
    single.width = doc.width;
    single.height = doc.height;
    single.nodes = probe;
    auto problems = validate_document(single);
    if (!problems.empty()) bad_edit("invalid node: " + problems.front());
}

void check_runs(const std::vector<TextRun>& runs) {
    for (const auto& run : runs) {
        if (run.text.empty()) bad_edit("text runs must be non-empty");
        if (!run.font.size.is_positive()) bad_edit("font size must be positive");
    }
}

const json& field(const json& j, const char* name) {
    auto it = j.find(name);
    if (it == j.end()) bad_edit(std::string("missing field '") + name + "'");
    return *it;
}

std::string string_field(const json& j, const char* name) {
    const json& v = field(j, name);
    if (!v.is_string()) bad_edit(std::string("field '") + name + "' must be a string");
    return v.get<std::string>();
}

json font_to_json(const Font& f) {
    return {{"family", f.family},
            {"size", rational_to_json(f.size)},
            {"weight", f.weight},
            {"color", f.color},
            {"letter_spacing", rational_to_json(f.letter_spacing)},
            {"line_height", rational_to_json(f.line_height)},
            {"align", std::string(to_string(f.align))}};
}

// Missing fields keep their defaults; values go through the same checks as
// inline styles so JSON edits cannot smuggle in what the parser would refuse.
Font font_from_json(const json& j) {
    Font f;
    if (!j.is_object()) bad_edit("font must be an object");
    for (const auto& [key, value] : j.items()) {
        if (key == "family") css::set_font_property(f, "font-family", value.get<std::string>());
        else if (key == "size") f.size = rational_from_json(value, "size");
        else if (key == "weight") css::set_font_property(f, "font-weight", value.is_number() ? value.dump() : value.get<std::string>());
        else if (key == "color") css::set_font_property(f, "color", value.get<std::string>());
        else if (key == "letter_spacing") f.letter_spacing = rational_from_json(value, "letter_spacing");
        else if (key == "line_height") f.line_height = rational_from_json(value, "line_height");
        else if (key == "align") css::set_font_property(f, "text-align", value.get<std::string>());
        else bad_edit("unknown font field '" + key + "'");
    }
    if (!f.size.is_positive()) bad_edit("font size must be positive");
    if (f.line_height < Rational(1)) bad_edit("line height must be >= 1");
    return f;
}

std::vector<TextRun> runs_from_json(const json& j) {
    if (!j.is_array()) bad_edit("runs must be an array");
    std::vector<TextRun> runs;
    for (const auto& r : j) {
        TextRun run;
        run.text = string_field(r, "text");
        if (auto it = r.find("font"); it != r.end()) run.font = font_from_json(*it);
        runs.push_back(std::move(run));
    }
    return runs;
}

json runs_to_json(const std::vector<TextRun>& runs) {
    json out = json::array();
    for (const auto& r : runs) out.push_back({{"text", r.text}, {"font", font_to_json(r.font)}});
    return out;
}

}  // namespace

PosterDocument apply_edit(const PosterDocument& doc, const EditOp& edit) {
    PosterDocument out = doc;
    std::visit(overloaded{
                   [&](const SetText& e) {
                       Node& n = require_node(out, e.id);
                       if (!n.children.empty()) bad_edit("node '" + e.id + "' has children and cannot hold text");
                       if (n.kind == NodeKind::Img) bad_edit("img node '" + e.id + "' cannot hold text");
                       check_runs(e.runs);
                       const Font inherited = n.runs.empty() ? Font{} : n.runs.front().font;
                       n.runs = e.runs;
                       if (e.inherit_font) {
                           for (auto& r : n.runs) r.font = inherited;
                       }
                   },
                   [&](const Move& e) {
                       Node& n = require_node(out, e.id);
                       n.rect.left += e.dx;
                       n.rect.top += e.dy;
                   },
                   [&](const Resize& e) {
                       Node& n = require_node(out, e.id);
                       if (e.width.is_negative() || e.height.is_negative()) bad_edit("box size must be non-negative");
                       n.rect.width = e.width;
                       n.rect.height = e.height;
                   },
                   [&](const SetStyle& e) {
                       Node& n = require_node(out, e.id);
                       try {
                           if (!css::is_known_property(e.property)) {
                               throw Error(ErrorCode::UnknownProperty, "unknown property", {e.property});
                           }
                           if (css::is_font_property(e.property)) {
                               // Checked on a scratch font so an empty subtree still rejects bad values.
                               Font probe;
                               css::set_font_property(probe, e.property, e.value);
                               std::vector<Node> scope{n};
                               for_each_node(scope, [&](Node& m) {
                                   for (auto& r : m.runs) css::set_font_property(r.font, e.property, e.value);
                               });
                               n = std::move(scope.front());
                           } else {
                               css::set_box_property(n, e.property, e.value);
                           }
                       } catch (const Error& err) {
                           if (err.code() != ErrorCode::InvalidStyleValue && err.code() != ErrorCode::UnknownProperty) throw;
                           throw Error(ErrorCode::InvalidStyleValue,
                                       "invalid style " + e.property + ": " + e.value, {e.property, e.value});
                       }
                   },
                   [&](const AddNode& e) {
                       check_new_node(out, e.node);
                       if (e.parent_id) {
                           Node& parent = require_node(out, *e.parent_id);
                           if (!parent.runs.empty()) bad_edit("node '" + *e.parent_id + "' holds text and cannot have children");
                           if (parent.kind == NodeKind::Img) bad_edit("img node '" + *e.parent_id + "' cannot have children");
                           parent.children.push_back(e.node);
                       } else {
                           out.nodes.push_back(e.node);
                       }
                   },
                   [&](const RemoveNode& e) {
                       if (!remove_from(out.nodes, e.id)) throw Error(ErrorCode::UnknownNode, "no node with id '" + e.id + "'", {e.id});
                   },
               },
               edit);
    return out;
}

std::string_view edit_name(const EditOp& edit) {
    static constexpr std::string_view names[] = {"SetText", "Move", "Resize", "SetStyle", "AddNode", "RemoveNode"};
    return names[edit.index()];
}

json rational_to_json(const Rational& value) {
    if (value.is_integer()) return value.num();
    return value.to_string();
}

Rational rational_from_json(const json& j, std::string_view name) {
    std::optional<Rational> r;
    if (j.is_number_integer()) r = Rational(j.get<std::int64_t>());
    else if (j.is_number_float()) r = Rational::parse(j.dump());
    else if (j.is_string()) r = Rational::parse(j.get<std::string>());
    if (!r) bad_edit("field '" + std::string(name) + "' is not an exact number");
    return *r;
}

json node_to_json(const Node& n) {
    json j = {{"id", n.id},
              {"kind", n.kind == NodeKind::Img ? "img" : "div"},
              {"rect",
               {{"left", rational_to_json(n.rect.left)},
                {"top", rational_to_json(n.rect.top)},
                {"width", rational_to_json(n.rect.width)},
                {"height", rational_to_json(n.rect.height)}}},
              {"z_index", n.z_index}};
    json style = json::object();
    if (n.style.background_color) style["background_color"] = *n.style.background_color;
    if (n.style.background_image) style["background_image"] = *n.style.background_image;
    if (!n.style.border_radius.is_zero()) style["border_radius"] = rational_to_json(n.style.border_radius);
    j["style"] = style;
    if (!n.runs.empty()) j["runs"] = runs_to_json(n.runs);
    if (!n.children.empty()) {
        json children = json::array();
        for (const auto& c : n.children) children.push_back(node_to_json(c));
        j["children"] = children;
    }
    return j;
}

Node node_from_json(const json& j) {
    if (!j.is_object()) bad_edit("node must be an object");
    Node n;
    n.id = string_field(j, "id");
    if (auto it = j.find("kind"); it != j.end()) {
        const std::string kind = it->get<std::string>();
        if (kind == "img") n.kind = NodeKind::Img;
        else if (kind != "div") bad_edit("unknown node kind '" + kind + "'");
    }
    const json& rect = field(j, "rect");
    n.rect.left = rational_from_json(field(rect, "left"), "left");
    n.rect.top = rational_from_json(field(rect, "top"), "top");
    n.rect.width = rational_from_json(field(rect, "width"), "width");
    n.rect.height = rational_from_json(field(rect, "height"), "height");
    if (auto it = j.find("z_index"); it != j.end()) n.z_index = it->get<std::int64_t>();
    if (auto it = j.find("style"); it != j.end()) {
        for (const auto& [key, value] : it->items()) {
            if (key == "background_color") css::set_box_property(n, "background-color", value.get<std::string>());
            else if (key == "background_image") n.style.background_image = value.get<std::string>();
            else if (key == "border_radius") n.style.border_radius = rational_from_json(value, "border_radius");
            else bad_edit("unknown style field '" + key + "'");
        }
    }
    if (auto it = j.find("runs"); it != j.end()) n.runs = runs_from_json(*it);
    if (auto it = j.find("children"); it != j.end()) {
        if (!it->is_array()) bad_edit("children must be an array");
        for (const auto& c : *it) n.children.push_back(node_from_json(c));
    }
    return n;
}

json edit_to_json(const EditOp& edit) {
    json j = {{"op", std::string(edit_name(edit))}};
    std::visit(overloaded{
                   [&](const SetText& e) {
                       j["id"] = e.id;
                       j["runs"] = runs_to_json(e.runs);
                       if (e.inherit_font) j["inherit_font"] = true;
                   },
                   [&](const Move& e) {
                       j["id"] = e.id;
                       j["dx"] = rational_to_json(e.dx);
                       j["dy"] = rational_to_json(e.dy);
                   },
                   [&](const Resize& e) {
                       j["id"] = e.id;
                       j["width"] = rational_to_json(e.width);
                       j["height"] = rational_to_json(e.height);
                   },
                   [&](const SetStyle& e) {
                       j["id"] = e.id;
                       j["property"] = e.property;
                       j["value"] = e.value;
                   },
                   [&](const AddNode& e) {
                       if (e.parent_id) j["parent"] = *e.parent_id;
                       j["node"] = node_to_json(e.node);
                   },
                   [&](const RemoveNode& e) { j["id"] = e.id; },
               },
               edit);
    return j;
}

EditOp edit_from_json(const json& j) {
    if (!j.is_object()) bad_edit("edit must be a JSON object");
    try {
        const std::string op = string_field(j, "op");
        if (op == "SetText") {
            SetText e{string_field(j, "id"), {}, false};
            if (auto it = j.find("text"); it != j.end()) {
                if (!it->is_string()) bad_edit("field 'text' must be a string");
                e.runs = {TextRun{it->get<std::string>(), Font{}}};
                e.inherit_font = true;
            } else {
                e.runs = runs_from_json(field(j, "runs"));
                if (auto inh = j.find("inherit_font"); inh != j.end()) e.inherit_font = inh->get<bool>();
            }
            return e;
        }
        if (op == "Move") return Move{string_field(j, "id"), rational_from_json(field(j, "dx"), "dx"), rational_from_json(field(j, "dy"), "dy")};
        if (op == "Resize") {
            return Resize{string_field(j, "id"), rational_from_json(field(j, "width"), "width"),
                          rational_from_json(field(j, "height"), "height")};
        }
        if (op == "SetStyle") return SetStyle{string_field(j, "id"), string_field(j, "property"), string_field(j, "value")};
        if (op == "AddNode") {
            AddNode e;
            if (auto it = j.find("parent"); it != j.end() && !it->is_null()) e.parent_id = it->get<std::string>();
            e.node = node_from_json(field(j, "node"));
            return e;
        }
        if (op == "RemoveNode") return RemoveNode{string_field(j, "id")};
        bad_edit("unknown edit op '" + op + "'");
    } catch (const json::exception& e) {
        bad_edit(std::string("malformed edit: ") + e.what());
    } catch (const Error& e) {
        if (e.code() == ErrorCode::InvalidStyleValue || e.code() == ErrorCode::UnknownProperty) {
            bad_edit(std::string("malformed edit: ") + e.what());
        }
        throw;
    }
}

}  // namespace posterforge::typography
