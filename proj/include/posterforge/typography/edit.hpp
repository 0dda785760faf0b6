#pragma once

#include "posterforge/core/rational.hpp"
#include "posterforge/typography/document.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace posterforge::typography {

/// Replaces a node's runs. With `inherit_font` every new run takes the font
/// of the node's current first run (or the default font), which is what a
/// plain "change this text" request wants.
struct SetText {
    std::string id;
    std::vector<TextRun> runs;
    bool inherit_font = false;

    bool operator==(const SetText&) const = default;
};

struct Move {
    std::string id;
    Rational dx;
    Rational dy;

    bool operator==(const Move&) const = default;
};

struct Resize {
    std::string id;
    Rational width;
    Rational height;

    bool operator==(const Resize&) const = default;
};

/// Box properties change the node; font properties change every run in
/// the node's subtree.
struct SetStyle {
    std::string id;
    std::string property;
    std::string value;

    bool operator==(const SetStyle&) const = default;
};

/// Appends `node` as the last child of `parent_id`, or as the last top-level
/// node when no parent is given.
struct AddNode {
    std::optional<std::string> parent_id;
    Node node;

    bool operator==(const AddNode&) const = default;
};

struct RemoveNode {
    std::string id;

    bool operator==(const RemoveNode&) const = default;
};

using EditOp = std::variant<SetText, Move, Resize, SetStyle, AddNode, RemoveNode>;

/// Returns the edited copy. Throws UnknownNode, InvalidStyleValue,
/// DuplicateId or InvalidEdit (an edit that would break a document
/// invariant, such as text on a node with children).
PosterDocument apply_edit(const PosterDocument& doc, const EditOp& edit);

std::string_view edit_name(const EditOp& edit);

/// JSON form: {"op":"Move","id":"title","dx":10,"dy":"1/3"}. Lengths are
/// integers or exact strings ("12.5", "1/3"). SetText also accepts
/// {"text":"..."} as shorthand for one run with inherited font.
nlohmann::json edit_to_json(const EditOp& edit);
EditOp edit_from_json(const nlohmann::json& j);

nlohmann::json node_to_json(const Node& node);
Node node_from_json(const nlohmann::json& j);

nlohmann::json rational_to_json(const Rational& value);
Rational rational_from_json(const nlohmann::json& j, std::string_view field);

}  // namespace posterforge::typography
