#pragma once

#include "posterforge/blueprint.hpp"
#include "posterforge/core/error.hpp"
#include "posterforge/typography/document.hpp"

#include <string>
#include <string_view>

namespace posterforge::typography {

/// Parses the PosterHTML dialect:
///
///   <div class="poster" style="width:..;height:..[;background-color|background-image]">
///     <div id=".." style="position:absolute;left;top;width;height;...">
///       <span style="font-...">text</span> ...
///     </div>
///     <img id=".." src="image-id" style="position:absolute;...">
///   </div>
///
/// Font properties declared on a div are inherited by the spans below it.
/// Whitespace-only text between tags outside spans is formatting and is
/// dropped; text inside spans is kept byte for byte (after entity decoding).
/// Nodes without an id get "n1", "n2", ... in pre-order.
Parsed<PosterDocument> parse_poster_html_with_warnings(std::string_view text, ParseMode mode = ParseMode::Strict);
PosterDocument parse_poster_html(std::string_view text, ParseMode mode = ParseMode::Strict);

/// Canonical PosterHTML: fixed property order, every run fully specified,
/// no whitespace between tags.
std::string serialize_poster(const PosterDocument& doc);

std::string escape_text(std::string_view text);
std::string escape_attribute(std::string_view text);
std::string decode_entities(std::string_view text);

}  // namespace posterforge::typography
