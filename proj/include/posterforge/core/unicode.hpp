#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace posterforge::unicode {

/// Decodes UTF-8 into code points. Throws Error(InvalidArgument) on malformed input.
std::u32string decode_utf8(std::string_view text);
std::string encode_utf8(std::u32string_view text);
void append_utf8(std::string& out, char32_t cp);
bool is_valid_utf8(std::string_view text);

/// CJK ideographs, kana, hangul, CJK punctuation and full-width forms.
bool is_cjk(char32_t cp);
bool is_space(char32_t cp);

/// NFC normalization followed by collapsing every whitespace run to one
/// space and trimming both ends.
std::string normalize_for_matching(std::string_view text);

std::string_view trim(std::string_view text);

}  // namespace posterforge::unicode
