#pragma once

#include <string>
#include <string_view>
#include <vector>

// UTF-8 helpers shared by the header parser and the featurizer.
namespace holmes::text {

// Replaces every ill-formed UTF-8 sequence with U+FFFD.
std::string sanitize_utf8(std::string_view in);

// Lowercases ASCII, Latin-1, Latin Extended-A, Greek and Cyrillic letters;
// other code points pass through unchanged.
std::string to_lower(std::string_view in);

std::string ascii_lower(std::string_view in);

// True for letters and digits. Non-ASCII code points count as alphanumeric
// unless they fall in a punctuation, symbol, space or emoji block.
bool is_alnum(char32_t cp);

// Lowercased runs of alphanumeric code points; everything else separates.
std::vector<std::string> word_tokens(std::string_view in);

// Lowercased alphanumeric runs joined by '-'; "" when there are none.
std::string slugify(std::string_view in);

std::string_view trim(std::string_view in);

}  // namespace holmes::text
