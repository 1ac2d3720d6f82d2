#pragma once

#include <string>
#include <vector>

namespace traitlab {

std::string lowercase_ascii(const std::string& text);
std::string trim(const std::string& text);

/// Stable key from free text: lowercase, non-alphanumeric runs collapse to '-'.
std::string slugify(const std::string& text);

/// Whitespace-delimited token count (the Utterance word_count definition).
std::size_t whitespace_word_count(const std::string& text);

/// Lowercased alphanumeric tokens (apostrophes kept inside words). Used by the
/// similarity screen and the lexicon scorer.
std::vector<std::string> alnum_tokens(const std::string& text);

}  // namespace traitlab
