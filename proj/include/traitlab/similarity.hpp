#pragma once

#include <set>
#include <string>

#include "traitlab/discourse.hpp"

namespace traitlab {

/// Small built-in stopword list; callers may pass their own set instead.
const std::set<std::string>& default_stopwords();

/// Cosine similarity of term-frequency vectors over lowercased alphanumeric
/// tokens with stopwords removed. When filtering empties either side, falls
/// back to exact token-sequence equality: identical non-empty texts score
/// 1.0, anything else 0.0.
double tf_cosine_similarity(const std::string& a, const std::string& b,
                            const std::set<std::string>& stopwords);

/// Scores every utterance pair (i, j), i < j, and flags pairs at or above
/// `threshold`. max_score is 0 when there are fewer than two utterances.
SimilarityReport similarity_screen(const Discourse& discourse, double threshold,
                                   const std::set<std::string>& stopwords = default_stopwords());

}  // namespace traitlab
