#include "traitlab/similarity.hpp"

#include <cmath>
#include <map>

#include "traitlab/textutil.hpp"

namespace traitlab {

const std::set<std::string>& default_stopwords() {
    static const std::set<std::string> words = {
        "a",  "an", "and", "are", "as", "at",  "be", "but", "by",  "for", "if",
        "in", "is", "it",  "of",  "on", "or",  "so", "the", "to",  "was", "were",
        "with",
    };
    return words;
}

double tf_cosine_similarity(const std::string& a, const std::string& b,
                            const std::set<std::string>& stopwords) {
    const std::vector<std::string> tokens_a = alnum_tokens(a);
    const std::vector<std::string> tokens_b = alnum_tokens(b);

    std::map<std::string, double> tf_a;
    std::map<std::string, double> tf_b;
    for (const auto& token : tokens_a) {
        if (!stopwords.count(token)) tf_a[token] += 1.0;
    }
    for (const auto& token : tokens_b) {
        if (!stopwords.count(token)) tf_b[token] += 1.0;
    }

    if (tf_a.empty() || tf_b.empty()) {
        return (!tokens_a.empty() && tokens_a == tokens_b) ? 1.0 : 0.0;
    }

    double dot = 0.0;
    for (const auto& [token, count] : tf_a) {
        const auto it = tf_b.find(token);
        if (it != tf_b.end()) dot += count * it->second;
    }
    double norm_a = 0.0;
    double norm_b = 0.0;
    for (const auto& [token, count] : tf_a) norm_a += count * count;
    for (const auto& [token, count] : tf_b) norm_b += count * count;
    return dot / (std::sqrt(norm_a) * std::sqrt(norm_b));
}

SimilarityReport similarity_screen(const Discourse& discourse, double threshold,
                                   const std::set<std::string>& stopwords) {
    SimilarityReport report;
    report.threshold = threshold;
    const auto& utterances = discourse.utterances;
    for (std::size_t i = 0; i < utterances.size(); ++i) {
        for (std::size_t j = i + 1; j < utterances.size(); ++j) {
            const double score =
                tf_cosine_similarity(utterances[i].clean_text, utterances[j].clean_text,
                                     stopwords);
            const std::pair<int, int> key{static_cast<int>(i), static_cast<int>(j)};
            report.pair_scores[key] = score;
            report.max_score = std::max(report.max_score, score);
            if (score >= threshold) report.flagged_pairs.push_back(key);
        }
    }
    return report;
}

}  // namespace traitlab
