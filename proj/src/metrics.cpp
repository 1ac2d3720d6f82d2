#include "traitlab/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace traitlab {

namespace {

std::optional<double> ratio(std::size_t numerator, std::size_t denominator) {
    if (denominator == 0) return std::nullopt;
    return static_cast<double>(numerator) / static_cast<double>(denominator);
}

}  // namespace

std::optional<double> ConfusionTally::hta() const { return ratio(high_correct, high_total); }

std::optional<double> ConfusionTally::lta() const { return ratio(low_correct, low_total); }

std::optional<double> ConfusionTally::precision(TraitLevel level) const {
    // Binary levels: every miss on one side is a prediction on the other.
    if (level == TraitLevel::High) {
        return ratio(high_correct, high_correct + (low_total - low_correct));
    }
    return ratio(low_correct, low_correct + (high_total - high_correct));
}

std::optional<double> ConfusionTally::recall(TraitLevel level) const {
    return level == TraitLevel::High ? hta() : lta();
}

ClassificationAccuracy classification_accuracy(const ConfusionTally& tally) {
    return {tally.hta(), tally.lta()};
}

ConfusionResult confusion_tally(const std::vector<Discourse>& discourses,
                                const std::vector<JudgeVerdict>& verdicts) {
    std::map<std::string, const Discourse*> by_id;
    for (const auto& discourse : discourses) by_id[discourse.id] = &discourse;

    ConfusionResult result;
    std::map<TallyScope, ConfusionTally> cells;
    for (const auto& verdict : verdicts) {
        const auto it = by_id.find(verdict.discourse_id);
        if (it == by_id.end()) throw JoinMissError(verdict.discourse_id);
        if (!verdict.valid) {
            ++result.invalid_verdicts;
            continue;
        }
        const Discourse& discourse = *it->second;
        const TraitProfile& assigned = verdict.participant == Speaker::P1
                                           ? discourse.config.profile_p1
                                           : discourse.config.profile_p2;
        for (const TraitName trait : kAllTraits) {
            const TallyScope scope{verdict.judge_id, discourse.config.pairing_label,
                                   verdict.participant, trait};
            auto& tally = cells[scope];
            tally.scope = scope;
            const bool correct = verdict.predicted.level(trait) == assigned.level(trait);
            if (assigned.level(trait) == TraitLevel::High) {
                ++tally.high_total;
                if (correct) ++tally.high_correct;
            } else {
                ++tally.low_total;
                if (correct) ++tally.low_correct;
            }
        }
    }
    result.tallies.reserve(cells.size());
    for (auto& [scope, tally] : cells) result.tallies.push_back(std::move(tally));
    return result;
}

RatingMatrix build_rating_matrix(const std::vector<Discourse>& discourses,
                                 const std::vector<JudgeVerdict>& verdicts, TraitName trait,
                                 Speaker participant,
                                 const std::set<std::string>& required_judges) {
    RatingMatrix matrix;
    matrix.trait = trait;
    matrix.participant = participant;
    matrix.raters = static_cast<int>(required_judges.size());

    // Last verdict per (judge, discourse) wins, so a re-judge supersedes.
    std::map<std::pair<std::string, std::string>, const JudgeVerdict*> latest;
    for (const auto& verdict : verdicts) {
        if (verdict.participant != participant) continue;
        if (!required_judges.count(verdict.judge_id)) continue;
        latest[{verdict.judge_id, verdict.discourse_id}] = &verdict;
    }

    for (const auto& discourse : discourses) {
        RatingRow row;
        row.item_key = {discourse.config.topic.id, discourse.config.combo_id};
        std::string exclusion;
        for (const auto& judge_id : required_judges) {
            const auto it = latest.find({judge_id, discourse.id});
            if (it == latest.end()) {
                exclusion = "missing_verdict";
                break;
            }
            if (!it->second->valid) {
                exclusion = "invalid_verdict";
                break;
            }
            const TraitLevel level = it->second->predicted.level(trait);
            ++row.counts[level == TraitLevel::High ? 0 : 1];
        }
        if (!exclusion.empty()) {
            ++matrix.excluded_rows;
            ++matrix.exclusion_reasons[exclusion];
            continue;
        }
        matrix.rows.push_back(std::move(row));
    }

    if (matrix.rows.empty()) {
        throw NoRowsIncludedError("no discourse has valid verdicts from every required judge");
    }
    return matrix;
}

KappaResult fleiss_kappa(const RatingMatrix& matrix) {
    if (matrix.rows.empty()) throw NoRowsIncludedError("rating matrix has no included rows");
    if (matrix.raters < 2) {
        throw TooFewRatersError("Fleiss' kappa needs at least 2 raters, got " +
                                std::to_string(matrix.raters));
    }

    const std::size_t N = matrix.rows.size();
    const std::size_t n = static_cast<std::size_t>(matrix.raters);

    // Integer accumulation keeps the arithmetic exact until the final
    // divisions: sum of squared counts for observed agreement, per-category
    // column sums for chance agreement.
    std::size_t square_sum = 0;
    std::array<std::size_t, 2> column = {0, 0};
    for (std::size_t i = 0; i < N; ++i) {
        const auto& row = matrix.rows[i];
        const std::size_t row_sum = row.counts[0] + row.counts[1];
        if (row_sum != n) {
            throw RaterCountMismatchError(i, "row " + std::to_string(i) + " sums to " +
                                                 std::to_string(row_sum) + ", expected " +
                                                 std::to_string(n));
        }
        square_sum += row.counts[0] * row.counts[0] + row.counts[1] * row.counts[1];
        column[0] += row.counts[0];
        column[1] += row.counts[1];
    }

    KappaResult result;
    result.trait = matrix.trait;
    result.participant = matrix.participant;
    result.included_rows = N;
    result.raters = matrix.raters;

    const double observed = static_cast<double>(square_sum - N * n) /
                            static_cast<double>(N * n * (n - 1));
    const double total = static_cast<double>(N * n);
    const double chance = (static_cast<double>(column[0]) * column[0] +
                           static_cast<double>(column[1]) * column[1]) /
                          (total * total);

    if (column[0] == 0 || column[1] == 0) {
        // Every vote in one category: chance agreement is exactly 1 and the
        // formula divides by zero. All rows are then unanimous, so this
        // resolves to perfect agreement, flagged as degenerate.
        result.degenerate = true;
        if (observed == 1.0) {
            result.kappa = 1.0;
            result.band = agreement_band(1.0);
        } else {
            result.kappa = std::numeric_limits<double>::quiet_NaN();
            result.band = "degenerate";
        }
        return result;
    }

    result.kappa = (observed - chance) / (1.0 - chance);
    result.band = agreement_band(result.kappa);
    return result;
}

std::string agreement_band(double kappa) {
    if (kappa <= 0.0) return "poor";
    if (kappa <= 0.20) return "slight";
    if (kappa <= 0.40) return "fair";
    if (kappa <= 0.60) return "moderate";
    if (kappa <= 0.80) return "substantial";
    return "almost-perfect";
}

}  // namespace traitlab
