#pragma once

#include <array>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "traitlab/discourse.hpp"
#include "traitlab/judging.hpp"

namespace traitlab {

class MetricsError : public std::runtime_error {
public:
    explicit MetricsError(const std::string& what) : std::runtime_error(what) {}
};

/// A verdict referenced a discourse that is not in the run.
class JoinMissError : public MetricsError {
public:
    explicit JoinMissError(const std::string& discourse_id)
        : MetricsError("verdict references unknown discourse: " + discourse_id),
          discourse_id_(discourse_id) {}

    const std::string& discourse_id() const { return discourse_id_; }

private:
    std::string discourse_id_;
};

class NoRowsIncludedError : public MetricsError {
public:
    explicit NoRowsIncludedError(const std::string& what) : MetricsError(what) {}
};

class TooFewRatersError : public MetricsError {
public:
    explicit TooFewRatersError(const std::string& what) : MetricsError(what) {}
};

class RaterCountMismatchError : public MetricsError {
public:
    RaterCountMismatchError(std::size_t row, const std::string& what)
        : MetricsError(what), row_(row) {}

    std::size_t row() const { return row_; }

private:
    std::size_t row_;
};

/// One accuracy cell: a judge's predictions for one trait of one participant
/// under one pairing.
struct TallyScope {
    std::string judge_id;
    std::string pairing_label;
    Speaker participant = Speaker::P1;
    TraitName trait = TraitName::Agreeableness;

    bool operator==(const TallyScope&) const = default;
    auto operator<=>(const TallyScope&) const = default;
};

struct ConfusionTally {
    TallyScope scope;
    std::size_t high_correct = 0;
    std::size_t high_total = 0;
    std::size_t low_correct = 0;
    std::size_t low_total = 0;

    /// Accuracy on assigned-High items; absent when none are in scope.
    std::optional<double> hta() const;
    /// Accuracy on assigned-Low items; absent when none are in scope.
    std::optional<double> lta() const;
    /// Of items predicted at `level`, the share actually assigned `level`.
    std::optional<double> precision(TraitLevel level) const;
    /// Of items assigned `level`, the share predicted `level` (= HTA/LTA).
    std::optional<double> recall(TraitLevel level) const;
};

struct ClassificationAccuracy {
    std::optional<double> hta;
    std::optional<double> lta;
};

ClassificationAccuracy classification_accuracy(const ConfusionTally& tally);

struct ConfusionResult {
    std::vector<ConfusionTally> tallies;  // sorted by scope
    std::size_t invalid_verdicts = 0;     // excluded from every tally
};

/// Joins valid verdicts to their discourse's assigned profiles and counts
/// correct High/Low predictions per scope cell. Throws JoinMissError when a
/// verdict names a discourse not in `discourses`.
ConfusionResult confusion_tally(const std::vector<Discourse>& discourses,
                                const std::vector<JudgeVerdict>& verdicts);

/// One item's per-level vote counts, keyed by (topic id, combo id).
struct RatingRow {
    std::pair<std::string, std::string> item_key;
    std::array<std::size_t, 2> counts = {0, 0};  // [High, Low]

    bool operator==(const RatingRow&) const = default;
};

struct RatingMatrix {
    TraitName trait = TraitName::Agreeableness;
    Speaker participant = Speaker::P1;
    std::vector<RatingRow> rows;  // included rows only; each sums to `raters`
    int raters = 0;               // n
    static constexpr int kCategories = 2;
    std::size_t excluded_rows = 0;
    std::map<std::string, std::size_t> exclusion_reasons;
};

/// One row per discourse item with votes from every judge in
/// `required_judges`; rows missing any required judge's valid verdict are
/// dropped whole (listwise deletion) and counted under a reason. When several
/// verdicts share (judge, discourse, participant) the last one wins. Throws
/// NoRowsIncludedError when nothing survives.
RatingMatrix build_rating_matrix(const std::vector<Discourse>& discourses,
                                 const std::vector<JudgeVerdict>& verdicts, TraitName trait,
                                 Speaker participant, const std::set<std::string>& required_judges);

struct KappaResult {
    TraitName trait = TraitName::Agreeableness;
    Speaker participant = Speaker::P1;
    double kappa = 0.0;  // NaN when degenerate with imperfect agreement
    std::size_t included_rows = 0;  // N
    int raters = 0;                 // n
    /// Chance agreement is 1 (every vote in one category); kappa is then 1
    /// under perfect agreement and undefined otherwise.
    bool degenerate = false;
    std::string band;
};

/// Fleiss' kappa: per-row agreement P_i = (sum_j n_ij^2 - n) / (n(n-1)),
/// observed agreement is the mean P_i, chance agreement sum_j p_j^2 with
/// p_j the category shares, kappa = (observed - chance) / (1 - chance).
/// Throws TooFewRatersError (n < 2) and RaterCountMismatchError (a row not
/// summing to n); an empty matrix throws NoRowsIncludedError.
KappaResult fleiss_kappa(const RatingMatrix& matrix);

/// Bands: <=0 poor, (0,0.20] slight, (0.20,0.40] fair, (0.40,0.60] moderate,
/// (0.60,0.80] substantial, (0.80,1] almost-perfect.
std::string agreement_band(double kappa);

}  // namespace traitlab
