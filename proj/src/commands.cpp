#include "traitlab/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <thread>
#include <tuple>
#include <vector>

#include "traitlab/config.hpp"
#include "traitlab/corpus_stats.hpp"
#include "traitlab/dialogue.hpp"
#include "traitlab/jsonl.hpp"
#include "traitlab/lexicon.hpp"
#include "traitlab/metrics.hpp"
#include "traitlab/run_store.hpp"
#include "traitlab/similarity.hpp"
#include "traitlab/textutil.hpp"

namespace traitlab {

namespace {

namespace fs = std::filesystem;

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string escaped = "\"";
    for (const char c : field) {
        if (c == '"') escaped += "\"\"";
        else escaped.push_back(c);
    }
    escaped += "\"";
    return escaped;
}

std::string csv_row(const std::vector<std::string>& fields) {
    std::string row;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i > 0) row += ",";
        row += csv_escape(fields[i]);
    }
    row += "\n";
    return row;
}

std::string optional_field(const std::optional<double>& value) {
    return value ? format_double(*value) : std::string();
}

std::string derive_run_id(const RunConfig& config, const std::string& out_dir) {
    if (!config.run_id.empty()) return config.run_id;
    fs::path out(out_dir);
    std::string name = out.filename().string();
    if (name.empty()) name = out.parent_path().filename().string();
    return name.empty() ? "run" : name;
}

std::string read_file_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

PromptTemplates templates_for(const RunConfig& config) {
    PromptTemplates templates = config.prompts_dir.empty()
                                    ? PromptTemplates::builtin()
                                    : PromptTemplates::load_dir(config.prompts_dir);
    templates.validate();
    return templates;
}

bool is_degenerate(const SimilarityReport& report, std::size_t utterance_count) {
    return report.flagged_adjacent_fraction(utterance_count) >= 0.30;
}

/// Maps thrown errors to the shared exit codes, printing the message.
template <typename Body>
int run_command(std::ostream& err, Body body) {
    try {
        return body();
    } catch (const MissingInputError& e) {
        err << "error: " << e.what() << "\n";
        return kExitMissingInput;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitConfigError;
    }
}

struct MetricsContext {
    RunPaths paths;
    std::vector<Discourse> discourses;
    std::vector<JudgeVerdict> verdicts;
    bool verdicts_loaded = false;
};

void write_hta_lta_reports(const MetricsContext& context, std::ostream& out) {
    const ConfusionResult result = confusion_tally(context.discourses, context.verdicts);

    std::string csv = csv_row({"judge_id", "pairing_label", "participant", "trait",
                               "high_correct", "high_total", "low_correct", "low_total", "hta",
                               "lta", "precision_high", "recall_high", "precision_low",
                               "recall_low"});
    nlohmann::json cells = nlohmann::json::array();
    for (const auto& tally : result.tallies) {
        csv += csv_row({tally.scope.judge_id, tally.scope.pairing_label,
                        to_string(tally.scope.participant), to_string(tally.scope.trait),
                        std::to_string(tally.high_correct), std::to_string(tally.high_total),
                        std::to_string(tally.low_correct), std::to_string(tally.low_total),
                        optional_field(tally.hta()), optional_field(tally.lta()),
                        optional_field(tally.precision(TraitLevel::High)),
                        optional_field(tally.recall(TraitLevel::High)),
                        optional_field(tally.precision(TraitLevel::Low)),
                        optional_field(tally.recall(TraitLevel::Low))});
        nlohmann::json cell = {
            {"judge_id", tally.scope.judge_id},
            {"pairing_label", tally.scope.pairing_label},
            {"participant", to_string(tally.scope.participant)},
            {"trait", to_string(tally.scope.trait)},
            {"high_correct", tally.high_correct},
            {"high_total", tally.high_total},
            {"low_correct", tally.low_correct},
            {"low_total", tally.low_total},
        };
        if (const auto hta = tally.hta()) cell["hta"] = *hta;
        if (const auto lta = tally.lta()) cell["lta"] = *lta;
        if (const auto p = tally.precision(TraitLevel::High)) cell["precision_high"] = *p;
        if (const auto r = tally.recall(TraitLevel::High)) cell["recall_high"] = *r;
        if (const auto p = tally.precision(TraitLevel::Low)) cell["precision_low"] = *p;
        if (const auto r = tally.recall(TraitLevel::Low)) cell["recall_low"] = *r;
        cells.push_back(std::move(cell));
    }
    const nlohmann::json summary = {{"schema_version", kSchemaVersion},
                                    {"invalid_verdicts", result.invalid_verdicts},
                                    {"cells", cells}};

    write_text_atomic(context.paths.reports_dir() / "hta_lta.csv", csv);
    write_text_atomic(context.paths.reports_dir() / "hta_lta.json", summary.dump(2) + "\n");
    out << "hta-lta: " << result.tallies.size() << " cells, " << result.invalid_verdicts
        << " invalid verdicts excluded\n";
}

void write_kappa_reports(const MetricsContext& context, std::ostream& out, std::ostream& err) {
    std::set<std::string> judge_ids;
    for (const auto& verdict : context.verdicts) judge_ids.insert(verdict.judge_id);

    const std::string pairing_label = context.discourses.empty()
                                          ? std::string()
                                          : context.discourses.front().config.pairing_label;
    std::string csv = csv_row({"pairing_label", "participant", "trait", "kappa", "band",
                               "included_rows", "excluded_rows", "raters", "degenerate"});
    nlohmann::json rows = nlohmann::json::array();

    if (judge_ids.size() < 2) {
        err << "warning: kappa needs at least 2 judges, found " << judge_ids.size() << "\n";
    } else {
        for (const Speaker participant : {Speaker::P1, Speaker::P2}) {
            for (const TraitName trait : kAllTraits) {
                nlohmann::json row = {{"pairing_label", pairing_label},
                                      {"participant", to_string(participant)},
                                      {"trait", to_string(trait)}};
                try {
                    const RatingMatrix matrix = build_rating_matrix(
                        context.discourses, context.verdicts, trait, participant, judge_ids);
                    const KappaResult result = fleiss_kappa(matrix);
                    const bool has_value = !std::isnan(result.kappa);
                    csv += csv_row({pairing_label, to_string(participant), to_string(trait),
                                    has_value ? format_double(result.kappa) : std::string(),
                                    result.band, std::to_string(result.included_rows),
                                    std::to_string(matrix.excluded_rows),
                                    std::to_string(result.raters),
                                    result.degenerate ? "true" : "false"});
                    if (has_value) row["kappa"] = result.kappa;
                    row["band"] = result.band;
                    row["included_rows"] = result.included_rows;
                    row["excluded_rows"] = matrix.excluded_rows;
                    row["exclusion_reasons"] = matrix.exclusion_reasons;
                    row["raters"] = result.raters;
                    row["degenerate"] = result.degenerate;
                } catch (const MetricsError& e) {
                    csv += csv_row({pairing_label, to_string(participant), to_string(trait), "",
                                    "", "0", "", std::to_string(judge_ids.size()), ""});
                    row["error"] = e.what();
                }
                rows.push_back(std::move(row));
            }
        }
    }

    const nlohmann::json summary = {{"schema_version", kSchemaVersion},
                                    {"raters", judge_ids.size()},
                                    {"rows", rows}};
    write_text_atomic(context.paths.reports_dir() / "kappa.csv", csv);
    write_text_atomic(context.paths.reports_dir() / "kappa.json", summary.dump(2) + "\n");
    out << "kappa: " << rows.size() << " cells over " << judge_ids.size() << " judges\n";
}

void write_alignment_reports(const MetricsContext& context, const TraitLexicon& lexicon,
                             std::ostream& out) {
    const std::vector<AlignmentCell> cells = lexicon_alignment(context.discourses, lexicon);

    std::string csv = csv_row({"pairing_label", "participant", "trait", "scored", "items",
                               "predicted", "correct", "abstained", "accuracy",
                               "abstention_rate"});
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& cell : cells) {
        csv += csv_row({cell.pairing_label, to_string(cell.participant), to_string(cell.trait),
                        cell.scored ? "true" : "false", std::to_string(cell.items),
                        std::to_string(cell.predicted), std::to_string(cell.correct),
                        std::to_string(cell.abstained), optional_field(cell.accuracy()),
                        format_double(cell.abstention_rate())});
        nlohmann::json row = {
            {"pairing_label", cell.pairing_label},
            {"participant", to_string(cell.participant)},
            {"trait", to_string(cell.trait)},
            {"scored", cell.scored},
            {"items", cell.items},
            {"predicted", cell.predicted},
            {"correct", cell.correct},
            {"abstained", cell.abstained},
            {"abstention_rate", cell.abstention_rate()},
        };
        if (const auto accuracy = cell.accuracy()) row["accuracy"] = *accuracy;
        rows.push_back(std::move(row));
    }
    const nlohmann::json summary = {{"schema_version", kSchemaVersion}, {"cells", rows}};
    write_text_atomic(context.paths.reports_dir() / "alignment.csv", csv);
    write_text_atomic(context.paths.reports_dir() / "alignment.json", summary.dump(2) + "\n");
    out << "alignment: " << rows.size() << " cells\n";
}

nlohmann::json corpus_row_json(const CorpusStats& stats) { return stats.to_json(); }

std::vector<std::string> corpus_row_fields(const std::string& label, const CorpusStats& stats) {
    return {label,
            std::to_string(stats.total_dialogues),
            std::to_string(stats.total_utterances),
            std::to_string(stats.total_sentences),
            std::to_string(stats.total_words),
            std::to_string(stats.assertions),
            std::to_string(stats.questions),
            std::to_string(stats.logical_structures),
            optional_field(stats.avg_words_per_sentence()),
            optional_field(stats.avg_utterance_length())};
}

void write_corpus_reports(const MetricsContext& context, std::ostream& out) {
    std::map<std::string, std::vector<Discourse>> by_pairing;
    for (const auto& discourse : context.discourses) {
        by_pairing[discourse.config.pairing_label].push_back(discourse);
    }

    std::string csv = csv_row({"pairing_label", "total_dialogues", "total_utterances",
                               "total_sentences", "total_words", "assertions", "questions",
                               "logical_structures", "avg_words_per_sentence",
                               "avg_utterance_length"});
    nlohmann::json per_pairing = nlohmann::json::object();
    for (const auto& [label, group] : by_pairing) {
        const CorpusStats stats = corpus_stats(group);
        csv += csv_row(corpus_row_fields(label, stats));
        per_pairing[label] = corpus_row_json(stats);
    }
    const CorpusStats all = corpus_stats(context.discourses);
    csv += csv_row(corpus_row_fields("(all)", all));

    const nlohmann::json summary = {{"schema_version", kSchemaVersion},
                                    {"all", corpus_row_json(all)},
                                    {"per_pairing", per_pairing}};
    write_text_atomic(context.paths.reports_dir() / "corpus_stats.csv", csv);
    write_text_atomic(context.paths.reports_dir() / "corpus_stats.json", summary.dump(2) + "\n");
    out << "corpus-stats: " << all.total_dialogues << " dialogues, " << all.total_words
        << " words\n";
}

std::string profile_summary(const TraitProfile& profile) {
    std::string text;
    for (const TraitName trait : kAllTraits) {
        if (!text.empty()) text += ", ";
        text += to_string(trait) + "=" + to_string(profile.level(trait));
    }
    return text;
}

}  // namespace

std::string format_double(double value, int precision) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.*f", precision, value);
    return buffer;
}

int cmd_generate(const GenerateOptions& options, std::ostream& out, std::ostream& err) {
    return run_command(err, [&]() -> int {
        const RunConfig config = load_run_config(options.config_path);
        const std::vector<Topic> topics = load_topics_file(config.topics_file);
        const std::vector<TraitCombo> combos =
            load_trait_combos_file(config.combos_file, config.pairing);
        const std::vector<DebateConfig> matrix = load_experiment_matrix(
            topics, combos, config.pairing, config.turns_per_participant, config.generation,
            config.pairing_label);
        const PromptTemplates templates = templates_for(config);

        // One provider instance per distinct id; both slots may share one.
        std::map<std::string, std::unique_ptr<Provider>> providers;
        for (const std::string& id : {config.participant_p1, config.participant_p2}) {
            if (!providers.count(id)) providers[id] = make_provider(config.provider_for(id));
        }
        Provider& provider_p1 = *providers.at(config.participant_p1);
        Provider& provider_p2 = *providers.at(config.participant_p2);

        const bool deterministic =
            std::all_of(providers.begin(), providers.end(),
                        [](const auto& entry) { return entry.second->deterministic(); });

        int workers = options.workers > 0 ? options.workers : config.workers;
        const bool has_scripted_queue =
            config.provider_for(config.participant_p1).kind == ProviderKind::Scripted ||
            config.provider_for(config.participant_p2).kind == ProviderKind::Scripted;
        if (has_scripted_queue && workers > 1) {
            // Queue pop order must match the matrix order; parallel workers
            // would interleave it.
            err << "warning: scripted providers run single-worker for reproducibility\n";
            workers = 1;
        }
        workers = std::min<int>(workers, static_cast<int>(matrix.size()) > 0
                                             ? static_cast<int>(matrix.size())
                                             : 1);

        const std::string created_at = deterministic ? kEpochTimestamp : now_utc_iso8601();

        std::vector<Discourse> results(matrix.size());
        if (workers <= 1) {
            for (std::size_t i = 0; i < matrix.size(); ++i) {
                results[i] = run_dialogue(matrix[i], provider_p1, provider_p2, config.sanitize,
                                          templates, created_at, config.send_history);
            }
        } else {
            std::atomic<std::size_t> next{0};
            std::mutex failure_mutex;
            std::exception_ptr failure;
            auto work = [&] {
                try {
                    for (;;) {
                        const std::size_t i = next.fetch_add(1);
                        if (i >= matrix.size()) return;
                        results[i] = run_dialogue(matrix[i], provider_p1, provider_p2,
                                                  config.sanitize, templates, created_at,
                                                  config.send_history);
                    }
                } catch (...) {
                    std::lock_guard<std::mutex> lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            };
            std::vector<std::thread> pool;
            for (int w = 0; w < workers; ++w) pool.emplace_back(work);
            for (auto& thread : pool) thread.join();
            if (failure) std::rethrow_exception(failure);
        }

        std::size_t truncated = 0;
        std::size_t degenerate = 0;
        for (const auto& discourse : results) {
            if (discourse.truncated) ++truncated;
            const SimilarityReport report =
                similarity_screen(discourse, config.similarity_threshold);
            if (is_degenerate(report, discourse.utterances.size())) ++degenerate;
        }

        const RunPaths paths{fs::path(options.out_dir)};
        fs::create_directories(paths.root);
        save_discourses(paths, results);

        RunManifest manifest;
        manifest.run_id = derive_run_id(config, options.out_dir);
        manifest.config_hash = fnv1a_hex(read_file_bytes(options.config_path));
        manifest.created_at = now_utc_iso8601();
        manifest.updated_at = manifest.created_at;
        manifest.deterministic = deterministic;
        manifest.topic_count = topics.size();
        manifest.combo_count = combos.size();
        manifest.discourse_count = results.size();
        manifest.truncated_count = truncated;
        manifest.degenerate_count = degenerate;
        save_manifest(paths, manifest);

        if (truncated == results.size() && !results.empty()) {
            err << "warning: every discourse was truncated by provider failures\n";
        } else if (truncated > 0) {
            err << "warning: " << truncated << " of " << results.size()
                << " discourses truncated\n";
        }
        out << "generated " << results.size() << " discourses into " << paths.root.string()
            << "\n";
        return kExitOk;
    });
}

int cmd_judge(const JudgeCmdOptions& options, std::ostream& out, std::ostream& err) {
    return run_command(err, [&]() -> int {
        const RunPaths paths{fs::path(options.run_dir)};
        RunManifest manifest = load_manifest(paths);
        const std::vector<Discourse> discourses = load_discourses(paths);
        const std::vector<JudgeSpec> judges = load_judges_config(options.judges_path);
        const PromptTemplates templates = PromptTemplates::builtin();

        using VerdictKey = std::tuple<std::string, std::string, Speaker>;
        std::map<VerdictKey, JudgeVerdict> records;
        std::vector<std::string> judge_order;
        std::set<std::string> known_judges;
        for (const auto& spec : judges) {
            if (known_judges.insert(spec.provider.id).second) {
                judge_order.push_back(spec.provider.id);
            }
        }
        if (verdicts_exist(paths)) {
            for (auto& verdict : load_verdicts(paths)) {
                if (known_judges.insert(verdict.judge_id).second) {
                    judge_order.push_back(verdict.judge_id);
                }
                records[{verdict.judge_id, verdict.discourse_id, verdict.participant}] =
                    std::move(verdict);
            }
        }

        std::size_t computed = 0;
        for (const auto& spec : judges) {
            const std::unique_ptr<Provider> judge = make_provider(spec.provider);
            const JudgeOptions judge_options{spec.invalid_retries};
            for (const auto& discourse : discourses) {
                if (spec.joint) {
                    const VerdictKey key_p1{spec.provider.id, discourse.id, Speaker::P1};
                    const VerdictKey key_p2{spec.provider.id, discourse.id, Speaker::P2};
                    const bool need_p1 = options.force || !records.count(key_p1);
                    const bool need_p2 = options.force || !records.count(key_p2);
                    if (!need_p1 && !need_p2) continue;
                    auto verdicts = judge_discourse_joint(*judge, spec.provider.generation,
                                                          discourse, templates, judge_options);
                    if (need_p1) {
                        records[key_p1] = std::move(verdicts[0]);
                        ++computed;
                    }
                    if (need_p2) {
                        records[key_p2] = std::move(verdicts[1]);
                        ++computed;
                    }
                    continue;
                }
                for (const Speaker participant : {Speaker::P1, Speaker::P2}) {
                    const VerdictKey key{spec.provider.id, discourse.id, participant};
                    if (!options.force && records.count(key)) continue;
                    records[key] =
                        judge_participant(*judge, spec.provider.generation, discourse,
                                          templates, participant, judge_options);
                    ++computed;
                }
            }
        }

        // Canonical order: discourse file order, then judge order, then P1/P2.
        std::vector<JudgeVerdict> ordered;
        std::set<VerdictKey> emitted;
        for (const auto& discourse : discourses) {
            for (const auto& judge_id : judge_order) {
                for (const Speaker participant : {Speaker::P1, Speaker::P2}) {
                    const VerdictKey key{judge_id, discourse.id, participant};
                    const auto it = records.find(key);
                    if (it == records.end()) continue;
                    ordered.push_back(it->second);
                    emitted.insert(key);
                }
            }
        }
        for (const auto& [key, verdict] : records) {
            if (!emitted.count(key)) ordered.push_back(verdict);  // orphaned records survive
        }
        save_verdicts(paths, ordered);

        manifest.judges.clear();
        for (const auto& [judge_id, rate] : invalid_rate_by_judge(ordered)) {
            manifest.judges[judge_id] = JudgeStats{rate.invalid, rate.total, rate.rate()};
        }
        manifest.updated_at = now_utc_iso8601();
        save_manifest(paths, manifest);

        for (const auto& [judge_id, stats] : manifest.judges) {
            if (stats.total > 0 && stats.invalid == stats.total) {
                err << "warning: judge '" << judge_id << "' produced no valid verdicts\n";
            }
        }
        out << "judged " << discourses.size() << " discourses with " << judges.size()
            << " judges (" << computed << " new verdicts, " << ordered.size() << " total)\n";
        return kExitOk;
    });
}

int cmd_metrics(const MetricsCmdOptions& options, std::ostream& out, std::ostream& err) {
    return run_command(err, [&]() -> int {
        const bool any_selected =
            options.hta_lta || options.kappa || options.alignment || options.corpus_stats;
        const bool run_hta = options.hta_lta || !any_selected;
        const bool run_kappa = options.kappa || !any_selected;
        const bool run_corpus = options.corpus_stats || !any_selected;
        const bool run_alignment =
            options.alignment || (!any_selected && !options.lexicon_path.empty());

        if (options.alignment && options.lexicon_path.empty()) {
            throw MissingInputError("alignment needs --lexicon <file>");
        }

        MetricsContext context;
        context.paths = RunPaths{fs::path(options.run_dir)};
        context.discourses = load_discourses(context.paths);
        fs::create_directories(context.paths.reports_dir());

        const bool need_verdicts = run_hta || run_kappa;
        if (need_verdicts) {
            if (verdicts_exist(context.paths)) {
                context.verdicts = load_verdicts(context.paths);
                context.verdicts_loaded = true;
            } else if (options.hta_lta || options.kappa) {
                throw MissingInputError("no verdicts.jsonl in " + options.run_dir +
                                        "; run judge first");
            } else {
                err << "note: skipping hta-lta and kappa (no verdicts.jsonl yet)\n";
            }
        }

        if (run_hta && context.verdicts_loaded) write_hta_lta_reports(context, out);
        if (run_kappa && context.verdicts_loaded) write_kappa_reports(context, out, err);
        if (run_alignment) {
            const TraitLexicon lexicon = TraitLexicon::load_file(options.lexicon_path);
            write_alignment_reports(context, lexicon, out);
        }
        if (run_corpus) write_corpus_reports(context, out);

        out << "reports written to " << context.paths.reports_dir().string() << "\n";
        return kExitOk;
    });
}

int cmd_validate(const ValidateCmdOptions& options, std::ostream& out, std::ostream& err) {
    return run_command(err, [&]() -> int {
        const RunPaths paths{fs::path(options.run_dir)};
        const std::vector<Discourse> discourses = load_discourses(paths);

        double threshold = options.threshold;
        if (threshold < 0.0 || threshold > 1.0) {
            const double clamped = std::clamp(threshold, 0.0, 1.0);
            err << "warning: threshold " << format_double(threshold, 2) << " clamped to "
                << format_double(clamped, 2) << "\n";
            threshold = clamped;
        }

        std::size_t degenerate_count = 0;
        std::size_t flagged_count = 0;
        nlohmann::json entries = nlohmann::json::array();
        for (const auto& discourse : discourses) {
            const SimilarityReport report = similarity_screen(discourse, threshold);
            const bool degenerate = is_degenerate(report, discourse.utterances.size());
            if (degenerate) ++degenerate_count;
            if (!report.flagged_pairs.empty()) ++flagged_count;
            nlohmann::json entry = report.to_json();
            entry["id"] = discourse.id;
            entry["degenerate"] = degenerate;
            entry["flagged_adjacent_fraction"] =
                report.flagged_adjacent_fraction(discourse.utterances.size());
            entries.push_back(std::move(entry));
        }

        // Seeded sample for the human pass; ascending order reads naturally.
        const std::size_t sample_size = std::min<std::size_t>(15, discourses.size());
        std::vector<std::size_t> indices(discourses.size());
        std::iota(indices.begin(), indices.end(), 0);
        std::mt19937_64 rng(options.seed);
        std::shuffle(indices.begin(), indices.end(), rng);
        indices.resize(sample_size);
        std::sort(indices.begin(), indices.end());

        std::string sample_text;
        nlohmann::json sample_ids = nlohmann::json::array();
        for (const std::size_t index : indices) {
            const Discourse& discourse = discourses[index];
            sample_ids.push_back(discourse.id);
            sample_text += "=== " + discourse.id + " ===\n";
            sample_text += "topic: " + discourse.config.topic.text + "\n";
            sample_text += "P1 traits: " + profile_summary(discourse.config.profile_p1) + "\n";
            sample_text += "P2 traits: " + profile_summary(discourse.config.profile_p2) + "\n";
            for (const auto& utterance : discourse.utterances) {
                sample_text += "[" + std::to_string(utterance.index) + "] " +
                               to_string(utterance.speaker) + ": " + utterance.clean_text + "\n";
            }
            sample_text += "\n";
        }

        fs::create_directories(paths.reports_dir());
        const nlohmann::json report = {
            {"schema_version", kSchemaVersion},
            {"threshold", threshold},
            {"seed", options.seed},
            {"discourse_count", discourses.size()},
            {"flagged_discourse_count", flagged_count},
            {"degenerate_count", degenerate_count},
            {"sample", sample_ids},
            {"discourses", entries},
        };
        write_text_atomic(paths.reports_dir() / "validation.json", report.dump(2) + "\n");
        write_text_atomic(paths.review_sample(), sample_text);

        try {
            RunManifest manifest = load_manifest(paths);
            manifest.degenerate_count = degenerate_count;
            manifest.updated_at = now_utc_iso8601();
            save_manifest(paths, manifest);
        } catch (const MissingInputError&) {
            err << "note: no manifest to update\n";
        }

        out << "validated " << discourses.size() << " discourses: " << flagged_count
            << " flagged, " << degenerate_count << " degenerate; sample of " << sample_size
            << " in " << paths.review_sample().string() << "\n";
        return kExitOk;
    });
}

int cmd_report(const ReportCmdOptions& options, std::ostream& out, std::ostream& err) {
    return run_command(err, [&]() -> int {
        const RunPaths paths{fs::path(options.run_dir)};
        const RunManifest manifest = load_manifest(paths);

        std::ostringstream text;
        text << "run " << manifest.run_id << " (tool " << manifest.tool_version << ")\n";
        text << "config hash " << manifest.config_hash << "\n";
        text << "created " << manifest.created_at << ", updated " << manifest.updated_at << "\n";
        text << "deterministic: " << (manifest.deterministic ? "yes" : "no") << "\n";
        text << manifest.topic_count << " topics x " << manifest.combo_count << " combos -> "
             << manifest.discourse_count << " discourses (" << manifest.truncated_count
             << " truncated, " << manifest.degenerate_count << " degenerate)\n";
        for (const auto& [judge_id, stats] : manifest.judges) {
            text << "judge " << judge_id << ": " << stats.invalid << "/" << stats.total
                 << " invalid (rate " << format_double(stats.rate, 4) << ")\n";
        }

        const auto read_report = [&](const char* name) -> std::optional<nlohmann::json> {
            const fs::path path = paths.reports_dir() / name;
            if (!fs::exists(path)) return std::nullopt;
            std::ifstream in(path);
            nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
            if (j.is_discarded()) return std::nullopt;
            return j;
        };

        if (const auto hta = read_report("hta_lta.json")) {
            std::size_t high_correct = 0, high_total = 0, low_correct = 0, low_total = 0;
            for (const auto& cell : hta->at("cells")) {
                high_correct += cell.at("high_correct").get<std::size_t>();
                high_total += cell.at("high_total").get<std::size_t>();
                low_correct += cell.at("low_correct").get<std::size_t>();
                low_total += cell.at("low_total").get<std::size_t>();
            }
            text << "hta-lta: " << hta->at("cells").size() << " cells";
            if (high_total > 0) {
                text << ", micro HTA "
                     << format_double(static_cast<double>(high_correct) / high_total, 4);
            }
            if (low_total > 0) {
                text << ", micro LTA "
                     << format_double(static_cast<double>(low_correct) / low_total, 4);
            }
            text << " (" << hta->at("invalid_verdicts").get<std::size_t>()
                 << " invalid verdicts)\n";
        }
        if (const auto kappa = read_report("kappa.json")) {
            for (const auto& row : kappa->at("rows")) {
                text << "kappa " << row.at("participant").get<std::string>() << " "
                     << row.at("trait").get<std::string>() << ": ";
                if (row.contains("kappa")) {
                    text << format_double(row.at("kappa").get<double>(), 4) << " ("
                         << row.at("band").get<std::string>() << ")";
                } else if (row.contains("error")) {
                    text << "unavailable (" << row.at("error").get<std::string>() << ")";
                } else {
                    text << "degenerate";
                }
                text << "\n";
            }
        }
        if (const auto alignment = read_report("alignment.json")) {
            for (const auto& cell : alignment->at("cells")) {
                if (!cell.contains("accuracy")) continue;
                text << "alignment " << cell.at("participant").get<std::string>() << " "
                     << cell.at("trait").get<std::string>() << ": "
                     << format_double(cell.at("accuracy").get<double>(), 4) << "\n";
            }
        }
        if (const auto corpus = read_report("corpus_stats.json")) {
            const auto& all = corpus->at("all");
            text << "corpus: " << all.at("total_words").get<std::size_t>() << " words, "
                 << all.at("total_sentences").get<std::size_t>() << " sentences";
            if (all.contains("avg_words_per_sentence")) {
                text << ", " << format_double(all.at("avg_words_per_sentence").get<double>(), 2)
                     << " words/sentence";
            }
            text << "\n";
        }

        fs::create_directories(paths.reports_dir());
        write_text_atomic(paths.reports_dir() / "summary.txt", text.str());
        out << text.str();
        return kExitOk;
    });
}

}  // namespace traitlab
