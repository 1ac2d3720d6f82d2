#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "traitlab/commands.hpp"
#include "traitlab/run_store.hpp"
#include "traitlab/traits.hpp"

using namespace traitlab;
namespace fs = std::filesystem;

namespace {

struct CliWorkspace {
    fs::path dir;

    explicit CliWorkspace(const std::string& name) {
        dir = fs::temp_directory_path() / ("traitlab_cli_" + name);
        fs::remove_all(dir);
        fs::create_directories(dir);
    }
    ~CliWorkspace() { fs::remove_all(dir); }

    std::string write(const std::string& rel, const std::string& content) {
        const fs::path path = dir / rel;
        fs::create_directories(path.parent_path());
        std::ofstream out(path, std::ios::binary);
        out << content;
        return path.string();
    }

    std::string path(const std::string& rel) const { return (dir / rel).string(); }
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

bool contains(const std::string& haystack, const std::string& needle) {
    return haystack.find(needle) != std::string::npos;
}

nlohmann::json profile_json(const char* level) {
    nlohmann::json j;
    for (const TraitName trait : kAllTraits) j[to_string(trait)] = level;
    return j;
}

std::string one_combo_file() {
    nlohmann::json combos = nlohmann::json::array();
    combos.push_back({{"p1", profile_json("High")}, {"p2", profile_json("Low")}});
    return combos.dump();
}

std::string two_combo_file() {
    nlohmann::json combos = nlohmann::json::array();
    combos.push_back({{"p1", profile_json("High")}, {"p2", profile_json("Low")}});
    combos.push_back({{"p1", profile_json("Low")}, {"p2", profile_json("High")}});
    return combos.dump();
}

std::string script_lines(int count, const std::string& prefix) {
    std::string lines;
    for (int i = 1; i <= count; ++i) {
        const nlohmann::json line = {
            {"text", prefix + " argument number " + std::to_string(i) + " stands alone."}};
        lines += line.dump() + "\n";
    }
    return lines;
}

std::string valid_judge_lines(int count) {
    const nlohmann::json verdict = {{"predicted_bfi", profile_json("High")}};
    std::string lines;
    for (int i = 0; i < count; ++i) {
        lines += nlohmann::json{{"text", verdict.dump()}}.dump() + "\n";
    }
    return lines;
}

std::string garbage_judge_lines(int count) {
    std::string lines;
    for (int i = 0; i < count; ++i) {
        lines += nlohmann::json{{"text", "no structured output here"}}.dump() + "\n";
    }
    return lines;
}

std::string scripted_config(const std::string& extra = "") {
    return
        "[run]\n"
        "id = \"demo-run\"\n"
        "turns_per_participant = 2\n"
        "workers = 3\n"
        "[topics]\n"
        "file = \"topics.txt\"\n"
        "[traits]\n"
        "file = \"combos.json\"\n"
        "[providers.solo]\n"
        "kind = \"scripted\"\n"
        "script = \"script.jsonl\"\n" +
        extra;
}

}  // namespace

TEST_CASE("the scripted pipeline runs end to end and reruns byte-identically") {
    CliWorkspace ws("e2e");
    ws.write("topics.txt", "Alpha beats beta.\nGamma beats delta.\n");
    ws.write("combos.json", two_combo_file());
    ws.write("script.jsonl", script_lines(16, "Scripted"));
    const std::string config = ws.write("config.toml", scripted_config());

    std::ostringstream out, err;
    REQUIRE(cmd_generate({config, ws.path("run_a")}, out, err) == kExitOk);
    CHECK(contains(err.str(), "single-worker"));
    CHECK(contains(out.str(), "generated 4 discourses into"));

    const RunPaths paths{fs::path(ws.path("run_a"))};
    RunManifest manifest = load_manifest(paths);
    CHECK(manifest.run_id == "demo-run");
    CHECK(manifest.deterministic);
    CHECK(manifest.topic_count == 2);
    CHECK(manifest.combo_count == 2);
    CHECK(manifest.discourse_count == 4);
    CHECK(manifest.truncated_count == 0);
    CHECK(manifest.degenerate_count == 0);
    CHECK(manifest.config_hash.size() == 16);
    CHECK(manifest.judges.empty());

    const std::vector<Discourse> discourses = load_discourses(paths);
    REQUIRE(discourses.size() == 4);
    for (const auto& discourse : discourses) {
        CHECK(discourse.utterances.size() == 4);
        CHECK(discourse.created_at == kEpochTimestamp);
        CHECK(discourse.provider_ids.at("P1") == "solo");
        CHECK(discourse.provider_ids.at("P2") == "solo");
        CHECK(!discourse.truncated);
    }
    CHECK(discourses[0].utterances[0].clean_text == "Scripted argument number 1 stands alone.");
    CHECK(discourses[0].utterances[0].speaker == Speaker::P1);
    CHECK(discourses[0].utterances[1].clean_text == "Scripted argument number 2 stands alone.");
    CHECK(discourses[0].utterances[1].speaker == Speaker::P2);
    CHECK(discourses[3].utterances[3].clean_text == "Scripted argument number 16 stands alone.");

    // A second run from the same inputs produces the same bytes.
    std::ostringstream out_b, err_b;
    REQUIRE(cmd_generate({config, ws.path("run_b")}, out_b, err_b) == kExitOk);
    CHECK(read_file(ws.path("run_a/discourses.jsonl")) ==
          read_file(ws.path("run_b/discourses.jsonl")));

    // Judge with one clean and one hopeless judge.
    ws.write("stern.jsonl", valid_judge_lines(8));
    ws.write("grumpy.jsonl", garbage_judge_lines(8));
    const std::string judges = ws.write(
        "judges.toml",
        "[judges.stern]\nkind = \"scripted\"\nscript = \"stern.jsonl\"\ninvalid_retries = 0\n"
        "[judges.grumpy]\nkind = \"scripted\"\nscript = \"grumpy.jsonl\"\ninvalid_retries = 0\n");

    std::ostringstream out_j, err_j;
    REQUIRE(cmd_judge({ws.path("run_a"), judges}, out_j, err_j) == kExitOk);
    CHECK(contains(out_j.str(), "judged 4 discourses with 2 judges (16 new verdicts, 16 total)"));
    CHECK(contains(err_j.str(), "judge 'grumpy' produced no valid verdicts"));

    std::vector<JudgeVerdict> verdicts = load_verdicts(paths);
    REQUIRE(verdicts.size() == 16);
    std::size_t invalid = 0;
    for (const auto& verdict : verdicts) {
        if (!verdict.valid) {
            ++invalid;
            CHECK(verdict.judge_id == "grumpy");
        }
    }
    CHECK(invalid == 8);
    manifest = load_manifest(paths);
    CHECK(manifest.judges.at("stern").rate == 0.0);
    CHECK(manifest.judges.at("stern").total == 8);
    CHECK(manifest.judges.at("grumpy").rate == 1.0);
    CHECK(manifest.judges.at("grumpy").invalid == 8);

    // Re-judging without --force touches nothing.
    const std::string verdict_bytes = read_file(ws.path("run_a/verdicts.jsonl"));
    std::ostringstream out_r, err_r;
    REQUIRE(cmd_judge({ws.path("run_a"), judges}, out_r, err_r) == kExitOk);
    CHECK(contains(out_r.str(), "(0 new verdicts, 16 total)"));
    CHECK(read_file(ws.path("run_a/verdicts.jsonl")) == verdict_bytes);

    // Metrics with no flags runs every family with inputs present.
    std::ostringstream out_m, err_m;
    REQUIRE(cmd_metrics({.run_dir = ws.path("run_a")}, out_m, err_m) == kExitOk);
    CHECK(fs::exists(ws.path("run_a/reports/hta_lta.csv")));
    CHECK(fs::exists(ws.path("run_a/reports/kappa.json")));
    CHECK(fs::exists(ws.path("run_a/reports/corpus_stats.csv")));
    CHECK(!fs::exists(ws.path("run_a/reports/alignment.csv")));

    const std::string hta_csv = read_file(ws.path("run_a/reports/hta_lta.csv"));
    CHECK(hta_csv.rfind("judge_id,pairing_label,participant,trait,high_correct,high_total,"
                        "low_correct,low_total,hta,lta,precision_high,recall_high,"
                        "precision_low,recall_low\n", 0) == 0);
    const nlohmann::json hta = nlohmann::json::parse(read_file(ws.path("run_a/reports/hta_lta.json")));
    CHECK(hta.at("invalid_verdicts") == 8);
    // Only the judge with valid verdicts produces cells: 2 participants x 5 traits.
    CHECK(hta.at("cells").size() == 10);

    // Every item misses grumpy's valid verdict, so each kappa cell reports the miss.
    const nlohmann::json kappa = nlohmann::json::parse(read_file(ws.path("run_a/reports/kappa.json")));
    REQUIRE(kappa.at("rows").size() == 10);
    CHECK(kappa.at("rows")[0].contains("error"));

    const nlohmann::json corpus =
        nlohmann::json::parse(read_file(ws.path("run_a/reports/corpus_stats.json")));
    CHECK(corpus.at("all").at("total_dialogues") == 4);
    CHECK(corpus.at("all").at("total_utterances") == 16);

    // Fixing the bad judge needs --force; afterwards kappa becomes computable.
    ws.write("grumpy.jsonl", valid_judge_lines(8));
    std::ostringstream out_f, err_f;
    REQUIRE(cmd_judge({ws.path("run_a"), judges, true}, out_f, err_f) == kExitOk);
    CHECK(contains(out_f.str(), "(16 new verdicts, 16 total)"));
    CHECK(load_manifest(paths).judges.at("grumpy").rate == 0.0);

    std::ostringstream out_m2, err_m2;
    REQUIRE(cmd_metrics({.run_dir = ws.path("run_a")}, out_m2, err_m2) == kExitOk);
    const std::string kappa_csv = read_file(ws.path("run_a/reports/kappa.csv"));
    CHECK(contains(kappa_csv, "1.000000"));
    CHECK(contains(kappa_csv, "almost-perfect"));
    const nlohmann::json hta_fixed =
        nlohmann::json::parse(read_file(ws.path("run_a/reports/hta_lta.json")));
    CHECK(hta_fixed.at("invalid_verdicts") == 0);
    CHECK(hta_fixed.at("cells").size() == 20);  // 2 judges x 2 participants x 5 traits

    // Alignment wants a lexicon file.
    const std::string lexicon = ws.write(
        "lexicon.json",
        R"({"categories":{"debate":["argument","stands"]},"markers":{"Openness":[["debate",1.0]]}})");
    std::ostringstream out_a, err_a;
    REQUIRE(cmd_metrics({.run_dir = ws.path("run_a"), .alignment = true, .lexicon_path = lexicon},
                        out_a, err_a) == kExitOk);
    CHECK(fs::exists(ws.path("run_a/reports/alignment.csv")));
    const nlohmann::json alignment =
        nlohmann::json::parse(read_file(ws.path("run_a/reports/alignment.json")));
    CHECK(alignment.at("cells").size() == 10);

    // Validation reruns with the same seed are byte-identical.
    std::ostringstream out_v, err_v;
    REQUIRE(cmd_validate({ws.path("run_a"), 7, 0.9}, out_v, err_v) == kExitOk);
    const std::string sample = read_file(ws.path("run_a/review_sample.txt"));
    CHECK(contains(sample, "=== "));
    CHECK(contains(sample, "P1 traits:"));
    CHECK(contains(sample, "topic: "));
    const std::string validation = read_file(ws.path("run_a/reports/validation.json"));
    const nlohmann::json validation_json = nlohmann::json::parse(validation);
    CHECK(validation_json.at("discourse_count") == 4);
    CHECK(validation_json.at("seed") == 7);
    CHECK(validation_json.at("flagged_discourse_count") == 0);

    std::ostringstream out_v2, err_v2;
    REQUIRE(cmd_validate({ws.path("run_a"), 7, 0.9}, out_v2, err_v2) == kExitOk);
    CHECK(read_file(ws.path("run_a/review_sample.txt")) == sample);
    CHECK(read_file(ws.path("run_a/reports/validation.json")) == validation);

    // The report digests everything into one summary.
    std::ostringstream out_s, err_s;
    REQUIRE(cmd_report({ws.path("run_a")}, out_s, err_s) == kExitOk);
    const std::string summary = read_file(ws.path("run_a/reports/summary.txt"));
    CHECK(contains(summary, "run demo-run (tool "));
    CHECK(contains(summary, "2 topics x 2 combos -> 4 discourses (0 truncated, 0 degenerate)"));
    CHECK(contains(summary, "micro HTA"));
    CHECK(contains(summary, "kappa P1 Agreeableness: 1.0000 (almost-perfect)"));
    CHECK(contains(summary, "alignment P1 Openness"));
    CHECK(contains(summary, "corpus: "));
    CHECK(out_s.str() == summary);
}

TEST_CASE("a joint judge spends one script line per discourse and rates both sides") {
    CliWorkspace ws("joint");
    ws.write("topics.txt", "Alpha beats beta.\nGamma beats delta.\n");
    ws.write("combos.json", one_combo_file());
    ws.write("script.jsonl", script_lines(8, "Scripted"));
    const std::string config = ws.write("config.toml", scripted_config());

    // One response per discourse carrying both verdict objects.
    const nlohmann::json first = {{"predicted_bfi", profile_json("High")}};
    const nlohmann::json second = {{"predicted_bfi", profile_json("Low")}};
    std::string lines;
    for (int i = 0; i < 2; ++i) {
        lines += nlohmann::json{{"text", first.dump() + "\n" + second.dump()}}.dump() + "\n";
    }
    ws.write("pairwise.jsonl", lines);
    const std::string judges = ws.write(
        "judges.toml",
        "[judges.pairwise]\nkind = \"scripted\"\nscript = \"pairwise.jsonl\"\njoint = true\n");

    std::ostringstream out, err;
    REQUIRE(cmd_generate({config, ws.path("run")}, out, err) == kExitOk);
    REQUIRE(cmd_judge({ws.path("run"), judges}, out, err) == kExitOk);
    CHECK(contains(out.str(), "judged 2 discourses with 1 judges (4 new verdicts, 4 total)"));

    const auto verdicts = load_verdicts(RunPaths{fs::path(ws.path("run"))});
    REQUIRE(verdicts.size() == 4);
    for (const auto& verdict : verdicts) CHECK(verdict.valid);
    CHECK(verdicts[0].participant == Speaker::P1);
    CHECK(verdicts[0].predicted.level(TraitName::Openness) == TraitLevel::High);
    CHECK(verdicts[1].participant == Speaker::P2);
    CHECK(verdicts[1].predicted.level(TraitName::Openness) == TraitLevel::Low);
    CHECK(verdicts[0].raw_response == verdicts[1].raw_response);
}

TEST_CASE("provider failures truncate discourses without failing the run") {
    CliWorkspace ws("http_down");
    ws.write("topics.txt", "Solo topic.\n");
    ws.write("combos.json",
             one_combo_file());
    const std::string config = ws.write(
        "config.toml",
        "[run]\nturns_per_participant = 1\n"
        "[topics]\nfile = \"topics.txt\"\n"
        "[traits]\nfile = \"combos.json\"\n"
        "[providers.dead]\n"
        "kind = \"http\"\n"
        "endpoint = \"http://127.0.0.1:1/v1\"\n"
        "model_name = \"m\"\n"
        "timeout_ms = 300\n"
        "max_retries = 0\n");

    std::ostringstream out, err;
    REQUIRE(cmd_generate({config, ws.path("run")}, out, err) == kExitOk);
    CHECK(contains(err.str(), "every discourse was truncated"));

    const RunPaths paths{fs::path(ws.path("run"))};
    const RunManifest manifest = load_manifest(paths);
    CHECK(manifest.discourse_count == 1);
    CHECK(manifest.truncated_count == 1);
    CHECK(!manifest.deterministic);

    const std::vector<Discourse> discourses = load_discourses(paths);
    REQUIRE(discourses.size() == 1);
    CHECK(discourses[0].truncated);
    CHECK(discourses[0].utterances.empty());
    REQUIRE(discourses[0].failure.has_value());
    CHECK(discourses[0].failure->turn == 0);
    CHECK(contains(discourses[0].failure->error, "connection_failed"));
}

TEST_CASE("metrics before judging: implied families skip, explicit flags refuse") {
    CliWorkspace ws("no_verdicts");
    ws.write("topics.txt", "Solo topic.\n");
    ws.write("combos.json",
             one_combo_file());
    ws.write("script.jsonl", script_lines(2, "Quick"));
    const std::string config = ws.write(
        "config.toml",
        "[run]\nturns_per_participant = 1\n"
        "[topics]\nfile = \"topics.txt\"\n"
        "[traits]\nfile = \"combos.json\"\n"
        "[providers.solo]\nkind = \"scripted\"\nscript = \"script.jsonl\"\n");
    std::ostringstream out_g, err_g;
    REQUIRE(cmd_generate({config, ws.path("run")}, out_g, err_g) == kExitOk);

    std::ostringstream out, err;
    CHECK(cmd_metrics({.run_dir = ws.path("run")}, out, err) == kExitOk);
    CHECK(contains(err.str(), "skipping hta-lta and kappa"));
    CHECK(fs::exists(ws.path("run/reports/corpus_stats.csv")));
    CHECK(!fs::exists(ws.path("run/reports/hta_lta.csv")));

    std::ostringstream out_h, err_h;
    CHECK(cmd_metrics({.run_dir = ws.path("run"), .hta_lta = true}, out_h, err_h) ==
          kExitMissingInput);
    CHECK(contains(err_h.str(), "run judge first"));

    std::ostringstream out_k, err_k;
    CHECK(cmd_metrics({.run_dir = ws.path("run"), .kappa = true}, out_k, err_k) ==
          kExitMissingInput);

    std::ostringstream out_a, err_a;
    CHECK(cmd_metrics({.run_dir = ws.path("run"), .alignment = true}, out_a, err_a) ==
          kExitMissingInput);
    CHECK(contains(err_a.str(), "alignment needs --lexicon"));
}

TEST_CASE("validation marks degenerate discourses and clamps wild thresholds") {
    CliWorkspace ws("degenerate");
    ws.write("topics.txt", "Echo chamber.\n");
    ws.write("combos.json",
             one_combo_file());
    std::string lines;
    for (int i = 0; i < 4; ++i) {
        lines += nlohmann::json{{"text", "Same words every time."}}.dump() + "\n";
    }
    ws.write("script.jsonl", lines);
    const std::string config = ws.write(
        "config.toml",
        "[run]\nturns_per_participant = 2\n"
        "[topics]\nfile = \"topics.txt\"\n"
        "[traits]\nfile = \"combos.json\"\n"
        "[providers.solo]\nkind = \"scripted\"\nscript = \"script.jsonl\"\n");

    std::ostringstream out_g, err_g;
    REQUIRE(cmd_generate({config, ws.path("run")}, out_g, err_g) == kExitOk);
    CHECK(load_manifest(RunPaths{fs::path(ws.path("run"))}).degenerate_count == 1);

    std::ostringstream out, err;
    REQUIRE(cmd_validate({ws.path("run"), 42, 2.0}, out, err) == kExitOk);
    CHECK(contains(err.str(), "clamped"));

    const nlohmann::json validation =
        nlohmann::json::parse(read_file(ws.path("run/reports/validation.json")));
    CHECK(validation.at("threshold") == 1.0);
    CHECK(validation.at("degenerate_count") == 1);
    CHECK(validation.at("flagged_discourse_count") == 1);
}

TEST_CASE("failures map to the documented exit codes") {
    CliWorkspace ws("exit_codes");

    std::ostringstream out, err;
    CHECK(cmd_generate({ws.path("absent.toml"), ws.path("out")}, out, err) == kExitConfigError);
    CHECK(contains(err.str(), "error: "));

    const std::string config = ws.write(
        "config.toml",
        "[topics]\nfile = \"missing.txt\"\n"
        "[traits]\nfile = \"missing.json\"\n"
        "[providers.solo]\nkind = \"scripted\"\nscript = \"s.jsonl\"\n");
    std::ostringstream out2, err2;
    CHECK(cmd_generate({config, ws.path("out")}, out2, err2) == kExitConfigError);

    const std::string judges =
        ws.write("judges.toml", "[judges.j]\nkind = \"scripted\"\nscript = \"s.jsonl\"\n");
    std::ostringstream out3, err3;
    CHECK(cmd_judge({ws.path("no_such_run"), judges}, out3, err3) == kExitMissingInput);

    std::ostringstream out4, err4;
    CHECK(cmd_metrics({.run_dir = ws.path("no_such_run")}, out4, err4) == kExitMissingInput);

    std::ostringstream out5, err5;
    CHECK(cmd_validate({ws.path("no_such_run")}, out5, err5) == kExitMissingInput);

    std::ostringstream out6, err6;
    CHECK(cmd_report({ws.path("no_such_run")}, out6, err6) == kExitMissingInput);
}
