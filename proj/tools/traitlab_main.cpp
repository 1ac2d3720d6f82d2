// Command line front end: thin argument parsing over the command layer.
#include <iostream>

#include <CLI11.hpp>

#include "traitlab/commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Persona-conditioned debate harness: generate dialogues, judge trait "
                 "adherence, compute agreement metrics"};
    app.require_subcommand(1);

    traitlab::GenerateOptions generate_options;
    CLI::App* generate = app.add_subcommand("generate", "Generate the debate matrix");
    generate->add_option("--config", generate_options.config_path, "Run config (TOML)")
        ->required();
    generate->add_option("--out", generate_options.out_dir, "Run output directory")->required();
    generate->add_option("--workers", generate_options.workers,
                         "Worker threads (0 = value from config)");

    traitlab::JudgeCmdOptions judge_options;
    CLI::App* judge = app.add_subcommand("judge", "Judge trait adherence per participant");
    judge->add_option("--run", judge_options.run_dir, "Run directory")->required();
    judge->add_option("--judges", judge_options.judges_path, "Judges config (TOML)")->required();
    judge->add_flag("--force", judge_options.force, "Re-judge already-judged participants");

    traitlab::MetricsCmdOptions metrics_options;
    CLI::App* metrics = app.add_subcommand("metrics", "Compute report tables");
    metrics->add_option("--run", metrics_options.run_dir, "Run directory")->required();
    metrics->add_flag("--hta-lta", metrics_options.hta_lta, "High/low trait accuracy tables");
    metrics->add_flag("--kappa", metrics_options.kappa, "Inter-judge agreement tables");
    metrics->add_flag("--alignment", metrics_options.alignment, "Lexicon alignment tables");
    metrics->add_flag("--corpus-stats", metrics_options.corpus_stats, "Corpus statistics");
    metrics->add_option("--lexicon", metrics_options.lexicon_path,
                        "Trait lexicon file (JSON), enables alignment");

    traitlab::ValidateCmdOptions validate_options;
    CLI::App* validate = app.add_subcommand("validate", "Screen for degenerate discourse");
    validate->add_option("--run", validate_options.run_dir, "Run directory")->required();
    validate->add_option("--seed", validate_options.seed, "Review sample seed");
    validate->add_option("--threshold", validate_options.threshold,
                         "Similarity flag threshold in [0,1]");

    traitlab::ReportCmdOptions report_options;
    CLI::App* report = app.add_subcommand("report", "Summarize a run");
    report->add_option("--run", report_options.run_dir, "Run directory")->required();

    CLI11_PARSE(app, argc, argv);

    if (generate->parsed()) {
        return traitlab::cmd_generate(generate_options, std::cout, std::cerr);
    }
    if (judge->parsed()) return traitlab::cmd_judge(judge_options, std::cout, std::cerr);
    if (metrics->parsed()) return traitlab::cmd_metrics(metrics_options, std::cout, std::cerr);
    if (validate->parsed()) {
        return traitlab::cmd_validate(validate_options, std::cout, std::cerr);
    }
    if (report->parsed()) return traitlab::cmd_report(report_options, std::cout, std::cerr);
    return traitlab::kExitConfigError;
}
