#pragma once

#include <ostream>
#include <string>

namespace traitlab {

/// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitMissingInput = 3;

struct GenerateOptions {
    std::string config_path;
    std::string out_dir;
    int workers = 0;  // 0: take the config value
};

struct JudgeCmdOptions {
    std::string run_dir;
    std::string judges_path;
    bool force = false;
};

struct MetricsCmdOptions {
    std::string run_dir;
    bool hta_lta = false;
    bool kappa = false;
    bool alignment = false;
    bool corpus_stats = false;
    std::string lexicon_path;
};

struct ValidateCmdOptions {
    std::string run_dir;
    unsigned long long seed = 42;
    double threshold = 0.9;
};

struct ReportCmdOptions {
    std::string run_dir;
};

int cmd_generate(const GenerateOptions& options, std::ostream& out, std::ostream& err);
int cmd_judge(const JudgeCmdOptions& options, std::ostream& out, std::ostream& err);
/// With no family flags set, runs every family whose inputs are present
/// (alignment only when --lexicon was given).
int cmd_metrics(const MetricsCmdOptions& options, std::ostream& out, std::ostream& err);
int cmd_validate(const ValidateCmdOptions& options, std::ostream& out, std::ostream& err);
int cmd_report(const ReportCmdOptions& options, std::ostream& out, std::ostream& err);

/// Fixed-precision decimal for CSV cells, e.g. format_double(0.5) == "0.500000".
std::string format_double(double value, int precision = 6);

}  // namespace traitlab
