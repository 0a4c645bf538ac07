#include <cstdio>
#include <filesystem>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "repominer/error.hpp"
#include "repominer/fixing_classifier.hpp"
#include "repominer/git_repo.hpp"
#include "repominer/log.hpp"
#include "repominer/metrics.hpp"
#include "repominer/miner.hpp"
#include "repominer/plugins.hpp"
#include "repominer/report.hpp"
#include "repominer/version.hpp"

namespace {

using namespace repominer;

struct CommonOptions {
    std::string repository;
    std::string language;
    std::vector<std::string> extensions;
    std::string comment_marker;
    std::string branch;
    std::string clone_dir;
};

RepositorySource source_from(const CommonOptions& options) {
    RepositorySource source;
    source.location = options.repository;
    if (!options.branch.empty()) {
        source.branch = options.branch;
    }
    if (!options.clone_dir.empty()) {
        source.clone_path = options.clone_dir;
    }
    return source;
}

std::unique_ptr<LanguagePlugin> plugin_from(const CommonOptions& options) {
    return make_plugin(options.language, options.extensions, options.comment_marker);
}

int run_mine(const CommonOptions& options, const std::string& subtarget,
             const std::string& rules_path, const std::string& out_path) {
    RuleSet rules = rules_path.empty() ? RuleSet::defaults() : load_rules(rules_path);
    std::unique_ptr<LanguagePlugin> plugin = plugin_from(options);
    RepositorySession session = RepositorySession::open(source_from(options));

    MiningReport report;
    report.repository = options.repository;
    report.branch = session.branch();
    report.plugin = plugin->name();
    report.tool_version = kToolVersion;
    report.generated_at = current_timestamp_iso();

    std::vector<FixingCommitRecord> fixing = identify_fixing_commits(session, *plugin, rules);
    report.fixing_commits = fixing;
    std::string summary = "fixing_commits=" + std::to_string(fixing.size());

    if (subtarget == "fixed-files" || subtarget == "failure-prone-files") {
        std::vector<FixedFile> fixed = identify_fixed_files(session, fixing, *plugin);
        report.fixed_files.emplace();
        for (const FixedFile& f : fixed) {
            report.fixed_files->push_back({f.filepath, f.fic, f.bic});
        }
        summary += " fixed_files=" + std::to_string(fixed.size());

        if (subtarget == "failure-prone-files") {
            std::vector<FailureProneFile> labelled =
                label_snapshots(session, fixed, plugin.get());
            report.failure_prone_files = labelled;
            summary += " failure_prone_files=" + std::to_string(labelled.size());
        }
    }

    write_report(report, out_path);
    std::cout << summary << "\n";
    return 0;
}

int run_extract(const CommonOptions& options, const std::string& fpf_path,
                const std::string& metrics_list, const std::string& out_path) {
    MetricKindSet kinds = parse_metric_kinds(metrics_list);
    validate_metric_kinds(kinds);
    std::unique_ptr<LanguagePlugin> plugin = plugin_from(options);

    MiningReport report = read_report(fpf_path);
    if (!report.failure_prone_files) {
        throw ConfigError("report " + fpf_path +
                          " has no failure_prone_files section; run "
                          "`mine failure-prone-files` first");
    }

    RepositorySession session = RepositorySession::open(source_from(options));
    Dataset dataset = extract(session, *report.failure_prone_files, kinds, *plugin);
    to_csv(dataset, out_path);

    std::size_t positives = 0;
    for (const DatasetRow& row : dataset.rows) {
        positives += row.failure_prone ? 1 : 0;
    }
    std::cout << "rows=" << dataset.rows.size() << " failure_prone=" << positives << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Mines git repositories for defect-fixing commits, bug-introducing commits, "
                 "and failure-prone file snapshots, and extracts metrics into a labelled "
                 "dataset for defect prediction."};
    app.set_version_flag("--version", repominer::kToolVersion);
    app.require_subcommand(1);

    std::string log_level = "warn";
    app.add_option("--log-level", log_level, "Log threshold (debug, info, warn, error)")
        ->check(CLI::IsMember({"debug", "info", "warn", "error"}));

    CommonOptions mine_options;
    std::string subtarget;
    std::string rules_path;
    std::string mine_out = "mining-report.json";

    CLI::App* mine = app.add_subcommand(
        "mine", "Identify fixing commits, fixed files, or failure-prone snapshots");
    mine->add_option("subtarget", subtarget, "Pipeline stage to stop at")
        ->required()
        ->check(CLI::IsMember({"fixing-commits", "fixed-files", "failure-prone-files"}));
    mine->add_option("repository", mine_options.repository,
                     "Remote URL or local path of the repository")
        ->required();
    mine->add_option("--language", mine_options.language, "Language plugin name")->required();
    mine->add_option("--ext", mine_options.extensions,
                     "File extensions for the generic plugin (repeatable)");
    mine->add_option("--comment-marker", mine_options.comment_marker,
                     "Line-comment marker for the generic plugin");
    mine->add_option("--branch", mine_options.branch, "Branch to analyze");
    mine->add_option("--clone-dir", mine_options.clone_dir,
                     "Directory for clones of remote repositories")
        ->envname("REPOMINER_CLONE_DIR");
    mine->add_option("--rules", rules_path, "Rule file overriding the default classifier rules");
    mine->add_option("--out", mine_out, "Output report path (JSON)");

    CommonOptions extract_options;
    std::string fpf_path;
    std::string metrics_list;
    std::string extract_out;

    CLI::App* extract_cmd =
        app.add_subcommand("extract-metrics", "Build the labelled metrics dataset (CSV)");
    extract_cmd->add_option("repository", extract_options.repository,
                            "Remote URL or local path of the repository")
        ->required();
    extract_cmd->add_option("--language", extract_options.language, "Language plugin name")
        ->required();
    extract_cmd->add_option("--ext", extract_options.extensions,
                            "File extensions for the generic plugin (repeatable)");
    extract_cmd->add_option("--comment-marker", extract_options.comment_marker,
                            "Line-comment marker for the generic plugin");
    extract_cmd->add_option("--fpf", fpf_path, "Mining report with failure-prone files")
        ->required();
    extract_cmd
        ->add_option("--metrics", metrics_list,
                     "Comma-separated metric kinds: process,product,delta")
        ->required();
    extract_cmd->add_option("--out", extract_out, "Output dataset path (CSV)")->required();
    extract_cmd->add_option("--branch", extract_options.branch, "Branch to analyze");
    extract_cmd
        ->add_option("--clone-dir", extract_options.clone_dir,
                     "Directory for clones of remote repositories")
        ->envname("REPOMINER_CLONE_DIR");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    if (log_level == "debug") {
        repominer::log::set_level(repominer::log::Level::Debug);
    } else if (log_level == "info") {
        repominer::log::set_level(repominer::log::Level::Info);
    } else if (log_level == "error") {
        repominer::log::set_level(repominer::log::Level::Error);
    }

    try {
        if (mine->parsed()) {
            return run_mine(mine_options, subtarget, rules_path, mine_out);
        }
        return run_extract(extract_options, fpf_path, metrics_list, extract_out);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const RepositoryError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
