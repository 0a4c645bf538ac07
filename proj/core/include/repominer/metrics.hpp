#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "repominer/git_repo.hpp"
#include "repominer/miner.hpp"

namespace repominer {

enum class MetricKind { Process, Product, Delta };

using MetricKindSet = std::set<MetricKind>;

/// Parses a comma-separated list like "process,product,delta".
MetricKindSet parse_metric_kinds(std::string_view list);

/// Throws ConfigError when empty or when delta is requested without product.
void validate_metric_kinds(const MetricKindSet& kinds);

/// Development-activity measures for one file over one release window.
struct ProcessMetrics {
    std::int64_t commits_count = 0;
    std::int64_t contributors_count = 0;        // distinct author emails
    std::int64_t minor_contributors_count = 0;  // authors owning < 5% of the file's commits
    double highest_experience = 0.0;            // max author share, in [0,1]
    double hunks_median = 0.0;
    std::int64_t lines_added = 0;
    std::int64_t lines_removed = 0;
    std::int64_t churn_total = 0;  // sum over commits of (added - removed)
    std::int64_t churn_max = 0;
    double churn_avg = 0.0;

    std::map<std::string, double> as_columns() const;
    bool operator==(const ProcessMetrics&) const = default;
};

/// The fixed, alphabetical process column names.
const std::vector<std::string>& process_metric_columns();

using ProductMetrics = std::map<std::string, double>;

/// Window = commits strictly after the previous release head (repo start for
/// ordinal 0) up to and including this release head. Returns an entry for
/// every file present at the head; untouched files carry all-zero metrics.
std::map<std::string, ProcessMetrics> get_process_metrics(const RepositorySession& session,
                                                          const Release& release);

/// Per-metric current minus previous, keyed "delta_<name>"; an absent
/// previous snapshot acts as a zero baseline. Mismatched name sets throw.
std::map<std::string, double> delta_metrics(const ProductMetrics& current,
                                            const std::optional<ProductMetrics>& previous);

struct DatasetRow {
    std::string filepath;
    std::string commit_id;  // release head
    std::string release_tag;
    std::int64_t committed_at = 0;
    bool failure_prone = false;
    std::map<std::string, double> metrics;  // keyed by column; absent = empty cell

    bool operator==(const DatasetRow&) const = default;
};

struct Dataset {
    std::vector<std::string> process_columns;
    std::vector<std::string> product_columns;
    std::vector<std::string> delta_columns;
    std::vector<DatasetRow> rows;

    /// filepath, commit_id, release_tag, committed_at, failure_prone, then
    /// each column group alphabetically.
    std::vector<std::string> header() const;

    bool operator==(const Dataset&) const = default;
};

/// One row per language file per release, labelled failure-prone when a
/// FailureProneFile matches (filepath, release head). Throws
/// RepositoryError("no releases") on untagged repositories.
Dataset extract(const RepositorySession& session,
                const std::vector<FailureProneFile>& failure_prone,
                const MetricKindSet& kinds, const LanguagePlugin& plugin);

std::string to_csv_string(const Dataset& dataset);
void to_csv(const Dataset& dataset, const std::filesystem::path& output_path);

/// JSON form: an array of row objects carrying the same field names as the
/// CSV; missing metric cells serialize as null.
std::string dataset_to_json(const Dataset& dataset);
Dataset dataset_from_json(std::string_view json_text);

}  // namespace repominer
