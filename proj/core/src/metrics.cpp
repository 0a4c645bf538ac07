#include "repominer/metrics.hpp"

#include <algorithm>
#include <fstream>

#include <nlohmann/json.hpp>

#include "repominer/csv.hpp"
#include "repominer/error.hpp"
#include "repominer/file_history.hpp"
#include "repominer/log.hpp"
#include "repominer/text.hpp"

namespace repominer {

namespace {

const std::vector<std::string> kProcessColumns = {
    "churn_avg",      "churn_max",
    "churn_total",    "commits_count",
    "contributors_count", "highest_experience",
    "hunks_median",   "lines_added",
    "lines_removed",  "minor_contributors_count",
};

double median_of(std::vector<std::int64_t> values) {
    if (values.empty()) {
        return 0.0;
    }
    std::sort(values.begin(), values.end());
    std::size_t mid = values.size() / 2;
    if (values.size() % 2 == 1) {
        return static_cast<double>(values[mid]);
    }
    return (static_cast<double>(values[mid - 1]) + static_cast<double>(values[mid])) / 2.0;
}

}  // namespace

MetricKindSet parse_metric_kinds(std::string_view list) {
    MetricKindSet kinds;
    for (const std::string& raw : text::split(list, ',')) {
        std::string item = text::to_lower(text::rstrip(text::lstrip(raw)));
        if (item.empty()) {
            continue;
        }
        if (item == "process") {
            kinds.insert(MetricKind::Process);
        } else if (item == "product") {
            kinds.insert(MetricKind::Product);
        } else if (item == "delta") {
            kinds.insert(MetricKind::Delta);
        } else {
            throw ConfigError("unknown metric kind '" + item +
                              "' (expected process, product, delta)");
        }
    }
    return kinds;
}

void validate_metric_kinds(const MetricKindSet& kinds) {
    if (kinds.empty()) {
        throw ConfigError("at least one metric kind is required");
    }
    if (kinds.contains(MetricKind::Delta) && !kinds.contains(MetricKind::Product)) {
        throw ConfigError("delta metrics require product metrics");
    }
}

std::map<std::string, double> ProcessMetrics::as_columns() const {
    return {
        {"churn_avg", churn_avg},
        {"churn_max", static_cast<double>(churn_max)},
        {"churn_total", static_cast<double>(churn_total)},
        {"commits_count", static_cast<double>(commits_count)},
        {"contributors_count", static_cast<double>(contributors_count)},
        {"highest_experience", highest_experience},
        {"hunks_median", hunks_median},
        {"lines_added", static_cast<double>(lines_added)},
        {"lines_removed", static_cast<double>(lines_removed)},
        {"minor_contributors_count", static_cast<double>(minor_contributors_count)},
    };
}

const std::vector<std::string>& process_metric_columns() { return kProcessColumns; }

std::map<std::string, ProcessMetrics> get_process_metrics(const RepositorySession& session,
                                                          const Release& release) {
    std::vector<Release> releases = session.releases();
    int window_end = session.effective_order_of(release.head_commit_id);
    int window_begin = -1;  // exclusive
    if (release.ordinal > 0 && release.ordinal <= static_cast<int>(releases.size()) - 1) {
        window_begin = session.effective_order_of(
            releases[static_cast<std::size_t>(release.ordinal) - 1].head_commit_id);
    }

    const std::vector<CommitInfo>& commits = session.commits();
    FileHistory history(commits);

    struct Accumulator {
        std::int64_t commits = 0;
        std::map<std::string, std::int64_t> per_author;
        std::vector<std::int64_t> hunks;
        std::int64_t added = 0;
        std::int64_t removed = 0;
        std::int64_t churn_max = 0;
        std::int64_t churn_total = 0;
        bool first = true;
    };
    std::map<int, Accumulator> per_file;

    for (int order = window_begin + 1; order <= window_end; ++order) {
        const CommitInfo& commit = commits[static_cast<std::size_t>(order)];
        for (const FileChange& change : commit.changes) {
            std::optional<int> id;
            if (change.kind == ChangeKind::Deleted) {
                if (change.old_path && order > 0) {
                    id = history.identity_at(*change.old_path, order - 1);
                }
            } else {
                id = history.identity_at(change.path(), order);
            }
            if (!id) {
                continue;
            }
            Accumulator& acc = per_file[*id];
            acc.commits += 1;
            acc.per_author[commit.author_email] += 1;
            acc.hunks.push_back(change.hunk_count);
            std::int64_t added = static_cast<std::int64_t>(change.added_lines.size());
            std::int64_t removed = static_cast<std::int64_t>(change.deleted_lines.size());
            acc.added += added;
            acc.removed += removed;
            std::int64_t churn = added - removed;
            acc.churn_total += churn;
            if (acc.first || churn > acc.churn_max) {
                acc.churn_max = churn;
                acc.first = false;
            }
        }
    }

    std::map<std::string, ProcessMetrics> result;
    for (const std::string& path : session.files_at(release.head_commit_id)) {
        ProcessMetrics metrics;
        std::optional<int> id = history.identity_at(path, window_end);
        if (id) {
            auto it = per_file.find(*id);
            if (it != per_file.end()) {
                const Accumulator& acc = it->second;
                metrics.commits_count = acc.commits;
                metrics.contributors_count = static_cast<std::int64_t>(acc.per_author.size());
                double best_share = 0.0;
                std::int64_t minor = 0;
                for (const auto& [author, count] : acc.per_author) {
                    double share =
                        static_cast<double>(count) / static_cast<double>(acc.commits);
                    best_share = std::max(best_share, share);
                    if (share < 0.05) {
                        ++minor;
                    }
                }
                metrics.minor_contributors_count = minor;
                metrics.highest_experience = best_share;
                metrics.hunks_median = median_of(acc.hunks);
                metrics.lines_added = acc.added;
                metrics.lines_removed = acc.removed;
                metrics.churn_total = acc.churn_total;
                metrics.churn_max = acc.churn_max;
                metrics.churn_avg =
                    static_cast<double>(acc.churn_total) / static_cast<double>(acc.commits);
            }
        }
        result[path] = metrics;
    }
    return result;
}

std::map<std::string, double> delta_metrics(const ProductMetrics& current,
                                            const std::optional<ProductMetrics>& previous) {
    if (previous) {
        auto names_of = [](const ProductMetrics& m) {
            std::vector<std::string> names;
            names.reserve(m.size());
            for (const auto& [name, value] : m) {
                names.push_back(name);
            }
            return names;
        };
        if (names_of(*previous) != names_of(current)) {
            throw ConfigError("mismatched metric name sets between snapshots");
        }
    }
    std::map<std::string, double> deltas;
    for (const auto& [name, value] : current) {
        double base = previous ? previous->at(name) : 0.0;
        deltas["delta_" + name] = value - base;
    }
    return deltas;
}

std::vector<std::string> Dataset::header() const {
    std::vector<std::string> columns = {"filepath", "commit_id", "release_tag", "committed_at",
                                        "failure_prone"};
    columns.insert(columns.end(), process_columns.begin(), process_columns.end());
    columns.insert(columns.end(), product_columns.begin(), product_columns.end());
    columns.insert(columns.end(), delta_columns.begin(), delta_columns.end());
    return columns;
}

Dataset extract(const RepositorySession& session,
                const std::vector<FailureProneFile>& failure_prone,
                const MetricKindSet& kinds, const LanguagePlugin& plugin) {
    validate_metric_kinds(kinds);
    std::vector<Release> releases = session.releases();
    if (releases.empty()) {
        throw RepositoryError("no releases: the release-granular dataset is undefined");
    }

    const bool want_process = kinds.contains(MetricKind::Process);
    const bool want_product = kinds.contains(MetricKind::Product);
    const bool want_delta = kinds.contains(MetricKind::Delta);

    Dataset dataset;
    if (want_process) {
        dataset.process_columns = process_metric_columns();
    }
    if (want_product) {
        for (const auto& [name, value] : plugin.product_metrics("")) {
            dataset.product_columns.push_back(name);
        }
    }
    if (want_delta) {
        for (const std::string& name : dataset.product_columns) {
            dataset.delta_columns.push_back("delta_" + name);
        }
    }

    std::set<std::pair<std::string, std::string>> positive;
    for (const FailureProneFile& fpf : failure_prone) {
        positive.emplace(fpf.filepath, fpf.commit_id);
    }

    std::map<std::string, ProductMetrics> previous_products;
    std::set<std::string> seen_heads;
    for (const Release& release : releases) {
        // Tags sharing a head would duplicate (filepath, commit_id) pairs;
        // the first release in order keeps the rows.
        if (!seen_heads.insert(release.head_commit_id).second) {
            log::debug("skipping release " + release.tag_name + ": head " +
                       release.head_commit_id + " already covered");
            continue;
        }
        std::map<std::string, ProcessMetrics> process;
        if (want_process) {
            process = get_process_metrics(session, release);
        }

        std::vector<std::string> files;
        for (const std::string& path : session.files_at(release.head_commit_id)) {
            if (plugin.ignore_file(path)) {
                continue;
            }
            if (session.is_binary_at(release.head_commit_id, path)) {
                log::debug("excluding binary file " + path + " at " + release.tag_name);
                continue;
            }
            files.push_back(path);
        }

        std::map<std::string, ProductMetrics> current_products;
        for (const std::string& path : files) {
            DatasetRow row;
            row.filepath = path;
            row.commit_id = release.head_commit_id;
            row.release_tag = release.tag_name;
            row.committed_at = release.tagged_at;
            row.failure_prone = positive.contains({path, release.head_commit_id});

            if (want_process) {
                auto it = process.find(path);
                ProcessMetrics metrics = it != process.end() ? it->second : ProcessMetrics{};
                for (const auto& [name, value] : metrics.as_columns()) {
                    row.metrics[name] = value;
                }
            }
            if (want_product) {
                try {
                    ProductMetrics product =
                        plugin.product_metrics(session.content_at(release.head_commit_id, path));
                    for (const auto& [name, value] : product) {
                        row.metrics[name] = value;
                    }
                    if (want_delta) {
                        auto prev = previous_products.find(path);
                        std::optional<ProductMetrics> baseline;
                        if (prev != previous_products.end()) {
                            baseline = prev->second;
                        }
                        for (const auto& [name, value] : delta_metrics(product, baseline)) {
                            row.metrics[name] = value;
                        }
                    }
                    current_products[path] = std::move(product);
                } catch (const Error& e) {
                    log::warn("product metrics failed for " + path + " at " +
                              release.tag_name + ": " + e.what());
                }
            }
            dataset.rows.push_back(std::move(row));
        }
        previous_products = std::move(current_products);
    }
    return dataset;
}

std::string to_csv_string(const Dataset& dataset) {
    std::string out = csv::join_row(dataset.header());
    out += '\n';
    std::vector<std::string> metric_columns;
    metric_columns.insert(metric_columns.end(), dataset.process_columns.begin(),
                          dataset.process_columns.end());
    metric_columns.insert(metric_columns.end(), dataset.product_columns.begin(),
                          dataset.product_columns.end());
    metric_columns.insert(metric_columns.end(), dataset.delta_columns.begin(),
                          dataset.delta_columns.end());
    for (const DatasetRow& row : dataset.rows) {
        std::vector<std::string> fields = {row.filepath, row.commit_id, row.release_tag,
                                           text::iso8601_utc(row.committed_at),
                                           row.failure_prone ? "1" : "0"};
        for (const std::string& column : metric_columns) {
            auto it = row.metrics.find(column);
            fields.push_back(it == row.metrics.end() ? "" : text::format_number(it->second));
        }
        out += csv::join_row(fields);
        out += '\n';
    }
    return out;
}

void to_csv(const Dataset& dataset, const std::filesystem::path& output_path) {
    std::ofstream out(output_path, std::ios::binary);
    if (!out) {
        throw Error("cannot open for writing: " + output_path.string());
    }
    out << to_csv_string(dataset);
    if (!out) {
        throw Error("write failed: " + output_path.string());
    }
}

std::string dataset_to_json(const Dataset& dataset) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    std::vector<std::string> metric_columns;
    metric_columns.insert(metric_columns.end(), dataset.process_columns.begin(),
                          dataset.process_columns.end());
    metric_columns.insert(metric_columns.end(), dataset.product_columns.begin(),
                          dataset.product_columns.end());
    metric_columns.insert(metric_columns.end(), dataset.delta_columns.begin(),
                          dataset.delta_columns.end());
    for (const DatasetRow& row : dataset.rows) {
        nlohmann::ordered_json obj;
        obj["filepath"] = row.filepath;
        obj["commit_id"] = row.commit_id;
        obj["release_tag"] = row.release_tag;
        obj["committed_at"] = text::iso8601_utc(row.committed_at);
        obj["failure_prone"] = row.failure_prone ? 1 : 0;
        for (const std::string& column : metric_columns) {
            auto it = row.metrics.find(column);
            if (it == row.metrics.end()) {
                obj[column] = nullptr;
            } else {
                obj[column] = it->second;
            }
        }
        rows.push_back(std::move(obj));
    }
    return rows.dump(2) + "\n";
}

Dataset dataset_from_json(std::string_view json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("dataset parse error: ") + e.what());
    }
    if (!doc.is_array()) {
        throw ConfigError("dataset JSON must be an array of row objects");
    }

    static const std::set<std::string> kFixed = {"filepath", "commit_id", "release_tag",
                                                 "committed_at", "failure_prone"};
    std::set<std::string> process_set(kProcessColumns.begin(), kProcessColumns.end());

    Dataset dataset;
    std::set<std::string> process_cols;
    std::set<std::string> product_cols;
    std::set<std::string> delta_cols;
    for (const auto& obj : doc) {
        if (!obj.is_object()) {
            throw ConfigError("dataset rows must be objects");
        }
        DatasetRow row;
        row.filepath = obj.at("filepath").get<std::string>();
        row.commit_id = obj.at("commit_id").get<std::string>();
        row.release_tag = obj.at("release_tag").get<std::string>();
        auto at = text::parse_iso8601_utc(obj.at("committed_at").get<std::string>());
        if (!at) {
            throw ConfigError("bad committed_at in dataset row");
        }
        row.committed_at = *at;
        row.failure_prone = obj.at("failure_prone").get<int>() != 0;
        for (const auto& [key, value] : obj.items()) {
            if (kFixed.contains(key)) {
                continue;
            }
            if (process_set.contains(key)) {
                process_cols.insert(key);
            } else if (text::starts_with(key, "delta_")) {
                delta_cols.insert(key);
            } else {
                product_cols.insert(key);
            }
            if (!value.is_null()) {
                row.metrics[key] = value.get<double>();
            }
        }
        dataset.rows.push_back(std::move(row));
    }
    dataset.process_columns.assign(process_cols.begin(), process_cols.end());
    dataset.product_columns.assign(product_cols.begin(), product_cols.end());
    dataset.delta_columns.assign(delta_cols.begin(), delta_cols.end());
    return dataset;
}

}  // namespace repominer
