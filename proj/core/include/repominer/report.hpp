#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "repominer/fixing_classifier.hpp"
#include "repominer/miner.hpp"

namespace repominer {

inline constexpr int kReportSchemaVersion = 1;

/// Fixed-file entry as persisted in reports: the (filepath, fic, bic) triple.
struct ReportFixedFile {
    std::string filepath;
    std::string fic;
    std::string bic;

    bool operator==(const ReportFixedFile&) const = default;
};

/// The JSON document produced by the mine command. Sections beyond the mined
/// stage stay empty (omitted on disk). Consistency is enforced on both read
/// and write: every fixed file's fic must appear among the fixing commits,
/// and every failure-prone snapshot's fixing commit among the fics.
struct MiningReport {
    std::string repository;
    std::string branch;
    std::string plugin;
    std::string tool_version;
    std::string generated_at;  // ISO-8601 UTC
    std::vector<FixingCommitRecord> fixing_commits;
    std::optional<std::vector<ReportFixedFile>> fixed_files;
    std::optional<std::vector<FailureProneFile>> failure_prone_files;

    bool operator==(const MiningReport&) const = default;
};

/// SOURCE_DATE_EPOCH wins over the wall clock, keeping runs reproducible.
std::string current_timestamp_iso();

std::string report_to_json(const MiningReport& report);
MiningReport report_from_json(std::string_view json_text);

void write_report(const MiningReport& report, const std::filesystem::path& path);
MiningReport read_report(const std::filesystem::path& path);

}  // namespace repominer
