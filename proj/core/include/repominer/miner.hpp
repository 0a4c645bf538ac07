#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "repominer/fixing_classifier.hpp"
#include "repominer/git_repo.hpp"

namespace repominer {

/// Specializes the pipeline to one language: file filters plus the product
/// metrics for a file snapshot. Implementations are stateless and pure.
class LanguagePlugin {
public:
    virtual ~LanguagePlugin() = default;

    virtual std::string name() const = 0;

    /// True when the file plays no role for this language. Decides on path
    /// alone for the shipped plugins; content is offered for future
    /// content-sniffing plugins.
    virtual bool ignore_file(std::string_view path,
                             std::optional<std::string_view> content = std::nullopt) const = 0;

    /// True when the change touches at least one non-ignored path.
    virtual bool is_language_change(const FileChange& change) const;

    /// Line-comment marker for SZZ noise filtering; empty when unknown.
    virtual std::string comment_marker() const = 0;

    virtual std::map<std::string, double> product_metrics(std::string_view content) const = 0;
};

/// One defect interval on one file.
struct FixedFile {
    std::string filepath;  // name at the fixing commit
    std::string fic;
    std::string bic;
    std::set<std::string> aliases;  // rename chain, includes filepath

    bool operator==(const FixedFile&) const = default;
};

/// One failure-prone snapshot: the file under its then-current name at one
/// commit inside a defect interval.
struct FailureProneFile {
    std::string filepath;
    std::string commit_id;
    std::string fixing_commit_id;

    bool operator==(const FailureProneFile&) const = default;
    auto operator<=>(const FailureProneFile&) const = default;
};

/// Classifies every commit of the linearized history and keeps the ones with
/// a non-empty category set that modify at least one language file. Result
/// ordered newest first.
std::vector<FixingCommitRecord> identify_fixing_commits(const RepositorySession& session,
                                                        const LanguagePlugin& plugin,
                                                        const RuleSet& rules);

/// Walks fixing commits backward (newest first), computes a bug-introducing
/// commit per qualifying modified language file, and folds the observations
/// into defect intervals. Files whose SZZ query fails are skipped with a
/// warning.
std::vector<FixedFile> identify_fixed_files(const RepositorySession& session,
                                            const std::vector<FixingCommitRecord>& fixing_commits,
                                            const LanguagePlugin& plugin);

/// Emits one FailureProneFile per commit c with order(bic) <= order(c) <
/// order(fic) in which the file exists, sorted by (filepath, order). When a
/// plugin is given, snapshots whose then-current path it rejects are dropped
/// (a rename can carry a file into scope mid-interval).
std::vector<FailureProneFile> label_snapshots(const RepositorySession& session,
                                              const std::vector<FixedFile>& fixed_files,
                                              const LanguagePlugin* plugin = nullptr);

// ---------------------------------------------------------------------------
// Interval bookkeeping core, shared with the property tests.

/// One defect interval over linearized history positions.
struct FixInterval {
    int file_id = 0;
    int fic_order = 0;
    int bic_order = 0;
    std::string fic_id;
    std::string bic_id;
};

/// Folds SZZ observations into intervals. Observations must arrive with
/// fic_order strictly decreasing per file (the backward walk). First sight of
/// a file appends; a fix older than the latest interval's bic appends a new
/// interval; a bic older than the latest interval's (strictly inside the new
/// observation's span) updates it; anything else is dropped.
class FixIntervalLedger {
public:
    /// Returns true when the observation was appended or folded in.
    bool observe(const FixInterval& observation);

    const std::vector<FixInterval>& intervals() const { return intervals_; }

private:
    std::vector<FixInterval> intervals_;
    std::unordered_map<int, std::size_t> latest_;  // file_id -> index of last append
};

/// Labelling core: enumerates [bic, fic) per interval, keeps snapshots where
/// the file exists, names each by its path at that snapshot, and sorts by
/// (filepath, order).
std::vector<FailureProneFile> label_intervals(
    const std::vector<FixInterval>& intervals,
    const std::function<std::optional<std::string>(int file_id, int order)>& path_at,
    const std::function<std::string(int order)>& commit_id_at);

}  // namespace repominer
