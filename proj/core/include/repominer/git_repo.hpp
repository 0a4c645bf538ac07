#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace repominer {

/// Where a repository lives: either a remote URL (clone_path then required)
/// or a local filesystem path.
struct RepositorySource {
    std::string location;
    std::optional<std::string> branch;
    std::optional<std::filesystem::path> clone_path;

    bool is_remote() const;
};

enum class ChangeKind { Added, Deleted, Modified, Renamed };

std::string_view to_string(ChangeKind kind);

/// One changed line; 1-based. Deletions number lines in the pre-image,
/// additions in the post-image. `text` excludes the +/- marker.
struct DiffLine {
    int number = 0;
    std::string text;

    bool operator==(const DiffLine&) const = default;
};

struct FileChange {
    ChangeKind kind = ChangeKind::Modified;
    std::optional<std::string> old_path;
    std::optional<std::string> new_path;
    std::vector<DiffLine> added_lines;
    std::vector<DiffLine> deleted_lines;
    int hunk_count = 0;

    /// The path this change is best known by: new_path when present.
    const std::string& path() const;
};

struct CommitInfo {
    std::string id;
    std::vector<std::string> parent_ids;
    std::string author_name;
    std::string author_email;
    std::int64_t authored_at = 0;  // seconds since epoch, UTC
    std::string message;
    bool is_merge = false;
    std::vector<FileChange> changes;  // against the first parent
};

struct Release {
    std::string tag_name;
    std::string head_commit_id;
    std::int64_t tagged_at = 0;  // authored time of the head commit
    int ordinal = 0;

    bool operator==(const Release&) const = default;
};

enum class CommitOrder { OldestFirst, NewestFirst };

/// Read-only handle to a fully-fetched local clone. Confine one session to a
/// single thread; open independent sessions for parallel work. Returned
/// values are plain data, safe to share.
class RepositorySession {
public:
    static RepositorySession open(const RepositorySource& source);

    const std::filesystem::path& worktree() const { return worktree_; }
    const std::string& branch() const { return branch_name_; }

    /// First-parent linearized history of the analyzed branch, oldest first,
    /// each commit carrying its file changes. Cached after the first call.
    const std::vector<CommitInfo>& commits() const;
    std::vector<CommitInfo> list_commits(CommitOrder order) const;

    bool has_commit(const std::string& commit_id) const;
    const CommitInfo& commit(const std::string& commit_id) const;

    /// Position in the oldest-first linearized history; throws for commits
    /// that are not on the first-parent chain.
    int order_of(const std::string& commit_id) const;

    /// Like order_of, but a commit reachable only through a merged-in side
    /// branch maps to the first linearized commit that contains it.
    int effective_order_of(const std::string& commit_id) const;

    /// Last-writer commit per requested line at the given revision, with
    /// rename following.
    std::map<int, std::string> blame(const std::string& commit_id, const std::string& path,
                                     const std::set<int>& line_numbers) const;

    /// Tags reachable from the analyzed branch, chronologically ordered by
    /// head-commit authored time (ties broken by tag name), ordinals 0-based.
    std::vector<Release> releases() const;

    /// Full file text at the snapshot; invalid UTF-8 is lossily replaced.
    std::string content_at(const std::string& commit_id, const std::string& path) const;

    /// Repo-relative blob paths in the tree of the commit, sorted.
    std::vector<std::string> files_at(const std::string& commit_id) const;

    bool is_binary_at(const std::string& commit_id, const std::string& path) const;

private:
    RepositorySession() = default;

    void load_commits() const;
    std::string raw_content_at(const std::string& commit_id, const std::string& path) const;
    bool is_ancestor(const std::string& ancestor, const std::string& descendant) const;

    std::filesystem::path worktree_;
    std::string branch_name_;
    std::string branch_ref_;  // rev-parseable name of the analyzed ref
    std::string tip_;         // empty for unborn/empty histories

    mutable bool commits_loaded_ = false;
    mutable std::vector<CommitInfo> commits_;
    mutable std::unordered_map<std::string, int> order_;
    mutable std::unordered_map<std::string, int> effective_order_cache_;
};

namespace detail {

/// Parses one commit's patch text (`git log -p` format) into file changes.
/// Exposed for tests.
std::vector<FileChange> parse_patch(std::string_view patch);

}  // namespace detail

}  // namespace repominer
