#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "repominer/git_repo.hpp"

namespace repominer {

/// Tracks file identity through adds, deletes, renames, and re-creates over
/// the first-parent linearized history. An "order" is an index into the
/// oldest-first commit list; state at order i is the snapshot after commit i.
/// A file deleted and later re-created under the same path keeps its
/// identity.
class FileHistory {
public:
    explicit FileHistory(const std::vector<CommitInfo>& commits_oldest_first);

    /// Identity of the file living at `path` in the snapshot of commit
    /// `order`, or nullopt when no file lives there.
    std::optional<int> identity_at(std::string_view path, int order) const;

    /// Path of identity `id` at the snapshot, or nullopt when not alive.
    std::optional<std::string> path_at(int id, int order) const;

    bool alive_at(int id, int order) const;

    /// Every path the identity has had at or before `order` (rename chain).
    std::set<std::string> aliases_up_to(int id, int order) const;

    int identity_count() const { return static_cast<int>(segments_.size()); }

private:
    struct Segment {
        int start = 0;  // first order (inclusive) the file is alive
        int end = 0;    // first order (exclusive) it is gone
        std::string path;
    };
    struct PathSpan {
        int start = 0;
        int end = 0;
        int id = 0;
    };

    std::vector<std::vector<Segment>> segments_;  // per identity, sorted by start
    std::map<std::string, std::vector<PathSpan>, std::less<>> by_path_;
};

}  // namespace repominer
