#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "repominer/git_repo.hpp"

namespace repominer {

/// One file fixed by one fixing commit; deleted_lines come from that file's
/// FileChange in the fixing commit and are numbered in the parent revision.
struct SzzQuery {
    std::string fixing_commit_id;
    std::string filepath;
    std::vector<DiffLine> deleted_lines;
};

/// The oldest commit whose lines the fix deleted: blank lines and comment
/// lines (per `comment_marker`, no filtering when empty) are dropped, the
/// survivors blamed at the fixing commit's first parent, and the oldest
/// blamed commit returned ("oldest" by linearized position, ties broken by
/// id). Throws NoBlameAnchorError when no line survives the filter.
std::string bug_introducing_commit(const RepositorySession& session, const SzzQuery& query,
                                   std::string_view comment_marker = {});

}  // namespace repominer
