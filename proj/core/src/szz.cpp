#include "repominer/szz.hpp"

#include <map>
#include <set>

#include "repominer/error.hpp"
#include "repominer/text.hpp"

namespace repominer {

std::string bug_introducing_commit(const RepositorySession& session, const SzzQuery& query,
                                   std::string_view comment_marker) {
    std::set<int> lines;
    for (const DiffLine& line : query.deleted_lines) {
        if (text::is_blank(line.text)) {
            continue;
        }
        if (!comment_marker.empty() &&
            text::starts_with(text::lstrip(line.text), comment_marker)) {
            continue;
        }
        lines.insert(line.number);
    }
    if (lines.empty()) {
        throw NoBlameAnchorError("no blame anchor for " + query.filepath + " at " +
                                 query.fixing_commit_id + " (fix deletes no code lines)");
    }

    const CommitInfo& fixing = session.commit(query.fixing_commit_id);
    if (fixing.parent_ids.empty()) {
        throw NoBlameAnchorError("fixing commit " + query.fixing_commit_id +
                                 " has no parent to blame");
    }
    const std::string& parent = fixing.parent_ids.front();

    std::map<int, std::string> blamed = session.blame(parent, query.filepath, lines);

    std::string oldest;
    int oldest_order = 0;
    for (const auto& [line, commit_id] : blamed) {
        int order = session.effective_order_of(commit_id);
        if (oldest.empty() || order < oldest_order ||
            (order == oldest_order && commit_id < oldest)) {
            oldest = commit_id;
            oldest_order = order;
        }
    }
    return oldest;
}

}  // namespace repominer
