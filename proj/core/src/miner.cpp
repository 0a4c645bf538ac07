#include "repominer/miner.hpp"

#include <algorithm>

#include "repominer/error.hpp"
#include "repominer/file_history.hpp"
#include "repominer/log.hpp"
#include "repominer/szz.hpp"

namespace repominer {

bool LanguagePlugin::is_language_change(const FileChange& change) const {
    if (change.old_path && !ignore_file(*change.old_path)) {
        return true;
    }
    if (change.new_path && !ignore_file(*change.new_path)) {
        return true;
    }
    return false;
}

std::vector<FixingCommitRecord> identify_fixing_commits(const RepositorySession& session,
                                                        const LanguagePlugin& plugin,
                                                        const RuleSet& rules) {
    std::vector<FixingCommitRecord> records;
    const std::vector<CommitInfo>& commits = session.commits();
    for (auto it = commits.rbegin(); it != commits.rend(); ++it) {
        std::set<DefectCategory> categories = classify(*it, it->changes, rules);
        if (categories.empty()) {
            continue;
        }
        bool touches_language = std::any_of(
            it->changes.begin(), it->changes.end(),
            [&](const FileChange& change) { return plugin.is_language_change(change); });
        if (!touches_language) {
            continue;
        }
        records.push_back({it->id, std::move(categories)});
    }
    return records;
}

bool FixIntervalLedger::observe(const FixInterval& observation) {
    auto it = latest_.find(observation.file_id);
    if (it == latest_.end()) {
        latest_[observation.file_id] = intervals_.size();
        intervals_.push_back(observation);
        return true;
    }
    FixInterval& current = intervals_[it->second];
    if (observation.fic_order < current.bic_order) {
        // The new fix predates the known interval entirely: a second defect.
        it->second = intervals_.size();
        intervals_.push_back(observation);
        return true;
    }
    if (observation.bic_order < current.bic_order &&
        current.bic_order < observation.fic_order) {
        // The known interval's bic sits inside the new span: extend backward.
        current.bic_order = observation.bic_order;
        current.bic_id = observation.bic_id;
        return true;
    }
    return false;
}

std::vector<FixedFile> identify_fixed_files(const RepositorySession& session,
                                            const std::vector<FixingCommitRecord>& fixing_commits,
                                            const LanguagePlugin& plugin) {
    FileHistory history(session.commits());

    // Backward from the most recent fixing commit to the oldest.
    std::vector<const FixingCommitRecord*> ordered;
    ordered.reserve(fixing_commits.size());
    for (const FixingCommitRecord& record : fixing_commits) {
        ordered.push_back(&record);
    }
    std::sort(ordered.begin(), ordered.end(),
              [&](const FixingCommitRecord* a, const FixingCommitRecord* b) {
                  return session.order_of(a->commit_id) > session.order_of(b->commit_id);
              });

    FixIntervalLedger ledger;
    for (const FixingCommitRecord* record : ordered) {
        const CommitInfo& commit = session.commit(record->commit_id);
        int fic_order = session.order_of(commit.id);
        for (const FileChange& change : commit.changes) {
            if (change.kind != ChangeKind::Modified) {
                continue;  // not a new, deleted, or renamed file
            }
            const std::string& path = change.path();
            if (plugin.ignore_file(path) || !plugin.is_language_change(change)) {
                continue;
            }
            std::optional<int> file_id = history.identity_at(path, fic_order);
            if (!file_id) {
                log::warn("skipping " + path + " at " + commit.id +
                          ": no file identity on the linearized history");
                continue;
            }
            std::string bic;
            try {
                bic = bug_introducing_commit(
                    session, {commit.id, path, change.deleted_lines}, plugin.comment_marker());
            } catch (const NoBlameAnchorError& e) {
                log::warn(std::string("skipping file: ") + e.what());
                continue;
            } catch (const RepositoryError& e) {
                log::warn("skipping " + path + " at " + commit.id + ": " + e.what());
                continue;
            }
            ledger.observe(
                {*file_id, fic_order, session.effective_order_of(bic), commit.id, bic});
        }
    }

    std::vector<FixedFile> fixed_files;
    fixed_files.reserve(ledger.intervals().size());
    for (const FixInterval& interval : ledger.intervals()) {
        FixedFile fixed;
        fixed.fic = interval.fic_id;
        fixed.bic = interval.bic_id;
        fixed.filepath = history.path_at(interval.file_id, interval.fic_order).value_or("");
        fixed.aliases = history.aliases_up_to(interval.file_id, interval.fic_order);
        fixed_files.push_back(std::move(fixed));
    }
    return fixed_files;
}

std::vector<FailureProneFile> label_intervals(
    const std::vector<FixInterval>& intervals,
    const std::function<std::optional<std::string>(int file_id, int order)>& path_at,
    const std::function<std::string(int order)>& commit_id_at) {
    struct Tagged {
        FailureProneFile file;
        int order;
    };
    std::vector<Tagged> tagged;
    for (const FixInterval& interval : intervals) {
        for (int order = interval.bic_order; order < interval.fic_order; ++order) {
            std::optional<std::string> path = path_at(interval.file_id, order);
            if (!path) {
                continue;
            }
            tagged.push_back({{std::move(*path), commit_id_at(order), interval.fic_id}, order});
        }
    }
    std::sort(tagged.begin(), tagged.end(), [](const Tagged& a, const Tagged& b) {
        return std::tie(a.file.filepath, a.order) < std::tie(b.file.filepath, b.order);
    });
    std::vector<FailureProneFile> result;
    result.reserve(tagged.size());
    for (Tagged& t : tagged) {
        result.push_back(std::move(t.file));
    }
    return result;
}

std::vector<FailureProneFile> label_snapshots(const RepositorySession& session,
                                              const std::vector<FixedFile>& fixed_files,
                                              const LanguagePlugin* plugin) {
    FileHistory history(session.commits());
    const std::vector<CommitInfo>& commits = session.commits();

    std::vector<FixInterval> intervals;
    intervals.reserve(fixed_files.size());
    for (const FixedFile& fixed : fixed_files) {
        int fic_order = session.order_of(fixed.fic);
        std::optional<int> file_id = history.identity_at(fixed.filepath, fic_order);
        if (!file_id) {
            log::warn("cannot label " + fixed.filepath + ": unknown at its fixing commit");
            continue;
        }
        intervals.push_back(
            {*file_id, fic_order, session.effective_order_of(fixed.bic), fixed.fic, fixed.bic});
    }

    return label_intervals(
        intervals,
        [&](int file_id, int order) -> std::optional<std::string> {
            std::optional<std::string> path = history.path_at(file_id, order);
            if (path && plugin && plugin->ignore_file(*path)) {
                return std::nullopt;
            }
            return path;
        },
        [&](int order) { return commits[static_cast<std::size_t>(order)].id; });
}

}  // namespace repominer
