#include "repominer/file_history.hpp"

#include <algorithm>

namespace repominer {

FileHistory::FileHistory(const std::vector<CommitInfo>& commits) {
    struct Open {
        int id;
        int start;
    };
    std::map<std::string, Open, std::less<>> alive;      // path -> open segment
    std::map<std::string, int, std::less<>> last_owner;  // path -> most recent identity
    std::vector<bool> id_alive;

    auto new_identity = [&] {
        segments_.emplace_back();
        id_alive.push_back(false);
        return static_cast<int>(segments_.size()) - 1;
    };
    auto open_segment = [&](const std::string& path, int id, int start_order) {
        alive[path] = {id, start_order};
        id_alive[static_cast<std::size_t>(id)] = true;
    };
    auto close_segment = [&](const std::string& path, int end_order) {
        auto it = alive.find(path);
        if (it == alive.end()) {
            return;
        }
        segments_[static_cast<std::size_t>(it->second.id)].push_back(
            {it->second.start, end_order, path});
        last_owner[path] = it->second.id;
        id_alive[static_cast<std::size_t>(it->second.id)] = false;
        alive.erase(it);
    };

    const int n = static_cast<int>(commits.size());
    for (int order = 0; order < n; ++order) {
        for (const FileChange& change : commits[static_cast<std::size_t>(order)].changes) {
            switch (change.kind) {
                case ChangeKind::Added: {
                    if (!change.new_path || alive.contains(*change.new_path)) {
                        break;
                    }
                    int id;
                    auto prev = last_owner.find(*change.new_path);
                    // Re-creating a path revives its old identity unless that
                    // identity moved elsewhere and is still alive there.
                    if (prev != last_owner.end() &&
                        !id_alive[static_cast<std::size_t>(prev->second)]) {
                        id = prev->second;
                    } else {
                        id = new_identity();
                    }
                    open_segment(*change.new_path, id, order);
                    break;
                }
                case ChangeKind::Deleted: {
                    if (change.old_path) {
                        close_segment(*change.old_path, order);
                    }
                    break;
                }
                case ChangeKind::Renamed: {
                    if (!change.old_path || !change.new_path) {
                        break;
                    }
                    auto it = alive.find(*change.old_path);
                    int id;
                    if (it != alive.end()) {
                        id = it->second.id;
                        close_segment(*change.old_path, order);
                    } else {
                        id = new_identity();
                    }
                    close_segment(*change.new_path, order);  // overwrite target, if any
                    open_segment(*change.new_path, id, order);
                    break;
                }
                case ChangeKind::Modified: {
                    // Guard against histories starting mid-stream: a path first
                    // seen under a modification opens retroactively.
                    if (change.new_path && !alive.contains(*change.new_path) &&
                        !last_owner.contains(*change.new_path)) {
                        open_segment(*change.new_path, new_identity(), 0);
                    }
                    break;
                }
            }
        }
    }
    std::vector<std::string> still_open;
    still_open.reserve(alive.size());
    for (const auto& [path, open] : alive) {
        still_open.push_back(path);
    }
    for (const std::string& path : still_open) {
        close_segment(path, n);
    }

    for (std::size_t id = 0; id < segments_.size(); ++id) {
        std::sort(segments_[id].begin(), segments_[id].end(),
                  [](const Segment& a, const Segment& b) { return a.start < b.start; });
        for (const Segment& seg : segments_[id]) {
            by_path_[seg.path].push_back({seg.start, seg.end, static_cast<int>(id)});
        }
    }
    for (auto& [path, spans] : by_path_) {
        std::sort(spans.begin(), spans.end(),
                  [](const PathSpan& a, const PathSpan& b) { return a.start < b.start; });
    }
}

std::optional<int> FileHistory::identity_at(std::string_view path, int order) const {
    auto it = by_path_.find(path);
    if (it == by_path_.end()) {
        return std::nullopt;
    }
    for (const PathSpan& span : it->second) {
        if (span.start <= order && order < span.end) {
            return span.id;
        }
        if (span.start > order) {
            break;
        }
    }
    return std::nullopt;
}

std::optional<std::string> FileHistory::path_at(int id, int order) const {
    if (id < 0 || id >= identity_count()) {
        return std::nullopt;
    }
    for (const Segment& seg : segments_[static_cast<std::size_t>(id)]) {
        if (seg.start <= order && order < seg.end) {
            return seg.path;
        }
        if (seg.start > order) {
            break;
        }
    }
    return std::nullopt;
}

bool FileHistory::alive_at(int id, int order) const { return path_at(id, order).has_value(); }

std::set<std::string> FileHistory::aliases_up_to(int id, int order) const {
    std::set<std::string> aliases;
    if (id < 0 || id >= identity_count()) {
        return aliases;
    }
    for (const Segment& seg : segments_[static_cast<std::size_t>(id)]) {
        if (seg.start <= order) {
            aliases.insert(seg.path);
        }
    }
    return aliases;
}

}  // namespace repominer
