#include "repominer/git_repo.hpp"

#include <algorithm>
#include <cstdlib>

#include "repominer/error.hpp"
#include "repominer/log.hpp"
#include "repominer/process.hpp"
#include "repominer/text.hpp"

namespace repominer {

namespace {

const std::vector<std::pair<std::string, std::string>> kGitEnv = {
    {"LC_ALL", "C"},
    {"GIT_TERMINAL_PROMPT", "0"},
    {"GIT_OPTIONAL_LOCKS", "0"},
};

// Host git config must not change output formats the parsers rely on.
ProcessResult git_in(const std::filesystem::path& repo, std::vector<std::string> args) {
    std::vector<std::string> argv = {"git",
                                     "-C",
                                     repo.string(),
                                     "-c",
                                     "core.quotepath=false",
                                     "-c",
                                     "log.showSignature=false",
                                     "-c",
                                     "diff.noprefix=false",
                                     "-c",
                                     "diff.mnemonicPrefix=false",
                                     "-c",
                                     "diff.algorithm=myers"};
    argv.insert(argv.end(), std::make_move_iterator(args.begin()),
                std::make_move_iterator(args.end()));
    return run_process(argv, std::nullopt, kGitEnv);
}

ProcessResult git_checked(const std::filesystem::path& repo, std::vector<std::string> args,
                          std::string_view what) {
    ProcessResult res = git_in(repo, std::move(args));
    if (!res.ok()) {
        throw RepositoryError(std::string(what) + ": " + std::string(text::rstrip(res.err)));
    }
    return res;
}

bool is_hex40(std::string_view s) {
    if (s.size() != 40) {
        return false;
    }
    return std::all_of(s.begin(), s.end(), [](char c) {
        return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f');
    });
}

/// Undoes git's C-style path quoting ("\t", "\123", ...).
std::string unquote_git_path(std::string_view raw) {
    if (raw.size() < 2 || raw.front() != '"' || raw.back() != '"') {
        return std::string(raw);
    }
    std::string_view body = raw.substr(1, raw.size() - 2);
    std::string out;
    out.reserve(body.size());
    for (std::size_t i = 0; i < body.size(); ++i) {
        char c = body[i];
        if (c != '\\' || i + 1 >= body.size()) {
            out += c;
            continue;
        }
        char next = body[++i];
        switch (next) {
            case 'n': out += '\n'; break;
            case 't': out += '\t'; break;
            case 'r': out += '\r'; break;
            case '\\': out += '\\'; break;
            case '"': out += '"'; break;
            default:
                if (next >= '0' && next <= '7') {
                    int value = next - '0';
                    for (int k = 0; k < 2 && i + 1 < body.size() && body[i + 1] >= '0' &&
                                    body[i + 1] <= '7';
                         ++k) {
                        value = value * 8 + (body[++i] - '0');
                    }
                    out += static_cast<char>(value);
                } else {
                    out += next;
                }
                break;
        }
    }
    return out;
}

std::string derive_clone_name(std::string_view url) {
    std::string_view s = url;
    while (!s.empty() && (s.back() == '/' || s.back() == '\\')) {
        s.remove_suffix(1);
    }
    std::size_t slash = s.find_last_of("/:");
    std::string name(slash == std::string_view::npos ? s : s.substr(slash + 1));
    if (text::ends_with(name, ".git")) {
        name.resize(name.size() - 4);
    }
    if (name.empty()) {
        name = "repository";
    }
    return name;
}

}  // namespace

bool RepositorySource::is_remote() const {
    std::string_view loc = location;
    if (loc.find("://") != std::string_view::npos) {
        return true;
    }
    // scp-like syntax: user@host:path
    std::size_t at = loc.find('@');
    std::size_t colon = loc.find(':');
    return at != std::string_view::npos && colon != std::string_view::npos && at < colon;
}

std::string_view to_string(ChangeKind kind) {
    switch (kind) {
        case ChangeKind::Added: return "added";
        case ChangeKind::Deleted: return "deleted";
        case ChangeKind::Modified: return "modified";
        case ChangeKind::Renamed: return "renamed";
    }
    return "?";
}

const std::string& FileChange::path() const {
    if (new_path) {
        return *new_path;
    }
    if (old_path) {
        return *old_path;
    }
    static const std::string empty;
    return empty;
}

RepositorySession RepositorySession::open(const RepositorySource& source) {
    RepositorySession session;

    if (source.is_remote()) {
        if (!source.clone_path) {
            throw RepositoryError("clone path required for remote location " + source.location);
        }
        std::filesystem::path target = *source.clone_path / derive_clone_name(source.location);
        bool reuse = false;
        if (std::filesystem::exists(target)) {
            ProcessResult origin =
                git_in(target, {"config", "--get", "remote.origin.url"});
            if (origin.ok() && std::string(text::rstrip(origin.out)) == source.location) {
                log::info("reusing existing clone at " + target.string());
                reuse = true;
            } else {
                throw RepositoryError("clone target already exists and is not a clone of " +
                                      source.location + ": " + target.string());
            }
        }
        if (!reuse) {
            std::filesystem::create_directories(*source.clone_path);
            ProcessResult res = run_process(
                {"git", "clone", "--", source.location, target.string()}, std::nullopt, kGitEnv);
            if (!res.ok()) {
                throw RepositoryError("clone failed for " + source.location + ": " +
                                      std::string(text::rstrip(res.err)));
            }
        }
        session.worktree_ = target;
    } else {
        std::filesystem::path local(source.location);
        if (!std::filesystem::exists(local)) {
            throw RepositoryError("local repository path does not exist: " + source.location);
        }
        ProcessResult res = git_in(local, {"rev-parse", "--git-dir"});
        if (!res.ok()) {
            throw RepositoryError("not a git repository: " + source.location);
        }
        session.worktree_ = local;
    }

    ProcessResult shallow =
        git_checked(session.worktree_, {"rev-parse", "--is-shallow-repository"},
                    "cannot inspect repository");
    if (text::rstrip(shallow.out) == "true") {
        throw RepositoryError("shallow repository rejected (full history required): " +
                              session.worktree_.string());
    }

    ProcessResult head = git_in(session.worktree_, {"symbolic-ref", "--short", "-q", "HEAD"});
    std::string head_branch(text::rstrip(head.out));

    if (source.branch) {
        const std::string& want = *source.branch;
        if (git_in(session.worktree_, {"rev-parse", "--verify", "--quiet", "refs/heads/" + want})
                .ok()) {
            session.branch_ref_ = "refs/heads/" + want;
        } else if (git_in(session.worktree_,
                          {"rev-parse", "--verify", "--quiet", "refs/remotes/origin/" + want})
                       .ok()) {
            session.branch_ref_ = "refs/remotes/origin/" + want;
        } else if (want == head_branch) {
            session.branch_ref_ = "HEAD";  // unborn branch of an empty repository
        } else {
            throw RepositoryError("unknown branch '" + want + "'");
        }
        session.branch_name_ = want;
    } else {
        session.branch_name_ = head_branch.empty() ? "HEAD" : head_branch;
        session.branch_ref_ = "HEAD";
    }

    ProcessResult tip = git_in(session.worktree_, {"rev-parse", "--verify", "--quiet",
                                                   session.branch_ref_ + "^{commit}"});
    session.tip_ = tip.ok() ? std::string(text::rstrip(tip.out)) : "";
    return session;
}

void RepositorySession::load_commits() const {
    if (commits_loaded_) {
        return;
    }
    commits_loaded_ = true;
    if (tip_.empty()) {
        return;  // empty history
    }

    ProcessResult res = git_checked(
        worktree_,
        {"log", branch_ref_, "--first-parent", "--reverse", "-p",
         "--diff-merges=first-parent", "-M50%", "--no-color", "--no-ext-diff", "--no-textconv",
         "--format=%x01C%x01%H%x1f%P%x1f%an%x1f%ae%x1f%at%x1f%B%x1e"},
        "cannot read history");

    const std::string marker = "\x01"
                               "C"
                               "\x01";
    std::string_view stream = res.out;
    std::size_t pos = stream.find(marker);
    while (pos != std::string_view::npos) {
        std::size_t start = pos + marker.size();
        std::size_t next = stream.find(marker, start);
        std::string_view record = stream.substr(
            start, next == std::string_view::npos ? std::string_view::npos : next - start);
        pos = next;

        std::size_t header_end = record.find('\x1e');
        if (header_end == std::string_view::npos) {
            continue;
        }
        std::string_view header = record.substr(0, header_end);
        // Five fixed fields, then the message (which may itself contain the
        // separator byte in pathological cases).
        std::vector<std::string> fields;
        std::string_view rest = header;
        for (int k = 0; k < 5; ++k) {
            std::size_t sep = rest.find('\x1f');
            if (sep == std::string_view::npos) {
                break;
            }
            fields.emplace_back(rest.substr(0, sep));
            rest = rest.substr(sep + 1);
        }
        if (fields.size() != 5) {
            continue;
        }
        CommitInfo info;
        info.id = fields[0];
        if (!fields[1].empty()) {
            info.parent_ids = text::split(fields[1], ' ');
        }
        info.author_name = fields[2];
        info.author_email = fields[3];
        info.authored_at = std::strtoll(fields[4].c_str(), nullptr, 10);
        info.message = std::string(text::rstrip(rest));
        info.is_merge = info.parent_ids.size() >= 2;
        info.changes = detail::parse_patch(record.substr(header_end + 1));
        order_[info.id] = static_cast<int>(commits_.size());
        commits_.push_back(std::move(info));
    }
}

const std::vector<CommitInfo>& RepositorySession::commits() const {
    load_commits();
    return commits_;
}

std::vector<CommitInfo> RepositorySession::list_commits(CommitOrder order) const {
    std::vector<CommitInfo> out = commits();
    if (order == CommitOrder::NewestFirst) {
        std::reverse(out.begin(), out.end());
    }
    return out;
}

bool RepositorySession::has_commit(const std::string& commit_id) const {
    load_commits();
    return order_.contains(commit_id);
}

const CommitInfo& RepositorySession::commit(const std::string& commit_id) const {
    return commits_[static_cast<std::size_t>(order_of(commit_id))];
}

int RepositorySession::order_of(const std::string& commit_id) const {
    load_commits();
    auto it = order_.find(commit_id);
    if (it == order_.end()) {
        throw RepositoryError("commit not on the linearized history: " + commit_id);
    }
    return it->second;
}

bool RepositorySession::is_ancestor(const std::string& ancestor,
                                    const std::string& descendant) const {
    ProcessResult res = git_in(worktree_, {"merge-base", "--is-ancestor", ancestor, descendant});
    if (res.exit_code == 0) {
        return true;
    }
    if (res.exit_code == 1) {
        return false;
    }
    throw RepositoryError("merge-base failed for " + ancestor + ": " +
                          std::string(text::rstrip(res.err)));
}

int RepositorySession::effective_order_of(const std::string& commit_id) const {
    load_commits();
    auto it = order_.find(commit_id);
    if (it != order_.end()) {
        return it->second;
    }
    auto cached = effective_order_cache_.find(commit_id);
    if (cached != effective_order_cache_.end()) {
        return cached->second;
    }
    if (commits_.empty() || !is_ancestor(commit_id, commits_.back().id)) {
        throw RepositoryError("commit not reachable from the analyzed branch: " + commit_id);
    }
    // Containment is monotone along the first-parent chain.
    int lo = 0;
    int hi = static_cast<int>(commits_.size()) - 1;
    while (lo < hi) {
        int mid = lo + (hi - lo) / 2;
        if (is_ancestor(commit_id, commits_[static_cast<std::size_t>(mid)].id)) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    effective_order_cache_[commit_id] = lo;
    return lo;
}

std::map<int, std::string> RepositorySession::blame(const std::string& commit_id,
                                                    const std::string& path,
                                                    const std::set<int>& line_numbers) const {
    std::string raw = raw_content_at(commit_id, path);
    if (text::looks_binary(raw)) {
        throw RepositoryError("binary file: " + path + " at " + commit_id);
    }
    int file_length = static_cast<int>(text::split_lines(raw).size());
    for (int line : line_numbers) {
        if (line < 1 || line > file_length) {
            throw RepositoryError("line out of range: " + path + ":" + std::to_string(line) +
                                  " at " + commit_id + " (file has " +
                                  std::to_string(file_length) + " lines)");
        }
    }

    ProcessResult res = git_checked(worktree_, {"blame", "--porcelain", commit_id, "--", path},
                                    "blame failed for " + path);

    std::map<int, std::string> by_line;
    std::size_t pos = 0;
    std::string_view out = res.out;
    while (pos < out.size()) {
        std::size_t nl = out.find('\n', pos);
        std::string_view line =
            out.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = (nl == std::string_view::npos) ? out.size() : nl + 1;
        if (line.empty() || line.front() == '\t') {
            continue;  // content line
        }
        std::size_t sp = line.find(' ');
        if (sp != 40 || !is_hex40(line.substr(0, 40))) {
            continue;  // metadata line (author, summary, ...)
        }
        std::vector<std::string> parts = text::split(line, ' ');
        if (parts.size() < 3) {
            continue;
        }
        int final_line = std::atoi(parts[2].c_str());
        if (final_line > 0) {
            by_line[final_line] = parts[0];
        }
    }

    std::map<int, std::string> result;
    for (int line : line_numbers) {
        auto it = by_line.find(line);
        if (it == by_line.end()) {
            throw RepositoryError("blame returned no attribution for " + path + ":" +
                                  std::to_string(line));
        }
        result[line] = it->second;
    }
    return result;
}

std::vector<Release> RepositorySession::releases() const {
    load_commits();
    ProcessResult res = git_checked(
        worktree_,
        {"for-each-ref", "refs/tags", "--format=%(refname:short)\x1f%(objectname)\x1f%(*objectname)"},
        "cannot list tags");

    std::vector<Release> releases;
    for (const std::string& line : text::split_lines(res.out)) {
        if (line.empty()) {
            continue;
        }
        std::vector<std::string> fields = text::split(line, '\x1f');
        if (fields.size() < 3) {
            continue;
        }
        const std::string& tag_name = fields[0];
        std::string target = fields[2].empty() ? fields[1] : fields[2];

        Release release;
        release.tag_name = tag_name;
        release.head_commit_id = target;
        auto it = order_.find(target);
        if (it != order_.end()) {
            release.tagged_at = commits_[static_cast<std::size_t>(it->second)].authored_at;
        } else {
            ProcessResult type = git_in(worktree_, {"cat-file", "-t", target});
            if (!type.ok() || text::rstrip(type.out) != "commit") {
                log::debug("skipping tag " + tag_name + ": target is not a commit");
                continue;
            }
            if (tip_.empty() || !is_ancestor(target, tip_)) {
                log::debug("skipping tag " + tag_name + ": not reachable from " + branch_name_);
                continue;
            }
            ProcessResult when =
                git_checked(worktree_, {"show", "-s", "--format=%at", target}, "cannot read tag");
            release.tagged_at = std::strtoll(when.out.c_str(), nullptr, 10);
        }
        releases.push_back(std::move(release));
    }

    std::sort(releases.begin(), releases.end(), [](const Release& a, const Release& b) {
        return std::tie(a.tagged_at, a.tag_name) < std::tie(b.tagged_at, b.tag_name);
    });
    for (std::size_t i = 0; i < releases.size(); ++i) {
        releases[i].ordinal = static_cast<int>(i);
    }
    return releases;
}

std::string RepositorySession::raw_content_at(const std::string& commit_id,
                                              const std::string& path) const {
    ProcessResult res = git_in(worktree_, {"cat-file", "blob", commit_id + ":" + path});
    if (!res.ok()) {
        if (!git_in(worktree_, {"cat-file", "-e", commit_id + "^{commit}"}).ok()) {
            throw RepositoryError("unknown commit: " + commit_id);
        }
        throw RepositoryError("path absent at revision: " + path + " at " + commit_id);
    }
    return res.out;
}

std::string RepositorySession::content_at(const std::string& commit_id,
                                          const std::string& path) const {
    return text::lossy_utf8(raw_content_at(commit_id, path));
}

std::vector<std::string> RepositorySession::files_at(const std::string& commit_id) const {
    ProcessResult res = git_checked(worktree_, {"ls-tree", "-r", "-z", commit_id},
                                    "cannot list tree of " + commit_id);
    std::vector<std::string> files;
    for (const std::string& entry : text::split(res.out, '\0')) {
        if (entry.empty()) {
            continue;
        }
        // <mode> SP <type> SP <object> TAB <path>
        std::size_t tab = entry.find('\t');
        if (tab == std::string::npos) {
            continue;
        }
        std::string_view meta(entry.data(), tab);
        if (meta.find(" blob ") == std::string_view::npos) {
            continue;  // gitlinks and trees
        }
        files.emplace_back(entry.substr(tab + 1));
    }
    std::sort(files.begin(), files.end());
    return files;
}

bool RepositorySession::is_binary_at(const std::string& commit_id, const std::string& path) const {
    return text::looks_binary(raw_content_at(commit_id, path));
}

namespace detail {

namespace {

struct PatchState {
    std::vector<FileChange> changes;
    FileChange current;
    bool in_file = false;
    int old_line = 0;
    int new_line = 0;
    bool in_hunk = false;

    void finish() {
        if (!in_file) {
            return;
        }
        if (current.kind == ChangeKind::Modified && current.old_path && !current.new_path) {
            current.new_path = current.old_path;
        }
        if (current.kind == ChangeKind::Modified && current.new_path && !current.old_path) {
            current.old_path = current.new_path;
        }
        changes.push_back(std::move(current));
        current = FileChange{};
        in_file = false;
        in_hunk = false;
    }
};

/// Splits "diff --git a/X b/Y"; only trusted when X == Y (mode-only changes),
/// where the midpoint is unambiguous even with spaces in the path.
std::optional<std::string> same_path_from_diff_header(std::string_view rest) {
    std::size_t search = 0;
    while (true) {
        std::size_t mid = rest.find(" b/", search);
        if (mid == std::string_view::npos) {
            return std::nullopt;
        }
        std::string_view left = rest.substr(0, mid);
        std::string_view right = rest.substr(mid + 3);
        if (text::starts_with(left, "a/") && left.substr(2) == right) {
            return std::string(right);
        }
        search = mid + 1;
    }
}

}  // namespace

std::vector<FileChange> parse_patch(std::string_view patch) {
    PatchState state;

    std::size_t pos = 0;
    while (pos < patch.size()) {
        std::size_t nl = patch.find('\n', pos);
        std::string_view line = patch.substr(
            pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = (nl == std::string_view::npos) ? patch.size() : nl + 1;

        if (text::starts_with(line, "diff --git ")) {
            state.finish();
            state.in_file = true;
            if (auto same = same_path_from_diff_header(line.substr(11))) {
                state.current.old_path = *same;
                state.current.new_path = *same;
            }
            continue;
        }
        if (!state.in_file) {
            continue;
        }

        if (state.in_hunk && !line.empty()) {
            char c = line.front();
            if (c == '+') {
                state.current.added_lines.push_back(
                    {state.new_line, std::string(line.substr(1))});
                ++state.new_line;
                continue;
            }
            if (c == '-') {
                state.current.deleted_lines.push_back(
                    {state.old_line, std::string(line.substr(1))});
                ++state.old_line;
                continue;
            }
            if (c == ' ') {
                ++state.old_line;
                ++state.new_line;
                continue;
            }
            if (c == '\\') {
                continue;  // "\ No newline at end of file"
            }
            state.in_hunk = false;
            // fall through: header line for the same file block
        }

        if (text::starts_with(line, "@@ ")) {
            // @@ -old[,count] +new[,count] @@
            std::size_t minus = line.find('-');
            std::size_t plus = line.find('+', minus);
            if (minus == std::string_view::npos || plus == std::string_view::npos) {
                continue;
            }
            state.old_line = std::atoi(std::string(line.substr(minus + 1)).c_str());
            state.new_line = std::atoi(std::string(line.substr(plus + 1)).c_str());
            ++state.current.hunk_count;
            state.in_hunk = true;
            continue;
        }
        if (text::starts_with(line, "rename from ")) {
            state.current.kind = ChangeKind::Renamed;
            state.current.old_path = unquote_git_path(line.substr(12));
            continue;
        }
        if (text::starts_with(line, "rename to ")) {
            state.current.kind = ChangeKind::Renamed;
            state.current.new_path = unquote_git_path(line.substr(10));
            continue;
        }
        if (text::starts_with(line, "copy to ")) {
            state.current.kind = ChangeKind::Added;
            state.current.old_path.reset();
            state.current.new_path = unquote_git_path(line.substr(8));
            continue;
        }
        if (text::starts_with(line, "new file mode")) {
            state.current.kind = ChangeKind::Added;
            state.current.old_path.reset();
            continue;
        }
        if (text::starts_with(line, "deleted file mode")) {
            state.current.kind = ChangeKind::Deleted;
            state.current.new_path.reset();
            continue;
        }
        if (text::starts_with(line, "--- ")) {
            std::string_view target = line.substr(4);
            if (target != "/dev/null" && state.current.kind != ChangeKind::Added &&
                (state.current.kind != ChangeKind::Renamed || !state.current.old_path)) {
                std::string p = unquote_git_path(target);
                if (text::starts_with(p, "a/")) {
                    p.erase(0, 2);
                }
                state.current.old_path = p;
            }
            continue;
        }
        if (text::starts_with(line, "+++ ")) {
            std::string_view target = line.substr(4);
            if (target != "/dev/null") {
                std::string p = unquote_git_path(target);
                if (text::starts_with(p, "b/")) {
                    p.erase(0, 2);
                }
                if (state.current.kind != ChangeKind::Deleted &&
                    (state.current.kind != ChangeKind::Renamed || !state.current.new_path)) {
                    state.current.new_path = p;
                }
            }
            continue;
        }
    }
    state.finish();
    return state.changes;
}

}  // namespace detail

}  // namespace repominer
