#include "support/git_fixture.hpp"

#include <atomic>
#include <fstream>
#include <stdexcept>

#include <unistd.h>

#include "repominer/text.hpp"

namespace repominer::testing {

namespace {

std::atomic<long> g_counter{0};

void check(const ProcessResult& res, const std::string& what) {
    if (!res.ok()) {
        throw std::runtime_error("fixture git failed (" + what + "): " + res.err);
    }
}

}  // namespace

std::filesystem::path scratch_path(const std::string& hint) {
    long n = g_counter.fetch_add(1);
    return std::filesystem::temp_directory_path() /
           ("repominer-" + hint + "-" + std::to_string(::getpid()) + "-" + std::to_string(n));
}

GitFixture::GitFixture() : dir_(scratch_path("fixture")) {
    std::filesystem::create_directories(dir_);
    check(git({"init", "-q", "-b", "main", "."}), "init");
}

GitFixture::~GitFixture() {
    std::error_code ec;
    std::filesystem::remove_all(dir_, ec);
}

ProcessResult GitFixture::git(std::vector<std::string> args,
                              const std::optional<std::filesystem::path>& stdin_file) const {
    std::vector<std::string> argv = {"git",
                                     "-C",
                                     dir_.string(),
                                     "-c",
                                     "user.email=alice@example.com",
                                     "-c",
                                     "user.name=Alice",
                                     "-c",
                                     "commit.gpgsign=false",
                                     "-c",
                                     "core.autocrlf=false"};
    argv.insert(argv.end(), std::make_move_iterator(args.begin()),
                std::make_move_iterator(args.end()));
    std::string stamp = std::to_string(kBaseEpoch + clock_ * 60) + " +0000";
    return run_process(argv, std::nullopt,
                       {{"GIT_AUTHOR_DATE", stamp},
                        {"GIT_COMMITTER_DATE", stamp},
                        {"GIT_TERMINAL_PROMPT", "0"},
                        {"LC_ALL", "C"}},
                       stdin_file);
}

void GitFixture::write(const std::string& relative_path, const std::string& content) {
    write_bytes(relative_path, content);
}

void GitFixture::write_bytes(const std::string& relative_path, const std::string& bytes) {
    std::filesystem::path full = dir_ / relative_path;
    std::filesystem::create_directories(full.parent_path());
    std::ofstream out(full, std::ios::binary | std::ios::trunc);
    out << bytes;
    if (!out) {
        throw std::runtime_error("fixture write failed: " + full.string());
    }
}

void GitFixture::remove_file(const std::string& relative_path) {
    check(git({"rm", "-q", "-f", relative_path}), "rm " + relative_path);
}

void GitFixture::move_file(const std::string& from, const std::string& to) {
    std::filesystem::create_directories((dir_ / to).parent_path());
    check(git({"mv", from, to}), "mv " + from + " " + to);
}

std::string GitFixture::commit(const std::string& message, const std::string& author_name,
                               const std::string& author_email) {
    ++clock_;
    check(git({"add", "-A"}), "add");
    check(git({"commit", "-q", "--allow-empty", "-m", message,
               "--author=" + author_name + " <" + author_email + ">"}),
          "commit");
    return head();
}

void GitFixture::tag(const std::string& name) { check(git({"tag", name}), "tag " + name); }

void GitFixture::annotated_tag(const std::string& name, const std::string& message) {
    check(git({"tag", "-a", name, "-m", message}), "tag " + name);
}

std::string GitFixture::head() const {
    ProcessResult res = git({"rev-parse", "HEAD"});
    check(res, "rev-parse HEAD");
    return std::string(text::rstrip(res.out));
}

}  // namespace repominer::testing
