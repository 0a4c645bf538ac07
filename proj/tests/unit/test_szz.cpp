#include <doctest.h>

#include "repominer/error.hpp"
#include "repominer/szz.hpp"
#include "support/git_fixture.hpp"
#include "support/replay_oracle.hpp"

using namespace repominer;
using repominer::testing::GitFixture;
using repominer::testing::ReplayOracle;

namespace {

RepositorySession open_local(const GitFixture& fixture) {
    RepositorySource source;
    source.location = fixture.path().string();
    return RepositorySession::open(source);
}

/// The FileChange of `path` in the given commit.
const FileChange& change_for(const RepositorySession& session, const std::string& commit_id,
                             const std::string& path) {
    const CommitInfo& commit = session.commit(commit_id);
    for (const FileChange& change : commit.changes) {
        if (change.path() == path) {
            return change;
        }
    }
    throw std::runtime_error("no change for " + path);
}

}  // namespace

TEST_SUITE("szz") {
    TEST_CASE("deleting a line written by the first commit points there") {
        GitFixture fixture;
        fixture.write("f.yml", "buggy: line\nok: line\n");
        std::string c1 = fixture.commit("create");
        fixture.write("other.txt", "noise\n");
        std::string c2 = fixture.commit("unrelated");
        fixture.write("f.yml", "fixed: line\nok: line\n");
        std::string c3 = fixture.commit("repair it");

        RepositorySession session = open_local(fixture);
        const FileChange& change = change_for(session, c3, "f.yml");
        CHECK(bug_introducing_commit(session, {c3, "f.yml", change.deleted_lines}, "#") == c1);
    }

    TEST_CASE("the oldest of several candidates wins") {
        GitFixture fixture;
        ReplayOracle oracle(fixture);
        oracle.create_file("f.yml", {"alpha", "beta", "gamma"});
        oracle.commit("c0");
        oracle.replace_line("f.yml", 1, "alpha v2");
        int c1 = oracle.commit("touch alpha");
        oracle.replace_line("f.yml", 3, "gamma v2");
        oracle.commit("touch gamma");
        oracle.replace_line("f.yml", 3, "gamma v3");
        int c3 = oracle.commit("touch gamma again");
        // The fix deletes lines last written by c1 and c3: c1 is older.
        oracle.delete_line("f.yml", 3);
        oracle.delete_line("f.yml", 1);
        int fix = oracle.commit("fix divergence");

        const auto& ids = oracle.commit_ids();  // finalizes the history
        RepositorySession session = open_local(fixture);
        const FileChange& change =
            change_for(session, ids[static_cast<std::size_t>(fix)], "f.yml");
        REQUIRE(change.deleted_lines.size() == 2);
        std::string bic = bug_introducing_commit(
            session, {ids[static_cast<std::size_t>(fix)], "f.yml", change.deleted_lines}, "#");
        CHECK(bic == ids[static_cast<std::size_t>(c1)]);
        CHECK(bic != ids[static_cast<std::size_t>(c3)]);
    }

    TEST_CASE("a pure-addition fix has no blame anchor") {
        GitFixture fixture;
        fixture.write("f.yml", "a: 1\n");
        fixture.commit("create");
        fixture.write("f.yml", "a: 1\nb: 2\n");
        std::string fix = fixture.commit("fix by adding a guard");

        RepositorySession session = open_local(fixture);
        const FileChange& change = change_for(session, fix, "f.yml");
        CHECK(change.deleted_lines.empty());
        CHECK_THROWS_WITH_AS(bug_introducing_commit(session, {fix, "f.yml", {}}, "#"),
                             doctest::Contains("no blame anchor"), NoBlameAnchorError);
    }

    TEST_CASE("blank and comment lines are filtered out") {
        GitFixture fixture;
        fixture.write("f.yml", "# header\n\nkey: broken\n");
        std::string c1 = fixture.commit("create");
        fixture.write("f.yml", "# banner\nkey: broken\n");
        std::string c2 = fixture.commit("rework comments");
        fixture.write("f.yml", "# banner\nkey: sound\n");
        std::string c3 = fixture.commit("repair the key");

        RepositorySession session = open_local(fixture);
        const FileChange& change = change_for(session, c3, "f.yml");
        std::string bic = bug_introducing_commit(session, {c3, "f.yml", change.deleted_lines}, "#");
        CHECK(bic == c1);  // the comment rewrite at c2 is never a candidate

        // A fix that deletes only comments cannot be anchored.
        fixture.write("f.yml", "key: sound\n");
        std::string c4 = fixture.commit("fix stale banner comment");
        RepositorySession session2 = open_local(fixture);
        const FileChange& comment_only = change_for(session2, c4, "f.yml");
        CHECK_THROWS_AS(
            bug_introducing_commit(session2, {c4, "f.yml", comment_only.deleted_lines}, "#"),
            NoBlameAnchorError);
    }

    TEST_CASE("the bic is a strict ancestor of the fixing commit") {
        GitFixture fixture;
        ReplayOracle oracle(fixture);
        oracle.create_file("f.yml", {"l1", "l2", "l3", "l4", "l5"});
        oracle.commit("c0");
        for (int i = 1; i <= 4; ++i) {
            oracle.replace_line("f.yml", i, "l" + std::to_string(i) + " v2");
            oracle.commit("edit " + std::to_string(i));
        }
        oracle.delete_line("f.yml", 2);
        oracle.delete_line("f.yml", 2);
        int fix = oracle.commit("fix the middle");

        const auto& ids = oracle.commit_ids();  // finalizes the history
        RepositorySession session = open_local(fixture);
        const std::string& fix_id = ids[static_cast<std::size_t>(fix)];
        const FileChange& change = change_for(session, fix_id, "f.yml");
        std::string bic =
            bug_introducing_commit(session, {fix_id, "f.yml", change.deleted_lines}, "#");
        CHECK(session.order_of(bic) < session.order_of(fix_id));
    }
}
