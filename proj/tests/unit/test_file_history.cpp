#include <doctest.h>

#include "repominer/file_history.hpp"

using namespace repominer;

namespace {

CommitInfo make_commit(std::string id, std::vector<FileChange> changes) {
    CommitInfo commit;
    commit.id = std::move(id);
    commit.changes = std::move(changes);
    return commit;
}

FileChange added(std::string path) {
    FileChange change;
    change.kind = ChangeKind::Added;
    change.new_path = std::move(path);
    return change;
}

FileChange deleted(std::string path) {
    FileChange change;
    change.kind = ChangeKind::Deleted;
    change.old_path = std::move(path);
    return change;
}

FileChange modified(std::string path) {
    FileChange change;
    change.kind = ChangeKind::Modified;
    change.old_path = path;
    change.new_path = std::move(path);
    return change;
}

FileChange renamed(std::string from, std::string to) {
    FileChange change;
    change.kind = ChangeKind::Renamed;
    change.old_path = std::move(from);
    change.new_path = std::move(to);
    return change;
}

}  // namespace

TEST_SUITE("file_history") {
    TEST_CASE("identity survives renames and carries aliases") {
        std::vector<CommitInfo> commits = {
            make_commit("c0", {added("a.yml")}),
            make_commit("c1", {modified("a.yml")}),
            make_commit("c2", {renamed("a.yml", "b.yml")}),
            make_commit("c3", {modified("b.yml")}),
        };
        FileHistory history(commits);

        auto id0 = history.identity_at("a.yml", 0);
        auto id3 = history.identity_at("b.yml", 3);
        REQUIRE(id0.has_value());
        REQUIRE(id3.has_value());
        CHECK(*id0 == *id3);

        CHECK(history.path_at(*id0, 1) == "a.yml");
        CHECK(history.path_at(*id0, 2) == "b.yml");
        CHECK_FALSE(history.identity_at("a.yml", 2).has_value());
        CHECK(history.aliases_up_to(*id0, 3) == std::set<std::string>{"a.yml", "b.yml"});
        CHECK(history.aliases_up_to(*id0, 1) == std::set<std::string>{"a.yml"});
    }

    TEST_CASE("deletion ends the lifetime; re-creation revives the identity") {
        std::vector<CommitInfo> commits = {
            make_commit("c0", {added("f.yml")}),
            make_commit("c1", {deleted("f.yml")}),
            make_commit("c2", {}),
            make_commit("c3", {added("f.yml")}),
        };
        FileHistory history(commits);
        auto first = history.identity_at("f.yml", 0);
        auto second = history.identity_at("f.yml", 3);
        REQUIRE(first.has_value());
        REQUIRE(second.has_value());
        CHECK(*first == *second);
        CHECK_FALSE(history.alive_at(*first, 1));
        CHECK_FALSE(history.alive_at(*first, 2));
        CHECK(history.alive_at(*first, 3));
    }

    TEST_CASE("a new file at a renamed-away path gets a fresh identity") {
        std::vector<CommitInfo> commits = {
            make_commit("c0", {added("a.yml")}),
            make_commit("c1", {renamed("a.yml", "b.yml")}),
            make_commit("c2", {added("a.yml")}),
        };
        FileHistory history(commits);
        auto moved = history.identity_at("b.yml", 2);
        auto fresh = history.identity_at("a.yml", 2);
        REQUIRE(moved.has_value());
        REQUIRE(fresh.has_value());
        CHECK(*moved != *fresh);
    }

    TEST_CASE("distinct files get distinct identities") {
        std::vector<CommitInfo> commits = {
            make_commit("c0", {added("a.yml"), added("b.yml")}),
        };
        FileHistory history(commits);
        auto a = history.identity_at("a.yml", 0);
        auto b = history.identity_at("b.yml", 0);
        REQUIRE(a.has_value());
        REQUIRE(b.has_value());
        CHECK(*a != *b);
        CHECK(history.identity_count() == 2);
    }

    TEST_CASE("unknown paths and orders answer nothing") {
        std::vector<CommitInfo> commits = {make_commit("c0", {added("a.yml")})};
        FileHistory history(commits);
        CHECK_FALSE(history.identity_at("zzz.yml", 0).has_value());
        CHECK_FALSE(history.identity_at("a.yml", -1).has_value());
        CHECK_FALSE(history.path_at(42, 0).has_value());
    }
}
