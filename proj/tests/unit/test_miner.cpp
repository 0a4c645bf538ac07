#include <doctest.h>

#include "repominer/error.hpp"
#include "repominer/miner.hpp"
#include "repominer/plugins.hpp"
#include "support/git_fixture.hpp"
#include "support/scenarios.hpp"

using namespace repominer;
using repominer::testing::GitFixture;
using repominer::testing::Scenario;

namespace {

RepositorySession open_local(const GitFixture& fixture) {
    RepositorySource source;
    source.location = fixture.path().string();
    return RepositorySession::open(source);
}

}  // namespace

TEST_SUITE("miner.fixing_commits") {
    TEST_CASE("no fix-gated messages mean no records") {
        GitFixture fixture;
        fixture.write("tasks/a.yml", "a: 1\n");
        fixture.commit("create tasks");
        fixture.write("tasks/a.yml", "a: 2\n");
        fixture.commit("tune value");

        RepositorySession session = open_local(fixture);
        YamlConfigPlugin plugin;
        CHECK(identify_fixing_commits(session, plugin, RuleSet::defaults()).empty());
    }

    TEST_CASE("fix touching a plugin file is recorded with its categories") {
        GitFixture fixture;
        fixture.write("tasks/a.yml", "a: 1\n");
        fixture.commit("create tasks");
        fixture.write("tasks/a.yml", "a: 2\n");
        std::string fix = fixture.commit("fix config default");

        RepositorySession session = open_local(fixture);
        YamlConfigPlugin plugin;
        auto records = identify_fixing_commits(session, plugin, RuleSet::defaults());
        REQUIRE(records.size() == 1);
        CHECK(records[0].commit_id == fix);
        CHECK(records[0].categories ==
              std::set<DefectCategory>{DefectCategory::ConfigurationData});
    }

    TEST_CASE("fixes that touch no language file are discarded") {
        GitFixture fixture;
        fixture.write("tasks/a.yml", "a: 1\n");
        fixture.commit("create tasks");
        fixture.write("README.md", "typofree\n");
        fixture.commit("fix typo");

        RepositorySession session = open_local(fixture);
        YamlConfigPlugin plugin;
        CHECK(identify_fixing_commits(session, plugin, RuleSet::defaults()).empty());
    }

    TEST_CASE("records are ordered newest first and language-backed") {
        GitFixture fixture;
        Scenario scenario = repominer::testing::build_interval_append_scenario(fixture);
        RepositorySession session = open_local(fixture);
        YamlConfigPlugin plugin;
        auto records = identify_fixing_commits(session, plugin, RuleSet::defaults());
        REQUIRE(records.size() == 2);
        CHECK(records[0].commit_id == scenario.commit(9));
        CHECK(records[1].commit_id == scenario.commit(4));
        for (const auto& record : records) {
            const CommitInfo& commit = session.commit(record.commit_id);
            bool touches = false;
            for (const FileChange& change : commit.changes) {
                touches = touches || plugin.is_language_change(change);
            }
            CHECK(touches);
        }
    }
}

TEST_SUITE("miner.fixed_files") {
    TEST_CASE("interval append scenario yields two fixed files") {
        GitFixture fixture;
        Scenario scenario = repominer::testing::build_interval_append_scenario(fixture);
        RepositorySession session = open_local(fixture);
        YamlConfigPlugin plugin;

        auto fixing = identify_fixing_commits(session, plugin, RuleSet::defaults());
        auto fixed = identify_fixed_files(session, fixing, plugin);

        REQUIRE(fixed.size() == 2);
        CHECK(fixed[0].filepath == scenario.file);
        CHECK(fixed[0].fic == scenario.commit(9));
        CHECK(fixed[0].bic == scenario.commit(8));
        CHECK(fixed[1].filepath == scenario.file);
        CHECK(fixed[1].fic == scenario.commit(4));
        CHECK(fixed[1].bic == scenario.commit(1));
        CHECK(fixed[0].aliases.contains(scenario.file));
    }

    TEST_CASE("interval update scenario folds into one widened fixed file") {
        GitFixture fixture;
        Scenario scenario = repominer::testing::build_interval_update_scenario(fixture);
        RepositorySession session = open_local(fixture);
        YamlConfigPlugin plugin;

        auto fixing = identify_fixing_commits(session, plugin, RuleSet::defaults());
        REQUIRE(fixing.size() == 2);
        auto fixed = identify_fixed_files(session, fixing, plugin);
        REQUIRE(fixed.size() == 1);
        CHECK(fixed[0].filepath == scenario.file);
        CHECK(fixed[0].fic == scenario.commit(9));
        CHECK(fixed[0].bic == scenario.commit(4));
    }

    TEST_CASE("a fix that only adds a language file emits nothing") {
        GitFixture fixture;
        fixture.write("tasks/a.yml", "a: 1\n");
        fixture.commit("create tasks");
        fixture.write("tasks/brand_new.yml", "b: 2\n");
        fixture.commit("fix missing config by adding defaults");

        RepositorySession session = open_local(fixture);
        YamlConfigPlugin plugin;
        auto fixing = identify_fixing_commits(session, plugin, RuleSet::defaults());
        REQUIRE(fixing.size() == 1);
        CHECK(identify_fixed_files(session, fixing, plugin).empty());
    }

    TEST_CASE("bics precede their fics") {
        GitFixture fixture;
        repominer::testing::build_interval_update_scenario(fixture);
        RepositorySession session = open_local(fixture);
        YamlConfigPlugin plugin;
        auto fixing = identify_fixing_commits(session, plugin, RuleSet::defaults());
        for (const FixedFile& fixed : identify_fixed_files(session, fixing, plugin)) {
            CHECK(session.order_of(fixed.bic) < session.order_of(fixed.fic));
        }
    }

    TEST_CASE("renames fold aliases into the fixed file") {
        GitFixture fixture;
        fixture.write("tasks/old.yml", "key: broken\npad1: x\npad2: y\npad3: z\n");
        std::string c1 = fixture.commit("create tasks");
        fixture.move_file("tasks/old.yml", "tasks/new.yml");
        fixture.commit("reorganize layout");
        fixture.write("tasks/new.yml", "key: sound\npad1: x\npad2: y\npad3: z\n");
        std::string fix = fixture.commit("fix broken key setting");

        RepositorySession session = open_local(fixture);
        YamlConfigPlugin plugin;
        auto fixing = identify_fixing_commits(session, plugin, RuleSet::defaults());
        REQUIRE(fixing.size() == 1);
        auto fixed = identify_fixed_files(session, fixing, plugin);
        REQUIRE(fixed.size() == 1);
        CHECK(fixed[0].filepath == "tasks/new.yml");
        CHECK(fixed[0].bic == c1);
        CHECK(fixed[0].aliases ==
              std::set<std::string>{"tasks/old.yml", "tasks/new.yml"});

        // Snapshots before the rename carry the old name.
        auto snapshots = label_snapshots(session, fixed);
        REQUIRE(snapshots.size() == 2);
        CHECK(snapshots[0].filepath == "tasks/new.yml");  // sorted by filepath
        CHECK(snapshots[1].filepath == "tasks/old.yml");
        CHECK(snapshots[1].commit_id == c1);
        CHECK(snapshots[0].fixing_commit_id == fix);
    }
}

TEST_SUITE("miner.labelling") {
    TEST_CASE("snapshots cover [bic, fic) and exclude the fix itself") {
        GitFixture fixture;
        Scenario scenario = repominer::testing::build_interval_append_scenario(fixture);
        RepositorySession session = open_local(fixture);
        YamlConfigPlugin plugin;
        auto fixing = identify_fixing_commits(session, plugin, RuleSet::defaults());
        auto fixed = identify_fixed_files(session, fixing, plugin);
        auto snapshots = label_snapshots(session, fixed);

        std::vector<FailureProneFile> expected = {
            {scenario.file, scenario.commit(1), scenario.commit(4)},
            {scenario.file, scenario.commit(2), scenario.commit(4)},
            {scenario.file, scenario.commit(3), scenario.commit(4)},
            {scenario.file, scenario.commit(8), scenario.commit(9)},
        };
        CHECK(snapshots == expected);
    }

    TEST_CASE("a bic adjacent to its fic yields exactly one snapshot") {
        GitFixture fixture;
        fixture.write("tasks/a.yml", "mode: bad\n");
        std::string c1 = fixture.commit("create tasks");
        fixture.write("tasks/a.yml", "mode: good\n");
        std::string c2 = fixture.commit("fix bad mode setting");

        RepositorySession session = open_local(fixture);
        YamlConfigPlugin plugin;
        auto fixing = identify_fixing_commits(session, plugin, RuleSet::defaults());
        auto fixed = identify_fixed_files(session, fixing, plugin);
        REQUIRE(fixed.size() == 1);
        auto snapshots = label_snapshots(session, fixed);
        REQUIRE(snapshots.size() == 1);
        CHECK(snapshots[0] == FailureProneFile{"tasks/a.yml", c1, c2});
    }

    TEST_CASE("snapshots skip commits where the file does not exist") {
        GitFixture fixture;
        fixture.write("tasks/a.yml", "bad: 1\npad: 2\n");
        std::string c1 = fixture.commit("create tasks");
        fixture.remove_file("tasks/a.yml");
        std::string c2 = fixture.commit("drop the file");
        fixture.write("tasks/a.yml", "bad: 1\npad: 2\n");
        std::string c3 = fixture.commit("bring it back");
        fixture.write("tasks/a.yml", "good: 1\npad: 2\n");
        std::string fix = fixture.commit("fix bad key");

        RepositorySession session = open_local(fixture);
        // Hand-built interval spanning the deletion gap.
        FixedFile spanning{"tasks/a.yml", fix, c1, {"tasks/a.yml"}};
        auto snapshots = label_snapshots(session, {spanning});
        std::vector<FailureProneFile> expected = {
            {"tasks/a.yml", c1, fix},
            {"tasks/a.yml", c3, fix},
        };
        CHECK(snapshots == expected);  // the gap at c2 is never labelled
        (void)c2;
    }

    TEST_CASE("a rename into scope keeps out-of-scope snapshots unlabelled") {
        GitFixture fixture;
        fixture.write("misc/a.txt", "key: broken\npad1: x\npad2: y\npad3: z\n");
        fixture.commit("stash some notes");
        fixture.write("misc/a.txt", "key: broken\npad1: x\npad2: y2\npad3: z\n");
        fixture.commit("touch notes");
        fixture.move_file("misc/a.txt", "tasks/a.yml");
        std::string moved = fixture.commit("promote notes to tasks");
        fixture.write("tasks/a.yml", "key: sound\npad1: x\npad2: y2\npad3: z\n");
        std::string fix = fixture.commit("fix broken key setting");

        RepositorySession session = open_local(fixture);
        YamlConfigPlugin plugin;
        auto fixing = identify_fixing_commits(session, plugin, RuleSet::defaults());
        auto fixed = identify_fixed_files(session, fixing, plugin);
        REQUIRE(fixed.size() == 1);
        CHECK(session.order_of(fixed[0].bic) == 0);  // blame crosses the rename

        auto snapshots = label_snapshots(session, fixed, &plugin);
        REQUIRE(snapshots.size() == 1);  // misc/a.txt snapshots are out of scope
        CHECK(snapshots[0] == FailureProneFile{"tasks/a.yml", moved, fix});
        for (const FailureProneFile& snapshot : snapshots) {
            CHECK_FALSE(plugin.ignore_file(snapshot.filepath));
        }

        // Without a plugin the raw interval is reported in full.
        CHECK(label_snapshots(session, fixed).size() == 3);
    }

    TEST_CASE("blame does not cross a delete/re-create boundary") {
        GitFixture fixture;
        fixture.write("tasks/a.yml", "bad: 1\npad: 2\n");
        fixture.commit("create tasks");
        fixture.remove_file("tasks/a.yml");
        fixture.commit("drop the file");
        fixture.write("tasks/a.yml", "bad: 1\npad: 2\n");
        std::string recreate = fixture.commit("bring it back");
        fixture.write("tasks/a.yml", "good: 1\npad: 2\n");
        fixture.commit("fix bad key");

        RepositorySession session = open_local(fixture);
        YamlConfigPlugin plugin;
        auto fixing = identify_fixing_commits(session, plugin, RuleSet::defaults());
        auto fixed = identify_fixed_files(session, fixing, plugin);
        REQUIRE(fixed.size() == 1);
        CHECK(fixed[0].bic == recreate);
    }
}

TEST_SUITE("miner.interval_ledger") {
    TEST_CASE("first sight appends") {
        FixIntervalLedger ledger;
        CHECK(ledger.observe({1, 8, 7, "C9", "C8"}));
        REQUIRE(ledger.intervals().size() == 1);
    }

    TEST_CASE("an older fix appends a second interval") {
        FixIntervalLedger ledger;
        CHECK(ledger.observe({1, 8, 7, "C9", "C8"}));
        CHECK(ledger.observe({1, 3, 0, "C4", "C1"}));
        REQUIRE(ledger.intervals().size() == 2);
        CHECK(ledger.intervals()[1].fic_id == "C4");
    }

    TEST_CASE("a bic inside the new span updates in place") {
        FixIntervalLedger ledger;
        CHECK(ledger.observe({1, 8, 4, "C9", "C5"}));
        CHECK(ledger.observe({1, 5, 3, "C6", "C4"}));
        REQUIRE(ledger.intervals().size() == 1);
        CHECK(ledger.intervals()[0].fic_id == "C9");
        CHECK(ledger.intervals()[0].bic_id == "C4");
        CHECK(ledger.intervals()[0].bic_order == 3);
    }

    TEST_CASE("anything else is dropped") {
        FixIntervalLedger ledger;
        CHECK(ledger.observe({1, 8, 2, "C9", "C3"}));
        // Same bic: not strictly inside (bic, fic).
        CHECK_FALSE(ledger.observe({1, 5, 2, "C6", "C3"}));
        // Existing bic older than the new span entirely.
        CHECK_FALSE(ledger.observe({1, 6, 3, "C7", "C4"}));
        REQUIRE(ledger.intervals().size() == 1);
        CHECK(ledger.intervals()[0].bic_id == "C3");
    }

    TEST_CASE("files are tracked independently") {
        FixIntervalLedger ledger;
        CHECK(ledger.observe({1, 8, 7, "C9", "C8"}));
        CHECK(ledger.observe({2, 8, 5, "C9", "C6"}));
        CHECK(ledger.observe({1, 3, 0, "C4", "C1"}));
        CHECK(ledger.intervals().size() == 3);
    }
}
