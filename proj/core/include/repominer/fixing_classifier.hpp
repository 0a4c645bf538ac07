#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <regex>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "repominer/git_repo.hpp"

namespace repominer {

enum class DefectCategory {
    Conditionals = 0,
    ConfigurationData,
    Dependencies,
    Documentation,
    Idempotency,
    Security,
    Service,
    Syntax,
};

inline constexpr std::array<DefectCategory, 8> kAllDefectCategories = {
    DefectCategory::Conditionals, DefectCategory::ConfigurationData,
    DefectCategory::Dependencies, DefectCategory::Documentation,
    DefectCategory::Idempotency,  DefectCategory::Security,
    DefectCategory::Service,      DefectCategory::Syntax,
};

std::string_view to_string(DefectCategory category);
std::optional<DefectCategory> defect_category_from_string(std::string_view name);

/// Classification rules: a fix gate plus per-category message and diff
/// patterns. All patterns are case-insensitive ECMAScript regexes; diff
/// patterns run against changed lines rendered with their +/- sign.
class RuleSet {
public:
    static RuleSet defaults();

    /// Overrides applied on top of the defaults. Keys: "version" (optional,
    /// must be 1), "fix_gate", "message_patterns.<category>",
    /// "diff_patterns.<category>". A category's override replaces its list.
    static RuleSet from_json_text(std::string_view json_text);

    const std::vector<std::string>& fix_gate() const { return fix_gate_; }
    const std::vector<std::string>& message_patterns(DefectCategory c) const {
        return message_patterns_[index(c)];
    }
    const std::vector<std::string>& diff_patterns(DefectCategory c) const {
        return diff_patterns_[index(c)];
    }

    bool message_is_fix(std::string_view message) const;
    bool message_matches(DefectCategory c, std::string_view message) const;
    bool diff_line_matches(DefectCategory c, std::string_view signed_line) const;

private:
    RuleSet() = default;
    static std::size_t index(DefectCategory c) { return static_cast<std::size_t>(c); }
    void set_fix_gate(std::vector<std::string> patterns);
    void set_message_patterns(DefectCategory c, std::vector<std::string> patterns);
    void set_diff_patterns(DefectCategory c, std::vector<std::string> patterns);
    void compile();

    std::vector<std::string> fix_gate_;
    std::array<std::vector<std::string>, 8> message_patterns_;
    std::array<std::vector<std::string>, 8> diff_patterns_;

    std::vector<std::regex> fix_gate_re_;
    std::array<std::vector<std::regex>, 8> message_re_;
    std::array<std::vector<std::regex>, 8> diff_re_;
};

/// Reads a rule file from disk; errors name the offending category/pattern.
RuleSet load_rules(const std::filesystem::path& path);

struct FixingCommitRecord {
    std::string commit_id;
    std::set<DefectCategory> categories;  // never empty

    bool operator==(const FixingCommitRecord&) const = default;
};

/// True iff the message passes the fix gate and either the message matches a
/// category message pattern or some added/deleted line matches a category
/// diff pattern. Pure function of its inputs.
bool category_matches(DefectCategory category, const CommitInfo& commit,
                      const std::vector<FileChange>& changes, const RuleSet& rules);

/// The set of categories for which category_matches holds; empty means "not
/// a fixing commit".
std::set<DefectCategory> classify(const CommitInfo& commit,
                                  const std::vector<FileChange>& changes, const RuleSet& rules);

}  // namespace repominer
