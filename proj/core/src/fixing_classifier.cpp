#include "repominer/fixing_classifier.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "repominer/error.hpp"

namespace repominer {

namespace {

constexpr std::array<std::string_view, 8> kCategoryNames = {
    "conditionals", "configuration_data", "dependencies", "documentation",
    "idempotency",  "security",           "service",      "syntax",
};

std::regex compile_pattern(const std::string& pattern, std::string_view where) {
    try {
        return std::regex(pattern, std::regex::ECMAScript | std::regex::icase |
                                       std::regex::optimize);
    } catch (const std::regex_error& e) {
        throw ConfigError("invalid regex for " + std::string(where) + ": '" + pattern +
                          "' (" + e.what() + ")");
    }
}

bool any_match(const std::vector<std::regex>& patterns, std::string_view subject) {
    for (const std::regex& re : patterns) {
        if (std::regex_search(subject.begin(), subject.end(), re)) {
            return true;
        }
    }
    return false;
}

}  // namespace

std::string_view to_string(DefectCategory category) {
    return kCategoryNames[static_cast<std::size_t>(category)];
}

std::optional<DefectCategory> defect_category_from_string(std::string_view name) {
    for (std::size_t i = 0; i < kCategoryNames.size(); ++i) {
        if (kCategoryNames[i] == name) {
            return kAllDefectCategories[i];
        }
    }
    return std::nullopt;
}

void RuleSet::set_fix_gate(std::vector<std::string> patterns) {
    if (patterns.empty()) {
        throw ConfigError("fix_gate must not be empty");
    }
    fix_gate_ = std::move(patterns);
}

void RuleSet::set_message_patterns(DefectCategory c, std::vector<std::string> patterns) {
    message_patterns_[index(c)] = std::move(patterns);
}

void RuleSet::set_diff_patterns(DefectCategory c, std::vector<std::string> patterns) {
    diff_patterns_[index(c)] = std::move(patterns);
}

void RuleSet::compile() {
    fix_gate_re_.clear();
    for (const std::string& p : fix_gate_) {
        fix_gate_re_.push_back(compile_pattern(p, "fix_gate"));
    }
    for (DefectCategory c : kAllDefectCategories) {
        std::size_t i = index(c);
        message_re_[i].clear();
        for (const std::string& p : message_patterns_[i]) {
            message_re_[i].push_back(
                compile_pattern(p, "message_patterns." + std::string(to_string(c))));
        }
        diff_re_[i].clear();
        for (const std::string& p : diff_patterns_[i]) {
            diff_re_[i].push_back(
                compile_pattern(p, "diff_patterns." + std::string(to_string(c))));
        }
    }
}

RuleSet RuleSet::defaults() {
    RuleSet rules;
    rules.set_fix_gate({"fix(e[ds])?|bug|defect|fault|patch|repair|resolv|error"});
    rules.set_message_patterns(DefectCategory::Conditionals,
                               {"condition|if statement|boolean|logic"});
    rules.set_message_patterns(DefectCategory::ConfigurationData,
                               {"config|configuration|setting|parameter|default value"});
    rules.set_message_patterns(DefectCategory::Dependencies,
                               {"depend|requirement|bump|upgrade|package version"});
    rules.set_message_patterns(DefectCategory::Documentation, {"doc|readme|comment|typo"});
    rules.set_message_patterns(DefectCategory::Idempotency, {"idempoten|state|creates|unless"});
    rules.set_message_patterns(DefectCategory::Security,
                               {"secur|vulnerab|cve|xss|inject|credential|auth"});
    rules.set_message_patterns(DefectCategory::Service,
                               {"service|daemon|restart|systemd|unit"});
    rules.set_message_patterns(DefectCategory::Syntax,
                               {"syntax|typo|lint|indent|format|compile error"});
    for (DefectCategory c : kAllDefectCategories) {
        rules.set_diff_patterns(c, {});
    }
    rules.set_diff_patterns(DefectCategory::ConfigurationData, {R"(^[+-]\s*\w+\s*[:=])"});
    rules.set_diff_patterns(DefectCategory::Idempotency,
                            {R"(creates|unless|changed_when|state\s*[:=])"});
    rules.compile();
    return rules;
}

RuleSet RuleSet::from_json_text(std::string_view json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("rule file parse error: ") + e.what());
    }
    if (!doc.is_object()) {
        throw ConfigError("rule file must be a JSON object");
    }
    if (doc.contains("version") && doc["version"] != 1) {
        throw ConfigError("unsupported rule file version: " + doc["version"].dump());
    }

    auto pattern_list = [](const nlohmann::json& node, std::string_view where) {
        if (!node.is_array()) {
            throw ConfigError(std::string(where) + " must be an array of patterns");
        }
        std::vector<std::string> out;
        for (const auto& item : node) {
            if (!item.is_string()) {
                throw ConfigError(std::string(where) + " must contain only strings");
            }
            out.push_back(item.get<std::string>());
        }
        return out;
    };
    auto category_map = [&](const nlohmann::json& node, std::string_view where,
                            auto&& apply) {
        if (!node.is_object()) {
            throw ConfigError(std::string(where) + " must be an object keyed by category");
        }
        for (const auto& [key, value] : node.items()) {
            auto category = defect_category_from_string(key);
            if (!category) {
                throw ConfigError("unknown defect category '" + key + "' in " +
                                  std::string(where));
            }
            apply(*category,
                  pattern_list(value, std::string(where) + "." + key));
        }
    };

    RuleSet rules = defaults();
    for (const auto& [key, value] : doc.items()) {
        if (key == "version") {
            continue;
        } else if (key == "fix_gate") {
            rules.set_fix_gate(pattern_list(value, "fix_gate"));
        } else if (key == "message_patterns") {
            category_map(value, "message_patterns", [&](DefectCategory c, auto patterns) {
                rules.set_message_patterns(c, std::move(patterns));
            });
        } else if (key == "diff_patterns") {
            category_map(value, "diff_patterns", [&](DefectCategory c, auto patterns) {
                rules.set_diff_patterns(c, std::move(patterns));
            });
        } else {
            throw ConfigError("unknown key '" + key + "' in rule file");
        }
    }
    rules.compile();
    return rules;
}

RuleSet load_rules(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open rule file: " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return RuleSet::from_json_text(buffer.str());
}

bool RuleSet::message_is_fix(std::string_view message) const {
    return any_match(fix_gate_re_, message);
}

bool RuleSet::message_matches(DefectCategory c, std::string_view message) const {
    return any_match(message_re_[index(c)], message);
}

bool RuleSet::diff_line_matches(DefectCategory c, std::string_view signed_line) const {
    return any_match(diff_re_[index(c)], signed_line);
}

bool category_matches(DefectCategory category, const CommitInfo& commit,
                      const std::vector<FileChange>& changes, const RuleSet& rules) {
    if (!rules.message_is_fix(commit.message)) {
        return false;
    }
    if (rules.message_matches(category, commit.message)) {
        return true;
    }
    if (rules.diff_patterns(category).empty()) {
        return false;
    }
    std::string rendered;
    for (const FileChange& change : changes) {
        for (const DiffLine& line : change.added_lines) {
            rendered.assign("+").append(line.text);
            if (rules.diff_line_matches(category, rendered)) {
                return true;
            }
        }
        for (const DiffLine& line : change.deleted_lines) {
            rendered.assign("-").append(line.text);
            if (rules.diff_line_matches(category, rendered)) {
                return true;
            }
        }
    }
    return false;
}

std::set<DefectCategory> classify(const CommitInfo& commit,
                                  const std::vector<FileChange>& changes,
                                  const RuleSet& rules) {
    std::set<DefectCategory> categories;
    for (DefectCategory c : kAllDefectCategories) {
        if (category_matches(c, commit, changes, rules)) {
            categories.insert(c);
        }
    }
    return categories;
}

}  // namespace repominer
