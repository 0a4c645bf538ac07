#include "repominer/plugins.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>

#include "repominer/error.hpp"
#include "repominer/text.hpp"

namespace repominer {

namespace {

constexpr std::array<std::string_view, 5> kYamlRoots = {"playbooks", "meta", "tasks",
                                                        "handlers", "roles"};

struct LineCounts {
    long total = 0;
    long code = 0;
    long comment = 0;
    long blank = 0;
};

LineCounts count_lines(const std::vector<std::string>& lines, std::string_view comment_marker) {
    LineCounts counts;
    counts.total = static_cast<long>(lines.size());
    for (const std::string& line : lines) {
        if (text::is_blank(line)) {
            ++counts.blank;
        } else if (!comment_marker.empty() &&
                   text::starts_with(text::lstrip(line), comment_marker)) {
            ++counts.comment;
        } else {
            ++counts.code;
        }
    }
    return counts;
}

/// Whitespace-separated tokens over the whole content (blank lines
/// contribute nothing).
std::vector<std::string_view> tokenize(std::string_view content) {
    std::vector<std::string_view> tokens;
    std::size_t i = 0;
    while (i < content.size()) {
        while (i < content.size() && std::isspace(static_cast<unsigned char>(content[i]))) {
            ++i;
        }
        std::size_t start = i;
        while (i < content.size() && !std::isspace(static_cast<unsigned char>(content[i]))) {
            ++i;
        }
        if (i > start) {
            tokens.push_back(content.substr(start, i - start));
        }
    }
    return tokens;
}

double shannon_entropy(const std::vector<std::string_view>& tokens) {
    if (tokens.empty()) {
        return 0.0;
    }
    std::map<std::string_view, long> freq;
    for (std::string_view token : tokens) {
        ++freq[token];
    }
    if (freq.size() <= 1) {
        return 0.0;
    }
    double n = static_cast<double>(tokens.size());
    double entropy = 0.0;
    for (const auto& [token, count] : freq) {
        double p = static_cast<double>(count) / n;
        entropy -= p * std::log2(p);
    }
    return entropy;
}

/// A mapping-entry line: "key:" or "key: value" — first char not whitespace,
/// '#', '-' or ':', and the first ':' is line-final or followed by blank.
bool is_entity_line(std::string_view stripped) {
    if (stripped.empty()) {
        return false;
    }
    char first = stripped.front();
    if (first == '#' || first == '-' || first == ':') {
        return false;
    }
    std::size_t colon = stripped.find(':');
    if (colon == std::string_view::npos || colon == 0) {
        return false;
    }
    return colon + 1 == stripped.size() ||
           std::isspace(static_cast<unsigned char>(stripped[colon + 1]));
}

/// Two spaces (or one tab) per level, counted over the leading whitespace.
int indent_depth(std::string_view line) {
    int tabs = 0;
    int spaces = 0;
    for (char c : line) {
        if (c == '\t') {
            ++tabs;
        } else if (c == ' ') {
            ++spaces;
        } else {
            break;
        }
    }
    return tabs + spaces / 2;
}

std::string normalize_extension(std::string_view ext) {
    std::string out = text::to_lower(ext);
    if (!out.empty() && out.front() != '.') {
        out.insert(out.begin(), '.');
    }
    return out;
}

}  // namespace

bool YamlConfigPlugin::ignore_file(std::string_view path,
                                   std::optional<std::string_view> /*content*/) const {
    std::string ext = text::extension_of(path);
    if (ext != ".yml" && ext != ".yaml") {
        return true;
    }
    if (path.find('/') == std::string_view::npos) {
        return false;  // file at the repository root
    }
    std::vector<std::string> segments = text::split(path, '/');
    segments.pop_back();  // filename
    for (const std::string& segment : segments) {
        if (std::find(kYamlRoots.begin(), kYamlRoots.end(), segment) != kYamlRoots.end()) {
            return false;
        }
    }
    return true;
}

std::map<std::string, double> YamlConfigPlugin::product_metrics(std::string_view content) const {
    std::vector<std::string> lines = text::split_lines(content);
    LineCounts counts = count_lines(lines, "#");

    long num_entities = 0;
    int max_depth = 0;
    for (const std::string& line : lines) {
        std::string_view stripped = text::lstrip(line);
        if (!is_entity_line(stripped)) {
            continue;
        }
        if (line.size() == stripped.size()) {
            ++num_entities;  // zero indent
        }
        max_depth = std::max(max_depth, indent_depth(line));
    }

    std::vector<std::string_view> tokens = tokenize(content);

    return {
        {"lines_total", static_cast<double>(counts.total)},
        {"lines_code", static_cast<double>(counts.code)},
        {"lines_comment", static_cast<double>(counts.comment)},
        {"lines_blank", static_cast<double>(counts.blank)},
        {"num_entities", static_cast<double>(num_entities)},
        {"max_nesting_depth", static_cast<double>(max_depth)},
        {"num_tokens", static_cast<double>(tokens.size())},
        {"text_entropy", shannon_entropy(tokens)},
    };
}

GenericExtensionPlugin::GenericExtensionPlugin(std::vector<std::string> extensions,
                                               std::string comment_marker)
    : comment_marker_(std::move(comment_marker)) {
    if (extensions.empty()) {
        throw ConfigError("generic plugin requires at least one extension");
    }
    extensions_.reserve(extensions.size());
    for (const std::string& ext : extensions) {
        extensions_.push_back(normalize_extension(ext));
    }
}

bool GenericExtensionPlugin::ignore_file(std::string_view path,
                                         std::optional<std::string_view> /*content*/) const {
    std::string ext = text::extension_of(path);
    return std::find(extensions_.begin(), extensions_.end(), ext) == extensions_.end();
}

std::map<std::string, double> GenericExtensionPlugin::product_metrics(
    std::string_view content) const {
    std::vector<std::string> lines = text::split_lines(content);
    LineCounts counts = count_lines(lines, comment_marker_);
    std::vector<std::string_view> tokens = tokenize(content);
    return {
        {"lines_total", static_cast<double>(counts.total)},
        {"lines_code", static_cast<double>(counts.code)},
        {"lines_comment", static_cast<double>(counts.comment)},
        {"lines_blank", static_cast<double>(counts.blank)},
        {"num_tokens", static_cast<double>(tokens.size())},
        {"text_entropy", shannon_entropy(tokens)},
    };
}

std::vector<std::string> registered_plugin_names() { return {"generic", "yaml-config"}; }

std::unique_ptr<LanguagePlugin> make_plugin(const std::string& name,
                                            const std::vector<std::string>& extensions,
                                            const std::string& comment_marker) {
    if (name == "yaml-config") {
        return std::make_unique<YamlConfigPlugin>();
    }
    if (name == "generic") {
        return std::make_unique<GenericExtensionPlugin>(extensions, comment_marker);
    }
    std::string known;
    for (const std::string& candidate : registered_plugin_names()) {
        if (!known.empty()) {
            known += ", ";
        }
        known += candidate;
    }
    throw ConfigError("unknown plugin '" + name + "' (registered plugins: " + known + ")");
}

}  // namespace repominer
