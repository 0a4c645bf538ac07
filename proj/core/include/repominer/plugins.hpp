#pragma once

#include <memory>
#include <string>
#include <vector>

#include "repominer/miner.hpp"

namespace repominer {

/// YAML configuration files: .yml/.yaml under the conventional configuration
/// directory roots (playbooks, meta, tasks, handlers, roles — any path
/// segment counts) or at the repository root. Product metrics are eight
/// line/structure measures.
class YamlConfigPlugin final : public LanguagePlugin {
public:
    std::string name() const override { return "yaml-config"; }
    bool ignore_file(std::string_view path,
                     std::optional<std::string_view> content = std::nullopt) const override;
    std::string comment_marker() const override { return "#"; }
    std::map<std::string, double> product_metrics(std::string_view content) const override;
};

/// Filters by a user-supplied extension list; product metrics are the
/// line-based subset. The comment marker is optional.
class GenericExtensionPlugin final : public LanguagePlugin {
public:
    GenericExtensionPlugin(std::vector<std::string> extensions, std::string comment_marker);

    std::string name() const override { return "generic"; }
    bool ignore_file(std::string_view path,
                     std::optional<std::string_view> content = std::nullopt) const override;
    std::string comment_marker() const override { return comment_marker_; }
    std::map<std::string, double> product_metrics(std::string_view content) const override;

private:
    std::vector<std::string> extensions_;  // normalized: leading dot, lowercase
    std::string comment_marker_;
};

std::vector<std::string> registered_plugin_names();

/// Builds a plugin by registry name. The generic plugin requires a non-empty
/// extension list; others ignore it. Throws ConfigError for unknown names.
std::unique_ptr<LanguagePlugin> make_plugin(const std::string& name,
                                            const std::vector<std::string>& extensions = {},
                                            const std::string& comment_marker = "");

}  // namespace repominer
