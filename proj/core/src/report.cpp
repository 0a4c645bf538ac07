#include "repominer/report.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "repominer/error.hpp"
#include "repominer/text.hpp"

namespace repominer {

namespace {

void check_consistency(const MiningReport& report) {
    std::set<std::string> fixing_ids;
    for (const FixingCommitRecord& record : report.fixing_commits) {
        if (record.categories.empty()) {
            throw ConfigError("fixing commit " + record.commit_id + " has no categories");
        }
        if (!fixing_ids.insert(record.commit_id).second) {
            throw ConfigError("duplicate fixing commit " + record.commit_id);
        }
    }
    std::set<std::string> fics;
    if (report.fixed_files) {
        for (const ReportFixedFile& fixed : *report.fixed_files) {
            if (!fixing_ids.contains(fixed.fic)) {
                throw ConfigError("fixed file " + fixed.filepath + " references fic " +
                                  fixed.fic + " absent from fixing_commits");
            }
            fics.insert(fixed.fic);
        }
    }
    if (report.failure_prone_files) {
        for (const FailureProneFile& fpf : *report.failure_prone_files) {
            if (report.fixed_files && !fics.contains(fpf.fixing_commit_id)) {
                throw ConfigError("failure-prone file " + fpf.filepath +
                                  " references fixing commit " + fpf.fixing_commit_id +
                                  " absent from fixed_files");
            }
        }
    }
}

const nlohmann::json& require_field(const nlohmann::json& doc, std::string_view key) {
    auto it = doc.find(key);
    if (it == doc.end()) {
        throw ConfigError("report is missing field '" + std::string(key) + "'");
    }
    return *it;
}

}  // namespace

std::string current_timestamp_iso() {
    if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH")) {
        return text::iso8601_utc(std::strtoll(epoch, nullptr, 10));
    }
    auto now = std::chrono::system_clock::now();
    return text::iso8601_utc(std::chrono::duration_cast<std::chrono::seconds>(
                                 now.time_since_epoch())
                                 .count());
}

std::string report_to_json(const MiningReport& report) {
    check_consistency(report);

    nlohmann::ordered_json doc;
    doc["schema_version"] = kReportSchemaVersion;
    doc["repository"] = report.repository;
    doc["branch"] = report.branch;
    doc["plugin"] = report.plugin;
    doc["tool_version"] = report.tool_version;
    doc["generated_at"] = report.generated_at;

    nlohmann::ordered_json fixing = nlohmann::ordered_json::array();
    for (const FixingCommitRecord& record : report.fixing_commits) {
        nlohmann::ordered_json obj;
        obj["commit_id"] = record.commit_id;
        nlohmann::ordered_json cats = nlohmann::ordered_json::array();
        for (DefectCategory c : record.categories) {
            cats.push_back(std::string(to_string(c)));
        }
        obj["categories"] = std::move(cats);
        fixing.push_back(std::move(obj));
    }
    doc["fixing_commits"] = std::move(fixing);

    if (report.fixed_files) {
        nlohmann::ordered_json fixed = nlohmann::ordered_json::array();
        for (const ReportFixedFile& f : *report.fixed_files) {
            nlohmann::ordered_json obj;
            obj["filepath"] = f.filepath;
            obj["fic"] = f.fic;
            obj["bic"] = f.bic;
            fixed.push_back(std::move(obj));
        }
        doc["fixed_files"] = std::move(fixed);
    }
    if (report.failure_prone_files) {
        nlohmann::ordered_json fpf = nlohmann::ordered_json::array();
        for (const FailureProneFile& f : *report.failure_prone_files) {
            nlohmann::ordered_json obj;
            obj["filepath"] = f.filepath;
            obj["commit_id"] = f.commit_id;
            obj["fixing_commit_id"] = f.fixing_commit_id;
            fpf.push_back(std::move(obj));
        }
        doc["failure_prone_files"] = std::move(fpf);
    }
    return doc.dump(2) + "\n";
}

MiningReport report_from_json(std::string_view json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("report parse error: ") + e.what());
    }
    if (!doc.is_object()) {
        throw ConfigError("report must be a JSON object");
    }

    const nlohmann::json& version = require_field(doc, "schema_version");
    if (!version.is_number_integer() || version.get<int>() != kReportSchemaVersion) {
        throw ConfigError("report schema version mismatch: expected " +
                          std::to_string(kReportSchemaVersion) + ", found " + version.dump());
    }

    MiningReport report;
    try {
        report.repository = require_field(doc, "repository").get<std::string>();
        report.branch = require_field(doc, "branch").get<std::string>();
        report.plugin = require_field(doc, "plugin").get<std::string>();
        report.tool_version = require_field(doc, "tool_version").get<std::string>();
        report.generated_at = require_field(doc, "generated_at").get<std::string>();

        const nlohmann::json& fixing = require_field(doc, "fixing_commits");
        if (!fixing.is_array()) {
            throw ConfigError("field 'fixing_commits' must be an array");
        }
        for (const auto& obj : fixing) {
            FixingCommitRecord record;
            record.commit_id = require_field(obj, "commit_id").get<std::string>();
            for (const auto& name : require_field(obj, "categories")) {
                auto category = defect_category_from_string(name.get<std::string>());
                if (!category) {
                    throw ConfigError("unknown defect category '" +
                                      name.get<std::string>() + "' in report");
                }
                record.categories.insert(*category);
            }
            report.fixing_commits.push_back(std::move(record));
        }

        if (doc.contains("fixed_files")) {
            report.fixed_files.emplace();
            for (const auto& obj : doc["fixed_files"]) {
                report.fixed_files->push_back(
                    {require_field(obj, "filepath").get<std::string>(),
                     require_field(obj, "fic").get<std::string>(),
                     require_field(obj, "bic").get<std::string>()});
            }
        }
        if (doc.contains("failure_prone_files")) {
            report.failure_prone_files.emplace();
            for (const auto& obj : doc["failure_prone_files"]) {
                report.failure_prone_files->push_back(
                    {require_field(obj, "filepath").get<std::string>(),
                     require_field(obj, "commit_id").get<std::string>(),
                     require_field(obj, "fixing_commit_id").get<std::string>()});
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("report field has wrong type: ") + e.what());
    }

    check_consistency(report);
    return report;
}

void write_report(const MiningReport& report, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error("cannot open for writing: " + path.string());
    }
    out << report_to_json(report);
    if (!out) {
        throw Error("write failed: " + path.string());
    }
}

MiningReport read_report(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw RepositoryError("cannot open report file: " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return report_from_json(buffer.str());
}

}  // namespace repominer
