#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace repominer {

struct ProcessResult {
    int exit_code = -1;
    std::string out;
    std::string err;

    bool ok() const { return exit_code == 0; }
};

/// Runs `argv` with stdout/stderr captured and stdin attached to /dev/null
/// (or to `stdin_file` when given). The caller's environment is inherited;
/// `extra_env` entries override it. Throws Error when the process cannot be
/// spawned. A command killed by a signal reports exit_code 128+signo.
ProcessResult run_process(const std::vector<std::string>& argv,
                          const std::optional<std::filesystem::path>& workdir = std::nullopt,
                          const std::vector<std::pair<std::string, std::string>>& extra_env = {},
                          const std::optional<std::filesystem::path>& stdin_file = std::nullopt);

}  // namespace repominer
