#pragma once

#include <stdexcept>
#include <string>

namespace repominer {

/// Base class for every error raised by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Repository access problems: unreachable remotes, clone failures, unknown
/// branches, shallow clones, missing paths or revisions, binary blobs.
class RepositoryError : public Error {
public:
    using Error::Error;
};

/// Bad configuration or input data: rule files, metric requests, reports.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A fix deleted no blameable lines (pure-addition fix); the caller is
/// expected to skip the file.
class NoBlameAnchorError : public Error {
public:
    using Error::Error;
};

}  // namespace repominer
