#include "repominer/process.hpp"

#include <fcntl.h>
#include <poll.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstdlib>
#include <cstring>

#include "repominer/error.hpp"

namespace repominer {

namespace {

void close_fd(int& fd) {
    if (fd >= 0) {
        ::close(fd);
        fd = -1;
    }
}

}  // namespace

ProcessResult run_process(const std::vector<std::string>& argv,
                          const std::optional<std::filesystem::path>& workdir,
                          const std::vector<std::pair<std::string, std::string>>& extra_env,
                          const std::optional<std::filesystem::path>& stdin_file) {
    if (argv.empty()) {
        throw Error("run_process: empty argv");
    }

    int out_pipe[2] = {-1, -1};
    int err_pipe[2] = {-1, -1};
    if (::pipe(out_pipe) != 0 || ::pipe(err_pipe) != 0) {
        throw Error(std::string("pipe failed: ") + std::strerror(errno));
    }

    pid_t pid = ::fork();
    if (pid < 0) {
        throw Error(std::string("fork failed: ") + std::strerror(errno));
    }

    if (pid == 0) {
        ::close(out_pipe[0]);
        ::close(err_pipe[0]);
        int in_fd = ::open(stdin_file ? stdin_file->c_str() : "/dev/null", O_RDONLY);
        if (in_fd >= 0) {
            ::dup2(in_fd, STDIN_FILENO);
            ::close(in_fd);
        } else if (stdin_file) {
            _exit(127);
        }
        ::dup2(out_pipe[1], STDOUT_FILENO);
        ::dup2(err_pipe[1], STDERR_FILENO);
        ::close(out_pipe[1]);
        ::close(err_pipe[1]);
        if (workdir && ::chdir(workdir->c_str()) != 0) {
            _exit(127);
        }
        for (const auto& [key, value] : extra_env) {
            ::setenv(key.c_str(), value.c_str(), 1);
        }
        std::vector<char*> cargv;
        cargv.reserve(argv.size() + 1);
        for (const auto& arg : argv) {
            cargv.push_back(const_cast<char*>(arg.c_str()));
        }
        cargv.push_back(nullptr);
        ::execvp(cargv[0], cargv.data());
        _exit(127);
    }

    close_fd(out_pipe[1]);
    close_fd(err_pipe[1]);

    ProcessResult result;
    struct Stream {
        int fd;
        std::string* sink;
        bool open;
    };
    Stream streams[2] = {{out_pipe[0], &result.out, true}, {err_pipe[0], &result.err, true}};

    char buf[65536];
    while (streams[0].open || streams[1].open) {
        struct pollfd fds[2];
        nfds_t nfds = 0;
        for (auto& s : streams) {
            if (s.open) {
                fds[nfds].fd = s.fd;
                fds[nfds].events = POLLIN;
                fds[nfds].revents = 0;
                ++nfds;
            }
        }
        int rc = ::poll(fds, nfds, -1);
        if (rc < 0) {
            if (errno == EINTR) {
                continue;
            }
            break;
        }
        for (nfds_t i = 0; i < nfds; ++i) {
            if (!(fds[i].revents & (POLLIN | POLLHUP | POLLERR))) {
                continue;
            }
            for (auto& s : streams) {
                if (s.open && s.fd == fds[i].fd) {
                    ssize_t n = ::read(s.fd, buf, sizeof(buf));
                    if (n > 0) {
                        s.sink->append(buf, static_cast<std::size_t>(n));
                    } else if (n == 0 || (n < 0 && errno != EINTR)) {
                        close_fd(s.fd);
                        s.open = false;
                    }
                }
            }
        }
    }
    close_fd(streams[0].fd);
    close_fd(streams[1].fd);

    int status = 0;
    while (::waitpid(pid, &status, 0) < 0) {
        if (errno != EINTR) {
            throw Error(std::string("waitpid failed: ") + std::strerror(errno));
        }
    }
    if (WIFEXITED(status)) {
        result.exit_code = WEXITSTATUS(status);
    } else if (WIFSIGNALED(status)) {
        result.exit_code = 128 + WTERMSIG(status);
    }
    return result;
}

}  // namespace repominer
