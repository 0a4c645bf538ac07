#include "harness.hpp"

#include <cstdio>
#include <stdexcept>

namespace repominer::testing {

void expect(bool condition, const std::string& message) {
    if (!condition) {
        throw std::runtime_error(message);
    }
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

int AcceptanceHarness::run_all() {
    int failures = 0;
    for (const Gate& gate : gates_) {
        auto start = std::chrono::steady_clock::now();
        std::string detail;
        bool passed = true;
        try {
            gate.run();
        } catch (const std::exception& e) {
            passed = false;
            detail = e.what();
        } catch (...) {
            passed = false;
            detail = "unknown error";
        }
        double elapsed = seconds_since(start);
        if (passed) {
            std::printf("[PASS] %s (%.2fs)\n", gate.name.c_str(), elapsed);
        } else {
            std::printf("[FAIL] %s (%.2fs): %s\n", gate.name.c_str(), elapsed,
                        detail.c_str());
            ++failures;
        }
        std::fflush(stdout);
    }
    if (failures > 0) {
        std::printf("%d of %zu criteria failed\n", failures, gates_.size());
    } else {
        std::printf("all %zu criteria passed\n", gates_.size());
    }
    return failures == 0 ? 0 : 1;
}

}  // namespace repominer::testing
