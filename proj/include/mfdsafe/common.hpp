#pragma once

#include <chrono>
#include <stdexcept>
#include <string>

namespace mfdsafe {

using Clock = std::chrono::steady_clock;

// Cooperative deadline shared by all solver calls for one graph.
struct Deadline {
    Clock::time_point at;
    bool unlimited = false;

    static Deadline never() { return Deadline{Clock::time_point::max(), true}; }
    static Deadline after_seconds(double sec) {
        return Deadline{Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                           std::chrono::duration<double>(sec)),
                        false};
    }
    bool expired() const { return !unlimited && Clock::now() >= at; }
    double remaining_seconds() const {
        if (unlimited) return 1e18;
        return std::chrono::duration<double>(at - Clock::now()).count();
    }
};

struct TimeoutError : std::runtime_error {
    TimeoutError() : std::runtime_error("time budget exhausted") {}
};

struct SolverError : std::runtime_error {
    explicit SolverError(const std::string& msg) : std::runtime_error(msg) {}
};

struct ParseError : std::runtime_error {
    int line;
    ParseError(int line_, const std::string& msg)
        : std::runtime_error("line " + std::to_string(line_) + ": " + msg), line(line_) {}
};

}  // namespace mfdsafe
