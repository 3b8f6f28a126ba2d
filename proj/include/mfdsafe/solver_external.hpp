#pragma once

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "mfdsafe/lp_format.hpp"
#include "mfdsafe/mfd_model.hpp"

namespace mfdsafe {

// Bridge to an external MILP solver. The model is written in LP format and
// the configured command is invoked as
//
//     <cmd> <model.lp> <solution.out> <time-limit-seconds> <seed>
//
// The solution file starts with a status line (`optimal`, `infeasible` or
// `timeout`) followed by `<variable> <value>` pairs. The command comes from
// the `solver.external_cmd` configuration; the MFD_SAFE_SOLVER environment
// variable overrides it.
class ExternalBackend : public SolverBackend {
  public:
    explicit ExternalBackend(std::string cmd, long long seed = 0)
        : cmd_(std::move(cmd)), seed_(seed) {
        if (const char* env = std::getenv("MFD_SAFE_SOLVER"); env && *env) cmd_ = env;
        if (cmd_.empty()) throw SolverError("external backend: no solver command configured");
    }

    SolverOutcome solve(const MfdModelSpec& spec, const Deadline& deadline) override {
        if (deadline.expired()) return SolverOutcome{SolveStatus::timeout, {}, {}, 0};
        namespace fs = std::filesystem;
        static std::atomic<long long> counter{0};
        std::string stem = "mfdsafe_" + std::to_string(counter.fetch_add(1)) + "_" +
                           std::to_string(reinterpret_cast<uintptr_t>(this) & 0xffff);
        fs::path lp = fs::temp_directory_path() / (stem + ".lp");
        fs::path sol = fs::temp_directory_path() / (stem + ".sol");
        {
            std::ofstream f(lp);
            f << write_lp(materialize(spec), "graph " + spec.g->id + " k=" + std::to_string(spec.k));
        }
        double limit = std::min(1e7, std::max(0.05, deadline.remaining_seconds()));
        std::ostringstream cmd;
        cmd << cmd_ << " " << lp << " " << sol << " " << limit << " " << seed_;
        int rc = std::system(cmd.str().c_str());
        SolverOutcome out;
        try {
            if (rc != 0) throw SolverError("external solver exited with status " + std::to_string(rc));
            std::ifstream f(sol);
            if (!f) throw SolverError("external solver produced no solution file");
            std::string status;
            f >> status;
            if (status == "infeasible") {
                out.status = SolveStatus::infeasible;
            } else if (status == "timeout") {
                out.status = SolveStatus::timeout;
            } else if (status == "optimal") {
                std::map<std::string, double> values;
                std::string name;
                double val;
                while (f >> name >> val) values[name] = val;
                out = decode_assignment(spec, values);
            } else {
                throw SolverError("external solver reported '" + status + "'");
            }
        } catch (...) {
            fs::remove(lp);
            fs::remove(sol);
            throw;
        }
        fs::remove(lp);
        fs::remove(sol);
        return out;
    }

  private:
    std::string cmd_;
    long long seed_;
};

}  // namespace mfdsafe
