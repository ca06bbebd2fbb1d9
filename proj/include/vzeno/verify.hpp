#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace vzeno::verify {

struct Options {
    std::uint64_t seed = 20260808;
    unsigned threads = 0;
    /// Test fixture: flips one sign in the reference evaluation of the
    /// transition probabilities so the consistency check must fail.
    bool mutate_pq = false;
    /// Optional emission-record CSV to validate (round-trip parse).
    std::string record_path;
};

struct CheckResult {
    std::string name;
    bool passed;
    std::string detail;
};

/// Run the full self-consistency battery: propagator algebra, enumeration
/// oracle, ideal-period statistics, transition-probability consistency,
/// master-equation convergence, waiting-time statistics, unraveling
/// N-scaling, serialization round-trip.
std::vector<CheckResult> run_all(const Options& options);

}  // namespace vzeno::verify
