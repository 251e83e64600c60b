#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace decoy {

struct SuiteReport
{
    std::string suite;
    bool passed{true};
    std::size_t cases{0};
    //! One entry per failing case, with the offending parameters.
    std::vector<std::string> failures;
    std::vector<std::pair<std::string, double>> metrics;

    void fail(std::string message);
};

std::vector<std::string> verify_suite_names();

/*!
 * Run one property suite: inequality, convexity, encoding or bounds.
 *
 * Raises ConfigError for an unknown name. Results depend only on `seed`.
 */
SuiteReport run_verify_suite(std::string const& name,
                             std::uint64_t seed = 20240601,
                             unsigned workers = 0);

}  // namespace decoy
