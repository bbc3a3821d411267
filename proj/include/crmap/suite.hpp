#ifndef CRMAP_SUITE_HPP
#define CRMAP_SUITE_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace crmap
{

const char *engine_version();

enum class Verdict { pass, fail, skipped };
std::string verdict_name(Verdict);

struct CheckResult {
    std::string id;
    std::string title;
    Verdict verdict = Verdict::fail;
    // First failure, or the reason for skipping.
    std::string detail;
    std::vector<std::pair<std::string, std::string>> facts;
    double seconds = 0;
};

struct SuiteOptions {
    std::uint64_t seed = 0;
    bool parallel = true;
};

// Acceptance criteria 1..10.
std::vector<std::string> criterion_ids();
// Further identities exercised by the suite, ids "S1".."S6".
std::vector<std::string> supplementary_ids();

CheckResult run_check(const std::string &id, const SuiteOptions &opt = {});
std::vector<CheckResult> run_checks(const std::vector<std::string> &ids, const SuiteOptions &opt = {});
std::vector<CheckResult> run_paper_suite(const SuiteOptions &opt = {});

} // namespace crmap

#endif
