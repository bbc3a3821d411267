#include <cstdio>
#include <string>

#include <crmap/suite.hpp>

using namespace crmap;

namespace
{

void print(const char *kind, const CheckResult &r)
{
    std::printf("[%s] %s %s: %s (%.1f s)\n", r.verdict == Verdict::pass ? "PASS" : "FAIL", kind, r.id.c_str(),
                r.title.c_str(), r.seconds);
    if (r.verdict != Verdict::pass) {
        std::printf("       %s\n", r.detail.c_str());
    }
    for (const auto &[k, v] : r.facts) {
        std::printf("       %s: %s\n", k.c_str(), v.c_str());
    }
}

} // namespace

int main()
{
    int failed = 0;
    for (const auto &r : run_checks(criterion_ids())) {
        print("criterion", r);
        failed += r.verdict == Verdict::pass ? 0 : 1;
    }
    for (const auto &r : run_checks(supplementary_ids())) {
        print("supplementary", r);
        failed += r.verdict == Verdict::pass ? 0 : 1;
    }
    std::printf("%d check(s) failed\n", failed);
    return failed == 0 ? 0 : 1;
}
