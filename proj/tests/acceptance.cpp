// Runs every acceptance criterion at its stated size and tolerance; one line per criterion.
#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "oplab/campaigns.hpp"

using namespace oplab;

namespace {

constexpr std::uint64_t kSeed = 20240601;

struct Criterion {
    int id;
    std::string title;
    double limit_s;
    std::function<CheckReport()> run;
};

CheckReport only(const CheckReport& rep, const std::string& prefix) {
    CheckReport out;
    for (const auto& c : rep.checks)
        if (c.name.rfind(prefix, 0) == 0) out.append(c);
    return out;
}

CheckReport join(CheckReport a, const CheckReport& b) {
    a.append(b);
    return a;
}

} // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "first unbounded step family, lambda in {0.5, 1, 2}", 1.0,
         [] { return only(campaign_paper_examples(), "example61_"); }},
        {2, "second unbounded step family and doubling witness", 1.0,
         [] { return only(campaign_paper_examples(), "example62_"); }},
        {3, "KMS boundary identities", 10.0, [] { return campaign_kms(100, 8, {0.5, 1.0, 2.0}, kSeed + 3); }},
        {4, "Tomita-Takesaki identities", 10.0, [] { return campaign_tomita(100, 6, 100, kSeed + 4); }},
        {5, "Hoelder/Minkowski fuzz and optimizer", 60.0,
         [] { return join(campaign_holder(10000, kSeed + 5), campaign_minkowski_optimizer(1000, kSeed + 50)); }},
        {6, "Duhamel and expansional identities", 60.0, [] { return campaign_duhamel(100, 4, kSeed + 6); }},
        {7, "CR1 series vs oracle", 120.0, [] { return campaign_cr1(100, 4, kSeed + 7); }},
        {8, "Araki perturbation", 30.0, [] { return campaign_araki(100, 5, kSeed + 8); }},
        {9, "multi-time TR1/TR0 bounds", 120.0, [] { return campaign_multi_time(50, 1000, 4, 6, kSeed + 9); }},
        {10, "Radon-Nikodym trio", 10.0, [] { return campaign_radon_nikodym(100, kSeed + 10); }},
        {11, "relative modular cross-construction", 10.0, [] { return campaign_relative_modular(100, 20, kSeed + 11); }},
        {12, "measurability arithmetic", 5.0, [] { return campaign_measurability(1000, kSeed + 12); }},
    };

    int failed = 0;
    for (const auto& c : criteria) {
        auto t0 = std::chrono::steady_clock::now();
        CheckReport rep = c.run();
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        bool in_time = secs < c.limit_s;
        bool ok = rep.passed() && !rep.checks.empty() && in_time;
        failed += !ok;
        std::printf("criterion %2d %s  %s  (%.2f s, limit %.0f s%s)\n", c.id, ok ? "PASS" : "FAIL", c.title.c_str(), secs,
                    c.limit_s, in_time ? "" : ", over time");
        for (const auto& r : rep.checks)
            if (!r.passed)
                std::printf("    %s: lhs %.17g rhs %.17g residual %.3g tol %.3g\n", r.name.c_str(), r.lhs, r.rhs, r.residual,
                            r.tolerance);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
