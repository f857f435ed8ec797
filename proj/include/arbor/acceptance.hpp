#ifndef ARBOR_ACCEPTANCE_HPP
#define ARBOR_ACCEPTANCE_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace arbor {

struct AcceptanceOptions {
    std::uint64_t seed = 1;
    std::uint64_t cap = std::uint64_t{1} << 25;
    int threads = 1;
    // Upper bound on BFS levels for the scalable criteria (1-4); 0 keeps the defaults.
    int level = 0;
};

struct CriterionResult {
    int id = 0;
    std::string name;
    std::string suite;
    bool passed = false;
    std::string detail;
    double seconds = 0;
};

constexpr int kCriterionCount = 17;

// core, orders, hausdorff, conjugacy, semirigid, normalizer, odometer, arith
const std::vector<std::string>& suite_names();
// Criterion ids of a suite; "all" gives 1..17. Throws on unknown names.
std::vector<int> suite_criteria(std::string_view suite);
std::string criterion_name(int id);
std::string criterion_suite(int id);

CriterionResult run_criterion(int id, const AcceptanceOptions& opts = {});
std::vector<CriterionResult> run_suite(std::string_view suite, const AcceptanceOptions& opts = {});

}  // namespace arbor

#endif
