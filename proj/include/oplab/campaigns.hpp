#pragma once

#include <cstdint>
#include <vector>

#include "oplab/report.hpp"

namespace oplab {

// Randomized verification loops shared by the command-line suites and the acceptance binary.
// Every campaign returns one record per check name: the worst instance, passed only if all instances passed.

CheckReport worst_by_name(const CheckReport& all);
// |lhs - rhs| / |rhs| <= rel_tol
CheckRecord relative_check(std::string name, double lhs, double rhs, double rel_tol);

CheckReport campaign_paper_examples();
CheckReport campaign_holder(int instances, std::uint64_t seed);
CheckReport campaign_minkowski_optimizer(int instances, std::uint64_t seed);
CheckReport campaign_measurability(int instances, std::uint64_t seed);
CheckReport campaign_tomita(int trials, int max_dim, int pair_samples, std::uint64_t seed);
CheckReport campaign_cones(int trials, std::uint64_t seed);
CheckReport campaign_relative_modular(int faithful_pairs, int singular_instances, std::uint64_t seed);
CheckReport campaign_radon_nikodym(int trials, std::uint64_t seed);
CheckReport campaign_kms(int trials, int max_dim, const std::vector<double>& betas, std::uint64_t seed);
CheckReport campaign_multi_time(int instances, int samples, int max_n, int max_dim, std::uint64_t seed);
CheckReport campaign_duhamel(int trials, int max_dim, std::uint64_t seed);
CheckReport campaign_cr1(int trials, int dim, std::uint64_t seed);
CheckReport campaign_araki(int trials, int dim, std::uint64_t seed);
CheckReport campaign_expclass(int trials, std::uint64_t seed);

} // namespace oplab
