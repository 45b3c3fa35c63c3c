#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "polybohr/witness.hpp"

namespace polybohr {

/// Randomized instance sweep. With `vary_shape`, m and n are drawn per instance from
/// [1, m] x [1, n] (the DPS sweep keeps m = 2); entries are Gaussian, real or complex
/// with equal odds, and about a quarter of the instances get a sparse support.
struct SweepConfig {
    int m = 3;
    int n = 3;
    int trials = 100;
    std::uint64_t seed = 0;
    bool vary_shape = false;
};

struct SweepRow {
    int instance = 0;
    ScalarField field = ScalarField::complex;
    int m = 0;
    int n = 0;
    CheckReport report;
};

std::vector<SweepRow> sweep_blei(const SweepConfig& c);
std::vector<SweepRow> sweep_minkowski(const SweepConfig& c);
std::vector<SweepRow> sweep_pqs(const SweepConfig& c);
std::vector<SweepRow> sweep_dps(const SweepConfig& c);
std::vector<SweepRow> sweep_interp(const SweepConfig& c);

/// Ratio estimate of random complex Gaussian forms against bh_mult_closed(m) * (1 + margin).
std::vector<SweepRow> sweep_bh_ratio(const SweepConfig& c, double margin = 1e-3);

/// Partitions of m into positive parts, each nonincreasing, in lexicographically decreasing order.
std::vector<std::vector<int>> integer_partitions(int m);

/// harris_check for every partition of m on one random complex Gaussian polynomial per partition.
std::vector<SweepRow> sweep_harris(const SweepConfig& c);

/// poly_khintchine_check on a random complex Gaussian polynomial for each p.
std::vector<SweepRow> sweep_poly_khintchine(const SweepConfig& c, const std::vector<double>& p_list);

/// khintchine_empirical for each p.
std::vector<SweepRow> sweep_khintchine(const SweepConfig& c, ScalarField field, const std::vector<double>& p_list);

inline bool all_hold(const std::vector<SweepRow>& rows)
{
    for (const auto& r : rows)
        if (!r.report.holds) return false;
    return true;
}

} // namespace polybohr
