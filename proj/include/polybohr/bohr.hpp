#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "polybohr/witness.hpp"

namespace polybohr {

/// log t_m(r) with t_m(r) = r^m B^pol_m binom(n+m-1, m)^{(m-1)/(2m)}.
struct SeriesTerm {
    int m = 0;
    double log_term = 0.0;
};

/// Terms m = 1..M, binomials accumulated by recurrence.
std::vector<SeriesTerm> series_terms(double r, int n, int M);

/// Truncated majorant sum_{m<=M} t_m(r) with
/// t_m(r) = r^m B^pol_m binom(n+m-1, m)^{(m-1)/(2m)}, plus a geometric tail bound.
struct SeriesValue {
    double sum = 0.0;
    double tail_bound = 0.0;
    /// Ratio bound sup_{m>=M} t_{m+1}/t_m used for the tail.
    double rho = 0.0;
    int M = 0;

    double total() const { return sum + tail_bound; }
};

/// log of the polynomial BH bound used inside the series: 0 for m = 1, bh_pol_best otherwise.
double series_pol_log_bound(int m);

/// Throws NeedsLargerTruncation when the ratio bound is >= 1.
SeriesValue series_value(double r, int n, int M);

struct BohrRecord {
    int n = 0;
    double r_lower = 0.0;
    double b_lower = 0.0;
    /// NaN when not computed.
    double r_upper_emp = 0.0;
    int M = 0;
    double tail_bound = 0.0;
    double classical_lower = 0.0;
    double classical_upper = 0.0;
    bool above_classical_lower = false;
};

/// Bohr radius K_1 of the unit disc.
inline constexpr double bohr_radius_disc = 1.0 / 3.0;

/// Largest r (relative bisection tolerance `tol`) with series_value(r).total() <= 1/2,
/// a certified lower bound on K_n. M starts at 4 ceil(log n) and doubles up to m_cap.
BohrRecord bohr_lower_certified(int n, double tol = 1e-9, int m_cap = 4096);

/// sum_{|alpha| = m} signs_alpha (m choose alpha) z^alpha; signs in J(m, n) order.
HomogeneousPolynomial ksz_polynomial(int n, int m, const std::vector<double>& signs);

/// Number of monomials of degree m in n variables, binom(n+m-1, m).
std::uint64_t monomial_count(int n, int m);

struct BohrUpper {
    double r_upper_emp = 0.0;
    std::uint64_t best_polynomial_seed = 0;
    double norm_est = 0.0;
};

/// min over random sign patterns of (||P||_est / n^m)^{1/m}. Empirical only: the norm
/// estimate is a lower estimate, so this is not a certified upper bound on K_n.
BohrUpper bohr_upper_empirical(int n, int m, int sign_trials, const PolyNormOptions& effort, std::uint64_t seed,
                               std::uint64_t monomial_budget = 200'000);

struct BohrTableConfig {
    double tol = 1e-9;
    int m_cap = 4096;
    bool with_upper = false;
    int upper_trials = 16;
    PolyNormOptions upper_effort{};
    std::uint64_t seed = 0;
    std::uint64_t monomial_budget = 200'000;
};

std::vector<BohrRecord> bohr_table(const std::vector<int>& n_list, const BohrTableConfig& config = {});

/// Header plus one row per record, floats with 17 significant digits.
std::string bohr_csv(const std::vector<BohrRecord>& records);

} // namespace polybohr
