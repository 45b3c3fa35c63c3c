#pragma once

#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "polybohr/mixed_norm.hpp"

namespace polybohr {

inline constexpr double default_relative_slack = 1e-12;

/// Outcome of checking lhs <= rhs.
struct CheckReport {
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false;
    /// Absolute allowance used in the comparison.
    double slack = 0.0;
    /// Op-specific numbers, kept in insertion order.
    std::vector<std::pair<std::string, double>> extras;

    double extra(const std::string& key) const
    {
        for (const auto& [k, v] : extras)
            if (k == key) return v;
        throw std::out_of_range("CheckReport has no field '" + key + "'");
    }
};

/// lhs <= rhs + rel * max(lhs, rhs, 1).
inline CheckReport compare(double lhs, double rhs, double rel = default_relative_slack)
{
    CheckReport r;
    r.lhs = lhs;
    r.rhs = rhs;
    r.slack = rel * std::max({lhs, rhs, 1.0});
    r.holds = lhs <= rhs + r.slack;
    return r;
}

void to_json(nlohmann::json& j, const CheckReport& r);

namespace detail {

/// prod_i x_i^w with zero handling, evaluated in log space.
inline double weighted_geometric_product(const std::vector<double>& factors, double weight)
{
    double log_sum = 0.0;
    for (double f : factors) {
        if (f == 0.0) return 0.0;
        log_sum += weight * std::log(f);
    }
    return std::exp(log_sum);
}

} // namespace detail

/// ||a||_{q^S} (q_i = lambda on S, 2 elsewhere) against the S-outer group norm.
template <class Scalar>
CheckReport check_minkowski_embedding(const DenseTensor<Scalar>& a, const IndexSubset& S, double lambda)
{
    POLYBOHR_REQUIRE(lambda >= 1.0 && lambda <= 2.0, RejectedInput, "lambda must lie in [1, 2]");
    POLYBOHR_REQUIRE(S.order() == a.order(), ContractViolation, "index subset order must equal tensor order");
    std::vector<double> q(a.order(), 2.0);
    for (int i : S.members()) q[i] = lambda;
    return compare(mixed_norm(a, MixedExponent(std::move(q))), group_two_norm(a, S, lambda));
}

/// Blei-type inequality over all k-subsets with exponent 2k/(k+1).
template <class Scalar>
CheckReport check_blei_generalized(const DenseTensor<Scalar>& a, int k)
{
    const int m = a.order();
    POLYBOHR_REQUIRE(k >= 1 && k <= m, ContractViolation, "k must lie in [1, m]");
    const double lhs = flat_norm(a, 2.0 * m / (m + 1.0));
    const double lambda = 2.0 * k / (k + 1.0);
    std::vector<double> factors;
    for (const auto& S : subsets_of_size(m, k)) factors.push_back(group_two_norm(a, S, lambda));
    const double rhs = detail::weighted_geometric_product(factors, 1.0 / static_cast<double>(factors.size()));
    auto r = compare(lhs, rhs);
    r.extras = {{"k", double(k)}, {"subsets", double(factors.size())}};
    return r;
}

/// Blei variant with exponents p, q, s where k/s + (m-k)/q = m/p and q >= s.
template <class Scalar>
CheckReport check_blei_pqs(const DenseTensor<Scalar>& a, int k, double p, double q, double s)
{
    const int m = a.order();
    POLYBOHR_REQUIRE(k >= 1 && k <= m, ContractViolation, "k must lie in [1, m]");
    POLYBOHR_REQUIRE(p >= 1.0 && q >= 1.0 && s >= 1.0, RejectedInput, "p, q, s must be >= 1");
    POLYBOHR_REQUIRE(q >= s, RejectedInput, "q must be >= s");
    POLYBOHR_REQUIRE(std::abs(k / s + (m - k) / q - m / p) <= 1e-9, RejectedInput,
                     "exponents must satisfy k/s + (m-k)/q = m/p");
    const double lhs = flat_norm(a, p);
    std::vector<double> factors;
    for (const auto& S : subsets_of_size(m, k)) factors.push_back(group_norm(a, S, s, q));
    const double rhs = detail::weighted_geometric_product(factors, 1.0 / static_cast<double>(factors.size()));
    auto r = compare(lhs, rhs);
    r.extras = {{"k", double(k)}, {"p", p}, {"q", q}, {"s", s}};
    return r;
}

/// w(x, y) = (q^2 (x + y) - 2 q x y) / (q^2 - x y).
inline double dps_w(double q, double x, double y) { return (q * q * (x + y) - 2.0 * q * x * y) / (q * q - x * y); }

/// f(x, y) = (q^2 x - q x y) / (q^2 (x + y) - 2 q x y).
inline double dps_f(double q, double x, double y)
{
    return (q * q * x - q * x * y) / (q * q * (x + y) - 2.0 * q * x * y);
}

/// Mixed row/column variant of Blei's inequality for a matrix, on moduli.
template <class Scalar>
CheckReport check_dps(const DenseTensor<Scalar>& matrix, double q, double s1, double s2)
{
    POLYBOHR_REQUIRE(matrix.order() == 2, ContractViolation, "check_dps needs an order-2 tensor");
    POLYBOHR_REQUIRE(s1 >= 1.0 && s2 >= 1.0, RejectedInput, "s1, s2 must be >= 1");
    POLYBOHR_REQUIRE(q > std::max(s1, s2), RejectedInput, "q must exceed max(s1, s2)");
    const double w = dps_w(q, s1, s2);
    const double f12 = dps_f(q, s1, s2);
    const double f21 = dps_f(q, s2, s1);

    const double lhs = flat_norm(matrix, w);
    // Rows beta_i: outer index 0; columns alpha_j: outer index 1.
    const double rows = group_norm(matrix, IndexSubset(2, {0}), s1, q);
    const double cols = group_norm(matrix, IndexSubset(2, {1}), s2, q);
    const double rhs = (rows == 0.0 || cols == 0.0) ? 0.0 : std::pow(rows, f12) * std::pow(cols, f21);
    auto r = compare(lhs, rhs);
    r.extras = {{"w", w}, {"f1", f12}, {"f2", f21}};
    return r;
}

/// r with 1/r_i = theta/p_i + (1 - theta)/q_i.
inline MixedExponent interpolated_exponent(const MixedExponent& p, const MixedExponent& q, double theta)
{
    POLYBOHR_REQUIRE(p.size() == q.size(), ContractViolation, "exponent lengths differ");
    std::vector<double> r(p.size());
    for (int i = 0; i < p.size(); ++i) r[i] = 1.0 / (theta / p[i] + (1.0 - theta) / q[i]);
    return MixedExponent(std::move(r));
}

/// ||a||_r <= ||a||_p^theta ||a||_q^(1-theta) for the interpolated r.
template <class Scalar>
CheckReport check_interpolation_holder(const DenseTensor<Scalar>& a, const MixedExponent& p, const MixedExponent& q,
                                       double theta)
{
    POLYBOHR_REQUIRE(theta > 0.0 && theta < 1.0, ContractViolation, "theta must lie in (0, 1)");
    const MixedExponent r = interpolated_exponent(p, q, theta);
    const double np = mixed_norm(a, p);
    const double nq = mixed_norm(a, q);
    const double rhs = (np == 0.0 || nq == 0.0) ? 0.0 : std::pow(np, theta) * std::pow(nq, 1.0 - theta);
    auto rep = compare(mixed_norm(a, r), rhs);
    rep.extras = {{"theta", theta}};
    for (int i = 0; i < r.size(); ++i) rep.extras.emplace_back("r" + std::to_string(i + 1), r[i]);
    return rep;
}

} // namespace polybohr
