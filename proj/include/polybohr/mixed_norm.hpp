#pragma once

#include "polybohr/tensor.hpp"

namespace polybohr {

namespace detail {

/// Nested power sum of nonnegative entries w (row-major, order m, dim n),
/// innermost exponent q[m-1]. Returns the norm, not the power sum.
inline double nested_norm_of_abs(Eigen::ArrayXd w, int n, const MixedExponent& q)
{
    const int m = q.size();
    const double q_last = q[m - 1];
    if (q_last == 2.0)
        w = w.square();
    else if (q_last != 1.0)
        w = w.pow(q_last);

    for (int level = m - 1; level >= 1; --level) {
        const Eigen::Index blocks = w.size() / n;
        Eigen::ArrayXd v(blocks);
        for (Eigen::Index b = 0; b < blocks; ++b)
            v[b] = pairwise_sum(std::span<const double>(w.data() + b * n, static_cast<std::size_t>(n)));
        // Equal neighbouring exponents merge into one flat sum.
        const double ratio = q[level - 1] / q[level];
        if (q[level - 1] != q[level]) v = v.pow(ratio);
        w = std::move(v);
    }
    const double s = pairwise_sum(std::span<const double>(w.data(), static_cast<std::size_t>(w.size())));
    return q[0] == 1.0 ? s : std::pow(s, 1.0 / q[0]);
}

} // namespace detail

/// Nested norm (sum_{i_1} (... (sum_{i_m} |a_i|^{q_m})^{q_{m-1}/q_m} ...)^{q_1/q_2})^{1/q_1}.
template <class Scalar>
double mixed_norm(const DenseTensor<Scalar>& a, const MixedExponent& q)
{
    POLYBOHR_REQUIRE(q.size() == a.order(), ContractViolation, "exponent length must equal tensor order");
    Eigen::ArrayXd w = a.abs();
    const double scale = w.maxCoeff();
    if (scale == 0.0) return 0.0;
    w /= scale;
    return scale * detail::nested_norm_of_abs(std::move(w), a.dim(), q);
}

/// Flat l_p norm of all entries, summed in the same nested order as mixed_norm.
template <class Scalar>
double flat_norm(const DenseTensor<Scalar>& a, double p)
{
    return mixed_norm(a, MixedExponent::constant(a.order(), p));
}

/// (sum_{i_S} (sum_{i_S^c} |a_i|^inner)^{outer/inner})^{1/outer}.
template <class Scalar>
double group_norm(const DenseTensor<Scalar>& a, const IndexSubset& S, double outer, double inner)
{
    POLYBOHR_REQUIRE(S.order() == a.order(), ContractViolation, "index subset order must equal tensor order");
    std::vector<double> q(a.order(), inner);
    for (int t = 0; t < S.size(); ++t) q[t] = outer;
    return mixed_norm(a.permuted(S.outer_first_permutation()), MixedExponent(std::move(q)));
}

/// group_norm with inner exponent 2 and outer exponent lambda in [1, 2].
template <class Scalar>
double group_two_norm(const DenseTensor<Scalar>& a, const IndexSubset& S, double lambda)
{
    POLYBOHR_REQUIRE(lambda >= 1.0 && lambda <= 2.0, RejectedInput, "lambda must lie in [1, 2]");
    return group_norm(a, S, lambda, 2.0);
}

} // namespace polybohr
