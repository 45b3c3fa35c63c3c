#pragma once

#include <atomic>
#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "polybohr/core.hpp"

namespace polybohr {

/// 0-based multi-index (i_1, ..., i_m) with every entry in [0, n).
using MultiIndex = std::vector<int>;

// ---------------------------------------------------------------------------
// Entry budget for dense storage
// ---------------------------------------------------------------------------

namespace detail {
inline std::atomic<std::size_t>& entry_budget_ref()
{
    static std::atomic<std::size_t> budget{10'000'000};
    return budget;
}
} // namespace detail

inline std::size_t entry_budget() { return detail::entry_budget_ref().load(); }
inline void set_entry_budget(std::size_t budget) { detail::entry_budget_ref().store(budget); }

/// n^m, or BudgetExceeded when it passes `budget`.
inline std::size_t checked_power(int n, int m, std::size_t budget = entry_budget())
{
    POLYBOHR_REQUIRE(n >= 1 && m >= 0, ContractViolation, "dimension and order must be positive");
    std::size_t size = 1;
    for (int i = 0; i < m; ++i) {
        if (size > budget / static_cast<std::size_t>(n))
            throw BudgetExceeded("n^m = " + std::to_string(n) + "^" + std::to_string(m) +
                                 " exceeds the dense entry budget");
        size *= static_cast<std::size_t>(n);
    }
    return size;
}

// ---------------------------------------------------------------------------
// Exponents and index subsets
// ---------------------------------------------------------------------------

/// Exponent tuple (q_1, ..., q_m) of a nested norm; q_1 is the outermost sum.
class MixedExponent {
public:
    MixedExponent() = default;
    MixedExponent(std::initializer_list<double> q) : MixedExponent(std::vector<double>(q)) {}
    explicit MixedExponent(std::vector<double> q) : q_(std::move(q))
    {
        POLYBOHR_REQUIRE(!q_.empty(), ContractViolation, "mixed exponent must be non-empty");
        for (double v : q_)
            POLYBOHR_REQUIRE(std::isfinite(v) && v >= 1.0, ContractViolation,
                             "mixed exponent entries must be finite and >= 1");
    }

    /// (p, ..., p) of length m.
    static MixedExponent constant(int m, double p) { return MixedExponent(std::vector<double>(m, p)); }

    /// The Bohnenblust-Hille exponent (2m/(m+1), ..., 2m/(m+1)).
    static MixedExponent bh_symmetric(int m) { return constant(m, 2.0 * m / (m + 1.0)); }

    int size() const { return static_cast<int>(q_.size()); }
    double operator[](int i) const { return q_[i]; }
    const std::vector<double>& values() const { return q_; }

    /// sum of 1/q_i.
    double reciprocal_sum() const
    {
        double s = 0.0;
        for (double v : q_) s += 1.0 / v;
        return s;
    }

private:
    std::vector<double> q_;
};

/// Sorted k-subset S of {0, ..., m-1} together with its complement.
class IndexSubset {
public:
    IndexSubset(int m, std::vector<int> members) : m_(m), members_(std::move(members))
    {
        POLYBOHR_REQUIRE(!members_.empty(), ContractViolation, "index subset must be non-empty");
        POLYBOHR_REQUIRE(static_cast<int>(members_.size()) <= m_, ContractViolation,
                         "index subset larger than the order");
        for (std::size_t i = 0; i < members_.size(); ++i) {
            POLYBOHR_REQUIRE(members_[i] >= 0 && members_[i] < m_, ContractViolation,
                             "index subset member out of range");
            POLYBOHR_REQUIRE(i == 0 || members_[i - 1] < members_[i], ContractViolation,
                             "index subset members must be strictly increasing");
        }
    }

    static IndexSubset all(int m)
    {
        std::vector<int> v(m);
        std::iota(v.begin(), v.end(), 0);
        return IndexSubset(m, std::move(v));
    }

    int order() const { return m_; }
    int size() const { return static_cast<int>(members_.size()); }
    const std::vector<int>& members() const { return members_; }
    bool contains(int i) const { return std::binary_search(members_.begin(), members_.end(), i); }

    std::vector<int> complement() const
    {
        std::vector<int> out;
        for (int i = 0; i < m_; ++i)
            if (!contains(i)) out.push_back(i);
        return out;
    }

    /// Members followed by the complement: the axis order with S outermost.
    std::vector<int> outer_first_permutation() const
    {
        std::vector<int> perm = members_;
        for (int i : complement()) perm.push_back(i);
        return perm;
    }

private:
    int m_;
    std::vector<int> members_;
};

/// All k-subsets of {0, ..., m-1} in lexicographic order.
inline std::vector<IndexSubset> subsets_of_size(int m, int k)
{
    POLYBOHR_REQUIRE(k >= 1 && k <= m, ContractViolation, "subset size must be in [1, m]");
    std::vector<IndexSubset> out;
    std::vector<int> cur(k);
    std::iota(cur.begin(), cur.end(), 0);
    while (true) {
        out.emplace_back(m, cur);
        int i = k - 1;
        while (i >= 0 && cur[i] == m - k + i) --i;
        if (i < 0) break;
        ++cur[i];
        for (int j = i + 1; j < k; ++j) cur[j] = cur[j - 1] + 1;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Dense tensor
// ---------------------------------------------------------------------------

/// Order-m tensor over {0..n-1}^m, row-major (i_1 slowest, i_m fastest).
template <class Scalar>
class DenseTensor {
public:
    using scalar_type = Scalar;
    using storage_type = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

    DenseTensor() = default;

    DenseTensor(int order, int dim)
        : order_(order), dim_(dim), data_(storage_type::Zero(static_cast<Eigen::Index>(checked_power(dim, order))))
    {
        POLYBOHR_REQUIRE(order >= 1, ContractViolation, "tensor order must be >= 1");
    }

    DenseTensor(int order, int dim, storage_type data) : order_(order), dim_(dim), data_(std::move(data))
    {
        POLYBOHR_REQUIRE(order >= 1, ContractViolation, "tensor order must be >= 1");
        POLYBOHR_REQUIRE(static_cast<std::size_t>(data_.size()) == checked_power(dim, order), ContractViolation,
                         "tensor data size must equal n^m");
        POLYBOHR_REQUIRE(data_.allFinite(), ContractViolation, "tensor entries must be finite");
    }

    /// Row-major matrix as an order-2 tensor.
    static DenseTensor from_matrix(const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& mat)
    {
        POLYBOHR_REQUIRE(mat.rows() == mat.cols(), ContractViolation, "matrix must be square");
        const int n = static_cast<int>(mat.rows());
        DenseTensor t(2, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) t.data_[i * n + j] = mat(i, j);
        return t;
    }

    int order() const { return order_; }
    int dim() const { return dim_; }
    std::size_t size() const { return static_cast<std::size_t>(data_.size()); }

    const storage_type& data() const { return data_; }
    storage_type& data() { return data_; }

    std::size_t linear_index(const MultiIndex& idx) const
    {
        POLYBOHR_REQUIRE(static_cast<int>(idx.size()) == order_, ContractViolation, "multi-index length != order");
        std::size_t lin = 0;
        for (int v : idx) {
            POLYBOHR_REQUIRE(v >= 0 && v < dim_, ContractViolation, "multi-index entry out of range");
            lin = lin * dim_ + static_cast<std::size_t>(v);
        }
        return lin;
    }

    MultiIndex multi_index(std::size_t lin) const
    {
        MultiIndex idx(order_);
        for (int s = order_ - 1; s >= 0; --s) {
            idx[s] = static_cast<int>(lin % dim_);
            lin /= dim_;
        }
        return idx;
    }

    Scalar& operator()(const MultiIndex& idx) { return data_[linear_index(idx)]; }
    const Scalar& operator()(const MultiIndex& idx) const { return data_[linear_index(idx)]; }

    /// |a_i| as a flat array in storage order.
    Eigen::ArrayXd abs() const { return data_.array().abs(); }

    bool is_zero() const { return (data_.array() == Scalar(0)).all(); }

    /// b(j_0..j_{m-1}) = a(i) with i_{perm[t]} = j_t: new axis t is old axis perm[t].
    DenseTensor permuted(const std::vector<int>& perm) const
    {
        POLYBOHR_REQUIRE(static_cast<int>(perm.size()) == order_, ContractViolation, "permutation length != order");
        std::vector<std::size_t> old_stride(order_);
        std::size_t s = 1;
        for (int a = order_ - 1; a >= 0; --a) {
            old_stride[a] = s;
            s *= dim_;
        }
        std::vector<std::size_t> stride(order_);
        std::vector<bool> seen(order_, false);
        for (int t = 0; t < order_; ++t) {
            POLYBOHR_REQUIRE(perm[t] >= 0 && perm[t] < order_ && !seen[perm[t]], ContractViolation,
                             "not a permutation");
            seen[perm[t]] = true;
            stride[t] = old_stride[perm[t]];
        }
        DenseTensor out(order_, dim_);
        std::vector<int> j(order_, 0);
        std::size_t src = 0;
        for (std::size_t lin = 0; lin < size(); ++lin) {
            out.data_[static_cast<Eigen::Index>(lin)] = data_[static_cast<Eigen::Index>(src)];
            for (int t = order_ - 1; t >= 0; --t) {
                if (++j[t] < dim_) {
                    src += stride[t];
                    break;
                }
                j[t] = 0;
                src -= stride[t] * (dim_ - 1);
            }
        }
        return out;
    }

    template <class Other>
    DenseTensor<Other> cast() const
    {
        return DenseTensor<Other>(order_, dim_, data_.template cast<Other>());
    }

    friend DenseTensor operator*(Scalar c, const DenseTensor& a) { return DenseTensor(a.order_, a.dim_, c * a.data_); }
    friend DenseTensor operator+(const DenseTensor& a, const DenseTensor& b)
    {
        POLYBOHR_REQUIRE(a.order_ == b.order_ && a.dim_ == b.dim_, ContractViolation, "tensor shape mismatch");
        return DenseTensor(a.order_, a.dim_, a.data_ + b.data_);
    }

private:
    int order_ = 0;
    int dim_ = 0;
    storage_type data_;
};

using RealTensor = DenseTensor<double>;
using ComplexTensor = DenseTensor<cplx>;

} // namespace polybohr
