#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Core>
#include <nlohmann/json_fwd.hpp>

#include "polybohr/constants.hpp"
#include "polybohr/inequalities.hpp"
#include "polybohr/tensor.hpp"

namespace polybohr {

enum class Distribution { gaussian, rademacher, steinhaus };

Distribution parse_distribution(const std::string& s);

/// L(z^(1), ..., z^(m)) = sum_i a_i z^(1)_{i_1} ... z^(m)_{i_m}.
class MultilinearForm {
public:
    explicit MultilinearForm(ComplexTensor coeffs);

    int order() const { return coeffs_.order(); }
    int dim() const { return coeffs_.dim(); }
    const ComplexTensor& coeffs() const { return coeffs_; }

    /// z.size() == order(), each of length dim().
    cplx evaluate(const std::vector<Eigen::VectorXcd>& z) const;

    /// c with L(z) = sum_i c_i z^(slot)_i for the other slots held fixed.
    Eigen::VectorXcd slot_coefficients(const std::vector<Eigen::VectorXcd>& z, int slot) const;

    /// sum_i |a_i|, the trivial upper bound on ||L||.
    double coefficient_l1() const { return coeffs_.data().cwiseAbs().sum(); }

private:
    ComplexTensor coeffs_;
};

/// Permutation orbit [i] of a multi-index: sorted representative and |[i]|.
struct EquivClassInfo {
    MultiIndex representative;
    std::uint64_t cardinality = 1;
};

EquivClassInfo equivalence_class(const MultiIndex& index);

/// Calls fn(sorted_index) for every nondecreasing index in J(m, n), lexicographically.
void for_each_sorted_index(int m, int n, const std::function<void(const MultiIndex&)>& fn);

/// Exponent vector alpha (length n) of a sorted multi-index.
std::vector<int> exponents_of(const MultiIndex& sorted_index, int n);

/// P(z) = sum_{|alpha| = m} c_alpha z^alpha on C^n.
class HomogeneousPolynomial {
public:
    struct Term {
        std::vector<int> alpha;
        cplx coeff;
    };

    /// Duplicate exponents are summed; any term of degree != m is rejected.
    HomogeneousPolynomial(int degree, int dim, std::vector<Term> terms);

    /// Coefficients keyed by nondecreasing multi-indices in J(m, n).
    static HomogeneousPolynomial from_sorted_indices(int degree, int dim,
                                                     const std::vector<std::pair<MultiIndex, cplx>>& coeffs);

    int degree() const { return degree_; }
    int dim() const { return dim_; }
    const std::vector<Term>& terms() const { return terms_; }

    cplx evaluate(const Eigen::VectorXcd& z) const;

    /// (sum |c_alpha|^2)^{1/2}
    double coefficient_l2() const;
    double coefficient_l1() const;

    /// Coefficients of theta -> P(z with z_j = e^{i theta}): sum_e b_e e^{i e theta}.
    Eigen::VectorXcd coordinate_profile(const Eigen::VectorXcd& z, int j) const;

private:
    struct Factor {
        int var;
        int power;
    };
    int degree_;
    int dim_;
    std::vector<Term> terms_;
    std::vector<std::vector<Factor>> factors_;
};

/// Lower estimate of a sup norm over the torus.
struct NormEstimate {
    double value = 0.0;
    int restarts = 0;
    bool converged = false;
    /// Trivial upper bound (coefficient l1 mass).
    double upper_trivial = 0.0;
};

struct AscentOptions {
    int restarts = 32;
    int max_iters = 500;
    std::uint64_t seed = 0;
    /// Called after every cycle as (restart, cycle, value).
    std::function<void(int, int, double)> on_cycle;
};

/// Alternating slot-wise maximisation over T^n x ... x T^n with multistart.
NormEstimate sup_norm_multilinear(const MultilinearForm& L, const AscentOptions& opts = {});

struct PolyNormOptions {
    int restarts = 8;
    int samples = 2048;
    int max_cycles = 200;
    std::uint64_t seed = 0;

    PolyNormOptions scaled(int factor) const
    {
        PolyNormOptions o = *this;
        o.restarts *= factor;
        o.samples *= factor;
        return o;
    }
};

/// Random torus sampling followed by cyclic single-phase ascent from the best samples.
NormEstimate sup_norm_polynomial(const HomogeneousPolynomial& P, const PolyNormOptions& opts = {});

/// The symmetric m-linear form with L(z, ..., z) = P(z): a_i = c_[i] / |[i]|.
MultilinearForm symmetrize(const HomogeneousPolynomial& P);

struct BhRatio {
    double lhs = 0.0;
    double norm_est = 0.0;
    /// lhs / norm_est, an upper estimate of the true ratio; NaN when undefined.
    double ratio = 0.0;
    bool defined = false;
};

/// Mixed norm of the coefficients (default exponent 2m/(m+1)) over the estimated ||L||.
BhRatio bh_ratio(const MultilinearForm& L, const std::optional<MixedExponent>& q = std::nullopt,
                 const AscentOptions& opts = {});

/// m_1! ... m_k! / (m_1^m_1 ... m_k^m_k) * m^m / m!
double harris_factor(const std::vector<int>& partition);

/// |L(z1 x m1, ..., zk x mk)| <= harris_factor * ||P|| on random torus tuples; the
/// sup-norm estimate gets 8x default effort and one 10x retry before failing.
CheckReport harris_check(const HomogeneousPolynomial& P, const std::vector<int>& partition, int trials,
                         std::uint64_t seed, const PolyNormOptions& base = {});

/// Khintchine check for a fixed coefficient vector; Rademacher (real) or Steinhaus (complex).
CheckReport khintchine_empirical_for(const Eigen::VectorXcd& a, double p, int trials, ScalarField field,
                                     std::uint64_t seed);

/// Khintchine check on a random Gaussian coefficient vector of length n.
CheckReport khintchine_empirical(double p, int n, int trials, ScalarField field, std::uint64_t seed);

/// (sum |a_alpha|^2)^{1/2} <= (2/p)^{m/2} ||P||_{L^p(T^n)} with a 3-sigma Monte-Carlo band.
CheckReport poly_khintchine_check(const HomogeneousPolynomial& P, double p, int trials, std::uint64_t seed);

struct GrowthReport {
    std::vector<int> n;
    std::vector<double> max_ratio;
    double slope = 0.0;
    double intercept = 0.0;
};

void to_json(nlohmann::json& j, const GrowthReport& r);

/// Least-squares slope of log(max ratio) against log(n) over random +-1 forms.
GrowthReport unboundedness_probe(const MixedExponent& q, const std::vector<int>& n_list, int trials,
                                 std::uint64_t seed, const AscentOptions& opts = {});

MultilinearForm random_form(int m, int n, Distribution dist, std::uint64_t seed);
HomogeneousPolynomial random_polynomial(int m, int n, Distribution dist, std::uint64_t seed);

} // namespace polybohr
