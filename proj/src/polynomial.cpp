#include <map>
#include <numbers>

#include "polybohr/witness.hpp"

namespace polybohr {

EquivClassInfo equivalence_class(const MultiIndex& index)
{
    EquivClassInfo info;
    info.representative = index;
    std::sort(info.representative.begin(), info.representative.end());
    const int m = static_cast<int>(index.size());
    POLYBOHR_REQUIRE(m <= 20, ContractViolation, "equivalence class cardinality needs m <= 20");
    std::uint64_t card = 1;
    for (int i = 1; i <= m; ++i) card *= static_cast<std::uint64_t>(i);
    int run = 1;
    for (int i = 1; i <= m; ++i) {
        if (i < m && info.representative[i] == info.representative[i - 1]) {
            ++run;
            continue;
        }
        for (int f = 2; f <= run; ++f) card /= static_cast<std::uint64_t>(f);
        run = 1;
    }
    info.cardinality = card;
    return info;
}

void for_each_sorted_index(int m, int n, const std::function<void(const MultiIndex&)>& fn)
{
    POLYBOHR_REQUIRE(m >= 1 && n >= 1, ContractViolation, "m and n must be >= 1");
    MultiIndex idx(m, 0);
    while (true) {
        fn(idx);
        int p = m - 1;
        while (p >= 0 && idx[p] == n - 1) --p;
        if (p < 0) return;
        ++idx[p];
        for (int q = p + 1; q < m; ++q) idx[q] = idx[p];
    }
}

std::vector<int> exponents_of(const MultiIndex& sorted_index, int n)
{
    std::vector<int> alpha(n, 0);
    for (int v : sorted_index) {
        POLYBOHR_REQUIRE(v >= 0 && v < n, ContractViolation, "multi-index entry out of range");
        ++alpha[v];
    }
    return alpha;
}

HomogeneousPolynomial::HomogeneousPolynomial(int degree, int dim, std::vector<Term> terms)
    : degree_(degree), dim_(dim)
{
    POLYBOHR_REQUIRE(degree >= 1 && dim >= 1, ContractViolation, "degree and dimension must be >= 1");
    std::map<std::vector<int>, cplx> merged;
    for (auto& t : terms) {
        POLYBOHR_REQUIRE(static_cast<int>(t.alpha.size()) == dim, ContractViolation,
                         "exponent vector length must equal the dimension");
        int deg = 0;
        for (int e : t.alpha) {
            POLYBOHR_REQUIRE(e >= 0, ContractViolation, "exponents must be nonnegative");
            deg += e;
        }
        POLYBOHR_REQUIRE(deg == degree, RejectedInput,
                         "term of degree " + std::to_string(deg) + " in a " + std::to_string(degree) +
                             "-homogeneous polynomial");
        POLYBOHR_REQUIRE(std::isfinite(t.coeff.real()) && std::isfinite(t.coeff.imag()), ContractViolation,
                         "coefficients must be finite");
        merged[t.alpha] += t.coeff;
    }
    // Keep the order of J(m, n): lexicographic in the sorted multi-index, which is
    // reverse-lexicographic in alpha.
    for (auto it = merged.rbegin(); it != merged.rend(); ++it) {
        terms_.push_back({it->first, it->second});
        std::vector<Factor> f;
        for (int i = 0; i < dim_; ++i)
            if (it->first[i] > 0) f.push_back({i, it->first[i]});
        factors_.push_back(std::move(f));
    }
}

HomogeneousPolynomial HomogeneousPolynomial::from_sorted_indices(int degree, int dim,
                                                                 const std::vector<std::pair<MultiIndex, cplx>>& coeffs)
{
    std::vector<Term> terms;
    for (const auto& [idx, c] : coeffs) {
        POLYBOHR_REQUIRE(static_cast<int>(idx.size()) == degree, RejectedInput, "index length must equal the degree");
        POLYBOHR_REQUIRE(std::is_sorted(idx.begin(), idx.end()), ContractViolation, "index must be nondecreasing");
        terms.push_back({exponents_of(idx, dim), c});
    }
    return HomogeneousPolynomial(degree, dim, std::move(terms));
}

namespace {

Eigen::MatrixXcd power_table(const Eigen::VectorXcd& z, int degree)
{
    Eigen::MatrixXcd pw(z.size(), degree + 1);
    for (Eigen::Index i = 0; i < z.size(); ++i) {
        pw(i, 0) = 1.0;
        for (int e = 1; e <= degree; ++e) pw(i, e) = pw(i, e - 1) * z[i];
    }
    return pw;
}

} // namespace

cplx HomogeneousPolynomial::evaluate(const Eigen::VectorXcd& z) const
{
    POLYBOHR_REQUIRE(z.size() == dim_, ContractViolation, "point has wrong dimension");
    const Eigen::MatrixXcd pw = power_table(z, degree_);
    cplx sum = 0.0;
    for (std::size_t t = 0; t < terms_.size(); ++t) {
        cplx v = terms_[t].coeff;
        for (const auto& f : factors_[t]) v *= pw(f.var, f.power);
        sum += v;
    }
    return sum;
}

Eigen::VectorXcd HomogeneousPolynomial::coordinate_profile(const Eigen::VectorXcd& z, int j) const
{
    POLYBOHR_REQUIRE(z.size() == dim_, ContractViolation, "point has wrong dimension");
    POLYBOHR_REQUIRE(j >= 0 && j < dim_, ContractViolation, "coordinate out of range");
    const Eigen::MatrixXcd pw = power_table(z, degree_);
    Eigen::VectorXcd b = Eigen::VectorXcd::Zero(degree_ + 1);
    for (std::size_t t = 0; t < terms_.size(); ++t) {
        cplx v = terms_[t].coeff;
        for (const auto& f : factors_[t])
            if (f.var != j) v *= pw(f.var, f.power);
        b[terms_[t].alpha[j]] += v;
    }
    return b;
}

double HomogeneousPolynomial::coefficient_l2() const
{
    double s = 0.0;
    for (const auto& t : terms_) s += std::norm(t.coeff);
    return std::sqrt(s);
}

double HomogeneousPolynomial::coefficient_l1() const
{
    double s = 0.0;
    for (const auto& t : terms_) s += std::abs(t.coeff);
    return s;
}

namespace {

double profile_modulus(const Eigen::VectorXcd& b, double theta)
{
    cplx s = 0.0;
    for (Eigen::Index e = b.size() - 1; e >= 0; --e) s = s * std::polar(1.0, theta) + b[e];
    return std::abs(s);
}

/// Maximises |sum_e b_e e^{i e theta}| from the current phase.
std::pair<double, double> maximise_phase(const Eigen::VectorXcd& b, double theta_now)
{
    const int grid = std::max<int>(64, 16 * static_cast<int>(b.size()));
    double best_theta = theta_now;
    double best = profile_modulus(b, theta_now);
    for (int g = 0; g < grid; ++g) {
        const double th = 2.0 * std::numbers::pi * g / grid;
        const double v = profile_modulus(b, th);
        if (v > best) {
            best = v;
            best_theta = th;
        }
    }
    // Golden-section refinement inside one grid cell on each side.
    const double h = 2.0 * std::numbers::pi / grid;
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = best_theta - h, hi = best_theta + h;
    double x1 = hi - invphi * (hi - lo), x2 = lo + invphi * (hi - lo);
    double f1 = profile_modulus(b, x1), f2 = profile_modulus(b, x2);
    while (hi - lo > 1e-12) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + invphi * (hi - lo);
            f2 = profile_modulus(b, x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - invphi * (hi - lo);
            f1 = profile_modulus(b, x1);
        }
    }
    const double mid = 0.5 * (lo + hi);
    const double fm = profile_modulus(b, mid);
    if (fm > best) {
        best = fm;
        best_theta = mid;
    }
    return {best_theta, best};
}

} // namespace

NormEstimate sup_norm_polynomial(const HomogeneousPolynomial& P, const PolyNormOptions& opts)
{
    POLYBOHR_REQUIRE(opts.restarts >= 1 && opts.samples >= 1, ContractViolation, "restarts and samples must be >= 1");
    NormEstimate est;
    est.restarts = opts.restarts;
    est.upper_trivial = P.coefficient_l1();
    if (est.upper_trivial == 0.0) {
        est.converged = true;
        return est;
    }
    const int n = P.dim();
    Rng rng(opts.seed);

    struct Sample {
        double value;
        Eigen::VectorXcd z;
    };
    std::vector<Sample> pool;
    pool.reserve(static_cast<std::size_t>(opts.samples));
    for (int s = 0; s < opts.samples; ++s) {
        Eigen::VectorXcd z(n);
        for (int i = 0; i < n; ++i) z[i] = rng.unimodular();
        pool.push_back({std::abs(P.evaluate(z)), std::move(z)});
    }
    const std::size_t starts = std::min<std::size_t>(static_cast<std::size_t>(opts.restarts), pool.size());
    std::partial_sort(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(starts), pool.end(),
                      [](const Sample& a, const Sample& b) { return a.value > b.value; });
    est.value = pool.front().value;

    for (std::size_t r = 0; r < starts; ++r) {
        Eigen::VectorXcd z = pool[r].z;
        double value = pool[r].value;
        bool converged = false;
        for (int cycle = 0; cycle < opts.max_cycles; ++cycle) {
            const double start = value;
            for (int j = 0; j < n; ++j) {
                const auto [theta, v] = maximise_phase(P.coordinate_profile(z, j), std::arg(z[j]));
                if (v >= value) {
                    z[j] = std::polar(1.0, theta);
                    value = v;
                }
            }
            if (value - start <= 1e-13 * value) {
                converged = true;
                break;
            }
        }
        if (value > est.value) {
            est.value = value;
            est.converged = converged;
        } else if (r == 0) {
            est.converged = converged;
        }
    }
    est.value = std::min(est.value, est.upper_trivial);
    return est;
}

} // namespace polybohr
