#include <stdexcept>

#include "polybohr/witness.hpp"

namespace polybohr {

namespace {

using RowMatrixXcd = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Eigen::VectorXcd random_torus_vector(Rng& rng, int n)
{
    Eigen::VectorXcd z(n);
    for (int i = 0; i < n; ++i) z[i] = rng.unimodular();
    return z;
}

cplx draw(Rng& rng, Distribution dist)
{
    switch (dist) {
    case Distribution::gaussian: return rng.complex_normal();
    case Distribution::rademacher: return {rng.sign(), 0.0};
    case Distribution::steinhaus: return rng.unimodular();
    }
    throw ContractViolation("unknown distribution");
}

} // namespace

Distribution parse_distribution(const std::string& s)
{
    if (s == "gaussian") return Distribution::gaussian;
    if (s == "rademacher") return Distribution::rademacher;
    if (s == "steinhaus") return Distribution::steinhaus;
    throw RejectedInput("unknown distribution '" + s + "'");
}

MultilinearForm::MultilinearForm(ComplexTensor coeffs) : coeffs_(std::move(coeffs))
{
    POLYBOHR_REQUIRE(coeffs_.order() >= 1, ContractViolation, "form order must be >= 1");
    POLYBOHR_REQUIRE(coeffs_.data().allFinite(), ContractViolation, "form coefficients must be finite");
}

Eigen::VectorXcd MultilinearForm::slot_coefficients(const std::vector<Eigen::VectorXcd>& z, int slot) const
{
    const int m = order();
    const int n = dim();
    POLYBOHR_REQUIRE(static_cast<int>(z.size()) == m, ContractViolation, "need one vector per slot");
    POLYBOHR_REQUIRE(slot >= 0 && slot < m, ContractViolation, "slot out of range");

    Eigen::VectorXcd cur = coeffs_.data();
    // Contract trailing slots from the fastest axis inward.
    for (int s = m - 1; s > slot; --s) {
        POLYBOHR_REQUIRE(z[s].size() == n, ContractViolation, "slot vector has wrong length");
        const Eigen::Index rows = cur.size() / n;
        Eigen::VectorXcd next = Eigen::Map<const RowMatrixXcd>(cur.data(), rows, n) * z[s];
        cur = std::move(next);
    }
    // Contract leading slots from the slowest axis.
    for (int s = 0; s < slot; ++s) {
        POLYBOHR_REQUIRE(z[s].size() == n, ContractViolation, "slot vector has wrong length");
        const Eigen::Index cols = cur.size() / n;
        Eigen::VectorXcd next = Eigen::Map<const RowMatrixXcd>(cur.data(), n, cols).transpose() * z[s];
        cur = std::move(next);
    }
    return cur;
}

cplx MultilinearForm::evaluate(const std::vector<Eigen::VectorXcd>& z) const
{
    POLYBOHR_REQUIRE(z.size() >= 1 && z[0].size() == dim(), ContractViolation, "slot vector has wrong length");
    return slot_coefficients(z, 0).transpose() * z[0];
}

NormEstimate sup_norm_multilinear(const MultilinearForm& L, const AscentOptions& opts)
{
    POLYBOHR_REQUIRE(opts.restarts >= 1, ContractViolation, "restarts must be >= 1");
    NormEstimate est;
    est.restarts = opts.restarts;
    est.upper_trivial = L.coefficient_l1();
    if (L.coeffs().is_zero()) {
        est.converged = true;
        return est;
    }
    const int m = L.order();
    const int n = L.dim();

    struct Run {
        double value = 0.0;
        bool converged = false;
    };
    auto runs = parallel_map<Run>(static_cast<std::size_t>(opts.restarts), [&](std::size_t r) {
        Rng rng(derive_seed(opts.seed, r));
        std::vector<Eigen::VectorXcd> z(m);
        for (auto& v : z) v = random_torus_vector(rng, n);
        double value = std::abs(L.evaluate(z));
        Run run;
        for (int it = 0; it < opts.max_iters; ++it) {
            const double cycle_start = value;
            for (int slot = 0; slot < m; ++slot) {
                const Eigen::VectorXcd c = L.slot_coefficients(z, slot);
                const double updated = c.cwiseAbs().sum();
                // Each slot update is an exact maximisation, so it cannot lose ground.
                if (updated < value * (1.0 - 1e-12))
                    throw std::logic_error("alternating ascent decreased the objective");
                for (int i = 0; i < n; ++i) {
                    const double mod = std::abs(c[i]);
                    z[slot][i] = mod > 0.0 ? std::conj(c[i]) / mod : cplx(1.0, 0.0);
                }
                value = updated;
            }
            if (opts.on_cycle) opts.on_cycle(static_cast<int>(r), it, value);
            if (value - cycle_start <= 1e-12 * value) {
                run.converged = true;
                break;
            }
        }
        run.value = value;
        return run;
    });
    for (const auto& run : runs) {
        if (run.value > est.value) {
            est.value = run.value;
            est.converged = run.converged;
        }
    }
    est.value = std::min(est.value, est.upper_trivial);
    return est;
}

MultilinearForm symmetrize(const HomogeneousPolynomial& P)
{
    const int m = P.degree();
    const int n = P.dim();
    ComplexTensor a(m, n);
    for (const auto& term : P.terms()) {
        MultiIndex idx;
        for (int i = 0; i < n; ++i)
            for (int e = 0; e < term.alpha[i]; ++e) idx.push_back(i);
        const auto info = equivalence_class(idx);
        const cplx value = term.coeff / static_cast<double>(info.cardinality);
        // next_permutation on a sorted sequence visits each distinct arrangement once.
        do {
            a(idx) = value;
        } while (std::next_permutation(idx.begin(), idx.end()));
    }
    return MultilinearForm(std::move(a));
}

BhRatio bh_ratio(const MultilinearForm& L, const std::optional<MixedExponent>& q, const AscentOptions& opts)
{
    const MixedExponent exponent = q ? *q : MixedExponent::bh_symmetric(L.order());
    BhRatio out;
    out.lhs = mixed_norm(L.coeffs(), exponent);
    out.norm_est = sup_norm_multilinear(L, opts).value;
    out.defined = out.norm_est > 0.0;
    out.ratio = out.defined ? out.lhs / out.norm_est : std::numeric_limits<double>::quiet_NaN();
    return out;
}

MultilinearForm random_form(int m, int n, Distribution dist, std::uint64_t seed)
{
    POLYBOHR_REQUIRE(m >= 1 && n >= 1, ContractViolation, "m and n must be >= 1");
    ComplexTensor a(m, n);
    Rng rng(seed);
    for (Eigen::Index i = 0; i < a.data().size(); ++i) a.data()[i] = draw(rng, dist);
    return MultilinearForm(std::move(a));
}

HomogeneousPolynomial random_polynomial(int m, int n, Distribution dist, std::uint64_t seed)
{
    POLYBOHR_REQUIRE(m >= 1 && n >= 1, ContractViolation, "m and n must be >= 1");
    Rng rng(seed);
    std::vector<HomogeneousPolynomial::Term> terms;
    for_each_sorted_index(m, n, [&](const MultiIndex& idx) { terms.push_back({exponents_of(idx, n), draw(rng, dist)}); });
    return HomogeneousPolynomial(m, n, std::move(terms));
}

} // namespace polybohr
