#include <nlohmann/json.hpp>

#include "polybohr/witness.hpp"

namespace polybohr {

namespace {

struct SampleStats {
    double mean = 0.0;
    double std_error = 0.0;
};

SampleStats stats_of(const std::vector<double>& x)
{
    SampleStats s;
    const double count = static_cast<double>(x.size());
    s.mean = pairwise_sum(x) / count;
    if (x.size() > 1) {
        std::vector<double> dev(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) dev[i] = (x[i] - s.mean) * (x[i] - s.mean);
        s.std_error = std::sqrt(pairwise_sum(dev) / (count - 1.0) / count);
    }
    return s;
}

/// lhs <= scale * E^{1/p}, allowing E to sit 3 standard errors above its estimate.
CheckReport lp_band_report(double lhs, double scale, const SampleStats& st, double p, bool exact, int trials)
{
    CheckReport r;
    const double estimate = std::pow(st.mean, 1.0 / p);
    const double upper = std::pow(st.mean + 3.0 * st.std_error, 1.0 / p);
    r.lhs = lhs;
    r.rhs = scale * estimate;
    r.slack = scale * (upper - estimate) + default_relative_slack * std::max({lhs, r.rhs, 1.0});
    r.holds = lhs <= r.rhs + r.slack;
    const bool inconclusive = !exact && (trials < 1000 || st.std_error > 0.05 * st.mean);
    r.extras = {{"estimate", estimate},
                {"std_error", st.std_error},
                {"ratio", r.rhs > 0.0 ? lhs / r.rhs : std::numeric_limits<double>::quiet_NaN()},
                {"exact", exact ? 1.0 : 0.0},
                {"inconclusive", inconclusive ? 1.0 : 0.0},
                {"trials", double(trials)}};
    return r;
}

} // namespace

double harris_factor(const std::vector<int>& partition)
{
    int m = 0;
    double log_f = 0.0;
    for (int mj : partition) {
        POLYBOHR_REQUIRE(mj >= 1, RejectedInput, "partition parts must be >= 1");
        m += mj;
        log_f += log_factorial(mj) - xlogx(mj);
    }
    POLYBOHR_REQUIRE(m >= 1, RejectedInput, "empty partition");
    return std::exp(log_f + xlogx(m) - log_factorial(m));
}

CheckReport harris_check(const HomogeneousPolynomial& P, const std::vector<int>& partition, int trials,
                         std::uint64_t seed, const PolyNormOptions& base)
{
    int total = 0;
    for (int mj : partition) {
        POLYBOHR_REQUIRE(mj >= 1, RejectedInput, "partition parts must be >= 1");
        total += mj;
    }
    POLYBOHR_REQUIRE(total == P.degree(), RejectedInput, "partition must sum to the degree");
    POLYBOHR_REQUIRE(trials >= 1, ContractViolation, "trials must be >= 1");

    const MultilinearForm L = symmetrize(P);
    const int n = P.dim();
    const double factor = harris_factor(partition);

    const auto values = parallel_map<double>(static_cast<std::size_t>(trials), [&](std::size_t t) {
        Rng rng(derive_seed(seed, t));
        std::vector<Eigen::VectorXcd> slots;
        for (int mj : partition) {
            Eigen::VectorXcd z(n);
            for (int i = 0; i < n; ++i) z[i] = rng.unimodular();
            for (int r = 0; r < mj; ++r) slots.push_back(z);
        }
        return std::abs(L.evaluate(slots));
    });
    const double lhs = *std::max_element(values.begin(), values.end());

    PolyNormOptions rhs_opts = base.scaled(8);
    rhs_opts.seed = derive_seed(seed, 0xA11CE);
    double norm = sup_norm_polynomial(P, rhs_opts).value;
    int escalations = 0;
    if (lhs > factor * norm * (1.0 + 1e-6)) {
        PolyNormOptions retry = rhs_opts.scaled(10);
        retry.seed = derive_seed(seed, 0xB0B);
        norm = std::max(norm, sup_norm_polynomial(P, retry).value);
        escalations = 1;
    }
    CheckReport r;
    r.lhs = lhs;
    r.rhs = factor * norm;
    r.slack = 1e-6 * r.rhs;
    r.holds = lhs <= r.rhs + r.slack;
    r.extras = {{"factor", factor},
                {"norm_est", norm},
                {"max_ratio", r.rhs > 0.0 ? lhs / r.rhs : 0.0},
                {"escalations", double(escalations)},
                {"trials", double(trials)}};
    return r;
}

CheckReport khintchine_empirical_for(const Eigen::VectorXcd& a, double p, int trials, ScalarField field,
                                     std::uint64_t seed)
{
    const double constant = khintchine(p, field).value;
    POLYBOHR_REQUIRE(trials >= 1, ContractViolation, "trials must be >= 1");
    POLYBOHR_REQUIRE(a.size() >= 1, ContractViolation, "coefficient vector must be non-empty");
    if (field == ScalarField::real)
        POLYBOHR_REQUIRE(a.imag().isZero(0.0), ContractViolation, "real Khintchine check needs real coefficients");
    const int n = static_cast<int>(a.size());
    const double lhs = a.norm();

    if (field == ScalarField::real && n <= 20 && (std::int64_t{1} << n) <= trials) {
        // Exact expectation over all sign patterns.
        const std::size_t patterns = std::size_t{1} << n;
        std::vector<double> x(patterns);
        for (std::size_t s = 0; s < patterns; ++s) {
            double sum = 0.0;
            for (int i = 0; i < n; ++i) sum += ((s >> i) & 1U ? -1.0 : 1.0) * a[i].real();
            x[s] = std::pow(std::abs(sum), p);
        }
        SampleStats st{pairwise_sum(x) / static_cast<double>(patterns), 0.0};
        return lp_band_report(lhs, constant, st, p, true, static_cast<int>(patterns));
    }

    const auto x = parallel_map<double>(static_cast<std::size_t>(trials), [&](std::size_t t) {
        Rng rng(derive_seed(seed, t));
        cplx sum = 0.0;
        if (field == ScalarField::real) {
            for (int i = 0; i < n; ++i) sum += rng.sign() * a[i];
        } else {
            for (int i = 0; i < n; ++i) sum += rng.unimodular() * a[i];
        }
        return std::pow(std::abs(sum), p);
    });
    return lp_band_report(lhs, constant, stats_of(x), p, false, trials);
}

CheckReport khintchine_empirical(double p, int n, int trials, ScalarField field, std::uint64_t seed)
{
    POLYBOHR_REQUIRE(n >= 1, ContractViolation, "n must be >= 1");
    Rng rng(derive_seed(seed, 0xC0EFF));
    Eigen::VectorXcd a(n);
    for (int i = 0; i < n; ++i) a[i] = field == ScalarField::real ? cplx(rng.normal(), 0.0) : rng.complex_normal();
    return khintchine_empirical_for(a, p, trials, field, seed);
}

CheckReport poly_khintchine_check(const HomogeneousPolynomial& P, double p, int trials, std::uint64_t seed)
{
    POLYBOHR_REQUIRE(p >= 1.0 && p <= 2.0, RejectedInput, "p must lie in [1, 2]");
    POLYBOHR_REQUIRE(trials >= 1, ContractViolation, "trials must be >= 1");
    const int n = P.dim();
    const auto x = parallel_map<double>(static_cast<std::size_t>(trials), [&](std::size_t t) {
        Rng rng(derive_seed(seed, t));
        Eigen::VectorXcd z(n);
        for (int i = 0; i < n; ++i) z[i] = rng.unimodular();
        return std::pow(std::abs(P.evaluate(z)), p);
    });
    const double scale = std::pow(2.0 / p, P.degree() / 2.0);
    auto r = lp_band_report(P.coefficient_l2(), scale, stats_of(x), p, false, trials);
    r.extras.emplace_back("factor", scale);
    return r;
}

void to_json(nlohmann::json& j, const GrowthReport& r)
{
    j = nlohmann::json{{"n", r.n}, {"max_ratio", r.max_ratio}, {"slope", r.slope}, {"intercept", r.intercept}};
}

GrowthReport unboundedness_probe(const MixedExponent& q, const std::vector<int>& n_list, int trials,
                                 std::uint64_t seed, const AscentOptions& opts)
{
    POLYBOHR_REQUIRE(n_list.size() >= 2, ContractViolation, "probe needs at least two dimensions");
    POLYBOHR_REQUIRE(trials >= 1, ContractViolation, "trials must be >= 1");
    const int m = q.size();
    const std::size_t per = static_cast<std::size_t>(trials);
    const auto ratios = parallel_map<double>(n_list.size() * per, [&](std::size_t idx) {
        const int n = n_list[idx / per];
        const MultilinearForm L = random_form(m, n, Distribution::rademacher, derive_seed(seed, idx));
        AscentOptions o = opts;
        o.seed = derive_seed(seed ^ 0x5EED5EEDULL, idx);
        return bh_ratio(L, q, o).ratio;
    });

    GrowthReport rep;
    for (std::size_t b = 0; b < n_list.size(); ++b) {
        rep.n.push_back(n_list[b]);
        rep.max_ratio.push_back(*std::max_element(ratios.begin() + b * per, ratios.begin() + (b + 1) * per));
    }
    // Least squares fit log(max ratio) = intercept + slope log(n).
    const double cnt = static_cast<double>(rep.n.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t b = 0; b < rep.n.size(); ++b) {
        const double x = std::log(double(rep.n[b]));
        const double y = std::log(rep.max_ratio[b]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double denom = cnt * sxx - sx * sx;
    POLYBOHR_REQUIRE(denom > 0.0, ContractViolation, "probe needs at least two distinct dimensions");
    rep.slope = (cnt * sxy - sx * sy) / denom;
    rep.intercept = (sy - rep.slope * sx) / cnt;
    return rep;
}

} // namespace polybohr
