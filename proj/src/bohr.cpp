#include "polybohr/bohr.hpp"

#include <cstdio>
#include <mutex>
#include <sstream>

namespace polybohr {

namespace {

struct PolEntry {
    double log_value;
    int k_star;
};

/// bh_pol_best for m = 0..M, grown on demand.
class PolBestCache {
public:
    PolEntry get(int m)
    {
        std::lock_guard lock(mutex_);
        if (entries_.empty()) entries_ = {{0.0, 0}, {0.0, 0}};
        while (static_cast<int>(entries_.size()) <= m) {
            const auto best = bh_pol_best(static_cast<int>(entries_.size()));
            entries_.push_back({best.bound.log_value, best.k_star});
        }
        return entries_[m];
    }

private:
    std::mutex mutex_;
    std::vector<PolEntry> entries_;
};

PolBestCache& pol_cache()
{
    static PolBestCache c;
    return c;
}

/// x log(1 + 1/x), increasing and concave on [0, inf).
double g_shift(double x) { return x == 0.0 ? 0.0 : x * std::log1p(1.0 / x); }

std::string fmt17(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

double series_pol_log_bound(int m)
{
    POLYBOHR_REQUIRE(m >= 1, ContractViolation, "m must be >= 1");
    return m == 1 ? 0.0 : pol_cache().get(m).log_value;
}

std::vector<SeriesTerm> series_terms(double r, int n, int M)
{
    POLYBOHR_REQUIRE(r > 0.0 && r < 1.0, RejectedInput, "r must lie in (0, 1)");
    POLYBOHR_REQUIRE(n >= 2, RejectedInput, "n must be >= 2");
    POLYBOHR_REQUIRE(M >= 1, ContractViolation, "M must be >= 1");
    pol_cache().get(M);

    const double log_r = std::log(r);
    double log_count = 0.0; // log binom(n+m-1, m)
    std::vector<SeriesTerm> terms;
    terms.reserve(static_cast<std::size_t>(M));
    for (int m = 1; m <= M; ++m) {
        log_count += std::log1p((n - 1.0) / m);
        terms.push_back({m, m * log_r + series_pol_log_bound(m) + (m - 1.0) / (2.0 * m) * log_count});
    }
    return terms;
}

SeriesValue series_value(double r, int n, int M)
{
    const auto terms = series_terms(r, n, M);
    CompensatedSum sum;
    for (const auto& t : terms) sum.add(std::exp(t.log_term));
    const double log_term = terms.back().log_term;
    const double log_r = std::log(r);
    const double nd = n;

    // For m >= M the bound B_m <= step(m, k0) with fixed k0 grows by at most
    // (1+1/k0)^{1/2} ((m+1)/(m+1-k0))^{1/2} e^{g(m) - g(m-k0)} per step, a factor
    // decreasing in m; the monomial count contributes a factor decreasing in m too.
    const int k0 = M >= 2 ? pol_cache().get(M).k_star : 1;
    const double Md = M;
    const double log_pol_growth = 0.5 * std::log1p(1.0 / k0) + 0.5 * std::log((Md + 1.0) / (Md + 1.0 - k0)) +
                                  g_shift(Md) - g_shift(Md - k0);
    const double log_count_growth =
        (1.0 + std::log1p(nd / Md)) / (2.0 * (Md + 1.0)) + 0.5 * std::log((nd + Md) / (Md + 1.0));
    const double log_rho = log_r + log_pol_growth + log_count_growth;

    SeriesValue out;
    out.sum = sum.value();
    out.M = M;
    out.rho = std::exp(log_rho);
    if (!(out.rho < 1.0))
        throw NeedsLargerTruncation("tail ratio bound " + fmt17(out.rho) + " >= 1 at M = " + std::to_string(M));
    out.tail_bound = std::exp(log_term) * out.rho / (1.0 - out.rho);
    return out;
}

BohrRecord bohr_lower_certified(int n, double tol, int m_cap)
{
    POLYBOHR_REQUIRE(n >= 2, RejectedInput, "n must be >= 2 (K_1 = 1/3 is handled separately)");
    POLYBOHR_REQUIRE(tol > 0.0 && tol < 1e-2, ContractViolation, "tol must lie in (0, 1e-2)");
    const double log_n = std::log(double(n));
    int M = 4 * static_cast<int>(std::ceil(log_n));
    POLYBOHR_REQUIRE(M <= m_cap, ContractViolation, "initial truncation exceeds the cap");

    auto certified = [&](double r) {
        try {
            return series_value(r, n, M).total() <= 0.5;
        } catch (const NeedsLargerTruncation&) {
            return false;
        }
    };

    while (true) {
        double lo = 0.0, hi = 1.0;
        while (lo == 0.0 || hi - lo > tol * lo) {
            const double mid = 0.5 * (lo + hi);
            if (certified(mid))
                lo = mid;
            else
                hi = mid;
            if (hi < 1e-300) throw std::logic_error("Bohr bisection collapsed to zero");
        }
        // Decide whether the ceiling came from the sum or from the tail ratio.
        bool ratio_limited = false;
        try {
            series_value(std::min(lo * (1.0 + 10.0 * tol), 0.999999), n, M);
        } catch (const NeedsLargerTruncation&) {
            ratio_limited = true;
        }
        if (ratio_limited) {
            if (2 * M > m_cap)
                throw NeedsLargerTruncation("truncation cap " + std::to_string(m_cap) + " reached for n = " +
                                            std::to_string(n));
            M *= 2;
            continue;
        }
        const SeriesValue sv = series_value(lo, n, M);
        BohrRecord rec;
        rec.n = n;
        rec.r_lower = lo;
        rec.b_lower = lo * std::sqrt(n / log_n);
        rec.r_upper_emp = std::numeric_limits<double>::quiet_NaN();
        rec.M = M;
        rec.tail_bound = sv.tail_bound;
        rec.classical_lower = 1.0 / (3.0 * std::sqrt(double(n)));
        rec.classical_upper = 2.0 * std::sqrt(log_n / n);
        rec.above_classical_lower = rec.r_lower >= rec.classical_lower;
        return rec;
    }
}

std::uint64_t monomial_count(int n, int m)
{
    POLYBOHR_REQUIRE(n >= 1 && m >= 1, ContractViolation, "n and m must be >= 1");
    return binomial_u64(static_cast<std::uint64_t>(n + m - 1), static_cast<std::uint64_t>(m));
}

HomogeneousPolynomial ksz_polynomial(int n, int m, const std::vector<double>& signs)
{
    std::vector<HomogeneousPolynomial::Term> terms;
    std::size_t t = 0;
    for_each_sorted_index(m, n, [&](const MultiIndex& idx) {
        POLYBOHR_REQUIRE(t < signs.size(), ContractViolation, "one sign per monomial is required");
        const double multinomial = static_cast<double>(equivalence_class(idx).cardinality);
        terms.push_back({exponents_of(idx, n), cplx(signs[t] * multinomial, 0.0)});
        ++t;
    });
    POLYBOHR_REQUIRE(t == signs.size(), ContractViolation, "one sign per monomial is required");
    return HomogeneousPolynomial(m, n, std::move(terms));
}

BohrUpper bohr_upper_empirical(int n, int m, int sign_trials, const PolyNormOptions& effort, std::uint64_t seed,
                               std::uint64_t monomial_budget)
{
    POLYBOHR_REQUIRE(n >= 1 && m >= 1, ContractViolation, "n and m must be >= 1");
    POLYBOHR_REQUIRE(sign_trials >= 1, ContractViolation, "sign_trials must be >= 1");
    std::uint64_t count = 0;
    try {
        count = monomial_count(n, m);
    } catch (const BudgetExceeded&) {
        count = std::numeric_limits<std::uint64_t>::max();
    }
    POLYBOHR_REQUIRE(count <= monomial_budget, RejectedInput,
                     "monomial count for n = " + std::to_string(n) + ", m = " + std::to_string(m) +
                         " exceeds the budget");

    struct Trial {
        double radius;
        double norm;
        std::uint64_t seed;
    };
    const auto trials = parallel_map<Trial>(static_cast<std::size_t>(sign_trials), [&](std::size_t t) {
        const std::uint64_t s = derive_seed(seed, t);
        Rng rng(s);
        std::vector<double> signs(count);
        for (auto& e : signs) e = rng.sign();
        PolyNormOptions o = effort;
        o.seed = derive_seed(s, 1);
        const double norm = sup_norm_polynomial(ksz_polynomial(n, m, signs), o).value;
        // (norm / n^m)^{1/m}
        const double radius = std::exp((std::log(norm) - m * std::log(double(n))) / m);
        return Trial{radius, norm, s};
    });
    BohrUpper best{std::numeric_limits<double>::infinity(), 0, 0.0};
    for (const auto& t : trials) {
        if (t.radius < best.r_upper_emp) best = {t.radius, t.seed, t.norm};
    }
    return best;
}

std::vector<BohrRecord> bohr_table(const std::vector<int>& n_list, const BohrTableConfig& config)
{
    for (int n : n_list) POLYBOHR_REQUIRE(n >= 2, RejectedInput, "every n must be >= 2");
    pol_cache().get(std::min(config.m_cap, 512));
    auto records = parallel_map<BohrRecord>(n_list.size(), [&](std::size_t i) {
        const int n = n_list[i];
        BohrRecord rec = bohr_lower_certified(n, config.tol, config.m_cap);
        if (rec.r_lower > rec.classical_upper)
            throw std::logic_error("certified radius exceeds the classical upper envelope for n = " +
                                   std::to_string(n));
        if (config.with_upper) {
            const int m = std::max(1, static_cast<int>(std::lround(std::log(double(n)))));
            try {
                rec.r_upper_emp =
                    bohr_upper_empirical(n, m, config.upper_trials, config.upper_effort, derive_seed(config.seed, i),
                                         config.monomial_budget)
                        .r_upper_emp;
            } catch (const RejectedInput&) {
                // Over the monomial budget: left as NaN.
            }
        }
        return rec;
    });
    return records;
}

std::string bohr_csv(const std::vector<BohrRecord>& records)
{
    std::ostringstream out;
    out << "n,r_lower,b_lower,r_upper_emp,M,tail_bound,classical_lower,classical_upper\n";
    for (const auto& r : records) {
        out << r.n << ',' << fmt17(r.r_lower) << ',' << fmt17(r.b_lower) << ',' << fmt17(r.r_upper_emp) << ','
            << r.M << ',' << fmt17(r.tail_bound) << ',' << fmt17(r.classical_lower) << ','
            << fmt17(r.classical_upper) << '\n';
    }
    return out.str();
}

} // namespace polybohr
