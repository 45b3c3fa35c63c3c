#include "polybohr/constants.hpp"

#include <map>
#include <mutex>
#include <numbers>

namespace polybohr {

std::string to_string(ScalarField f) { return f == ScalarField::real ? "R" : "C"; }

ScalarField parse_field(const std::string& s)
{
    if (s == "C" || s == "complex") return ScalarField::complex;
    if (s == "R" || s == "real") return ScalarField::real;
    throw RejectedInput("unknown scalar field '" + s + "' (expected C or R)");
}

BoundValue BoundValue::from_log(double log_value)
{
    POLYBOHR_REQUIRE(std::isfinite(log_value), DomainError, "bound log-value is not finite");
    return {log_value, std::exp(log_value)};
}

BoundValue khintchine(double p, ScalarField field)
{
    if (field == ScalarField::complex) {
        POLYBOHR_REQUIRE(p >= 1.0 && p <= 2.0, DomainError, "complex Khintchine constant needs p in [1, 2]");
        return BoundValue::from_log(-std::lgamma((p + 2.0) / 2.0) / p);
    }
    POLYBOHR_REQUIRE(p > khintchine_real_threshold && p <= 2.0, DomainError,
                     "real Khintchine closed form needs p in (1.847, 2]");
    const double log_inner = std::lgamma((1.0 + p) / 2.0) - 0.5 * std::log(std::numbers::pi);
    return BoundValue::from_log(-0.5 * std::numbers::ln2 - log_inner / p);
}

KSchedule KSchedule::predecessor()
{
    return {"predecessor", [](int m) { return m - 1; }};
}

KSchedule KSchedule::halving()
{
    return {"halving", [](int m) { return m / 2; }};
}

KSchedule KSchedule::fixed_step(int step)
{
    POLYBOHR_REQUIRE(step >= 1, ContractViolation, "schedule step must be >= 1");
    return {"step" + std::to_string(step), [step](int m) { return std::max(1, m - step); }};
}

namespace {

double log_khintchine_step(int k, ScalarField field)
{
    return khintchine(2.0 * k / (k + 1.0), field).log_value;
}

/// Prefix sums of log Gamma(2 - 1/j)^{j/(2-2j)}; grows on demand.
class ClosedFormTable {
public:
    double log_bound(int m)
    {
        std::lock_guard lock(mutex_);
        while (static_cast<int>(prefix_.size()) <= m) {
            const int j = static_cast<int>(prefix_.size());
            double term = 0.0;
            if (j >= 2) term = (j / (2.0 - 2.0 * j)) * std::lgamma(2.0 - 1.0 / j);
            acc_.add(term);
            prefix_.push_back(j == 0 ? 0.0 : acc_.value());
        }
        return prefix_[m];
    }

    /// Copy of log B_0..log B_m.
    std::vector<double> prefix_upto(int m)
    {
        log_bound(m);
        std::lock_guard lock(mutex_);
        return {prefix_.begin(), prefix_.begin() + m + 1};
    }

private:
    std::mutex mutex_;
    std::vector<double> prefix_;
    CompensatedSum acc_;
};

ClosedFormTable& closed_table()
{
    static ClosedFormTable t;
    return t;
}

double log_pol_step_unchecked(int m, int k, double log_mult_k)
{
    const double mk = m - k;
    return 0.5 * mk * std::log1p(1.0 / k) + xlogx(m) - xlogx(mk) + 0.5 * (log_factorial(m - k) - log_factorial(m)) +
           log_mult_k;
}

} // namespace

BoundValue bh_mult_closed(int m)
{
    POLYBOHR_REQUIRE(m >= 1, ContractViolation, "m must be >= 1");
    return BoundValue::from_log(closed_table().log_bound(m));
}

BoundValue bh_mult_recursive(int m, ScalarField field, const KSchedule& schedule, std::optional<RecursionBase> base)
{
    POLYBOHR_REQUIRE(m >= 1, ContractViolation, "m must be >= 1");
    if (base) POLYBOHR_REQUIRE(base->k >= 1, ContractViolation, "recursion base k must be >= 1");
    const int base_k = base ? base->k : 1;
    const double base_log = base ? base->log_value : 0.0;
    POLYBOHR_REQUIRE(m >= base_k, ContractViolation, "m is below the recursion base");

    // Walk down the schedule, then accumulate from the base upward.
    double log_value = base_log;
    std::vector<double> steps;
    int cur = m;
    while (cur > base_k) {
        const int k = schedule.pick(cur);
        POLYBOHR_REQUIRE(k >= 1 && k <= cur - 1, ContractViolation,
                         "schedule '" + schedule.name + "' picked k outside [1, m-1]");
        POLYBOHR_REQUIRE(k >= base_k, DomainError,
                         "schedule '" + schedule.name + "' steps below the recursion base");
        if (field == ScalarField::real && 2.0 * k / (k + 1.0) <= khintchine_real_threshold)
            throw DomainError("real recursion step m=" + std::to_string(cur) + " -> k=" + std::to_string(k) +
                              " needs A_{R,2k/(k+1)} below p0 = 1.847");
        steps.push_back((cur - k) * log_khintchine_step(k, field));
        cur = k;
    }
    CompensatedSum acc;
    acc.add(log_value);
    for (auto it = steps.rbegin(); it != steps.rend(); ++it) acc.add(*it);
    return BoundValue::from_log(acc.value());
}

BoundValue bh_mult_classical(int m, ClassicalBound which)
{
    POLYBOHR_REQUIRE(m >= 1, ContractViolation, "m must be >= 1");
    const double half_ln2 = 0.5 * std::numbers::ln2;
    switch (which) {
    case ClassicalBound::bh1931:
        return BoundValue::from_log((m + 1.0) / (2.0 * m) * std::log(double(m)) + (m - 1) * half_ln2);
    case ClassicalBound::davie_kaijser:
        return BoundValue::from_log((m - 1) * half_ln2);
    case ClassicalBound::queffelec:
        return BoundValue::from_log((m - 1) * (std::numbers::ln2 - 0.5 * std::log(std::numbers::pi)));
    }
    throw ContractViolation("unknown classical bound");
}

BoundValue bh_mult_real(int m)
{
    constexpr int base_k = 13;
    if (m <= base_k) return bh_mult_classical(m, ClassicalBound::davie_kaijser);
    const RecursionBase base{base_k, bh_mult_classical(base_k, ClassicalBound::davie_kaijser).log_value};
    return bh_mult_recursive(m, ScalarField::real, KSchedule::predecessor(), base);
}

BoundValue bh_pol_step(int m, int k)
{
    POLYBOHR_REQUIRE(m >= 2, ContractViolation, "m must be >= 2");
    POLYBOHR_REQUIRE(k >= 1 && k <= m - 1, ContractViolation, "k must lie in [1, m-1]");
    return BoundValue::from_log(log_pol_step_unchecked(m, k, closed_table().log_bound(k)));
}

PolBest bh_pol_best(int m)
{
    POLYBOHR_REQUIRE(m >= 2, ContractViolation, "m must be >= 2");
    const std::vector<double> log_mult = closed_table().prefix_upto(m);
    int best_k = 1;
    double best = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= m - 1; ++k) {
        const double v = log_pol_step_unchecked(m, k, log_mult[k]);
        if (v < best) {
            best = v;
            best_k = k;
        }
    }
    return {best_k, BoundValue::from_log(best)};
}

BoundValue bh_pol_dfoos(int m)
{
    POLYBOHR_REQUIRE(m >= 2, ContractViolation, "m must be >= 2");
    const double mm1 = m - 1;
    return BoundValue::from_log(mm1 * std::log1p(1.0 / mm1) + 0.5 * std::log(double(m)) +
                                mm1 * 0.5 * std::numbers::ln2);
}

BoundValue bh_pol_polarization(int m)
{
    POLYBOHR_REQUIRE(m >= 1, ContractViolation, "m must be >= 1");
    const double md = m;
    return BoundValue::from_log(closed_table().log_bound(m) + 0.5 * xlogx(md) + 0.5 * xlogx(md + 1.0) -
                                md * std::numbers::ln2 - (md + 1.0) / (2.0 * md) * log_factorial(m));
}

int analytic_k(int m)
{
    POLYBOHR_REQUIRE(m >= 2, ContractViolation, "m must be >= 2");
    const long k = std::lround(std::sqrt(m / std::log(double(m))));
    return static_cast<int>(std::clamp<long>(k, 1, m - 1));
}

MixedExponentBound bh_mixed_exponent_bound(const MixedExponent& q, ScalarField field)
{
    const int m = q.size();
    POLYBOHR_REQUIRE(std::abs(q.reciprocal_sum() - (m + 1.0) / 2.0) <= 1e-9, RejectedInput,
                     "not a Bohnenblust-Hille exponent: sum of 1/q_i must equal (m+1)/2");
    const auto [qmin, qmax] = std::minmax_element(q.values().begin(), q.values().end());
    constexpr double eps = 1e-12;
    if (*qmax > 2.0 + eps) throw NotRepresentable("exponent entry above 2: no admissible k");
    int k_found = 0;
    for (int k = m; k >= 1; --k) {
        if (*qmin >= 2.0 * k / (k + 1.0) - eps) {
            k_found = k;
            break;
        }
    }
    if (k_found == 0) throw NotRepresentable("no k with every q_i in [2k/(k+1), 2]");

    double log_value = 0.0;
    if (field == ScalarField::complex) {
        log_value = closed_table().log_bound(k_found);
    } else {
        POLYBOHR_REQUIRE(k_found == 1, DomainError,
                         "real multilinear base constants are not available for k >= 2");
    }
    if (k_found < m) log_value += (m - k_found) * log_khintchine_step(k_found, field);
    return {k_found, BoundValue::from_log(log_value)};
}

std::vector<GrowthRow> growth_report(int m_max)
{
    POLYBOHR_REQUIRE(m_max >= 2, ContractViolation, "m_max must be >= 2");
    closed_table().log_bound(m_max);
    std::vector<GrowthRow> rows(static_cast<std::size_t>(m_max));
    parallel_for(rows.size(), [&](std::size_t idx) {
        const int m = static_cast<int>(idx) + 1;
        GrowthRow& r = rows[idx];
        r.m = m;
        r.closed = bh_mult_closed(m).value;
        r.recursive = bh_mult_recursive(m, ScalarField::complex).value;
        r.bh1931 = bh_mult_classical(m, ClassicalBound::bh1931).value;
        r.davie_kaijser = bh_mult_classical(m, ClassicalBound::davie_kaijser).value;
        r.queffelec = bh_mult_classical(m, ClassicalBound::queffelec).value;
        r.polarization = bh_pol_polarization(m).value;
        r.closed_ratio = r.closed / std::pow(double(m), mult_growth_exponent());
        if (m >= 2) {
            const auto best = bh_pol_best(m);
            r.pol_best = best.bound.value;
            r.k_star = best.k_star;
            r.pol_analytic = bh_pol_step(m, analytic_k(m)).value;
            r.dfoos = bh_pol_dfoos(m).value;
            r.closed_diff = r.closed - bh_mult_closed(m - 1).value;
            r.pol_log_ratio = best.bound.log_value / std::sqrt(m * std::log(double(m)));
        } else {
            r.pol_best = 1.0;
            r.k_star = 0;
            r.pol_analytic = 1.0;
            r.dfoos = 1.0;
        }
    });
    return rows;
}

} // namespace polybohr
