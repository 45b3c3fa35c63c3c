#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "polybohr/core.hpp"
#include "polybohr/tensor.hpp"

namespace polybohr {

enum class ScalarField { real, complex };

std::string to_string(ScalarField f);
ScalarField parse_field(const std::string& s);

/// Threshold above which the closed-form real Khintchine constant is valid.
inline constexpr double khintchine_real_threshold = 1.847;

/// A positive bound carried by its natural log; `value` is +inf when exp overflows.
struct BoundValue {
    double log_value = 0.0;
    double value = 1.0;

    static BoundValue from_log(double log_value);
    bool overflowed() const { return std::isinf(value); }
};

/// Best Khintchine constant A_{K,p}. Complex: p in [1, 2] (p = 1 is the
/// continuous limit 2/sqrt(pi)); real: p in (1.847, 2].
BoundValue khintchine(double p, ScalarField field);

/// Rule choosing k in B_m <= A_{2k/(k+1)}^{m-k} B_k.
struct KSchedule {
    std::string name;
    std::function<int(int)> pick;

    /// k = m - 1 at every step.
    static KSchedule predecessor();
    /// k = floor(m / 2).
    static KSchedule halving();
    /// k = max(1, m - step).
    static KSchedule fixed_step(int step);
};

/// Known multilinear bound B_k used as recursion base (k >= 1).
struct RecursionBase {
    int k = 1;
    double log_value = 0.0;
};

/// Multilinear Bohnenblust-Hille bound from the Khintchine recursion, B_1 = 1.
/// Real scalars need every step to use k >= 13 so a base above that must be supplied.
BoundValue bh_mult_recursive(int m, ScalarField field, const KSchedule& schedule = KSchedule::predecessor(),
                             std::optional<RecursionBase> base = std::nullopt);

/// prod_{j=2}^m Gamma(2 - 1/j)^{j/(2-2j)}.
BoundValue bh_mult_closed(int m);

enum class ClassicalBound { bh1931, davie_kaijser, queffelec };
BoundValue bh_mult_classical(int m, ClassicalBound which);

/// Real multilinear bound: (sqrt 2)^{m-1} up to m = 13, then the real Khintchine
/// recursion with k = m - 1 from that base.
BoundValue bh_mult_real(int m);

/// Polynomial bound through a k-linear form:
/// (1+1/k)^{(m-k)/2} m^m/(m-k)^{m-k} ((m-k)!/m!)^{1/2} B^mult_k.
BoundValue bh_pol_step(int m, int k);

struct PolBest {
    int k_star = 1;
    BoundValue bound;
};

/// Exhaustive scan of bh_pol_step over k in [1, m-1]; smallest k wins ties.
PolBest bh_pol_best(int m);

/// (1 + 1/(m-1))^{m-1} sqrt(m) sqrt(2)^{m-1}.
BoundValue bh_pol_dfoos(int m);

/// B^mult_m m^{m/2} (m+1)^{(m+1)/2} / (2^m (m!)^{(m+1)/(2m)}).
BoundValue bh_pol_polarization(int m);

/// k = round(sqrt(m / log m)) clamped to [1, m-1].
int analytic_k(int m);

struct MixedExponentBound {
    int k = 0;
    BoundValue bound;
};

/// Bound for a Bohnenblust-Hille exponent (sum 1/q_i = (m+1)/2) through the largest
/// k with every q_i in [2k/(k+1), 2]: A_{2k/(k+1)}^{m-k} B^mult_k.
MixedExponentBound bh_mixed_exponent_bound(const MixedExponent& q, ScalarField field = ScalarField::complex);

struct GrowthRow {
    int m = 0;
    double closed = 0.0;
    double recursive = 0.0;
    double bh1931 = 0.0;
    double davie_kaijser = 0.0;
    double queffelec = 0.0;
    double pol_best = 0.0;
    int k_star = 0;
    double pol_analytic = 0.0;
    double dfoos = 0.0;
    double polarization = 0.0;
    /// closed(m) / m^{(1-gamma)/2}
    double closed_ratio = 0.0;
    /// closed(m) - closed(m-1)
    double closed_diff = 0.0;
    /// log(pol_best) / sqrt(m log m)
    double pol_log_ratio = 0.0;
};

std::vector<GrowthRow> growth_report(int m_max);

/// Exponent (1 - gamma)/2 of the multilinear growth envelope.
inline double mult_growth_exponent() { return (1.0 - euler_gamma) / 2.0; }

} // namespace polybohr
