#include "polybohr/sweeps.hpp"

namespace polybohr {

namespace {

int pick(Rng& rng, int lo, int hi) { return lo + static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(hi - lo + 1)); }

double pick_real(Rng& rng, double lo, double hi) { return lo + (hi - lo) * rng.uniform(); }

struct Shape {
    ScalarField field;
    int m;
    int n;
    bool sparse;
};

Shape draw_shape(Rng& rng, const SweepConfig& c, int fixed_m = 0)
{
    Shape s;
    s.field = rng.uniform() < 0.5 ? ScalarField::real : ScalarField::complex;
    s.m = fixed_m > 0 ? fixed_m : (c.vary_shape ? pick(rng, 1, c.m) : c.m);
    s.n = c.vary_shape ? pick(rng, 1, c.n) : c.n;
    s.sparse = rng.uniform() < 0.25;
    return s;
}

template <class Scalar>
DenseTensor<Scalar> draw_tensor(Rng& rng, const Shape& s)
{
    DenseTensor<Scalar> a(s.m, s.n);
    for (Eigen::Index i = 0; i < a.data().size(); ++i) {
        const bool keep = !s.sparse || rng.uniform() < 0.4;
        if constexpr (std::is_same_v<Scalar, double>)
            a.data()[i] = keep ? rng.normal() : 0.0;
        else
            a.data()[i] = keep ? rng.complex_normal() : cplx(0.0, 0.0);
    }
    return a;
}

/// Runs `check(rng, shape, tensor)` on a real or complex tensor per instance, in parallel.
template <class Check>
std::vector<SweepRow> tensor_sweep(const SweepConfig& c, int fixed_m, Check check)
{
    POLYBOHR_REQUIRE(c.trials >= 1 && c.m >= 1 && c.n >= 1, ContractViolation, "trials, m, n must be >= 1");
    return parallel_map<SweepRow>(static_cast<std::size_t>(c.trials), [&](std::size_t t) {
        Rng rng(derive_seed(c.seed, t));
        const Shape s = draw_shape(rng, c, fixed_m);
        SweepRow row{static_cast<int>(t), s.field, s.m, s.n, {}};
        if (s.field == ScalarField::real)
            row.report = check(rng, s, draw_tensor<double>(rng, s));
        else
            row.report = check(rng, s, draw_tensor<cplx>(rng, s));
        return row;
    });
}

} // namespace

std::vector<SweepRow> sweep_blei(const SweepConfig& c)
{
    return tensor_sweep(c, 0, [](Rng& rng, const Shape& s, const auto& a) {
        return check_blei_generalized(a, pick(rng, 1, s.m));
    });
}

std::vector<SweepRow> sweep_minkowski(const SweepConfig& c)
{
    return tensor_sweep(c, 0, [](Rng& rng, const Shape& s, const auto& a) {
        std::vector<int> members;
        while (members.empty()) {
            for (int i = 0; i < s.m; ++i)
                if (rng.uniform() < 0.5) members.push_back(i);
        }
        const double choices[] = {1.0, 4.0 / 3.0, 2.0};
        const double lambda = rng.uniform() < 0.5 ? choices[pick(rng, 0, 2)] : pick_real(rng, 1.0, 2.0);
        auto r = check_minkowski_embedding(a, IndexSubset(s.m, members), lambda);
        r.extras = {{"lambda", lambda}, {"subset_size", double(members.size())}};
        return r;
    });
}

std::vector<SweepRow> sweep_pqs(const SweepConfig& c)
{
    return tensor_sweep(c, 0, [](Rng& rng, const Shape& s, const auto& a) {
        const int k = pick(rng, 1, s.m);
        const double sv = pick_real(rng, 1.0, 3.0);
        const double q = pick_real(rng, sv, sv + 3.0);
        const double p = s.m / (k / sv + (s.m - k) / q);
        return check_blei_pqs(a, k, p, q, sv);
    });
}

std::vector<SweepRow> sweep_dps(const SweepConfig& c)
{
    return tensor_sweep(c, 2, [](Rng& rng, const Shape&, const auto& a) {
        const double s1 = pick_real(rng, 1.0, 3.0);
        const double s2 = pick_real(rng, 1.0, 3.0);
        const double q = std::max(s1, s2) + pick_real(rng, 1e-3, 3.0);
        auto r = check_dps(a, q, s1, s2);
        r.extras.insert(r.extras.begin(), {{"q", q}, {"s1", s1}, {"s2", s2}});
        return r;
    });
}

std::vector<SweepRow> sweep_interp(const SweepConfig& c)
{
    return tensor_sweep(c, 0, [](Rng& rng, const Shape& s, const auto& a) {
        std::vector<double> p(s.m), q(s.m);
        for (auto& v : p) v = pick_real(rng, 1.0, 3.0);
        for (auto& v : q) v = pick_real(rng, 1.0, 3.0);
        const double theta = pick_real(rng, 1e-3, 1.0 - 1e-3);
        return check_interpolation_holder(a, MixedExponent(p), MixedExponent(q), theta);
    });
}

std::vector<SweepRow> sweep_bh_ratio(const SweepConfig& c, double margin)
{
    POLYBOHR_REQUIRE(c.trials >= 1 && c.m >= 1 && c.n >= 1, ContractViolation, "trials, m, n must be >= 1");
    const double bound = bh_mult_closed(c.m).value * (1.0 + margin);
    return parallel_map<SweepRow>(static_cast<std::size_t>(c.trials), [&](std::size_t t) {
        const std::uint64_t s = derive_seed(c.seed, t);
        Rng rng(s);
        const int n = c.vary_shape ? pick(rng, 1, c.n) : c.n;
        const MultilinearForm L = random_form(c.m, n, Distribution::gaussian, derive_seed(s, 1));
        AscentOptions opts;
        opts.seed = derive_seed(s, 2);
        const BhRatio ratio = bh_ratio(L, std::nullopt, opts);
        SweepRow row{static_cast<int>(t), ScalarField::complex, c.m, n, compare(ratio.ratio, bound)};
        row.report.extras = {{"coeff_norm", ratio.lhs}, {"norm_est", ratio.norm_est}};
        return row;
    });
}

std::vector<std::vector<int>> integer_partitions(int m)
{
    POLYBOHR_REQUIRE(m >= 1, ContractViolation, "m must be >= 1");
    std::vector<std::vector<int>> out;
    std::vector<int> cur{m};
    while (true) {
        out.push_back(cur);
        // Find the rightmost part > 1, decrement it and refill greedily.
        int rest = 0;
        while (!cur.empty() && cur.back() == 1) {
            ++rest;
            cur.pop_back();
        }
        if (cur.empty()) return out;
        const int v = --cur.back();
        ++rest;
        while (rest > 0) {
            const int part = std::min(v, rest);
            cur.push_back(part);
            rest -= part;
        }
    }
}

std::vector<SweepRow> sweep_harris(const SweepConfig& c)
{
    const auto partitions = integer_partitions(c.m);
    std::vector<SweepRow> rows;
    for (std::size_t i = 0; i < partitions.size(); ++i) {
        const std::uint64_t s = derive_seed(c.seed, i);
        const auto P = random_polynomial(c.m, c.n, Distribution::gaussian, derive_seed(s, 1));
        SweepRow row{static_cast<int>(i), ScalarField::complex, c.m, c.n,
                     harris_check(P, partitions[i], c.trials, derive_seed(s, 2))};
        row.report.extras.insert(row.report.extras.begin(), {"parts", double(partitions[i].size())});
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<SweepRow> sweep_poly_khintchine(const SweepConfig& c, const std::vector<double>& p_list)
{
    const auto P = random_polynomial(c.m, c.n, Distribution::gaussian, derive_seed(c.seed, 0));
    std::vector<SweepRow> rows;
    for (std::size_t i = 0; i < p_list.size(); ++i) {
        SweepRow row{static_cast<int>(i), ScalarField::complex, c.m, c.n,
                     poly_khintchine_check(P, p_list[i], c.trials, derive_seed(c.seed, i + 1))};
        row.report.extras.insert(row.report.extras.begin(), {"p", p_list[i]});
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<SweepRow> sweep_khintchine(const SweepConfig& c, ScalarField field, const std::vector<double>& p_list)
{
    std::vector<SweepRow> rows;
    for (std::size_t i = 0; i < p_list.size(); ++i) {
        SweepRow row{static_cast<int>(i), field, 1, c.n,
                     khintchine_empirical(p_list[i], c.n, c.trials, field, derive_seed(c.seed, i))};
        row.report.extras.insert(row.report.extras.begin(), {"p", p_list[i]});
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace polybohr
