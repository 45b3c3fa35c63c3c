#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <numeric>
#include <set>

#include <nlohmann/json.hpp>

#include "polybohr/witness.hpp"

using namespace polybohr;

namespace {

ComplexTensor matrix(std::initializer_list<std::initializer_list<double>> rows)
{
    const int n = static_cast<int>(rows.size());
    ComplexTensor a(2, n);
    int i = 0;
    for (const auto& r : rows) {
        int j = 0;
        for (double v : r) a({i, j++}) = v;
        ++i;
    }
    return a;
}

// Bilinear 2x2 sup over the torus: the phase of z_0 and w_0 can be fixed to 1,
// leaving two phases scanned on a grid of the given step.
double bilinear_grid_oracle(const ComplexTensor& a, double step)
{
    const int N = static_cast<int>(std::ceil(2.0 * std::numbers::pi / step));
    std::vector<cplx> e(N);
    for (int t = 0; t < N; ++t) e[t] = std::polar(1.0, 2.0 * std::numbers::pi * t / N);
    double best = 0.0;
    for (int s = 0; s < N; ++s)
        for (int t = 0; t < N; ++t) {
            const cplx v = a({0, 0}) + a({0, 1}) * e[t] + a({1, 0}) * e[s] + a({1, 1}) * e[s] * e[t];
            best = std::max(best, std::abs(v));
        }
    return best;
}

std::size_t brute_force_orbit(const MultiIndex& idx)
{
    std::set<MultiIndex> seen;
    std::vector<int> perm(idx.size());
    std::iota(perm.begin(), perm.end(), 0);
    do {
        MultiIndex p(idx.size());
        for (std::size_t i = 0; i < idx.size(); ++i) p[i] = idx[perm[i]];
        seen.insert(p);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return seen.size();
}

Eigen::VectorXcd torus_point(Rng& rng, int n)
{
    Eigen::VectorXcd z(n);
    for (int i = 0; i < n; ++i) z[i] = rng.unimodular();
    return z;
}

} // namespace

TEST_CASE("multilinear sup norm")
{
    ComplexTensor single(3, 2);
    single({1, 0, 1}) = cplx(3.0, -4.0);
    CHECK(sup_norm_multilinear(MultilinearForm(single)).value == doctest::Approx(5.0).epsilon(1e-14));

    // Rank one: the sup separates into the product of l1 norms.
    Rng rng(3);
    Eigen::VectorXcd u(4), v(4);
    for (int i = 0; i < 4; ++i) {
        u[i] = rng.complex_normal();
        v[i] = rng.complex_normal();
    }
    ComplexTensor r1(2, 4);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) r1({i, j}) = u[i] * v[j];
    const double separable = u.cwiseAbs().sum() * v.cwiseAbs().sum();
    CHECK(std::abs(sup_norm_multilinear(MultilinearForm(r1)).value - separable) <= 1e-10 * separable);

    const auto h = matrix({{1, 1}, {1, -1}});
    const double est = sup_norm_multilinear(MultilinearForm(h)).value;
    CHECK(est == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-12));
    CHECK(std::abs(est - bilinear_grid_oracle(h, 1e-3)) <= 1e-6);

    const auto zero = sup_norm_multilinear(MultilinearForm(ComplexTensor(2, 3)));
    CHECK(zero.value == 0.0);
    CHECK(zero.converged);
}

TEST_CASE("multilinear sup norm invariants")
{
    for (int t = 0; t < 30; ++t) {
        const auto L = random_form(2 + t % 3, 2 + t % 3, Distribution::gaussian, 50 + t);
        AscentOptions few;
        few.restarts = 4;
        few.seed = t;
        AscentOptions more = few;
        more.restarts = 16;
        std::vector<double> last(16, 0.0);
        bool monotone = true;
        more.on_cycle = [&](int r, int, double value) {
            if (value < last[r] * (1.0 - 1e-12)) monotone = false;
            last[r] = value;
        };
        const double a = sup_norm_multilinear(L, few).value;
        const double b = sup_norm_multilinear(L, more).value;
        CHECK(monotone);
        CHECK(b >= a);
        CHECK(b <= L.coefficient_l1());
    }
}

TEST_CASE("slot coefficients")
{
    const auto L = random_form(3, 3, Distribution::gaussian, 9);
    Rng rng(10);
    std::vector<Eigen::VectorXcd> z{torus_point(rng, 3), torus_point(rng, 3), torus_point(rng, 3)};
    cplx direct = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) direct += L.coeffs()({i, j, k}) * z[0][i] * z[1][j] * z[2][k];
    for (int slot = 0; slot < 3; ++slot) {
        const cplx via = (L.slot_coefficients(z, slot).array() * z[slot].array()).sum();
        CHECK(std::abs(via - direct) <= 1e-12 * std::abs(direct));
    }
}

TEST_CASE("polynomial sup norm")
{
    for (int m = 1; m <= 5; ++m) {
        std::vector<int> alpha(3, 0);
        alpha[1] = m;
        const HomogeneousPolynomial P(m, 3, {{alpha, cplx(1.0, 0.0)}});
        CHECK(sup_norm_polynomial(P).value == doctest::Approx(1.0).epsilon(1e-14));
    }

    const HomogeneousPolynomial sq(2, 2, {{{2, 0}, 1.0}, {{1, 1}, 2.0}, {{0, 2}, 1.0}});
    CHECK(std::abs(sup_norm_polynomial(sq).value - 4.0) <= 1e-9);

    // Grid oracle on T^2 with the first phase fixed.
    const auto P = random_polynomial(3, 2, Distribution::gaussian, 77);
    double grid = 0.0;
    for (int t = 0; t < 200000; ++t) {
        Eigen::VectorXcd z(2);
        z << 1.0, std::polar(1.0, 2.0 * std::numbers::pi * t / 200000);
        grid = std::max(grid, std::abs(P.evaluate(z)));
    }
    const double est = sup_norm_polynomial(P).value;
    CHECK(est >= grid * (1.0 - 1e-9));
    CHECK(est <= grid * (1.0 + 1e-6));

    CHECK(sup_norm_polynomial(HomogeneousPolynomial(2, 2, {})).value == 0.0);
    CHECK_THROWS_AS(HomogeneousPolynomial(2, 1, {{{1}, 1.0}, {{2}, -1.0}}), RejectedInput);
}

TEST_CASE("equivalence classes")
{
    CHECK(equivalence_class({2, 0, 2, 1}).representative == MultiIndex{0, 1, 2, 2});
    CHECK(equivalence_class({2, 0, 2, 1}).cardinality == 12);
    for (int m = 1; m <= 6; ++m)
        for_each_sorted_index(m, 3, [&](const MultiIndex& idx) {
            MultiIndex shuffled = idx;
            std::reverse(shuffled.begin(), shuffled.end());
            CHECK(equivalence_class(shuffled).cardinality == brute_force_orbit(idx));
        });

    std::size_t count = 0;
    for_each_sorted_index(3, 4, [&](const MultiIndex& idx) {
        CHECK(std::is_sorted(idx.begin(), idx.end()));
        ++count;
    });
    CHECK(count == 20);
}

TEST_CASE("symmetrization")
{
    const auto L12 = symmetrize(HomogeneousPolynomial(2, 2, {{{1, 1}, 1.0}}));
    CHECK(L12.coeffs()({0, 1}) == cplx(0.5, 0.0));
    CHECK(L12.coeffs()({1, 0}) == cplx(0.5, 0.0));
    CHECK(L12.coeffs()({0, 0}) == cplx(0.0, 0.0));

    const auto L11 = symmetrize(HomogeneousPolynomial(2, 2, {{{2, 0}, 1.0}}));
    CHECK(L11.coeffs()({0, 0}) == cplx(1.0, 0.0));

    const auto L112 = symmetrize(HomogeneousPolynomial(3, 2, {{{2, 1}, 1.0}}));
    for (const MultiIndex& idx : {MultiIndex{0, 0, 1}, MultiIndex{0, 1, 0}, MultiIndex{1, 0, 0}})
        CHECK(L112.coeffs()(idx).real() == doctest::Approx(1.0 / 3.0).epsilon(1e-15));

    Rng rng(12);
    for (int t = 0; t < 40; ++t) {
        const int m = 1 + t % 4, n = 1 + (t / 4) % 4;
        const auto P = random_polynomial(m, n, Distribution::gaussian, 300 + t);
        const auto L = symmetrize(P);
        for (std::size_t lin = 0; lin < L.coeffs().size(); ++lin) {
            MultiIndex idx = L.coeffs().multi_index(lin);
            const cplx v = L.coeffs()(idx);
            std::sort(idx.begin(), idx.end());
            do {
                CHECK(L.coeffs()(idx) == v);
            } while (std::next_permutation(idx.begin(), idx.end()));
        }
        for (int s = 0; s < 25; ++s) {
            const Eigen::VectorXcd z = torus_point(rng, n);
            const cplx p = P.evaluate(z);
            const cplx l = L.evaluate(std::vector<Eigen::VectorXcd>(m, z));
            CHECK(std::abs(p - l) <= 1e-12 * std::max(1.0, P.coefficient_l1()));
        }
    }
}

TEST_CASE("BH ratio")
{
    ComplexTensor single(2, 3);
    single({2, 1}) = cplx(0.0, 2.0);
    CHECK(bh_ratio(MultilinearForm(single)).ratio == doctest::Approx(1.0).epsilon(1e-14));

    const auto r = bh_ratio(MultilinearForm(matrix({{1, 1}, {1, -1}})));
    CHECK(r.lhs == doctest::Approx(std::pow(4.0, 0.75)).epsilon(1e-14));
    CHECK(std::abs(r.ratio - 1.0) <= 1e-6);

    const auto z = bh_ratio(MultilinearForm(ComplexTensor(2, 2)));
    CHECK_FALSE(z.defined);
    CHECK(std::isnan(z.ratio));

    const double bound = bh_mult_closed(2).value * (1.0 + 1e-3);
    double worst = 0.0;
    for (int t = 0; t < 1000; ++t) {
        AscentOptions o;
        o.seed = t;
        worst = std::max(worst, bh_ratio(random_form(2, 2, Distribution::gaussian, 5000 + t), std::nullopt, o).ratio);
    }
    CHECK(worst <= bound);
}

TEST_CASE("Harris")
{
    for (int m = 1; m <= 6; ++m) {
        CHECK(harris_factor({m}) == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(harris_factor(std::vector<int>(m, 1)) ==
              doctest::Approx(std::pow(double(m), m) / std::tgamma(m + 1.0)).epsilon(1e-13));
    }
    const auto P = random_polynomial(3, 3, Distribution::gaussian, 123);
    const auto rep = harris_check(P, {2, 1}, 10000, 4);
    CHECK(rep.holds);
    CHECK(rep.extra("max_ratio") <= 1.0 + 1e-6);
    CHECK(rep.extra("factor") == doctest::Approx(harris_factor({2, 1})));
    CHECK_THROWS_AS(harris_check(P, {2, 2}, 10, 1), RejectedInput);
    CHECK_THROWS_AS(harris_check(P, {3, 0}, 10, 1), RejectedInput);
}

TEST_CASE("Khintchine Monte-Carlo")
{
    const auto p2 = khintchine_empirical(2.0, 6, 100000, ScalarField::complex, 1);
    CHECK(p2.holds);
    CHECK(std::abs(p2.extra("ratio") - 1.0) < 0.02);
    CHECK(p2.extra("inconclusive") == 0.0);

    Eigen::VectorXcd e1 = Eigen::VectorXcd::Zero(5);
    e1[0] = cplx(0.0, 1.5);
    for (double p : {1.0, 1.3, 2.0}) {
        const auto r = khintchine_empirical_for(e1, p, 2000, ScalarField::complex, 2);
        CHECK(r.holds);
        CHECK(r.extra("estimate") == doctest::Approx(1.5).epsilon(1e-12));
    }

    CHECK(khintchine_empirical(4.0 / 3.0, 8, 100000, ScalarField::complex, 3).holds);
    const auto real = khintchine_empirical(1.9, 10, 1024, ScalarField::real, 4);
    CHECK(real.holds);
    CHECK(real.extra("exact") == 1.0);
    CHECK(khintchine_empirical(2.0, 6, 10, ScalarField::complex, 5).extra("inconclusive") == 1.0);
    CHECK_THROWS_AS(khintchine_empirical(1.5, 4, 100, ScalarField::real, 1), DomainError);
}

TEST_CASE("polynomial Khintchine Monte-Carlo")
{
    const auto P = random_polynomial(3, 3, Distribution::gaussian, 8);
    const auto p2 = poly_khintchine_check(P, 2.0, 100000, 9);
    CHECK(p2.holds);
    CHECK(std::abs(p2.extra("ratio") - 1.0) < 0.02);

    const HomogeneousPolynomial mono(4, 2, {{{4, 0}, 1.0}});
    for (double p : {1.0, 1.5}) {
        const auto r = poly_khintchine_check(mono, p, 1000, 10);
        CHECK(r.lhs == doctest::Approx(1.0));
        CHECK(r.rhs == doctest::Approx(std::pow(2.0 / p, 2.0)).epsilon(1e-12));
        CHECK(r.holds);
    }
    CHECK(poly_khintchine_check(random_polynomial(2, 4, Distribution::gaussian, 11), 1.0, 100000, 12).holds);
    CHECK_THROWS_AS(poly_khintchine_check(P, 2.5, 10, 1), RejectedInput);
}

TEST_CASE("unboundedness probe")
{
    const std::vector<int> ns{2, 4, 8, 16};
    const auto admissible = unboundedness_probe(MixedExponent{4.0 / 3.0, 4.0 / 3.0}, ns, 40, 6);
    const auto violating = unboundedness_probe(MixedExponent{1.0, 1.0}, ns, 40, 6);
    REQUIRE(admissible.max_ratio.size() == ns.size());
    // The same draws are used, and for +-1 coefficients ||a||_1 / ||a||_{4/3} = sqrt(n).
    for (std::size_t i = 0; i < ns.size(); ++i)
        CHECK(violating.max_ratio[i] == doctest::Approx(admissible.max_ratio[i] * std::sqrt(double(ns[i]))));
    CHECK(violating.slope - admissible.slope == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(violating.slope > 0.2);
    for (double r : admissible.max_ratio) CHECK(r <= bh_mult_closed(2).value);

    const auto again = unboundedness_probe(MixedExponent{1.0, 1.0}, ns, 40, 6);
    CHECK(again.max_ratio == violating.max_ratio);

    const nlohmann::json j = violating;
    CHECK(j.at("slope").get<double>() == violating.slope);
}

TEST_CASE("random draws")
{
    const auto a = random_form(3, 3, Distribution::gaussian, 99);
    const auto b = random_form(3, 3, Distribution::gaussian, 99);
    CHECK((a.coeffs().data() == b.coeffs().data()));
    const auto rad = random_form(3, 3, Distribution::rademacher, 1);
    const auto st = random_form(3, 3, Distribution::steinhaus, 1);
    for (std::size_t i = 0; i < rad.coeffs().size(); ++i) {
        CHECK(std::abs(rad.coeffs().data()[i]) == 1.0);
        CHECK(rad.coeffs().data()[i].imag() == 0.0);
        CHECK(std::abs(st.coeffs().data()[i]) == doctest::Approx(1.0).epsilon(1e-15));
    }
    CHECK(parse_distribution("steinhaus") == Distribution::steinhaus);
    CHECK_THROWS_AS(parse_distribution("cauchy"), RejectedInput);

    const auto P1 = random_polynomial(3, 4, Distribution::rademacher, 5);
    const auto P2 = random_polynomial(3, 4, Distribution::rademacher, 5);
    REQUIRE(P1.terms().size() == 20);
    for (std::size_t i = 0; i < P1.terms().size(); ++i) CHECK(P1.terms()[i].coeff == P2.terms()[i].coeff);
}

TEST_CASE("golden gaussian draw")
{
    std::ifstream f(POLYBOHR_FIXTURE_DIR "/golden_draws.json");
    REQUIRE(f);
    const auto j = nlohmann::json::parse(f);
    const auto seed = j.at("seed").get<std::uint64_t>();
    const auto L = random_form(j.at("m").get<int>(), j.at("n").get<int>(), Distribution::gaussian, seed);
    const auto& entries = j.at("entries");
    REQUIRE(entries.size() == L.coeffs().size());
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const cplx want(entries[i][0].get<double>(), entries[i][1].get<double>());
        CHECK(std::abs(L.coeffs().data()[i] - want) <= 1e-15 * std::abs(want));
    }
    Rng rng(seed);
    for (const auto& v : j.at("rng_u64")) CHECK(rng.next_u64() == v.get<std::uint64_t>());
}
