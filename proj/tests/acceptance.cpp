// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

#include <nlohmann/json.hpp>

#include "polybohr/bohr.hpp"
#include "polybohr/sweeps.hpp"

using namespace polybohr;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what)
    {
        if (!ok) {
            pass = false;
            detail += (detail.empty() ? "" : "; ") + what;
        }
    }
};

std::string num(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

bool rel_close(double a, double b, double tol) { return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b)); }

Outcome spot_values()
{
    Outcome o;
    o.require(khintchine(2.0, ScalarField::complex).value == 1.0, "khintchine(2, C) != 1");
    o.require(std::abs(bh_mult_closed(2).value - 2.0 / std::sqrt(std::numbers::pi)) <= 1e-12, "closed(2) != 2/sqrt(pi)");
    o.require(std::abs(bh_mult_closed(2).value - 1.1283791670955126) <= 1e-12, "closed(2) spot value");
    o.require(std::abs(bh_pol_step(2, 1).value - 4.0) <= 1e-12, "pol_step(2, 1) != 4");
    return o;
}

Outcome formula_equivalence()
{
    Outcome o;
    double worst_mult = 0.0, worst_pol = 0.0;
    for (int m = 1; m <= 200; ++m) {
        const double a = bh_mult_recursive(m, ScalarField::complex, KSchedule::predecessor()).value;
        const double b = bh_mult_closed(m).value;
        worst_mult = std::max(worst_mult, std::abs(a - b) / b);
    }
    for (int m = 2; m <= 100; ++m) {
        const double a = bh_pol_step(m, 1).value;
        const double b = bh_pol_dfoos(m).value;
        worst_pol = std::max(worst_pol, std::abs(a - b) / b);
    }
    o.require(worst_mult <= 1e-12, "recursive vs closed rel err " + num(worst_mult));
    o.require(worst_pol <= 1e-12, "step(m,1) vs dfoos rel err " + num(worst_pol));
    o.detail = o.pass ? "max rel err " + num(std::max(worst_mult, worst_pol)) : o.detail;
    return o;
}

Outcome growth_claims()
{
    Outcome o;
    std::ifstream f(POLYBOHR_FIXTURE_DIR "/growth_golden.json");
    if (!f) return {false, "missing growth_golden.json"};
    const auto golden = nlohmann::json::parse(f);

    const double a = mult_growth_exponent();
    std::vector<double> ratio(10001, 0.0);
    int argmax = 2;
    for (int m = 2; m <= 10000; ++m) {
        ratio[m] = bh_mult_closed(m).value / std::pow(double(m), a);
        o.require(std::isfinite(ratio[m]), "non-finite ratio at m = " + std::to_string(m));
        if (ratio[m] > ratio[argmax]) argmax = m;
    }
    bool monotone = true;
    for (int m = argmax + 1; m <= 10000; ++m)
        if (ratio[m] > ratio[m - 1]) monotone = false;
    o.require(argmax <= 10, "closed ratio maximum at m = " + std::to_string(argmax));
    o.require(monotone, "closed ratio not monotone after its maximum");
    o.require(argmax == golden.at("closed_ratio_argmax").get<int>() &&
                  rel_close(ratio[argmax], golden.at("closed_ratio_max").get<double>(), 1e-12),
              "closed ratio maximum differs from golden");

    double prev = std::numeric_limits<double>::infinity();
    std::string values;
    for (int m : {100, 1000, 10000}) {
        const double v = bh_pol_best(m).bound.log_value / std::sqrt(m * std::log(double(m)));
        o.require(v < prev, "pol log ratio not decreasing at m = " + std::to_string(m));
        o.require(rel_close(v, golden.at("pol_log_ratio").at(std::to_string(m)).get<double>(), 1e-12),
                  "pol log ratio differs from golden at m = " + std::to_string(m));
        prev = v;
        values += (values.empty() ? "" : ", ") + num(v);
    }
    o.require(prev <= golden.at("pol_log_ratio_threshold").get<double>(), "pol log ratio above threshold at 1e4");
    if (o.pass) o.detail = "closed ratio max " + num(ratio[argmax]) + " at m=" + std::to_string(argmax) + "; pol log ratios " + values;
    return o;
}

Outcome inequality_suites()
{
    Outcome o;
    const SweepConfig c{4, 4, 1000, 2024, true};
    const std::vector<std::pair<std::string, std::function<std::vector<SweepRow>(const SweepConfig&)>>> suites{
        {"blei", sweep_blei}, {"minkowski", sweep_minkowski}, {"interp", sweep_interp}, {"dps", sweep_dps},
        {"pqs", sweep_pqs}};
    int real = 0, total = 0;
    for (const auto& [name, fn] : suites) {
        const auto rows = fn(c);
        int failures = 0;
        for (const auto& r : rows) {
            if (!r.report.holds) ++failures;
            if (r.field == ScalarField::real) ++real;
            ++total;
        }
        o.require(rows.size() == 1000 && failures == 0, name + ": " + std::to_string(failures) + " failures");
    }
    o.require(real > 0 && real < total, "instances not mixed real/complex");
    if (o.pass) o.detail = std::to_string(total) + " instances, 0 failures";
    return o;
}

Outcome monte_carlo_suites()
{
    Outcome o;
    auto tally = [&](const std::string& name, const std::vector<SweepRow>& rows) {
        int failures = 0;
        for (const auto& r : rows)
            if (!r.report.holds) ++failures;
        o.require(failures == 0, name + ": " + std::to_string(failures) + " violations");
    };
    tally("khintchine C", sweep_khintchine({1, 8, 100000, 51, false}, ScalarField::complex, {1.2, 4.0 / 3.0, 2.0}));
    tally("khintchine R", sweep_khintchine({1, 8, 100000, 52, false}, ScalarField::real, {1.9, 2.0}));
    tally("poly khintchine", sweep_poly_khintchine({3, 3, 100000, 53, false}, {1.0, 1.5, 2.0}));
    for (int m = 1; m <= 3; ++m) tally("harris m=" + std::to_string(m), sweep_harris({m, 3, 2000, 54u + m, false}));
    double worst = 0.0;
    for (int m : {2, 3}) {
        const auto rows = sweep_bh_ratio({m, 3, 1000, 60u + m, false}, 1e-3);
        tally("bh ratio m=" + std::to_string(m), rows);
        for (const auto& r : rows) worst = std::max(worst, r.report.lhs / bh_mult_closed(m).value);
    }
    if (o.pass) o.detail = "0 violations; max bh ratio / closed " + num(worst);
    return o;
}

Outcome exponent_dichotomy()
{
    Outcome o;
    const std::vector<int> ns{2, 4, 8, 16, 32};
    const auto adm = unboundedness_probe(MixedExponent{4.0 / 3.0, 4.0 / 3.0}, ns, 200, 606);
    const auto vio = unboundedness_probe(MixedExponent{1.0, 1.0}, ns, 200, 606);
    o.require(std::abs(adm.slope) < 0.1, "slope for (4/3,4/3) = " + num(adm.slope));
    o.require(vio.slope >= 0.35 && vio.slope <= 0.65, "slope for (1,1) = " + num(vio.slope));
    if (o.pass) o.detail = "slopes " + num(adm.slope) + ", " + num(vio.slope);
    return o;
}

Outcome bohr_pipeline()
{
    Outcome o;
    double prev = 0.0;
    std::string values;
    for (int n : {100, 1000, 10000, 100000, 1000000}) {
        const auto rec = bohr_lower_certified(n);
        const auto replay = series_value(rec.r_lower, n, rec.M);
        o.require(replay.total() <= 0.5, "replay fails at n = " + std::to_string(n));
        o.require(rec.b_lower > prev, "b_lower not increasing at n = " + std::to_string(n));
        o.require(rec.r_lower <= 2.0 * std::sqrt(std::log(double(n)) / n), "envelope exceeded at n = " + std::to_string(n));
        prev = rec.b_lower;
        values += (values.empty() ? "" : ", ") + num(rec.b_lower);
    }
    if (o.pass) o.detail = "b_lower " + values;
    return o;
}

Outcome small_case_oracles()
{
    Outcome o;
    ComplexTensor a(2, 2);
    a({0, 0}) = 1.0;
    a({0, 1}) = 1.0;
    a({1, 0}) = 1.0;
    a({1, 1}) = -1.0;
    const double est = sup_norm_multilinear(MultilinearForm(a)).value;
    // Exhaustive phase grid with step 1e-3; the phases of z_0 and w_0 are fixed to 1.
    const int N = static_cast<int>(std::ceil(2.0 * std::numbers::pi / 1e-3));
    double grid = 0.0;
    for (int s = 0; s < N; ++s) {
        const cplx es = std::polar(1.0, 2.0 * std::numbers::pi * s / N);
        for (int t = 0; t < N; ++t) {
            const cplx et = std::polar(1.0, 2.0 * std::numbers::pi * t / N);
            grid = std::max(grid, std::abs(1.0 + et + es - es * et));
        }
    }
    o.require(std::abs(est - 2.0 * std::sqrt(2.0)) <= 1e-6, "estimate " + num(est) + " != 2 sqrt 2");
    o.require(std::abs(est - grid) <= 1e-6, "estimate vs grid " + num(std::abs(est - grid)));

    const auto P = random_polynomial(3, 3, Distribution::gaussian, 808);
    const auto L = symmetrize(P);
    Rng rng(809);
    double worst = 0.0;
    for (int t = 0; t < 1000; ++t) {
        Eigen::VectorXcd z(3);
        for (int i = 0; i < 3; ++i) z[i] = rng.complex_normal();
        const cplx p = P.evaluate(z);
        worst = std::max(worst, std::abs(p - L.evaluate({z, z, z})) / std::max(1.0, std::abs(p)));
    }
    o.require(worst <= 1e-12, "diagonal identity error " + num(worst));
    if (o.pass) o.detail = "grid gap " + num(std::abs(est - grid)) + ", diagonal error " + num(worst);
    return o;
}

std::string run_cli(const std::string& env, const std::string& args)
{
    const auto out = std::filesystem::temp_directory_path() / ("polybohr_acceptance_" + std::to_string(::getpid()));
    const std::string cmd = env + " '" POLYBOHR_CLI "' " + args + " > '" + out.string() + "' 2>/dev/null";
    const int status = std::system(cmd.c_str());
    std::ifstream f(out, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    std::filesystem::remove(out);
    return std::to_string(WIFEXITED(status) ? WEXITSTATUS(status) : -1) + "\n" + ss.str();
}

Outcome determinism()
{
    Outcome o;
    const std::vector<std::string> commands{
        "verify blei --m 3 --n 3 --trials 200 --seed 7",
        "verify bh-ratio --m 2 --n 3 --trials 50 --seed 8",
        "verify khintchine --trials 20000 --seed 9 --format json",
        "verify harris --m 3 --trials 500 --seed 10",
        "bohr table --n 10 100 1000 --upper --upper-trials 4 --seed 11",
        "constants table --m-max 40 --seed 12 --format json",
    };
    for (const auto& cmd : commands) {
        const auto a = run_cli("POLYBOHR_THREADS=1", cmd);
        const auto b = run_cli("POLYBOHR_THREADS=1", cmd);
        const auto c = run_cli("POLYBOHR_THREADS=4", cmd);
        o.require(a.rfind("0\n", 0) == 0, "nonzero exit for: " + cmd);
        o.require(a == b && a == c, "output differs for: " + cmd);
    }
    if (o.pass) o.detail = std::to_string(commands.size()) + " commands byte-identical across runs and 1/4 threads";
    return o;
}

} // namespace

int main()
{
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"constant spot values", spot_values},
        {"formula equivalence", formula_equivalence},
        {"growth claims", growth_claims},
        {"inequality property suites", inequality_suites},
        {"Monte-Carlo inequality suites", monte_carlo_suites},
        {"exponent dichotomy probe", exponent_dichotomy},
        {"Bohr pipeline", bohr_pipeline},
        {"small-case oracle equivalence", small_case_oracles},
        {"determinism", determinism},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (!o.pass) ++failed;
        std::printf("%s %zu %s (%.2f s)%s%s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), secs,
                    o.detail.empty() ? "" : ": ", o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
