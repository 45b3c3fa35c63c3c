#include "polybohr/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <variant>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "polybohr/bohr.hpp"
#include "polybohr/bound_table.hpp"
#include "polybohr/sweeps.hpp"

namespace polybohr::cli {

namespace {

using ojson = nlohmann::ordered_json;
using Cell = std::variant<std::int64_t, std::uint64_t, double, std::string, bool>;

std::string fmt17(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

std::string csv_cell(const Cell& c)
{
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>)
                return fmt17(v);
            else if constexpr (std::is_same_v<T, std::string>)
                return v;
            else if constexpr (std::is_same_v<T, bool>)
                return v ? "true" : "false";
            else
                return std::to_string(v);
        },
        c);
}

ojson json_cell(const Cell& c)
{
    return std::visit([](const auto& v) { return ojson(v); }, c);
}

std::string render_csv_body(const Table& t)
{
    std::ostringstream out;
    for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << t.columns[i];
    out << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_cell(row[i]);
        out << '\n';
    }
    return out.str();
}

ojson table_json(const Table& t)
{
    ojson rows = ojson::array();
    for (const auto& row : t.rows) {
        ojson obj = ojson::object();
        for (std::size_t i = 0; i < row.size(); ++i) obj[t.columns[i]] = json_cell(row[i]);
        rows.push_back(std::move(obj));
    }
    return rows;
}

/// Options shared by every leaf command.
struct Common {
    std::uint64_t seed = 0;
    std::string format = "csv";
    std::string out;
};

void add_common(CLI::App* sub, Common& c)
{
    sub->add_option("--seed", c.seed, "Root seed")->capture_default_str();
    sub->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    sub->add_option("--out", c.out, "Output file (default: stdout, or $POLYBOHR_OUTPUT_DIR/<command>.<format>)");
}

/// Every option of the invoked command with its effective value.
ojson config_of(const CLI::App* sub)
{
    ojson cfg = ojson::object();
    for (const CLI::Option* opt : sub->get_options()) {
        const auto& names = opt->get_lnames();
        if (names.empty() || names[0] == "help" || names[0] == "out") continue;
        const std::string& name = names[0];
        if (opt->get_expected_max() == 0) {
            cfg[name] = opt->count() > 0;
        } else if (opt->count() == 0) {
            cfg[name] = opt->get_default_str();
        } else if (opt->get_items_expected_max() > 1) {
            cfg[name] = opt->results();
        } else {
            cfg[name] = opt->results().back();
        }
    }
    return cfg;
}

/// Writes the rendered document to --out, $POLYBOHR_OUTPUT_DIR, or stdout.
void emit(const std::string& doc, const Common& c, const std::string& stem)
{
    std::filesystem::path path;
    if (!c.out.empty()) {
        path = c.out;
    } else if (const char* dir = std::getenv("POLYBOHR_OUTPUT_DIR"); dir && *dir) {
        path = std::filesystem::path(dir) / (stem + "." + c.format);
    }
    if (path.empty()) {
        std::cout << doc;
        std::cout.flush();
        return;
    }
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream f(path, std::ios::binary);
    if (!f) throw RejectedInput("cannot open output file " + path.string());
    f << doc;
}

ojson meta_of(const Common& c, const std::string& command, const CLI::App* sub)
{
    ojson cfg = config_of(sub);
    cfg["command"] = command;
    return ojson{{"seed", c.seed}, {"version", version}, {"config", cfg}};
}

/// CSV gets the metadata as a leading comment line; JSON nests it under "meta".
std::string render(const Table& t, const ojson& meta, const Common& c, const std::string& csv_body = {})
{
    if (c.format == "json") {
        ojson doc{{"meta", meta}, {"rows", table_json(t)}};
        return doc.dump(2) + "\n";
    }
    return "# " + meta.dump() + "\n" + (csv_body.empty() ? render_csv_body(t) : csv_body);
}

std::string details_of(const CheckReport& r)
{
    std::string s;
    for (const auto& [k, v] : r.extras) s += (s.empty() ? "" : ";") + k + "=" + fmt17(v);
    return s;
}

Table sweep_table(const std::vector<SweepRow>& rows)
{
    Table t{{"instance", "field", "m", "n", "lhs", "rhs", "holds", "slack", "details"}, {}};
    for (const auto& r : rows) {
        t.rows.push_back({std::int64_t{r.instance}, to_string(r.field), std::int64_t{r.m}, std::int64_t{r.n},
                          r.report.lhs, r.report.rhs, r.report.holds, r.report.slack, details_of(r.report)});
    }
    return t;
}

// ---------------------------------------------------------------------------
// constants
// ---------------------------------------------------------------------------

struct ConstantsTableArgs {
    int m_max = 0;
    std::string field = "C";
    std::string cache;
};

Table constants_table(const ConstantsTableArgs& a)
{
    POLYBOHR_REQUIRE(a.m_max >= 1, RejectedInput, "--m-max must be >= 1");
    const ScalarField field = parse_field(a.field);
    BoundTable cache;
    if (!a.cache.empty()) cache.load(a.cache);
    const auto cached = [&](BoundKind kind, int m, const std::string& strategy, const std::function<BoundEntry()>& f) {
        return cache.get_or_compute(BoundKey{field, kind, m, strategy}, f);
    };

    Table t{{"m", "closed", "dfoos", "pol_best", "k_star"}, {}};
    t.rows.resize(static_cast<std::size_t>(a.m_max));
    const double nan = std::numeric_limits<double>::quiet_NaN();
    parallel_for(static_cast<std::size_t>(a.m_max), [&](std::size_t i) {
        const int m = static_cast<int>(i) + 1;
        if (field == ScalarField::real) {
            const auto mult = cached(BoundKind::mult, m, "real_recursive",
                                     [&] { return BoundEntry{bh_mult_real(m).log_value, std::nullopt}; });
            t.rows[i] = {std::int64_t{m}, BoundValue::from_log(mult.log_value).value, nan, nan, std::int64_t{0}};
            return;
        }
        const auto mult =
            cached(BoundKind::mult, m, "closed", [&] { return BoundEntry{bh_mult_closed(m).log_value, std::nullopt}; });
        double dfoos = 1.0, pol = 1.0;
        std::int64_t k_star = 0;
        if (m >= 2) {
            dfoos = BoundValue::from_log(
                        cached(BoundKind::pol, m, "dfoos",
                               [&] { return BoundEntry{bh_pol_dfoos(m).log_value, std::nullopt}; })
                            .log_value)
                        .value;
            const auto best = cached(BoundKind::pol, m, "best", [&] {
                const auto b = bh_pol_best(m);
                return BoundEntry{b.bound.log_value, b.k_star};
            });
            pol = BoundValue::from_log(best.log_value).value;
            k_star = best.k.value_or(0);
        }
        t.rows[i] = {std::int64_t{m}, BoundValue::from_log(mult.log_value).value, dfoos, pol, k_star};
    });
    if (!a.cache.empty()) cache.save(a.cache);
    return t;
}

Table constants_growth(int m_max)
{
    POLYBOHR_REQUIRE(m_max >= 1, RejectedInput, "--m-max must be >= 1");
    Table t{{"m", "closed", "recursive", "bh1931", "davie_kaijser", "queffelec", "pol_best", "k_star", "pol_analytic",
             "dfoos", "polarization", "closed_ratio", "closed_diff", "pol_log_ratio"},
            {}};
    for (const auto& r : growth_report(m_max)) {
        t.rows.push_back({std::int64_t{r.m}, r.closed, r.recursive, r.bh1931, r.davie_kaijser, r.queffelec, r.pol_best,
                          std::int64_t{r.k_star}, r.pol_analytic, r.dfoos, r.polarization, r.closed_ratio,
                          r.closed_diff, r.pol_log_ratio});
    }
    return t;
}

Table bohr_records_table(const std::vector<BohrRecord>& records)
{
    Table t{{"n", "r_lower", "b_lower", "r_upper_emp", "M", "tail_bound", "classical_lower", "classical_upper"}, {}};
    for (const auto& r : records) {
        t.rows.push_back({std::int64_t{r.n}, r.r_lower, r.b_lower, r.r_upper_emp, std::int64_t{r.M}, r.tail_bound,
                          r.classical_lower, r.classical_upper});
    }
    return t;
}

} // namespace

int run(const std::vector<std::string>& argv)
{
    CLI::App app{"Bohnenblust-Hille constants, inequality checks and Bohr radius bounds", "polybohr"};
    app.set_version_flag("--version", version);
    app.require_subcommand(1);

    Common common;
    // Filled by whichever leaf command runs.
    std::function<int()> action;

    // constants
    auto* constants = app.add_subcommand("constants", "Bound tables");
    constants->require_subcommand(1);

    ConstantsTableArgs ct;
    auto* c_table = constants->add_subcommand("table", "Multilinear and polynomial bounds for m = 1..m-max");
    c_table->add_option("--m-max", ct.m_max, "Largest degree")->required()->check(CLI::PositiveNumber);
    c_table->add_option("--field", ct.field, "Scalar field")->check(CLI::IsMember({"C", "R"}))->capture_default_str();
    c_table->add_option("--cache", ct.cache, "Bound-table cache file (JSON)");
    add_common(c_table, common);
    c_table->callback([&] {
        action = [&] {
            emit(render(constants_table(ct), meta_of(common, "constants table", c_table), common), common,
                 "constants_table");
            return 0;
        };
    });

    int growth_m_max = 0;
    auto* c_growth = constants->add_subcommand("growth", "Growth diagnostics for m = 1..m-max");
    c_growth->add_option("--m-max", growth_m_max, "Largest degree")->required()->check(CLI::PositiveNumber);
    add_common(c_growth, common);
    c_growth->callback([&] {
        action = [&] {
            emit(render(constants_growth(growth_m_max), meta_of(common, "constants growth", c_growth), common), common,
                 "constants_growth");
            return 0;
        };
    });

    // verify
    auto* verify = app.add_subcommand("verify", "Randomized inequality checks");
    verify->require_subcommand(1);
    SweepConfig sweep;
    std::vector<double> p_list;
    std::string field_name = "C";
    double margin = 1e-3;

    const auto add_sweep_options = [&](CLI::App* sub, int m, int n, int trials) {
        sweep.m = m;
        sweep.n = n;
        sweep.trials = trials;
        sub->add_option("--m", sweep.m, "Order or degree")->check(CLI::PositiveNumber)->default_val(m);
        sub->add_option("--n", sweep.n, "Dimension")->check(CLI::PositiveNumber)->default_val(n);
        sub->add_option("--trials", sweep.trials, "Instances or Monte-Carlo samples")
            ->check(CLI::PositiveNumber)
            ->default_val(trials);
        add_common(sub, common);
    };
    const auto sweep_command = [&](CLI::App* sub, const std::string& name, std::function<std::vector<SweepRow>()> f) {
        sub->callback([&, sub, name, f] {
            action = [&, sub, name, f] {
                sweep.seed = common.seed;
                const auto rows = f();
                emit(render(sweep_table(rows), meta_of(common, "verify " + name, sub), common), common,
                     "verify_" + name);
                return all_hold(rows) ? 0 : 1;
            };
        });
    };
    const auto tensor_kind = [&](const std::string& name, const std::string& help,
                                 std::vector<SweepRow> (*f)(const SweepConfig&)) {
        auto* sub = verify->add_subcommand(name, help);
        add_sweep_options(sub, 3, 3, 100);
        sub->add_flag("--vary-shape", sweep.vary_shape, "Draw m and n per instance up to the given values");
        sweep_command(sub, name, [&, f] { return f(sweep); });
    };
    tensor_kind("blei", "Generalized Blei inequality", sweep_blei);
    tensor_kind("minkowski", "Minkowski embedding", sweep_minkowski);
    tensor_kind("pqs", "Blei inequality with exponents p, q, s", sweep_pqs);
    tensor_kind("dps", "Mixed row/column Blei inequality (order 2)", sweep_dps);
    tensor_kind("interp", "Interpolation Hoelder inequality", sweep_interp);

    auto* v_bh = verify->add_subcommand("bh-ratio", "Coefficient norm over estimated sup norm vs the closed bound");
    add_sweep_options(v_bh, 2, 3, 100);
    v_bh->add_flag("--vary-shape", sweep.vary_shape, "Draw n per instance up to the given value");
    v_bh->add_option("--margin", margin, "Relative margin on the bound")->capture_default_str();
    sweep_command(v_bh, "bh-ratio", [&] { return sweep_bh_ratio(sweep, margin); });

    auto* v_harris = verify->add_subcommand("harris", "Harris bound for every partition of m");
    add_sweep_options(v_harris, 3, 3, 2000);
    sweep_command(v_harris, "harris", [&] { return sweep_harris(sweep); });

    auto* v_pk = verify->add_subcommand("poly-khintchine", "Khintchine inequality for polynomials");
    add_sweep_options(v_pk, 3, 3, 100000);
    v_pk->add_option("--p", p_list, "Exponents in [1, 2]")->default_str("1 1.5 2");
    sweep_command(v_pk, "poly-khintchine", [&] {
        return sweep_poly_khintchine(sweep, p_list.empty() ? std::vector<double>{1.0, 1.5, 2.0} : p_list);
    });

    auto* v_kh = verify->add_subcommand("khintchine", "Khintchine inequality, Steinhaus (C) or Rademacher (R)");
    add_sweep_options(v_kh, 1, 8, 100000);
    v_kh->add_option("--field", field_name, "Scalar field")->check(CLI::IsMember({"C", "R"}))->capture_default_str();
    v_kh->add_option("--p", p_list, "Exponents (default: 1.2 4/3 2 for C, 1.9 2 for R)");
    sweep_command(v_kh, "khintchine", [&] {
        const ScalarField f = parse_field(field_name);
        std::vector<double> ps = p_list;
        if (ps.empty())
            ps = f == ScalarField::complex ? std::vector<double>{1.2, 4.0 / 3.0, 2.0} : std::vector<double>{1.9, 2.0};
        return sweep_khintchine(sweep, f, ps);
    });

    std::vector<double> probe_q;
    std::vector<int> probe_n{2, 4, 8, 16, 32};
    int probe_trials = 200;
    int probe_restarts = 32;
    auto* v_probe = verify->add_subcommand("probe", "Growth of the BH ratio in n for a given exponent");
    v_probe->add_option("--q", probe_q, "Mixed exponent (q_1 ... q_m)")->default_str("1.3333333333333333 1.3333333333333333");
    v_probe->add_option("--n-list", probe_n, "Dimensions")->capture_default_str();
    v_probe->add_option("--trials", probe_trials, "Draws per dimension")->check(CLI::PositiveNumber)->capture_default_str();
    v_probe->add_option("--restarts", probe_restarts, "Ascent restarts")->check(CLI::PositiveNumber)->capture_default_str();
    add_common(v_probe, common);
    v_probe->callback([&] {
        action = [&] {
            const MixedExponent q = probe_q.empty() ? MixedExponent{4.0 / 3.0, 4.0 / 3.0} : MixedExponent(probe_q);
            AscentOptions opts;
            opts.restarts = probe_restarts;
            const GrowthReport g = unboundedness_probe(q, probe_n, probe_trials, common.seed, opts);
            Table t{{"n", "max_ratio", "slope", "intercept"}, {}};
            for (std::size_t i = 0; i < g.n.size(); ++i)
                t.rows.push_back({std::int64_t{g.n[i]}, g.max_ratio[i], g.slope, g.intercept});
            emit(render(t, meta_of(common, "verify probe", v_probe), common), common, "verify_probe");
            return 0;
        };
    });

    // bohr
    auto* bohr = app.add_subcommand("bohr", "Bohr radius bounds");
    bohr->require_subcommand(1);

    std::vector<int> bohr_n;
    BohrTableConfig bcfg;
    auto* b_table = bohr->add_subcommand("table", "Certified lower bounds on K_n");
    b_table->add_option("--n", bohr_n, "Dimensions (each >= 2)")->required();
    b_table->add_option("--tol", bcfg.tol, "Relative bisection tolerance")->capture_default_str();
    b_table->add_option("--m-cap", bcfg.m_cap, "Truncation cap")->check(CLI::PositiveNumber)->capture_default_str();
    b_table->add_flag("--upper", bcfg.with_upper, "Add the empirical upper estimate with m = round(log n)");
    b_table->add_option("--upper-trials", bcfg.upper_trials, "Sign patterns for the upper estimate")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    add_common(b_table, common);
    b_table->callback([&] {
        action = [&] {
            bcfg.seed = common.seed;
            const auto records = bohr_table(bohr_n, bcfg);
            const Table t = bohr_records_table(records);
            emit(render(t, meta_of(common, "bohr table", b_table), common, bohr_csv(records)), common, "bohr_table");
            return 0;
        };
    });

    int up_n = 0, up_m = 0, up_trials = 16;
    PolyNormOptions up_effort;
    auto* b_upper = bohr->add_subcommand("upper", "Empirical upper estimate of K_n from random sign polynomials");
    b_upper->add_option("--n", up_n, "Dimension")->required()->check(CLI::PositiveNumber);
    b_upper->add_option("--m", up_m, "Degree")->required()->check(CLI::PositiveNumber);
    b_upper->add_option("--sign-trials", up_trials, "Sign patterns")->check(CLI::PositiveNumber)->capture_default_str();
    b_upper->add_option("--restarts", up_effort.restarts, "Phase-ascent starts")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    b_upper->add_option("--samples", up_effort.samples, "Random torus samples")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    add_common(b_upper, common);
    b_upper->callback([&] {
        action = [&] {
            const auto u = bohr_upper_empirical(up_n, up_m, up_trials, up_effort, common.seed);
            Table t{{"n", "m", "r_upper_emp", "norm_est", "best_polynomial_seed"},
                    {{std::int64_t{up_n}, std::int64_t{up_m}, u.r_upper_emp, u.norm_est, u.best_polynomial_seed}}};
            emit(render(t, meta_of(common, "bohr upper", b_upper), common), common, "bohr_upper");
            return 0;
        };
    });

    std::vector<const char*> cargv;
    for (const auto& a : argv) cargv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(cargv.size()), cargv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e, std::cerr, std::cerr);
        return 2;
    }

    try {
        return action ? action() : 2;
    } catch (const RejectedInput& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ContractViolation& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace polybohr::cli
