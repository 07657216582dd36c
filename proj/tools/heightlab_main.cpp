#include <CLI11.hpp>
#include <json.hpp>

#include "heightlab/bundle.hpp"
#include "heightlab/density.hpp"
#include "heightlab/enumerate.hpp"
#include "heightlab/fano.hpp"
#include "heightlab/growth.hpp"
#include "heightlab/hyperelliptic.hpp"
#include "heightlab/report.hpp"
#include "heightlab/variety.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

using namespace heightlab;
using nlohmann::json;

namespace {

struct CommonOpts {
    std::string builtin;
    std::string variety_path;
    std::string lambda_text = "1";
    std::string B_text;
    std::string grid_text; // B0:factor:steps
    std::string strategy_text = "naive";
    u64 seed = 1;
    int workers = 1;
    std::string out_path;
    std::string format = "csv";
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_strategy = true) {
    cmd->add_option("--builtin", o.builtin, "builtin variety (pn:<n>, fermat:<n>:<d>, ct-quadrics)");
    cmd->add_option("--variety", o.variety_path, "variety definition file");
    cmd->add_option("--lambda", o.lambda_text, "deformation weight on x0 (rational, e.g. 10 or 7/2)");
    cmd->add_option("--B", o.B_text, "single height bound (rational)");
    cmd->add_option("--grid", o.grid_text, "geometric grid B0:factor:steps");
    if (with_strategy)
        cmd->add_option("--strategy", o.strategy_text,
                        "naive | solve-last | sharded:<kind>:<workers>");
    cmd->add_option("--seed", o.seed, "PRNG seed");
    cmd->add_option("--workers", o.workers, "worker threads");
    cmd->add_option("--out", o.out_path, "output path (default stdout)");
    cmd->add_option("--format", o.format, "csv | json")
        ->check(CLI::IsMember({"csv", "json"}));
}

CompleteIntersection resolve_variety(const CommonOpts& o) {
    if (!o.builtin.empty() && !o.variety_path.empty())
        throw ParameterError("config: --builtin and --variety are mutually exclusive");
    if (!o.builtin.empty()) return builtin_variety(o.builtin);
    if (!o.variety_path.empty()) return read_variety_file(o.variety_path);
    throw ParameterError("config: one of --builtin or --variety is required");
}

std::vector<Rational> resolve_grid(const CommonOpts& o) {
    if (!o.grid_text.empty()) {
        std::stringstream ss(o.grid_text);
        std::string b0, f, s;
        if (!std::getline(ss, b0, ':') || !std::getline(ss, f, ':') || !std::getline(ss, s))
            throw ParameterError("config: --grid expects B0:factor:steps");
        return geometric_grid(parse_rational(b0), parse_rational(f), std::stoi(s));
    }
    if (!o.B_text.empty()) return {parse_rational(o.B_text)};
    throw ParameterError("config: one of --B or --grid is required");
}

EnumStrategy resolve_strategy(const CommonOpts& o) {
    EnumStrategy st = EnumStrategy::parse(o.strategy_text);
    if (o.workers > 1 && st.workers == 1) st.workers = o.workers;
    return st;
}

json config_json(const std::string& cmd, const CommonOpts& o) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["command"] = cmd;
    if (!o.builtin.empty()) j["builtin"] = o.builtin;
    if (!o.variety_path.empty()) j["variety"] = o.variety_path;
    j["lambda"] = o.lambda_text;
    if (!o.B_text.empty()) j["B"] = o.B_text;
    if (!o.grid_text.empty()) j["grid"] = o.grid_text;
    j["strategy"] = o.strategy_text;
    j["seed"] = o.seed;
    j["workers"] = o.workers;
    j["format"] = o.format;
    return j;
}

void emit(const CommonOpts& o, const std::string& text) {
    if (o.out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(o.out_path);
    if (!out) throw ParameterError("config: cannot open --out path '" + o.out_path + "'");
    out << text;
}

std::string csv_config_line(const std::string& cmd, const CommonOpts& o, const json& extra = {}) {
    json j = config_json(cmd, o);
    for (auto it = extra.begin(); it != extra.end(); ++it) j[it.key()] = it.value();
    return "# config: " + j.dump() + "\n";
}

json series_json(const CountSeries& s) {
    json rows = json::array();
    for (std::size_t i = 0; i < s.grid.size(); ++i)
        rows.push_back({{"B", to_string(s.grid[i])}, {"count", s.counts[i]}});
    return {{"region", s.region}, {"rows", rows}};
}

json fit_json(const GrowthFit& f) {
    return {{"exponent", f.exponent},
            {"constant", f.constant},
            {"residual_rms", f.residual_rms},
            {"log_power", f.log_power},
            {"grid_used", f.grid_used}};
}

json stratum_json(const SaturationStratum& s) {
    json j;
    j["name"] = s.name;
    j["series"] = series_json(s.series);
    if (s.fit_ok) j["fit"] = fit_json(s.fit);
    j["window_min"] = s.window_min;
    j["window_max"] = s.window_max;
    if (!s.shares.empty()) j["shares"] = s.shares;
    return j;
}

// ---- subcommand runners ----

int run_count(const CommonOpts& o) {
    auto X = resolve_variety(o);
    Rational lambda = parse_rational(o.lambda_text);
    HeightSpec h = X.num_forms() ? X.anticanonical_height(lambda) : HeightSpec(1, lambda);
    auto grid = resolve_grid(o);
    auto strategy = resolve_strategy(o);
    auto t0 = std::chrono::steady_clock::now();
    auto series = count_series(X, h, grid, strategy);
    double wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    if (o.format == "csv") {
        std::ostringstream os;
        os << csv_config_line("count", o);
        write_series_csv(os, series, lambda, strategy.str(), wall_ms);
        emit(o, os.str());
    } else {
        json j;
        j["config"] = config_json("count", o);
        j["e"] = h.e;
        j["series"] = series_json(series);
        emit(o, j.dump(2) + "\n");
    }
    return 0;
}

int run_fit(const CommonOpts& o, const std::string& in_path, int log_power, int drop_low) {
    // CSV input: header then rows B,count,...
    std::istream* in = &std::cin;
    std::ifstream file;
    if (!in_path.empty()) {
        file.open(in_path);
        if (!file) throw ParameterError("fit: cannot open --in path '" + in_path + "'");
        in = &file;
    }
    CountSeries series;
    series.region = "csv";
    std::string line;
    bool first = true;
    while (std::getline(*in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (first) {
            first = false;
            if (line.rfind("B,", 0) == 0) continue; // header
        }
        std::stringstream ss(line);
        std::string b, c;
        if (!std::getline(ss, b, ',') || !std::getline(ss, c, ','))
            throw ParseError("fit: malformed CSV row '" + line + "'");
        series.grid.push_back(parse_rational(b));
        series.counts.push_back(std::stoull(c));
    }
    auto fit = fit_growth(series, log_power, drop_low);
    json j;
    j["config"] = config_json("fit", o);
    j["config"]["log_power"] = log_power;
    j["config"]["drop_low"] = drop_low;
    j["fit"] = fit_json(fit);
    emit(o, j.dump(2) + "\n");
    return 0;
}

int run_saturation(const CommonOpts& o, const std::vector<std::string>& plane_specs,
                   bool fermat_line_flag, bool ct_line_flag, int rho) {
    auto X = resolve_variety(o);
    Rational lambda = parse_rational(o.lambda_text);
    HeightSpec h = X.num_forms() ? X.anticanonical_height(lambda) : HeightSpec(1, lambda);
    auto grid = resolve_grid(o);
    auto strategy = resolve_strategy(o);
    std::vector<std::pair<std::string, Subvariety>> subs;
    for (const auto& spec : plane_specs) {
        std::vector<std::vector<i64>> rows;
        std::stringstream ss(spec);
        std::string row;
        while (std::getline(ss, row, ';')) {
            std::vector<i64> r;
            std::stringstream rs(row);
            std::string v;
            while (std::getline(rs, v, ',')) r.push_back(std::stoll(v));
            rows.push_back(std::move(r));
        }
        subs.emplace_back("plane" + std::to_string(subs.size()), LinearSubspace(rows));
    }
    if (fermat_line_flag) {
        if (o.builtin.rfind("fermat:", 0) != 0)
            throw ParameterError("saturation: --fermat-plane needs a fermat builtin");
        auto parts = o.builtin.substr(7);
        auto colon = parts.find(':');
        int n = std::stoi(parts.substr(0, colon));
        int d = std::stoi(parts.substr(colon + 1));
        subs.emplace_back("fermat-plane", fermat_plane(n, d));
    }
    if (ct_line_flag) subs.emplace_back("ct-line", ct_quadrics_line());
    if (subs.empty()) throw ParameterError("saturation: no subvariety given");
    auto report = saturation_report(X, subs, {}, h, grid, rho, strategy);
    if (o.format == "csv") {
        std::ostringstream os;
        os << csv_config_line("saturation", o, {{"rho", rho}});
        write_series_csv(os, report.total.series, lambda, strategy.str(), 0.0, true);
        for (const auto& s : report.strata)
            write_series_csv(os, s.series, lambda, strategy.str(), 0.0, false);
        write_series_csv(os, report.complement.series, lambda, strategy.str(), 0.0, false);
        emit(o, os.str());
    } else {
        json j;
        j["config"] = config_json("saturation", o);
        j["config"]["rho"] = rho;
        j["total"] = stratum_json(report.total);
        j["strata"] = json::array();
        for (const auto& s : report.strata) j["strata"].push_back(stratum_json(s));
        j["complement"] = stratum_json(report.complement);
        emit(o, j.dump(2) + "\n");
    }
    return 0;
}

int run_density(const CommonOpts& o, const std::string& lambda_grid_text, double epsilon,
                u64 samples, const std::string& padic_text, int k_level) {
    auto X = resolve_variety(o);
    std::vector<Rational> lambdas;
    if (!lambda_grid_text.empty()) {
        std::stringstream ss(lambda_grid_text);
        std::string v;
        while (std::getline(ss, v, ',')) lambdas.push_back(parse_rational(v));
    } else {
        lambdas.push_back(parse_rational(o.lambda_text));
    }
    json j;
    j["config"] = config_json("density", o);
    j["config"]["samples"] = samples;
    j["config"]["epsilon"] = epsilon;
    if (!lambda_grid_text.empty()) j["config"]["lambda_grid"] = lambda_grid_text;
    json ests = json::array();
    std::vector<DensityEstimate> scan;
    if (lambdas.size() > 1)
        scan = density_decay_scan(X, lambdas, epsilon, samples, o.seed, o.workers);
    else
        scan.push_back(archimedean_density(X, lambdas[0], epsilon, samples, o.seed, o.workers));
    for (const auto& e : scan)
        ests.push_back({{"lambda", to_string(e.lambda)},
                        {"value", e.value},
                        {"std_error", e.std_error},
                        {"samples", e.samples},
                        {"epsilon", e.epsilon},
                        {"seed", e.seed}});
    j["estimates"] = ests;
    if (!padic_text.empty()) {
        json ps = json::array();
        double product = scan.front().value;
        std::stringstream ss(padic_text);
        std::string v;
        while (std::getline(ss, v, ',')) {
            auto d = padic_density(X, std::stoll(v), k_level, o.workers);
            ps.push_back({{"p", d.p}, {"k", d.k}, {"value", to_string(d.value)}});
            product *= to_double(d.value);
        }
        j["padic"] = ps;
        j["truncated_leading_factor"] = product;
        j["truncated_leading_factor_note"] =
            "archimedean estimate at the first lambda times the listed finite densities only";
    }
    emit(o, j.dump(2) + "\n");
    return 0;
}

int run_fano(const CommonOpts& o, int n, const std::string& degrees_text, int r, bool scan_thm36,
             int scan_max, const std::string& birch_text, int plane_n, int plane_d) {
    json j;
    j["config"] = config_json("fano", o);
    if (scan_thm36) {
        json eq = json::array();
        for (int d = 2; d <= scan_max; ++d)
            for (int rr = 2; rr <= scan_max; ++rr) {
                auto b = binom_inequality(d, rr);
                if (b.equal) eq.push_back({{"d", d}, {"r", rr}});
            }
        j["scan_thm36"] = {{"max", scan_max}, {"equality_cases", eq}};
    }
    if (!degrees_text.empty()) {
        std::vector<int> degrees;
        std::stringstream ss(degrees_text);
        std::string v;
        while (std::getline(ss, v, ',')) degrees.push_back(std::stoi(v));
        if (r >= 0) {
            auto c = general_nonempty(n, degrees, r);
            j["criterion"] = {{"n", c.n},
                              {"r", c.r},
                              {"degrees", c.degrees},
                              {"expected_dim", c.expected_dim.str()},
                              {"slack", c.slack.str()},
                              {"nonempty_for_general", c.nonempty_for_general}};
        } else {
            int d = 0;
            for (int di : degrees) d += di;
            auto cls = contains_plane_general(n, degrees);
            const char* names[] = {"PlaneForGeneral", "NoPlaneForGeneral", "QuadricsBoundaryCase"};
            j["plane_classification"] = {{"n", n},
                                         {"degrees", degrees},
                                         {"r", n - d},
                                         {"result", names[static_cast<int>(cls)]}};
        }
    }
    if (!birch_text.empty()) {
        std::stringstream ss(birch_text);
        std::string a, b, c;
        if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',') || !std::getline(ss, c))
            throw ParameterError("fano: --birch expects n,d,sigma");
        j["birch"] = {{"n", std::stoll(a)},
                      {"d", std::stoi(b)},
                      {"sigma", std::stoll(c)},
                      {"satisfied", birch_bound(std::stoll(a), std::stoi(b), std::stoll(c))}};
    }
    if (plane_n > 0) {
        auto L = fermat_plane(plane_n, plane_d);
        j["fermat_plane"] = {{"n", plane_n}, {"d", plane_d}, {"basis", L.basis()},
                             {"r", L.r()}};
    }
    emit(o, j.dump(2) + "\n");
    return 0;
}

int run_curve(const CommonOpts& o, const std::string& f_text, i64 p) {
    std::vector<i64> f;
    if (o.builtin == "ct-quadrics-curve" || (o.builtin.empty() && f_text.empty())) {
        f = HyperellipticCurve::ct_quadrics_curve().f;
    } else if (!f_text.empty()) {
        std::stringstream ss(f_text);
        std::string v;
        while (std::getline(ss, v, ',')) f.push_back(std::stoll(v));
    } else {
        throw ParameterError("curve: unknown builtin '" + o.builtin +
                             "' (expected ct-quadrics-curve) and no --f given");
    }
    HyperellipticCurve C(f);
    json j;
    j["config"] = config_json("curve", o);
    j["config"]["f"] = f;
    j["config"]["p"] = p;
    bool good = verify_good_reduction(C, p);
    j["good_reduction"] = good;
    if (good) {
        u64 N1 = hyperelliptic_count(C, p, 1);
        u64 N2 = hyperelliptic_count(C, p, 2);
        auto fc = frobenius_charpoly(N1, N2, p);
        auto coeffs = fc.coefficients();
        j["N1"] = N1;
        j["N2"] = N2;
        j["a1"] = fc.a1;
        j["a2"] = fc.a2;
        j["charpoly_low_to_high"] = coeffs;
        j["irreducible"] = is_irreducible_quartic({coeffs[0], coeffs[1], coeffs[2], coeffs[3]});
    }
    emit(o, j.dump(2) + "\n");
    return 0;
}

int run_bundle(const CommonOpts& o, bool exclude_accumulating, i64 search_bound,
               const std::string& fiber_text) {
    auto grid = resolve_grid(o);
    if (!fiber_text.empty()) {
        std::vector<i64> x;
        std::stringstream ss(fiber_text);
        std::string v;
        while (std::getline(ss, v, ',')) x.push_back(std::stoll(v));
        ProjPoint px = normalize(x);
        auto fc = fiber_class(px, search_bound);
        auto series = fiber_count_series(px, grid);
        json j;
        j["config"] = config_json("bundle", o);
        j["config"]["fiber"] = fiber_text;
        j["config"]["point_search_bound"] = search_bound;
        const char* names[] = {"SplitCertified", "NotSplit", "Undetermined"};
        j["fiber"] = {{"x", px.coords},
                      {"class", names[static_cast<int>(fc.tag)]},
                      {"witness", fc.witness},
                      {"degenerate", fc.degenerate}};
        j["series"] = series_json(series);
        emit(o, j.dump(2) + "\n");
        return 0;
    }
    auto report = bundle_count(grid, exclude_accumulating, search_bound, o.workers);
    if (o.format == "csv") {
        std::ostringstream os;
        os << csv_config_line("bundle", o,
                              {{"exclude_accumulating", exclude_accumulating},
                               {"point_search_bound", search_bound}});
        write_bundle_csv(os, report);
        emit(o, os.str());
    } else {
        json j;
        j["config"] = config_json("bundle", o);
        j["config"]["exclude_accumulating"] = exclude_accumulating;
        j["config"]["point_search_bound"] = search_bound;
        json rows = json::array();
        for (const auto& r : report.rows)
            rows.push_back({{"B", to_string(r.B)},
                            {"total", r.total},
                            {"on_split_certified", r.on_split_certified},
                            {"on_not_split", r.on_not_split},
                            {"on_undetermined", r.on_undetermined},
                            {"on_accumulating", r.on_accumulating},
                            {"thin_members", r.thin_members}});
        j["rows"] = rows;
        j["fibers"] = {{"total", report.fibers_total},
                       {"split_certified", report.fibers_split_certified},
                       {"not_split", report.fibers_not_split},
                       {"undetermined", report.fibers_undetermined},
                       {"degenerate", report.fibers_degenerate}};
        emit(o, j.dump(2) + "\n");
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"rational point counts, growth fits and local densities on Fano varieties"};
    app.require_subcommand(1);

    CommonOpts count_opts, fit_opts, sat_opts, dens_opts, fano_opts, curve_opts, bundle_opts;

    auto* cmd_count = app.add_subcommand("count", "count points of bounded height");
    add_common(cmd_count, count_opts);

    auto* cmd_fit = app.add_subcommand("fit", "fit a growth exponent to a CSV series");
    add_common(cmd_fit, fit_opts, false);
    std::string fit_in;
    int fit_log_power = 0, fit_drop_low = 2;
    cmd_fit->add_option("--in", fit_in, "input CSV (default stdin)");
    cmd_fit->add_option("--log-power", fit_log_power, "log factor exponent b (0 or 1)");
    cmd_fit->add_option("--drop-low", fit_drop_low, "smallest grid points to drop");

    auto* cmd_sat = app.add_subcommand("saturation", "per-stratum counts, fits and shares");
    add_common(cmd_sat, sat_opts);
    std::vector<std::string> plane_specs;
    bool fermat_line_flag = false, ct_line_flag = false;
    int rho = 1;
    cmd_sat->add_option("--plane", plane_specs,
                        "subspace basis rows, e.g. 0,1,0,1,0;0,0,1,0,1 (repeatable)");
    cmd_sat->add_flag("--fermat-plane", fermat_line_flag, "add the diagonal plane of the builtin");
    cmd_sat->add_flag("--ct-line", ct_line_flag, "add the line of ct-quadrics");
    cmd_sat->add_option("--rho", rho, "declared Picard rank (fixes the log power)");

    auto* cmd_dens = app.add_subcommand("density", "archimedean and p-adic local densities");
    add_common(cmd_dens, dens_opts, false);
    std::string lambda_grid_text, padic_text;
    double epsilon = 0.0;
    u64 samples = 100000;
    int k_level = 1;
    cmd_dens->add_option("--lambda-grid", lambda_grid_text, "comma list, e.g. 1,10,100");
    cmd_dens->add_option("--epsilon", epsilon, "slab half-width (0 = auto)");
    cmd_dens->add_option("--samples", samples, "Monte-Carlo samples");
    cmd_dens->add_option("--padic", padic_text, "comma list of primes for exact densities");
    cmd_dens->add_option("--k-level", k_level, "p-adic level k");

    auto* cmd_fano = app.add_subcommand("fano", "combinatorial plane criteria");
    add_common(cmd_fano, fano_opts, false);
    int fano_n = 0, fano_r = -1, scan_max = 30, plane_n = 0, plane_d = 0;
    std::string degrees_text, birch_text;
    bool scan_thm36 = false;
    cmd_fano->add_option("--n", fano_n, "ambient dimension");
    cmd_fano->add_option("--degrees", degrees_text, "comma list of degrees");
    cmd_fano->add_option("--r", fano_r, "plane dimension r");
    cmd_fano->add_flag("--scan-thm36", scan_thm36, "scan the binomial inequality");
    cmd_fano->add_option("--max", scan_max, "scan bound");
    cmd_fano->add_option("--birch", birch_text, "n,d,sigma");
    cmd_fano->add_option("--plane-n", plane_n, "diagonal plane: ambient n");
    cmd_fano->add_option("--plane-d", plane_d, "diagonal plane: degree d");

    auto* cmd_curve = app.add_subcommand("curve", "finite-field certificate for a genus-2 curve");
    add_common(cmd_curve, curve_opts, false);
    std::string f_text;
    i64 curve_p = 3;
    cmd_curve->add_option("--f", f_text, "coefficients c0,...,c5 of f(x)");
    cmd_curve->add_option("--p", curve_p, "odd prime");

    auto* cmd_bundle = app.add_subcommand("bundle", "quadric bundle experiment in P^3 x P^3");
    add_common(cmd_bundle, bundle_opts, false);
    bool exclude_accumulating = false;
    i64 search_bound = 50;
    std::string fiber_text;
    cmd_bundle->add_flag("--exclude-accumulating", exclude_accumulating,
                         "drop points on the four accumulating loci");
    cmd_bundle->add_option("--point-search-bound", search_bound, "fiber point search bound");
    cmd_bundle->add_option("--fiber", fiber_text, "single fiber x0,x1,x2,x3");

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_count->parsed()) return run_count(count_opts);
        if (cmd_fit->parsed()) return run_fit(fit_opts, fit_in, fit_log_power, fit_drop_low);
        if (cmd_sat->parsed())
            return run_saturation(sat_opts, plane_specs, fermat_line_flag, ct_line_flag, rho);
        if (cmd_dens->parsed())
            return run_density(dens_opts, lambda_grid_text, epsilon, samples, padic_text, k_level);
        if (cmd_fano->parsed())
            return run_fano(fano_opts, fano_n, degrees_text, fano_r, scan_thm36, scan_max,
                            birch_text, plane_n, plane_d);
        if (cmd_curve->parsed()) return run_curve(curve_opts, f_text, curve_p);
        if (cmd_bundle->parsed())
            return run_bundle(bundle_opts, exclude_accumulating, search_bound, fiber_text);
    } catch (const ParameterError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const DimensionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const NotFano& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const StrategyUnsupported& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const TooLarge& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const DegenerateSubspace& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const DegenerateCurve& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const NotContained& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "runtime error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
