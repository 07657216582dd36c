#include "heightlab/growth.hpp"

#include "heightlab/errors.hpp"

#include <cmath>

namespace heightlab {

GrowthFit fit_growth(const CountSeries& series, int log_power, int drop_low) {
    if (log_power != 0 && log_power != 1)
        throw ParameterError("fit_growth: log power must be 0 or 1");
    if (drop_low < 0) throw ParameterError("fit_growth: drop_low must be >= 0");
    const std::size_t n = series.grid.size();
    if (n <= static_cast<std::size_t>(drop_low) || n - drop_low < 4)
        throw FitError("fit_growth: need at least 4 grid points after dropping " +
                       std::to_string(drop_low));
    std::vector<double> xs, ys;
    for (std::size_t i = drop_low; i < n; ++i) {
        if (series.counts[i] == 0)
            throw FitError("fit_growth: zero count at B = " + to_string(series.grid[i]));
        double B = to_double(series.grid[i]);
        double logB = std::log(B);
        if (log_power == 1 && logB <= 0)
            throw FitError("fit_growth: log model needs B > 1 in the fitted range");
        xs.push_back(logB);
        ys.push_back(std::log(static_cast<double>(series.counts[i])) -
                     log_power * std::log(logB));
    }
    const double m = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    const double denom = m * sxx - sx * sx;
    if (denom == 0) throw FitError("fit_growth: degenerate grid");
    GrowthFit fit;
    fit.log_power = log_power;
    fit.exponent = (m * sxy - sx * sy) / denom;
    const double intercept = (sy - fit.exponent * sx) / m;
    fit.constant = std::exp(intercept);
    double rss = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double resid = ys[i] - (fit.exponent * xs[i] + intercept);
        rss += resid * resid;
    }
    fit.residual_rms = std::sqrt(rss / m);
    for (std::size_t i = drop_low; i < n; ++i) fit.grid_used.push_back(to_double(series.grid[i]));
    return fit;
}

double zeta(double s) {
    if (s <= 1.0) throw ParameterError("zeta: s must be > 1");
    const int K = 20000;
    double sum = 0.0;
    for (int k = K; k >= 1; --k) sum += std::pow(static_cast<double>(k), -s);
    // Euler-Maclaurin tail from K
    const double Kd = K;
    sum += std::pow(Kd, 1.0 - s) / (s - 1.0) - 0.5 * std::pow(Kd, -s) +
           s / 12.0 * std::pow(Kd, -s - 1.0);
    return sum;
}

double schanuel_reference(int n, double B) {
    if (n < 1) throw ParameterError("schanuel_reference: n must be >= 1");
    if (B < 1) throw ParameterError("schanuel_reference: B must be >= 1");
    return std::pow(2.0, n) / zeta(n + 1.0) * std::pow(B, n + 1.0);
}

namespace {

SaturationStratum make_stratum(std::string name, CountSeries series, int rho) {
    SaturationStratum s;
    s.name = std::move(name);
    s.series = std::move(series);
    try {
        s.fit = fit_growth(s.series, rho - 1, 2);
        s.fit_ok = true;
    } catch (const FitError&) {
        s.fit_ok = false;
    }
    const std::size_t n = s.series.grid.size();
    const std::size_t start = n / 2;
    bool first = true;
    for (std::size_t i = start; i < n; ++i) {
        double B = to_double(s.series.grid[i]);
        double denom = B * std::pow(std::log(B), rho - 1);
        if (denom <= 0) continue;
        double v = static_cast<double>(s.series.counts[i]) / denom;
        if (first || v < s.window_min) s.window_min = v;
        if (first || v > s.window_max) s.window_max = v;
        first = false;
    }
    return s;
}

} // namespace

SaturationReport saturation_report(const CompleteIntersection& X,
                                   const std::vector<std::pair<std::string, Subvariety>>& subvarieties,
                                   const std::vector<PointPredicate>& excluded_loci,
                                   const HeightSpec& h, const std::vector<Rational>& grid,
                                   int rho, const EnumStrategy& strategy) {
    if (rho < 1 || rho > 2) throw ParameterError("saturation_report: rho must be 1 or 2");
    // containment is verified symbolically before any counting
    for (const auto& [name, sub] : subvarieties) {
        if (std::holds_alternative<LinearSubspace>(sub)) {
            if (!std::get<LinearSubspace>(sub).contained_in(X))
                throw NotContained("saturation_report: subspace '" + name + "' is not contained in X");
        } else {
            const auto& C = std::get<ParametrizedCurve>(sub);
            for (const auto& f : X.forms())
                if (!f.substitute_forms(C.components).is_zero())
                    throw NotContained("saturation_report: curve '" + name + "' is not contained in X");
        }
    }
    auto excluded = [&excluded_loci](const ProjPoint& p) {
        for (const auto& pred : excluded_loci)
            if (pred(p)) return true;
        return false;
    };

    SaturationReport report;
    report.rho = rho;
    report.total = make_stratum("X", count_series(X, h, grid, strategy, nullptr, "X"), rho);

    auto on_any_subvariety = [&subvarieties](const ProjPoint& p) {
        for (const auto& [name, sub] : subvarieties) {
            (void)name;
            if (std::holds_alternative<LinearSubspace>(sub)) {
                if (std::get<LinearSubspace>(sub).contains(p)) return true;
            } else if (curve_image_contains(std::get<ParametrizedCurve>(sub), p)) {
                return true;
            }
        }
        return false;
    };

    for (const auto& [name, sub] : subvarieties) {
        CountSeries series;
        PointPredicate keep = [&excluded](const ProjPoint& p) { return !excluded(p); };
        if (std::holds_alternative<LinearSubspace>(sub))
            series = subspace_series(std::get<LinearSubspace>(sub), h, grid, keep, name);
        else
            series = curve_series(std::get<ParametrizedCurve>(sub), h, grid, keep, name);
        auto stratum = make_stratum(name, std::move(series), rho);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            double total = static_cast<double>(report.total.series.counts[i]);
            stratum.shares.push_back(total > 0 ? stratum.series.counts[i] / total : 0.0);
        }
        report.strata.push_back(std::move(stratum));
    }

    PointPredicate in_complement = [on_any_subvariety](const ProjPoint& p) {
        return !on_any_subvariety(p);
    };
    report.complement =
        make_stratum("U", count_series(X, h, grid, strategy, in_complement, "U"), rho);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        double total = static_cast<double>(report.total.series.counts[i]);
        report.complement.shares.push_back(
            total > 0 ? report.complement.series.counts[i] / total : 0.0);
    }
    return report;
}

} // namespace heightlab
