#include "commands.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>

#include "welsh/error.hpp"
#include "welsh/fd_oracle.hpp"
#include "welsh/lattice_threshold.hpp"
#include "welsh/phase.hpp"
#include "welsh/spectral.hpp"

namespace welsh::cli {

namespace {

[[noreturn]] void usage(const std::string& message)
{
    throw Error(Errc::invalid_input, message);
}

void require_finite(double x, const char* name)
{
    if (!std::isfinite(x)) usage(std::string("--") + name + " must be a finite number");
}

void require_spacing(double d)
{
    require_finite(d, "d");
    if (!(d > 0.0)) usage("--d must be positive");
}

void require_alpha(double alpha)
{
    require_finite(alpha, "alpha");
    if (alpha < 0.0 || alpha >= 1.0) usage("--alpha must lie in [0, 1)");
}

double parse_number(const std::string& text, const std::string& what)
{
    double value = 0.0;
    const char* first = text.data();
    const char* last = first + text.size();
    if (!text.empty() && *first == '+') ++first;
    const auto res = std::from_chars(first, last, value);
    if (res.ec != std::errc() || res.ptr != last || !std::isfinite(value))
        usage("cannot parse " + what + " '" + text + "'");
    return value;
}

std::vector<std::string> split(const std::string& text, char sep)
{
    std::vector<std::string> parts;
    std::size_t start = 0;
    for (;;) {
        const auto pos = text.find(sep, start);
        parts.push_back(text.substr(start, pos - start));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return parts;
}

Json number_or_null(double x)
{
    return std::isfinite(x) ? Json(x) : Json(nullptr);
}

} // namespace

// ---------------------------------------------------------------------------

std::vector<double> expand_range(const std::string& spec, int points)
{
    const auto parts = split(spec, ':');
    if (parts.size() != 3) usage("--beta-range expects a:b:lin or a:b:log");
    const double a = parse_number(parts[0], "range start");
    const double b = parse_number(parts[1], "range end");
    const std::string& mode = parts[2];
    if (mode != "lin" && mode != "log") usage("--beta-range spacing must be 'lin' or 'log'");
    if (points < 1) usage("--points must be at least 1");
    if (mode == "log" && (a == 0.0 || b == 0.0 || (a < 0) != (b < 0)))
        usage("log ranges need nonzero endpoints of one sign");

    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) {
        const double t = points == 1 ? 0.0 : static_cast<double>(i) / (points - 1);
        if (mode == "lin") {
            out.push_back(i == 0 ? a : i == points - 1 ? b : a + t * (b - a));
        } else {
            const double sign = a < 0 ? -1.0 : 1.0;
            const double la = std::log(std::abs(a)), lb = std::log(std::abs(b));
            out.push_back(i == 0 ? a : i == points - 1 ? b : sign * std::exp(la + t * (lb - la)));
        }
    }
    return out;
}

std::pair<double, double> parse_window(const std::string& spec)
{
    const auto parts = split(spec, ':');
    if (parts.size() != 2) usage("--e-window expects lo:hi");
    return {parse_number(parts[0], "window start"), parse_number(parts[1], "window end")};
}

void ThresholdConfig::validate() const
{
    require_finite(beta, "beta");
    require_spacing(d);
}

void CriticalConfig::validate() const
{
    require_spacing(d);
    if (betas.empty() == range.empty()) usage("critical: give exactly one of --beta or --beta-range");
    for (double b : betas) require_finite(b, "beta");
    if (!range.empty()) (void)expand_range(range, points);
}

std::vector<double> CriticalConfig::beta_values() const
{
    return range.empty() ? betas : expand_range(range, points);
}

void ClassifyConfig::validate() const
{
    require_finite(alpha, "alpha");
    require_finite(beta, "beta");
    require_spacing(d);
    if (alpha > 0.5 && alpha < 1.0)
        throw Error(Errc::reduce_by_symmetry, "classify: alpha > 1/2 gives the same spectrum as 1 - alpha = " +
                                                  format_double(1.0 - alpha) + "; rerun with --alpha " +
                                                  format_double(1.0 - alpha));
    if (!(alpha > 0.0) || alpha >= 1.0) usage("--alpha must lie in (0, 1/2]");
    if (beta == 0.0) throw Error(Errc::undefined_critical, "classify: beta = 0 has no critical flux");
    if (r_max_list.empty()) usage("--r-max-list must not be empty");
    double previous = 1e-3 * d;
    for (double r : r_max_list) {
        require_finite(r, "r-max-list");
        if (!(r > previous)) usage("--r-max-list must be increasing and exceed 1e-3 d");
        previous = r;
    }
}

void EigenConfig::validate() const
{
    require_alpha(alpha);
    require_finite(beta, "beta");
    require_spacing(d);
    require_finite(r_max, "r-max");
    require_finite(r_min, "r-min");
    require_finite(tol, "tol");
    if (!(tol > 0.0)) usage("--tol must be positive");
    if (r_min < 0.0) usage("--r-min must be positive");
    const double rm = effective_r_min();
    if (!(rm < d / 2)) usage("--r-min must be below d/2");
    if (!(r_max > d / 2)) usage("--r-max must exceed d/2");
    if (window) {
        if (!(window->first < window->second)) usage("--e-window needs lo < hi");
        const double e0 = solve_threshold(LatticeParams{d, beta}).E0();
        if (window->second > e0)
            throw Error(Errc::invalid_window, "--e-window upper end exceeds the threshold E0 = " + format_double(e0));
    }
    if (channels.empty()) usage("--channels must not be empty");
    if (oracle && grid_n != 0 && grid_n < 100) usage("--grid-n must be at least 100");
}

std::size_t EigenConfig::effective_grid_n() const
{
    if (grid_n != 0) return grid_n;
    const double span = r_max - effective_r_min();
    return std::max<std::size_t>(100, static_cast<std::size_t>(std::llround(span / (1e-3 * d))));
}

// ---------------------------------------------------------------------------

Report run_threshold(const ThresholdConfig& config)
{
    const LatticeParams lattice{config.d, config.beta};
    const ThresholdData t = solve_threshold(lattice);
    const double residual = static_cast<double>(std::abs(kp_discriminant(lattice, t.energy) - 1.0L));

    Json row;
    row["beta"] = config.beta;
    row["d"] = config.d;
    row["E0"] = t.E0();
    row["branch"] = to_string(t.branch);
    row["rate"] = static_cast<double>(t.rate);
    row["discriminant_residual"] = residual;

    Report report;
    report.document = Json{{"command", "threshold"}};
    report.document.update(row);
    report.columns = {"beta", "d", "E0", "branch", "rate", "discriminant_residual"};
    report.rows.push_back(row);
    return report;
}

Report run_critical(const CriticalConfig& config)
{
    const std::vector<double> betas = config.beta_values();
    const std::vector<SweepRow> sweep = sweep_alpha_crit(betas, config.d);

    Report report;
    report.columns = {"beta", "ok", "error", "E0", "D1", "D2", "c_crit", "alpha_crit"};
    Json rows = Json::array();
    for (const SweepRow& s : sweep) {
        Json row;
        row["beta"] = s.beta;
        row["ok"] = s.ok;
        row["error"] = s.ok ? Json(nullptr) : Json(s.error);
        row["E0"] = s.ok ? number_or_null(s.data.threshold.E0()) : Json(nullptr);
        row["D1"] = s.ok ? number_or_null(s.data.D1) : Json(nullptr);
        row["D2"] = s.ok ? number_or_null(s.data.D2) : Json(nullptr);
        row["c_crit"] = s.ok ? number_or_null(s.data.c_crit) : Json(nullptr);
        row["alpha_crit"] = s.ok ? number_or_null(s.data.alpha_crit) : Json(nullptr);
        rows.push_back(row);
        report.rows.push_back(row);
    }
    report.document = Json{{"command", "critical"}, {"d", config.d}, {"rows", rows}};
    return report;
}

Report run_classify(const ClassifyConfig& config)
{
    const LatticeParams lattice{config.d, config.beta};
    const Classification cls = classify_discrete_spectrum(config.alpha, lattice);
    const RadialParams params{lattice, config.alpha, 0};
    const double e0 = solve_threshold(lattice).E0();
    const GrowthReport growth = phase_growth(params, e0, config.r_max_list);

    Json head;
    head["alpha"] = config.alpha;
    head["beta"] = config.beta;
    head["d"] = config.d;
    head["classification"] = to_string(cls.kind);
    head["four_ab"] = cls.four_ab;
    head["ratio"] = cls.ratio;
    head["c"] = cls.c;
    head["c_crit"] = cls.c_crit;
    head["alpha_crit"] = cls.alpha_crit;

    Report report;
    report.columns = {"alpha",     "beta",         "d",           "classification",
                      "four_ab",   "ratio",        "c",           "c_crit",
                      "alpha_crit", "energy",      "r_max",       "wound_phase",
                      "log_amplitude", "phase_slope", "amplitude_slope"};
    Json rows = Json::array();
    for (const GrowthRow& g : growth.rows) {
        Json row;
        row["r_max"] = g.r_max;
        row["wound_phase"] = g.wound_phase;
        row["log_amplitude"] = g.log_amplitude;
        row["phase_slope"] = g.phase_slope;
        row["amplitude_slope"] = g.amplitude_slope;
        rows.push_back(row);
        Json flat = head;
        flat["energy"] = growth.energy;
        flat.update(row);
        report.rows.push_back(flat);
    }
    report.document = Json{{"command", "classify"}};
    report.document.update(head);
    report.document["phase_growth"] = Json{{"energy", growth.energy}, {"r_start", growth.r_start}, {"rows", rows}};
    return report;
}

Report run_eigen(const EigenConfig& config)
{
    const LatticeParams lattice{config.d, config.beta};
    const TruncatedDomain domain{config.effective_r_min(), config.r_max};
    const double e0 = solve_threshold(lattice).E0();
    const std::set<int> channels(config.channels.begin(), config.channels.end());

    double lo = 0.0, hi = e0;
    if (config.window) {
        lo = config.window->first;
        hi = config.window->second;
    } else {
        lo = e0;
        for (int l : channels) lo = std::min(lo, spectral_floor(RadialParams{lattice, config.alpha, l}, domain));
    }
    const AssembledSpectrum spectrum = assemble_spectrum(config.alpha, lattice, channels, domain, lo, hi, config.tol);
    const std::size_t grid_n = config.effective_grid_n();

    Report report;
    report.columns = {"j", "l", "E", "method", "residual"};
    if (config.oracle) {
        report.columns.push_back("fd_E");
        report.columns.push_back("fd_diff");
    }

    Json rows = Json::array();
    Json oracle = Json::array();
    std::size_t j = 0;
    for (const auto& [l, result] : spectrum.channels) {
        std::vector<double> fd;
        if (config.oracle) {
            const RadialParams params{lattice, config.alpha, l};
            const FDGrid grid = build_fd_grid(params, domain, grid_n);
            const std::size_t below = fd_count_below(grid, std::min(hi, e0 - kThresholdMargin));
            const std::size_t above_lo = fd_count_below(grid, lo);
            const std::size_t k = below > above_lo ? below : 0;
            if (k > 0) fd = fd_spectrum(params, domain, grid_n, k).eigenvalues;
            if (above_lo > 0) fd.erase(fd.begin(), fd.begin() + static_cast<std::ptrdiff_t>(std::min(above_lo, fd.size())));
            oracle.push_back(Json{{"l", l},
                                  {"grid_n", grid_n},
                                  {"h", (domain.r_max - domain.r_min) / static_cast<double>(grid_n + 1)},
                                  {"shooting_count", result.count()},
                                  {"fd_count", fd.size()},
                                  {"counts_equal", fd.size() == result.count()}});
        }
        for (std::size_t i = 0; i < result.count(); ++i) {
            Json row;
            row["j"] = j++;
            row["l"] = l;
            row["E"] = result.eigenvalues[i];
            row["method"] = to_string(result.method);
            row["residual"] = result.widths[i];
            if (config.oracle) {
                row["fd_E"] = i < fd.size() ? Json(fd[i]) : Json(nullptr);
                row["fd_diff"] = i < fd.size() ? Json(result.eigenvalues[i] - fd[i]) : Json(nullptr);
            }
            rows.push_back(row);
        }
    }
    // Global numbering in energy order across channels.
    std::stable_sort(rows.begin(), rows.end(),
                     [](const Json& a, const Json& b) { return a["E"].get<double>() < b["E"].get<double>(); });
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i]["j"] = i;
    report.rows.assign(rows.begin(), rows.end());

    report.document = Json{{"command", "eigen"},
                           {"alpha", config.alpha},
                           {"beta", config.beta},
                           {"d", config.d},
                           {"E0", e0},
                           {"domain", Json{{"r_min", domain.r_min}, {"r_max", domain.r_max}}},
                           {"window", Json::array({lo, std::min(hi, e0 - kThresholdMargin)})},
                           {"tol", config.tol},
                           {"channels", Json(std::vector<int>(channels.begin(), channels.end()))},
                           {"count", rows.size()},
                           {"eigenvalues", rows}};
    if (config.oracle) report.document["oracle"] = oracle;
    return report;
}

} // namespace welsh::cli
