#include "app.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "welsh/error.hpp"

namespace welsh::cli {

namespace {

struct Common {
    std::string format = "json";
    std::string output;
};

void add_common(CLI::App& cmd, Common& common)
{
    cmd.add_option("--format", common.format, "Output format")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();
    cmd.add_option("--output", common.output, "Write the report to this file instead of stdout");
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Eigenvalues below the threshold of radially periodic delta interactions with a flux line", "welsh"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Show help for all subcommands");

    Common common;
    std::function<Report()> action;

    ThresholdConfig threshold;
    auto* c_threshold = app.add_subcommand("threshold", "Threshold E0 of the comparison lattice");
    c_threshold->add_option("--beta", threshold.beta, "Coupling strength")->required();
    c_threshold->add_option("--d", threshold.d, "Circle spacing")->capture_default_str();
    add_common(*c_threshold, common);
    c_threshold->callback([&] {
        threshold.validate();
        action = [&] { return run_threshold(threshold); };
    });

    CriticalConfig critical;
    auto* c_critical = app.add_subcommand("critical", "Critical coupling and flux over a list or range of beta");
    auto* beta_list = c_critical->add_option("--beta", critical.betas, "Coupling strengths (comma separated)")
                          ->delimiter(',')
                          ->allow_extra_args(false);
    auto* beta_range = c_critical->add_option("--beta-range", critical.range, "Range a:b:lin or a:b:log");
    beta_list->excludes(beta_range);
    c_critical->add_option("--points", critical.points, "Points in --beta-range")->capture_default_str();
    c_critical->add_option("--d", critical.d, "Circle spacing")->capture_default_str();
    add_common(*c_critical, common);
    c_critical->callback([&] {
        critical.validate();
        action = [&] { return run_critical(critical); };
    });

    ClassifyConfig classify;
    auto* c_classify = app.add_subcommand("classify", "Infinite vs finite discrete spectrum, with phase growth");
    c_classify->add_option("--alpha", classify.alpha, "Flux in (0, 1/2]")->required();
    c_classify->add_option("--beta", classify.beta, "Coupling strength")->required();
    c_classify->add_option("--d", classify.d, "Circle spacing")->capture_default_str();
    c_classify->add_option("--r-max-list", classify.r_max_list, "Radii for the phase-growth report")
        ->delimiter(',')
        ->allow_extra_args(false)
        ->capture_default_str();
    add_common(*c_classify, common);
    c_classify->callback([&] {
        classify.validate();
        action = [&] { return run_classify(classify); };
    });

    EigenConfig eigen;
    std::string window;
    auto* c_eigen = app.add_subcommand("eigen", "Eigenvalues below E0 on a truncated domain");
    c_eigen->add_option("--alpha", eigen.alpha, "Flux in [0, 1)")->required();
    c_eigen->add_option("--beta", eigen.beta, "Coupling strength")->required();
    c_eigen->add_option("--d", eigen.d, "Circle spacing")->capture_default_str();
    c_eigen->add_option("--r-max", eigen.r_max, "Outer (Dirichlet) radius")->required();
    c_eigen->add_option("--r-min", eigen.r_min, "Inner radius (default 1e-3 d)");
    c_eigen->add_option("--e-window", window, "Energy window lo:hi (default: from below the spectrum to E0)");
    c_eigen->add_option("--tol", eigen.tol, "Bisection width in E")->capture_default_str();
    c_eigen->add_option("--grid-n", eigen.grid_n, "Interior nodes of the FD oracle (default: spacing 1e-3 d)");
    c_eigen->add_option("--channels", eigen.channels, "Angular momenta l (comma separated)")
        ->delimiter(',')
        ->allow_extra_args(false)
        ->capture_default_str();
    c_eigen->add_flag("--oracle", eigen.oracle, "Add finite-difference comparison columns");
    add_common(*c_eigen, common);
    c_eigen->callback([&] {
        if (!window.empty()) eigen.window = parse_window(window);
        eigen.validate();
        action = [&] { return run_eigen(eigen); };
    });

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        const CLI::App* active = &app;
        for (const auto* sub : app.get_subcommands()) active = sub;
        err << active->help();
        return kExitUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return e.is_usage_error() ? kExitUsage : kExitNumeric;
    }

    try {
        const Report report = action();
        const Format format = common.format == "csv" ? Format::csv : Format::json;
        if (common.output.empty()) {
            write_report(out, report, format);
        } else {
            std::ostringstream buffer;
            write_report(buffer, report, format);
            std::ofstream file(common.output, std::ios::binary);
            if (!file) {
                err << "error: cannot open " << common.output << " for writing\n";
                return kExitUsage;
            }
            file << buffer.str();
            if (!file) {
                err << "error: writing " << common.output << " failed\n";
                return kExitNumeric;
            }
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return e.is_usage_error() ? kExitUsage : kExitNumeric;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitNumeric;
    }
    return kExitOk;
}

} // namespace welsh::cli
