#pragma once

// Subcommand configurations and their computations. Each config is checked
// by validate() before any numerical work; run_* assume a valid config.

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "report.hpp"

namespace welsh::cli {

struct ThresholdConfig {
    double beta = 0.0;
    double d = 1.0;
    void validate() const;
};

struct CriticalConfig {
    std::vector<double> betas;
    std::string range; ///< "a:b:lin" or "a:b:log"; empty when --beta is used
    int points = 10;
    double d = 1.0;
    void validate() const;
    /// The explicit list, or the expanded range.
    [[nodiscard]] std::vector<double> beta_values() const;
};

struct ClassifyConfig {
    double alpha = 0.0;
    double beta = 0.0;
    double d = 1.0;
    std::vector<double> r_max_list{30.0, 60.0, 120.0};
    void validate() const;
};

struct EigenConfig {
    double alpha = 0.0;
    double beta = 0.0;
    double d = 1.0;
    double r_max = 0.0;
    double r_min = 0.0; ///< 0 selects 1e-3 d
    std::optional<std::pair<double, double>> window;
    double tol = 1e-9;
    std::size_t grid_n = 0; ///< 0 selects spacing ~1e-3 d
    std::vector<int> channels{0};
    bool oracle = false;
    void validate() const;
    [[nodiscard]] double effective_r_min() const { return r_min > 0.0 ? r_min : 1e-3 * d; }
    [[nodiscard]] std::size_t effective_grid_n() const;
};

/// "a:b:lin|log" with the given number of points. Log spacing needs a, b of
/// one sign and nonzero. Throws Errc::invalid_input on malformed text.
std::vector<double> expand_range(const std::string& spec, int points);

/// "lo:hi" energy window.
std::pair<double, double> parse_window(const std::string& spec);

Report run_threshold(const ThresholdConfig& config);
Report run_critical(const CriticalConfig& config);
Report run_classify(const ClassifyConfig& config);
Report run_eigen(const EigenConfig& config);

} // namespace welsh::cli
