#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace welsh {

enum class Errc {
    invalid_input,
    convergence_failure,
    unsupported_mode,
    undefined_critical,
    unsupported_branch,
    singularity,
    integration_failure,
    corrupt_solution,
    domain_error,
    reduce_by_symmetry,
    invalid_window,
    invalid_request,
    boundary_violation,
    consistency,
};

std::string_view to_string(Errc code) noexcept;

/// Every failure raised by the library carries one of the codes above so that
/// callers (the CLI in particular) can map it onto an exit status.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}

    [[nodiscard]] Errc code() const noexcept { return code_; }

    /// True for errors caused by bad arguments rather than by the numerics.
    [[nodiscard]] bool is_usage_error() const noexcept;

private:
    Errc code_;
};

} // namespace welsh
