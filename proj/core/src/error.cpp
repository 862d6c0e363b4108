#include "welsh/error.hpp"

namespace welsh {

std::string_view to_string(Errc code) noexcept
{
    switch (code) {
    case Errc::invalid_input: return "invalid-input";
    case Errc::convergence_failure: return "convergence-failure";
    case Errc::unsupported_mode: return "unsupported-mode";
    case Errc::undefined_critical: return "undefined-critical-value";
    case Errc::unsupported_branch: return "unsupported-branch";
    case Errc::singularity: return "singularity";
    case Errc::integration_failure: return "integration-failure";
    case Errc::corrupt_solution: return "corrupt-solution";
    case Errc::domain_error: return "domain-error";
    case Errc::reduce_by_symmetry: return "reduce-by-symmetry";
    case Errc::invalid_window: return "invalid-window";
    case Errc::invalid_request: return "invalid-request";
    case Errc::boundary_violation: return "boundary-violation";
    case Errc::consistency: return "consistency";
    }
    return "unknown";
}

bool Error::is_usage_error() const noexcept
{
    switch (code_) {
    case Errc::invalid_input:
    case Errc::unsupported_mode:
    case Errc::undefined_critical:
    case Errc::unsupported_branch:
    case Errc::singularity:
    case Errc::domain_error:
    case Errc::reduce_by_symmetry:
    case Errc::invalid_window:
    case Errc::invalid_request:
    case Errc::boundary_violation:
        return true;
    default:
        return false;
    }
}

} // namespace welsh
