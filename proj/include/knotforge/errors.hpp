#pragma once

#include <stdexcept>
#include <string>

namespace knotforge {

enum class errc {
    malformed_code,
    non_realizable,
    inconsistent_orientation,
    stale_site,
    half_power_unresolvable,
    non_integral_exponent,
    residual_imaginary_part,
    recursion_budget_exceeded,
    same_component,
    curves_too_close,
    disconnected_diagram,
    fingerprint_clash,
    cap_exceeded,
    domain_error,
};

inline const char* errc_name(errc c) {
    switch (c) {
        case errc::malformed_code: return "MalformedCode";
        case errc::non_realizable: return "NonRealizable";
        case errc::inconsistent_orientation: return "InconsistentOrientation";
        case errc::stale_site: return "StaleSite";
        case errc::half_power_unresolvable: return "HalfPowerUnresolvable";
        case errc::non_integral_exponent: return "NonIntegralExponent";
        case errc::residual_imaginary_part: return "ResidualImaginaryPart";
        case errc::recursion_budget_exceeded: return "RecursionBudgetExceeded";
        case errc::same_component: return "SameComponent";
        case errc::curves_too_close: return "CurvesTooClose";
        case errc::disconnected_diagram: return "DisconnectedDiagram";
        case errc::fingerprint_clash: return "FingerprintClash";
        case errc::cap_exceeded: return "CapExceeded";
        case errc::domain_error: return "DomainError";
    }
    return "UnknownError";
}

class Error : public std::runtime_error {
  public:
    Error(errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    errc code() const noexcept { return code_; }

  private:
    errc code_;
};

[[noreturn]] inline void raise(errc code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, errc code, const std::string& what) {
    if (!cond) raise(code, what);
}

}  // namespace knotforge
