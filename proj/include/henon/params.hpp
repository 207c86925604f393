#pragma once

#include <stdexcept>
#include <string>

namespace henon {

/// Thrown for rejected inputs and violated preconditions across the library.
class HenonError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// strict: the supercritical regime p > (n+4+2a)/(n-4) where the pointwise
/// estimate is a theorem. exploratory: any p > 1, reports are tagged as such.
enum class Mode { strict, exploratory };

std::string to_string(Mode mode);
Mode mode_from_string(const std::string& text);

/// Constants that depend only on (n, p, a).
struct DerivedConstants {
    double q = 0.0;           // (p+1)/2
    double b = 0.0;           // a/2
    double c_n = 0.0;         // 8/(n(n-4))
    double alpha_limit = 0.0; // 2/(n-4)
    double beta_limit = 0.0;  // sqrt(2/((p+1)-c_n))
    double beta_souplet = 0.0; // sqrt(2/(p+1))
    double critical_p = 0.0;  // (n+4+2a)/(n-4)
};

/// Validated problem triple for Delta^2 u = |x|^a u^p in R^n.
struct ProblemParams {
    int n = 0;
    double p = 0.0;
    double a = 0.0;
    Mode mode = Mode::strict;
    DerivedConstants derived;

    /// True when p lies in the supercritical range, independent of the mode flag.
    [[nodiscard]] bool supercritical() const { return p > derived.critical_p; }
    /// Decay rate m = (4+a)/(p-1) of entire solutions, u ~ r^{-m}.
    [[nodiscard]] double decay_rate() const { return (4.0 + a) / (p - 1.0); }
};

/// Gatekeeper for every (n, p, a, mode) entering the library.
ProblemParams validate_params(int n, double p, double a, Mode mode);

} // namespace henon
