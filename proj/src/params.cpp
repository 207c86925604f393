#include "henon/params.hpp"

#include <cmath>
#include <sstream>

namespace henon {

std::string to_string(Mode mode) {
    return mode == Mode::strict ? "strict" : "exploratory";
}

Mode mode_from_string(const std::string& text) {
    if (text == "strict") return Mode::strict;
    if (text == "exploratory") return Mode::exploratory;
    throw HenonError("unknown mode '" + text + "' (expected strict or exploratory)");
}

ProblemParams validate_params(int n, double p, double a, Mode mode) {
    if (n < 5) {
        throw HenonError("dimension n = " + std::to_string(n) + " rejected: n >= 5 required");
    }
    if (!std::isfinite(p) || p <= 1.0) {
        throw HenonError("exponent p must satisfy p > 1");
    }
    if (!std::isfinite(a) || a < 0.0) {
        throw HenonError("weight exponent a must satisfy a >= 0");
    }

    ProblemParams params;
    params.n = n;
    params.p = p;
    params.a = a;
    params.mode = mode;

    const double nd = n;
    DerivedConstants& d = params.derived;
    d.q = 0.5 * (p + 1.0);
    d.b = 0.5 * a;
    d.c_n = 8.0 / (nd * (nd - 4.0));
    d.alpha_limit = 2.0 / (nd - 4.0);
    d.beta_limit = std::sqrt(2.0 / ((p + 1.0) - d.c_n));
    d.beta_souplet = std::sqrt(2.0 / (p + 1.0));
    d.critical_p = (nd + 4.0 + 2.0 * a) / (nd - 4.0);

    if (mode == Mode::strict && !(p > d.critical_p)) {
        std::ostringstream msg;
        msg << "strict mode requires p > (n+4+2a)/(n-4) = " << d.critical_p << ", got p = " << p;
        throw HenonError(msg.str());
    }
    return params;
}

} // namespace henon
