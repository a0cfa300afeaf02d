#include "dhlab/extended.hpp"

#include <quadmath.h>

namespace dhlab {

DoubleDouble DoubleDouble::from_quad(quad v) {
    double h = static_cast<double>(v);
    double l = static_cast<double>(v - static_cast<quad>(h));
    return {h, l};
}

bool is_integral_exponent(double k) {
    return k >= 1.0 && k <= 64.0 && k == std::floor(k);
}

quad quad_pow(std::uint64_t n, double k) {
    if (is_integral_exponent(k)) {
        quad r = 1;
        quad b = static_cast<quad>(n);
        for (int e = static_cast<int>(k); e > 0; --e) r *= b;
        return r;
    }
    if (n == 0) return 0;
    return expq(static_cast<quad>(k) * logq(static_cast<quad>(n)));
}

std::string quad_to_string(quad v, int digits) {
    char buf[128];
    quadmath_snprintf(buf, sizeof buf, "%.*Qg", digits, v);
    return buf;
}

}  // namespace dhlab
