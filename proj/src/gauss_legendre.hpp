#pragma once

#include <array>
#include <cmath>

namespace dhlab::detail {

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
template <int N>
struct GaussLegendre {
    std::array<long double, N> x{};
    std::array<long double, N> w{};

    GaussLegendre() {
        const long double pi = 3.14159265358979323846264338327950288L;
        for (int i = 0; i < (N + 1) / 2; ++i) {
            long double z = std::cos(pi * (i + 0.75L) / (N + 0.5L));
            long double dp = 0;
            for (int it = 0; it < 100; ++it) {
                long double p0 = 1, p1 = 0;
                for (int j = 1; j <= N; ++j) {
                    long double p2 = p1;
                    p1 = p0;
                    p0 = ((2 * j - 1) * z * p1 - (j - 1) * p2) / j;
                }
                dp = N * (z * p0 - p1) / (z * z - 1);
                long double dz = p0 / dp;
                z -= dz;
                if (std::fabs(dz) < 1e-19L) break;
            }
            x[i] = -z;
            x[N - 1 - i] = z;
            w[i] = w[N - 1 - i] = 2 / ((1 - z * z) * dp * dp);
        }
    }
};

inline const GaussLegendre<16>& gl16() {
    static const GaussLegendre<16> rule;
    return rule;
}

}  // namespace dhlab::detail
