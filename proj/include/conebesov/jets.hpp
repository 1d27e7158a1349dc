#pragma once

#include <array>

#include "conebesov/vec3.hpp"

namespace conebesov {

/// Value, gradient and (symmetric) Hessian of a scalar field at a point.
/// Enough for every order-2 derivative oracle in the library.
struct Jet2 {
    double v = 0.0;
    Vec3 g;
    std::array<std::array<double, 3>, 3> h{};

    static Jet2 constant(double c) {
        Jet2 j;
        j.v = c;
        return j;
    }

    Jet2 operator+(const Jet2& o) const {
        Jet2 r;
        r.v = v + o.v;
        r.g = g + o.g;
        for (int i = 0; i < 3; ++i)
            for (int k = 0; k < 3; ++k) r.h[i][k] = h[i][k] + o.h[i][k];
        return r;
    }

    Jet2 operator*(const Jet2& o) const {
        Jet2 r;
        r.v = v * o.v;
        r.g = g * o.v + o.g * v;
        for (int i = 0; i < 3; ++i)
            for (int k = 0; k < 3; ++k)
                r.h[i][k] = h[i][k] * o.v + g[i] * o.g[k] + o.g[i] * g[k] + v * o.h[i][k];
        return r;
    }

    Jet2 operator*(double s) const {
        Jet2 r;
        r.v = v * s;
        r.g = g * s;
        for (int i = 0; i < 3; ++i)
            for (int k = 0; k < 3; ++k) r.h[i][k] = h[i][k] * s;
        return r;
    }

    /// Picks the partial derivative named by the multi-index (|alpha| <= 2).
    double partial(const std::array<int, 3>& alpha) const {
        const int total = alpha[0] + alpha[1] + alpha[2];
        if (total == 0) return v;
        if (total == 1) {
            for (int i = 0; i < 3; ++i)
                if (alpha[i] == 1) return g[i];
        }
        if (total == 2) {
            int first = -1, second = -1;
            for (int i = 0; i < 3; ++i) {
                if (alpha[i] == 2) return h[i][i];
                if (alpha[i] == 1) (first < 0 ? first : second) = i;
            }
            return h[first][second];
        }
        return 0.0;  // unreachable for valid alpha
    }
};

/// Jet of a radial composition g(|x|) given g, g', g'' at rho = |x| > 0.
inline Jet2 radial_jet(const Vec3& x, double g0, double g1, double g2) {
    const double rho = norm(x);
    Jet2 j;
    j.v = g0;
    const Vec3 u = x / rho;
    j.g = u * g1;
    for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k) {
            const double pik = (i == k ? 1.0 : 0.0) - u[i] * u[k];
            j.h[i][k] = g2 * u[i] * u[k] + g1 * pik / rho;
        }
    return j;
}

}  // namespace conebesov
