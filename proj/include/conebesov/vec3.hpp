#pragma once

#include <array>
#include <cmath>

namespace conebesov {

/// Small 3-vector used throughout the geometry layer.
struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    constexpr Vec3() = default;
    constexpr Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

    double& operator[](int i) { return (&x)[i]; }
    double operator[](int i) const { return (&x)[i]; }

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator-() const { return {-x, -y, -z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
    Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }

inline Vec3 normalized(const Vec3& v) {
    const double n = norm(v);
    return v / n;
}

/// Axis-aligned box, used for wavelet support cubes and dyadic cells.
struct Box3 {
    Vec3 lo, hi;

    Vec3 corner(int c) const {
        return {(c & 1) ? hi.x : lo.x, (c & 2) ? hi.y : lo.y, (c & 4) ? hi.z : lo.z};
    }
    Vec3 center() const { return (lo + hi) * 0.5; }
};

/// Distance from the origin to a box (0 when the box contains the origin).
inline double box_distance_to_origin(const Box3& b) {
    double s = 0.0;
    for (int i = 0; i < 3; ++i) {
        const double d = std::max({b.lo[i], -b.hi[i], 0.0});
        s += d * d;
    }
    return std::sqrt(s);
}

}  // namespace conebesov
