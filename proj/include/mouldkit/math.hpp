#pragma once

#include <array>
#include <cmath>
#include <limits>

namespace mouldkit {

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    constexpr Vec3() = default;
    constexpr Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

    constexpr double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
    double& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }

    constexpr Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    constexpr Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    constexpr Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
    constexpr Vec3 operator-() const { return {-x, -y, -z}; }
    Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
    Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
    Vec3& operator*=(double s) { x *= s; y *= s; z *= s; return *this; }
    constexpr bool operator==(const Vec3& o) const { return x == o.x && y == o.y && z == o.z; }
};

constexpr Vec3 operator*(double s, const Vec3& v) { return v * s; }

constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }
inline double squared_norm(const Vec3& v) { return dot(v, v); }

inline Vec3 normalized(const Vec3& v) {
    const double n = norm(v);
    return {v.x / n, v.y / n, v.z / n};
}

inline Vec3 min(const Vec3& a, const Vec3& b) {
    return {std::min(a.x, b.x), std::min(a.y, b.y), std::min(a.z, b.z)};
}

inline Vec3 max(const Vec3& a, const Vec3& b) {
    return {std::max(a.x, b.x), std::max(a.y, b.y), std::max(a.z, b.z)};
}

// Row-major 3x3 matrix. Only what the camera poses need.
struct Mat3 {
    std::array<double, 9> m{1, 0, 0, 0, 1, 0, 0, 0, 1};

    static Mat3 identity() { return {}; }

    double operator()(int r, int c) const { return m[static_cast<std::size_t>(r) * 3 + c]; }
    double& operator()(int r, int c) { return m[static_cast<std::size_t>(r) * 3 + c]; }

    Vec3 operator*(const Vec3& v) const {
        return {m[0] * v.x + m[1] * v.y + m[2] * v.z,
                m[3] * v.x + m[4] * v.y + m[5] * v.z,
                m[6] * v.x + m[7] * v.y + m[8] * v.z};
    }

    Mat3 operator*(const Mat3& o) const {
        Mat3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                r(i, j) = (*this)(i, 0) * o(0, j) + (*this)(i, 1) * o(1, j) + (*this)(i, 2) * o(2, j);
        return r;
    }

    Mat3 transposed() const {
        Mat3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) r(i, j) = (*this)(j, i);
        return r;
    }

    // Transpose applied to a vector; the inverse rotation for orthonormal matrices.
    Vec3 transposed_mul(const Vec3& v) const {
        return {m[0] * v.x + m[3] * v.y + m[6] * v.z,
                m[1] * v.x + m[4] * v.y + m[7] * v.z,
                m[2] * v.x + m[5] * v.y + m[8] * v.z};
    }
};

/// Shortest rotation taking unit vector `a` onto unit vector `b`.
/// Exact identity when a == b; well conditioned everywhere except a == -b,
/// where an arbitrary perpendicular axis is used.
inline Mat3 rotation_between(const Vec3& a, const Vec3& b) {
    const Vec3 v = cross(a, b);
    const double c = dot(a, b);
    if (c < -1.0 + 1e-12) {
        // Antipodal: rotate pi about any axis perpendicular to a.
        Vec3 axis = std::abs(a.x) < 0.9 ? cross(a, Vec3{1, 0, 0}) : cross(a, Vec3{0, 1, 0});
        axis = normalized(axis);
        Mat3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) r(i, j) = 2.0 * axis[i] * axis[j] - (i == j ? 1.0 : 0.0);
        return r;
    }
    const double k = 1.0 / (1.0 + c);
    Mat3 r;
    r(0, 0) = c + k * v.x * v.x;       r(0, 1) = -v.z + k * v.x * v.y;    r(0, 2) = v.y + k * v.x * v.z;
    r(1, 0) = v.z + k * v.y * v.x;     r(1, 1) = c + k * v.y * v.y;       r(1, 2) = -v.x + k * v.y * v.z;
    r(2, 0) = -v.y + k * v.z * v.x;    r(2, 1) = v.x + k * v.z * v.y;     r(2, 2) = c + k * v.z * v.z;
    return r;
}

/// Rigid world-to-camera transform: p_cam = R * p_world + t.
struct RigidTransform {
    Mat3 rotation;
    Vec3 translation;

    static RigidTransform identity() { return {}; }

    Vec3 apply(const Vec3& p) const { return rotation * p + translation; }
    Vec3 apply_direction(const Vec3& d) const { return rotation * d; }
    Vec3 apply_inverse(const Vec3& p) const { return rotation.transposed_mul(p - translation); }
    Vec3 apply_inverse_direction(const Vec3& d) const { return rotation.transposed_mul(d); }

    RigidTransform then(const RigidTransform& second) const {
        // second.apply(this->apply(p))
        return {second.rotation * rotation, second.rotation * translation + second.translation};
    }

    std::array<double, 16> to_matrix4() const {
        return {rotation(0, 0), rotation(0, 1), rotation(0, 2), translation.x,
                rotation(1, 0), rotation(1, 1), rotation(1, 2), translation.y,
                rotation(2, 0), rotation(2, 1), rotation(2, 2), translation.z,
                0.0, 0.0, 0.0, 1.0};
    }

    static RigidTransform from_matrix4(const std::array<double, 16>& m) {
        RigidTransform t;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) t.rotation(i, j) = m[static_cast<std::size_t>(i) * 4 + j];
        t.translation = {m[3], m[7], m[11]};
        return t;
    }
};

struct Aabb {
    Vec3 lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
            std::numeric_limits<double>::infinity()};
    Vec3 hi{-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
            -std::numeric_limits<double>::infinity()};

    bool empty() const { return lo.x > hi.x; }
    void expand(const Vec3& p) { lo = min(lo, p); hi = max(hi, p); }
    void expand(const Aabb& b) { lo = min(lo, b.lo); hi = max(hi, b.hi); }
    Vec3 center() const { return (lo + hi) * 0.5; }
    Vec3 extent() const { return hi - lo; }
    bool contains(const Aabb& b) const {
        return lo.x <= b.lo.x && lo.y <= b.lo.y && lo.z <= b.lo.z &&
               hi.x >= b.hi.x && hi.y >= b.hi.y && hi.z >= b.hi.z;
    }
    bool contains(const Vec3& p) const {
        return lo.x <= p.x && p.x <= hi.x && lo.y <= p.y && p.y <= hi.y && lo.z <= p.z && p.z <= hi.z;
    }
    std::array<Vec3, 8> corners() const {
        return {Vec3{lo.x, lo.y, lo.z}, Vec3{hi.x, lo.y, lo.z}, Vec3{lo.x, hi.y, lo.z},
                Vec3{hi.x, hi.y, lo.z}, Vec3{lo.x, lo.y, hi.z}, Vec3{hi.x, lo.y, hi.z},
                Vec3{lo.x, hi.y, hi.z}, Vec3{hi.x, hi.y, hi.z}};
    }
};

}  // namespace mouldkit
