#pragma once

#include <cmath>
#include <numbers>

namespace hyperwalk {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Euclidean radius clamp just inside the disk boundary; the boundary stands
// for infinitely distant points and atanh blows up there.
inline constexpr double kMaxDiskRadius = 1.0 - 1e-9;

/// Point on the Poincare disk in Euclidean polar coordinates,
/// r in [0, 1), theta in [0, 2*pi).
struct DiskPoint {
    double r = 0.0;
    double theta = 0.0;
};

/// The same point in natural hyperbolic polar coordinates: r is the true
/// hyperbolic distance from the origin.
struct NaturalPoint {
    double r = 0.0;
    double theta = 0.0;
};

/// Reduce an angle to [0, 2*pi). Idempotent.
inline double normalize_angle(double theta) {
    double t = std::fmod(theta, kTwoPi);
    if (t < 0.0) t += kTwoPi;
    if (t >= kTwoPi) t = 0.0;  // fmod rounding can land exactly on 2*pi
    return t;
}

/// Hyperbolic distance of a disk point from the origin: 2*atanh(r).
/// Radii at or beyond the boundary clamp are pulled back and flagged.
inline double origin_distance(const DiskPoint& p, bool* clamped = nullptr) {
    double r = p.r;
    if (r >= kMaxDiskRadius) {
        r = kMaxDiskRadius;
        if (clamped) *clamped = true;
    } else if (clamped) {
        *clamped = false;
    }
    return 2.0 * std::atanh(r);
}

inline NaturalPoint to_natural(const DiskPoint& p, bool* clamped = nullptr) {
    return {origin_distance(p, clamped), normalize_angle(p.theta)};
}

inline DiskPoint to_disk(const NaturalPoint& p) {
    return {std::tanh(p.r / 2.0), normalize_angle(p.theta)};
}

/// Polar inner product in natural coordinates:
/// <x, y> = r_x * r_y * cos(theta_x - theta_y).
inline double inner(const NaturalPoint& x, const NaturalPoint& y) {
    return x.r * y.r * std::cos(x.theta - y.theta);
}

/// Disk-coordinate form of the same product, 4*atanh(r_x)*atanh(r_y)*cos(dtheta).
inline double inner(const DiskPoint& x, const DiskPoint& y) {
    return inner(to_natural(x), to_natural(y));
}

/// Circumference of a hyperbolic circle of radius R.
inline double circumference(double radius) {
    return kTwoPi * std::sinh(radius);
}

/// Cartesian coordinates of a disk point, the export representation.
struct Cartesian2 {
    double x = 0.0;
    double y = 0.0;
};

inline Cartesian2 cartesian(const DiskPoint& p) {
    return {p.r * std::cos(p.theta), p.r * std::sin(p.theta)};
}

}  // namespace hyperwalk
