#ifndef DYNBIOT_GEOMETRY_HPP
#define DYNBIOT_GEOMETRY_HPP

#include <cmath>

namespace dynbiot {

/// Point or vector in the plane.
struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    double norm() const { return std::sqrt(x * x + y * y); }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }

/// z-component of the cross product of two planar vectors.
inline double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }

/// Dense 2x2 tensor, row-major.
struct Tensor2 {
    double xx = 0.0, xy = 0.0;
    double yx = 0.0, yy = 0.0;

    Tensor2() = default;
    Tensor2(double xx_, double xy_, double yx_, double yy_)
        : xx(xx_), xy(xy_), yx(yx_), yy(yy_) {}

    static Tensor2 identity(double s = 1.0) { return {s, 0.0, 0.0, s}; }

    Vec2 apply(const Vec2& v) const { return {xx * v.x + xy * v.y, yx * v.x + yy * v.y}; }

    Tensor2 operator+(const Tensor2& o) const {
        return {xx + o.xx, xy + o.xy, yx + o.yx, yy + o.yy};
    }
    Tensor2 operator-(const Tensor2& o) const {
        return {xx - o.xx, xy - o.xy, yx - o.yx, yy - o.yy};
    }
    Tensor2 operator*(double s) const { return {xx * s, xy * s, yx * s, yy * s}; }

    double operator()(int a, int b) const {
        return a == 0 ? (b == 0 ? xx : xy) : (b == 0 ? yx : yy);
    }

    bool is_symmetric(double tol = 1e-14) const { return std::abs(xy - yx) <= tol; }

    /// Symmetric positive definiteness via leading minors.
    bool is_spd(double tol = 1e-14) const {
        return is_symmetric(tol) && xx > 0.0 && (xx * yy - xy * yx) > 0.0;
    }
};

inline Tensor2 operator*(double s, const Tensor2& t) { return t * s; }

}  // namespace dynbiot

#endif
