#pragma once

#include <cmath>

namespace bezflow {

// A point of the plane, also used for displacement/tangent vectors.
struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator-(Point2 a) { return {-a.x, -a.y}; }
inline Point2 operator*(double s, Point2 p) { return {s * p.x, s * p.y}; }
inline Point2 operator*(Point2 p, double s) { return {s * p.x, s * p.y}; }
inline Point2 operator/(Point2 p, double s) { return {p.x / s, p.y / s}; }
inline Point2& operator+=(Point2& a, Point2 b) { a.x += b.x; a.y += b.y; return a; }
inline Point2& operator-=(Point2& a, Point2 b) { a.x -= b.x; a.y -= b.y; return a; }
inline Point2& operator*=(Point2& a, double s) { a.x *= s; a.y *= s; return a; }
inline bool operator==(Point2 a, Point2 b) { return a.x == b.x && a.y == b.y; }
inline bool operator!=(Point2 a, Point2 b) { return !(a == b); }

inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double squared_norm(Point2 p) { return p.x * p.x + p.y * p.y; }
inline double norm(Point2 p) { return std::hypot(p.x, p.y); }
inline double distance(Point2 a, Point2 b) { return norm(a - b); }

inline bool is_finite(Point2 p) { return std::isfinite(p.x) && std::isfinite(p.y); }

// Rotates a vector by -90 degrees (clockwise in the usual orientation).
inline Point2 rotate_cw(Point2 p) { return {p.y, -p.x}; }

} // namespace bezflow
