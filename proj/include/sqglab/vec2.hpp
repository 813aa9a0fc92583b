#pragma once

#include <cmath>

namespace sqg {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    constexpr Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
    constexpr Vec2& operator-=(Vec2 o) { x -= o.x; y -= o.y; return *this; }
    constexpr Vec2& operator*=(double a) { x *= a; y *= a; return *this; }
};

constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
constexpr Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }
constexpr Vec2 operator*(double a, Vec2 v) { return {a * v.x, a * v.y}; }
constexpr Vec2 operator*(Vec2 v, double a) { return {a * v.x, a * v.y}; }
constexpr bool operator==(Vec2 a, Vec2 b) { return a.x == b.x && a.y == b.y; }

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
constexpr double norm2(Vec2 a) { return dot(a, a); }

/// (a1, a2)^perp = (a2, -a1): clockwise quarter turn, the convention of the velocity law.
constexpr Vec2 perp(Vec2 a) { return {a.y, -a.x}; }

/// Counter-clockwise rotation by angle t.
inline Vec2 rotate(Vec2 a, double t) {
    const double c = std::cos(t), s = std::sin(t);
    return {c * a.x - s * a.y, s * a.x + c * a.y};
}

}  // namespace sqg
