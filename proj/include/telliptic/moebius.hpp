#pragma once

// PSL(2,R) / PSL(2,C) arithmetic in the upper half-plane model.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <ostream>
#include <string>
#include <type_traits>

#include "telliptic/errors.hpp"

namespace telliptic {

using cplx = std::complex<double>;

inline constexpr double kDefaultTol = 1e-9;
inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

enum class Field { Real, Complex };

template <class T>
inline constexpr bool is_complex_v = std::is_same_v<T, cplx>;

template <class T>
constexpr Field field_of() {
    return is_complex_v<T> ? Field::Complex : Field::Real;
}

inline std::string to_string(Field f) { return f == Field::Real ? "real" : "complex"; }

/// 2x2 matrix over double or std::complex<double>.
///
/// As a group element it stands for its class in PSL(2): the determinant is
/// kept at 1 by `normalized()` and equality is taken up to a global sign.
template <class T>
struct Mat2 {
    T a{1}, b{0}, c{0}, d{1};

    static constexpr Mat2 identity() { return {T(1), T(0), T(0), T(1)}; }

    constexpr T det() const { return a * d - b * c; }
    constexpr T trace() const { return a + d; }

    // Inverse of a determinant-one matrix (adjugate).
    constexpr Mat2 inverse() const { return {d, -b, -c, a}; }

    Mat2 normalized() const {
        if constexpr (is_complex_v<T>) {
            const T s = std::sqrt(det());
            return {a / s, b / s, c / s, d / s};
        } else {
            const double s = std::sqrt(std::abs(det()));
            return {a / s, b / s, c / s, d / s};
        }
    }

    friend constexpr Mat2 operator*(const Mat2& x, const Mat2& y) {
        return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c,
                x.c * y.b + x.d * y.d};
    }

    friend constexpr Mat2 operator-(const Mat2& x) { return {-x.a, -x.b, -x.c, -x.d}; }

    friend std::ostream& operator<<(std::ostream& os, const Mat2& m) {
        return os << "[[" << m.a << ", " << m.b << "], [" << m.c << ", " << m.d << "]]";
    }
};

using RealMatrix = Mat2<double>;
using ComplexMatrix = Mat2<cplx>;

template <class T>
double max_abs_diff(const Mat2<T>& x, const Mat2<T>& y) {
    return std::max({std::abs(x.a - y.a), std::abs(x.b - y.b), std::abs(x.c - y.c),
                     std::abs(x.d - y.d)});
}

template <class T>
double max_abs_entry(const Mat2<T>& x) {
    return std::max({std::abs(x.a), std::abs(x.b), std::abs(x.c), std::abs(x.d)});
}

/// Distance of m to {+I, -I} in the max-entry norm.
template <class T>
double distance_to_identity(const Mat2<T>& m) {
    const auto id = Mat2<T>::identity();
    return std::min(max_abs_diff(m, id), max_abs_diff(m, -id));
}

/// Equality in PSL(2): entries agree up to a global sign.
template <class T>
bool projectively_equal(const Mat2<T>& x, const Mat2<T>& y, double tol = kDefaultTol) {
    return std::min(max_abs_diff(x, y), max_abs_diff(x, -y)) <= tol;
}

template <class T>
Mat2<T> commutator(const Mat2<T>& x, const Mat2<T>& y) {
    return x * y * x.inverse() * y.inverse();
}

inline ComplexMatrix to_complex(const RealMatrix& m) { return {m.a, m.b, m.c, m.d}; }

inline ComplexMatrix conjugate_transpose(const ComplexMatrix& m) {
    return {std::conj(m.a), std::conj(m.c), std::conj(m.b), std::conj(m.d)};
}

// ---------------------------------------------------------------------------
// Points and geodesics of the upper half-plane

struct HPoint {
    cplx z{0.0, 1.0};

    HPoint() = default;
    explicit HPoint(cplx value) : z(value) {
        if (!(value.imag() > 0.0))
            throw PreconditionError("HPoint requires a strictly positive imaginary part");
    }
    HPoint(double re, double im) : HPoint(cplx(re, im)) {}

    double re() const { return z.real(); }
    double im() const { return z.imag(); }
};

inline double hyperbolic_distance(const HPoint& p, const HPoint& q) {
    const double num = std::norm(p.z - q.z);
    return std::acosh(1.0 + num / (2.0 * p.im() * q.im()));
}

template <class T>
cplx act(const Mat2<T>& m, cplx z) {
    return (cplx(m.a) * z + cplx(m.b)) / (cplx(m.c) * z + cplx(m.d));
}

inline HPoint act(const RealMatrix& m, const HPoint& p) { return HPoint(act(m, p.z)); }

/// A point of R u {infinity}.
struct IdealPoint {
    double x = 0.0;
    bool infinite = false;

    static IdealPoint at_infinity() { return {0.0, true}; }
};

inline IdealPoint act(const RealMatrix& m, const IdealPoint& p) {
    if (p.infinite) {
        if (m.c == 0.0) return IdealPoint::at_infinity();
        return {m.a / m.c, false};
    }
    const double den = m.c * p.x + m.d;
    if (den == 0.0) return IdealPoint::at_infinity();
    return {(m.a * p.x + m.b) / den, false};
}

struct Geodesic {
    IdealPoint from;
    IdealPoint to;

    Geodesic(IdealPoint u, IdealPoint v) : from(u), to(v) {
        if (u.infinite == v.infinite && (u.infinite || u.x == v.x))
            throw PreconditionError("geodesic endpoints must be distinct");
    }

    /// The geodesic line through two distinct points.
    static Geodesic through(const HPoint& p, const HPoint& q) {
        const double dx = p.re() - q.re();
        if (std::abs(dx) <= 1e-14 * (1.0 + std::abs(p.re()))) {
            return {IdealPoint{p.re(), false}, IdealPoint::at_infinity()};
        }
        const double m = (std::norm(p.z) - std::norm(q.z)) / (2.0 * dx);
        const double r = std::abs(p.z - m);
        return {IdealPoint{m - r, false}, IdealPoint{m + r, false}};
    }
};

inline Geodesic act(const RealMatrix& m, const Geodesic& g) {
    return {act(m, g.from), act(m, g.to)};
}

// ---------------------------------------------------------------------------
// Element classification

enum class ElementClass { Identity, EllipticRegular, Parabolic, Hyperbolic, Loxodromic };

inline std::string to_string(ElementClass c) {
    switch (c) {
        case ElementClass::Identity: return "Identity";
        case ElementClass::EllipticRegular: return "EllipticRegular";
        case ElementClass::Parabolic: return "Parabolic";
        case ElementClass::Hyperbolic: return "Hyperbolic";
        case ElementClass::Loxodromic: return "Loxodromic";
    }
    return "?";
}

inline bool is_elliptic(ElementClass c) {
    return c == ElementClass::Identity || c == ElementClass::EllipticRegular;
}

enum class Strictness { Lenient, Strict };

/// |tr| inside [2 - tol, 2 + tol] (and not +-I) is Parabolic when lenient and
/// raises AmbiguousClass when strict.
template <class T>
ElementClass classify_element(const Mat2<T>& m, double tol = kDefaultTol,
                              Strictness strictness = Strictness::Lenient) {
    if (distance_to_identity(m) <= tol) return ElementClass::Identity;
    const T tr = m.trace();
    double abs_tr;
    if constexpr (is_complex_v<T>) {
        if (std::abs(tr.imag()) > tol) return ElementClass::Loxodromic;
        abs_tr = std::abs(tr.real());
    } else {
        abs_tr = std::abs(tr);
    }
    if (abs_tr < 2.0 - tol) return ElementClass::EllipticRegular;
    if (abs_tr > 2.0 + tol) {
        return is_complex_v<T> ? ElementClass::Loxodromic : ElementClass::Hyperbolic;
    }
    if (strictness == Strictness::Strict) throw AmbiguousClass(abs_tr);
    return ElementClass::Parabolic;
}

/// Absolute value of the trace of either lift.
template <class T>
double abs_trace(const Mat2<T>& m) {
    return std::abs(m.trace());
}

// ---------------------------------------------------------------------------
// Rotations

struct RotationData {
    double angle;  // in (0, 2pi), anticlockwise
    HPoint centre;
};

inline double wrap_angle(double theta) {
    double t = std::fmod(theta, kTwoPi);
    if (t < 0.0) t += kTwoPi;
    return t;
}

/// Angle and centre of a regular elliptic element. The angle is defined by
/// m'(centre) = exp(i angle).
inline RotationData rotation_data(const RealMatrix& raw, double tol = kDefaultTol) {
    if (classify_element(raw, tol) != ElementClass::EllipticRegular)
        throw NotRegularElliptic("rotation_data requires a regular elliptic element");
    const RealMatrix m = raw.normalized();
    const double tr = m.trace();
    const double disc = std::sqrt(std::max(0.0, 4.0 - tr * tr));
    const double sign = m.c > 0.0 ? 1.0 : -1.0;
    const cplx z = cplx(m.a - m.d, sign * disc) / (2.0 * m.c);
    const cplx w = m.c * z + m.d;
    double theta = wrap_angle(-2.0 * std::arg(w));
    return {theta, HPoint(z)};
}

/// Maps i to p: z -> y z + x.
inline RealMatrix translation_to(const HPoint& p) {
    const double s = std::sqrt(p.im());
    return {s, p.re() / s, 0.0, 1.0 / s};
}

/// Anticlockwise rotation by theta about i.
inline RealMatrix standard_rotation(double theta) {
    const double h = 0.5 * theta;
    return {std::cos(h), std::sin(h), -std::sin(h), std::cos(h)};
}

/// Anticlockwise rotation by theta about p.
inline RealMatrix rotation_about(const HPoint& p, double theta) {
    const double t = wrap_angle(theta);
    if (t < 1e-14 || kTwoPi - t < 1e-14)
        throw DegenerateAngle("rotation angle is a multiple of 2pi");
    const RealMatrix tp = translation_to(p);
    return tp * standard_rotation(t) * tp.inverse();
}

/// The point at hyperbolic distance `dist` from p, leaving p in the direction
/// obtained by rotating the upward vertical direction anticlockwise by `dir`.
inline HPoint point_at(const HPoint& p, double dist, double dir) {
    const RealMatrix tp = translation_to(p);
    const cplx up(0.0, std::exp(dist));
    return HPoint(act(tp * standard_rotation(dir), up));
}

// ---------------------------------------------------------------------------
// Isometries including orientation-reversing ones

/// z -> m(z) when preserving, z -> m(conj z) when reversing. The matrix is
/// real with det +1 (preserving) or det -1 (reversing).
struct Isometry {
    RealMatrix m = RealMatrix::identity();
    bool reversing = false;

    cplx operator()(cplx z) const { return act(m, reversing ? std::conj(z) : z); }

    friend Isometry operator*(const Isometry& f, const Isometry& g) {
        return {f.m * g.m, f.reversing != g.reversing};
    }

    Isometry inverse() const {
        const double dt = m.det();
        return {RealMatrix{m.d / dt, -m.b / dt, -m.c / dt, m.a / dt}, reversing};
    }

    /// The orientation-preserving part as a PSL(2,R) element.
    RealMatrix as_matrix() const {
        if (reversing) throw PreconditionError("isometry reverses orientation");
        return m.normalized();
    }
};

/// Reflection through a geodesic.
inline Isometry reflection(const Geodesic& g) {
    if (g.from.infinite || g.to.infinite) {
        const double u = g.from.infinite ? g.to.x : g.from.x;
        return {RealMatrix{-1.0, 2.0 * u, 0.0, 1.0}, true};
    }
    const double centre = 0.5 * (g.from.x + g.to.x);
    const double r = 0.5 * std::abs(g.to.x - g.from.x);
    return {RealMatrix{centre / r, (r * r - centre * centre) / r, 1.0 / r, -centre / r}, true};
}

struct CommutatorResult {
    ElementClass cls;
    RealMatrix value;
};

/// [a, x] = a x a^-1 x^-1 for elliptic a.
inline CommutatorResult commutator_class(const RealMatrix& a, const RealMatrix& x,
                                         double tol = kDefaultTol,
                                         Strictness strictness = Strictness::Lenient) {
    if (!is_elliptic(classify_element(a, tol)))
        throw PreconditionError("commutator_class requires an elliptic first argument");
    const RealMatrix value = commutator(a.normalized(), x.normalized());
    return {classify_element(value, tol, strictness), value};
}

}  // namespace telliptic
