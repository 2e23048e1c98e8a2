#pragma once

// Independent reference computations used by the tests. Nothing here calls
// into the library beyond plain data types.

#include <cmath>
#include <complex>
#include <random>

#include "telliptic/moebius.hpp"

namespace oracle {

using telliptic::cplx;
using telliptic::RealMatrix;

inline cplx mobius(const RealMatrix& m, cplx z) { return (m.a * z + m.b) / (m.c * z + m.d); }

// Rotation angle from the derivative of z -> (az+b)/(cz+d) at its fixed point.
inline double derivative_angle(const RealMatrix& m, cplx fixed) {
    const cplx deriv = 1.0 / ((m.c * fixed + m.d) * (m.c * fixed + m.d)) * (m.a * m.d - m.b * m.c);
    double th = std::arg(deriv);
    if (th <= 0) th += 2 * M_PI;
    return th;
}

// Fixed point in the upper half-plane from the quadratic c z^2 + (d-a) z - b = 0.
inline cplx upper_fixed_point(const RealMatrix& m) {
    if (std::abs(m.c) < 1e-300) return {NAN, NAN};
    const cplx disc = std::sqrt(cplx((m.d - m.a) * (m.d - m.a) + 4 * m.b * m.c, 0.0));
    cplx z1 = (cplx(m.a - m.d) + disc) / (2 * m.c), z2 = (cplx(m.a - m.d) - disc) / (2 * m.c);
    return z1.imag() > 0 ? z1 : z2;
}

// Interior angle at p of the hyperbolic triangle pqr, read off in the disk
// chart centred at p where geodesics through p are straight.
inline double interior_angle(cplx p, cplx q, cplx r) {
    const cplx u = (q - p) / (q - std::conj(p));
    const cplx v = (r - p) / (r - std::conj(p));
    return std::abs(std::arg(v / u));
}

inline double hdist(cplx p, cplx q) {
    return std::acosh(1.0 + std::norm(p - q) / (2.0 * p.imag() * q.imag()));
}

inline RealMatrix random_sl2(std::mt19937_64& rng, double spread = 2.0) {
    std::uniform_real_distribution<double> u(-spread, spread);
    for (;;) {
        const double a = u(rng), b = u(rng), c = u(rng);
        if (std::abs(a) < 0.1) continue;
        return {a, b, c, (1.0 + b * c) / a};
    }
}

}  // namespace oracle
