#pragma once

// Triangle chains of punctured-sphere representations and the DT constructor.

#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "telliptic/moebius.hpp"
#include "telliptic/rep.hpp"
#include "telliptic/surface.hpp"

namespace telliptic {

enum class PantsConfiguration { Degenerate, AntiClockwise, Clockwise, Empty };
enum class Orientation { Degenerate, Clockwise, AntiClockwise };

inline std::string to_string(PantsConfiguration c) {
    switch (c) {
        case PantsConfiguration::Degenerate: return "Degenerate";
        case PantsConfiguration::AntiClockwise: return "AntiClockwise";
        case PantsConfiguration::Clockwise: return "Clockwise";
        case PantsConfiguration::Empty: return "Empty";
    }
    return "?";
}

inline std::string to_string(Orientation o) {
    switch (o) {
        case Orientation::Degenerate: return "degenerate";
        case Orientation::Clockwise: return "cw";
        case Orientation::AntiClockwise: return "ccw";
    }
    return "?";
}

inline constexpr double kDefaultAreaTol = 1e-10;

inline void check_angles(std::span<const double> alpha) {
    for (double x : alpha)
        if (!(x > 0.0 && x < kTwoPi)) throw PreconditionError("peripheral angles lie in (0, 2pi)");
}

inline double angle_sum(std::span<const double> alpha) {
    return std::accumulate(alpha.begin(), alpha.end(), 0.0);
}

inline PantsConfiguration pants_configuration(std::span<const double> alpha, double tol = 1e-9) {
    if (alpha.size() != 3) throw PreconditionError("pants configuration needs three angles");
    check_angles(alpha);
    const double s = angle_sum(alpha);
    if (std::abs(s - kTwoPi) <= tol || std::abs(s - 2.0 * kTwoPi) <= tol) return PantsConfiguration::Degenerate;
    if (s < kTwoPi) return PantsConfiguration::AntiClockwise;
    if (s > 2.0 * kTwoPi) return PantsConfiguration::Clockwise;
    return PantsConfiguration::Empty;
}

/// Signed area of (p, q, r) measured in the disk chart centred at p, where
/// geodesics through p are straight. Positive for anticlockwise triangles.
inline double signed_area(const HPoint& p, const HPoint& q, const HPoint& r) {
    const cplx u = (q.z - p.z) / (q.z - std::conj(p.z));
    const cplx v = (r.z - p.z) / (r.z - std::conj(p.z));
    return 0.5 * (u.real() * v.imag() - u.imag() * v.real());
}

inline Orientation triangle_orientation(const HPoint& p, const HPoint& q, const HPoint& r,
                                        double tol_area = kDefaultAreaTol) {
    const double s = signed_area(p, q, r);
    if (std::abs(s) <= tol_area) return Orientation::Degenerate;
    return s > 0.0 ? Orientation::AntiClockwise : Orientation::Clockwise;
}

struct ChainTriangle {
    HPoint p, q, r;
    Orientation orientation = Orientation::Degenerate;
};

struct TriangleChain {
    std::vector<HPoint> c_vertices;
    std::vector<HPoint> b_vertices;
    std::vector<ChainTriangle> triangles;
    std::vector<double> beta;
};

namespace detail {

inline RotationData regular_rotation(const RealMatrix& m, double tol, const std::string& name) {
    if (classify_element(m, tol) != ElementClass::EllipticRegular) throw NotRegular(name);
    return rotation_data(m, tol);
}

}  // namespace detail

inline TriangleChain build_chain(const RealRep& r, double tol_area = kDefaultAreaTol) {
    const Presentation& p = r.presentation();
    if (p.genus != 0) throw WrongGenus("triangle chains are defined for punctured spheres");
    const int n = p.punctures;
    if (n < 3) throw PreconditionError("triangle chains need at least three punctures");
    TriangleChain ch;
    for (int j = 1; j <= n; ++j)
        ch.c_vertices.push_back(detail::regular_rotation(r.peripheral(j), r.tol(), "c" + std::to_string(j)).centre);
    for (int i = 1; i <= n - 3; ++i) {
        const RotationData rd = detail::regular_rotation(r.evaluate(pants_word(i)), r.tol(), "b" + std::to_string(i));
        ch.b_vertices.push_back(rd.centre);
        ch.beta.push_back(rd.angle);
    }
    auto add = [&](const HPoint& x, const HPoint& y, const HPoint& z) {
        ch.triangles.push_back({x, y, z, triangle_orientation(x, y, z, tol_area)});
    };
    const auto& C = ch.c_vertices;
    const auto& B = ch.b_vertices;
    if (n == 3) {
        add(C[0], C[1], C[2]);
        return ch;
    }
    add(C[0], C[1], B[0]);
    for (int k = 2; k <= n - 3; ++k) add(B[k - 2], C[k], B[k - 1]);
    add(B[n - 4], C[n - 2], C[n - 1]);
    return ch;
}

/// Common orientation of the non-degenerate triangles, if there is one.
inline std::optional<Orientation> chain_orientation(const TriangleChain& ch) {
    std::optional<Orientation> o;
    for (const ChainTriangle& t : ch.triangles) {
        if (t.orientation == Orientation::Degenerate) continue;
        if (o && *o != t.orientation) return std::nullopt;
        o = t.orientation;
    }
    return o;
}

inline bool is_dt_chain(const TriangleChain& ch) { return chain_orientation(ch).has_value(); }

inline bool has_degenerate_triangle(const TriangleChain& ch) {
    for (const ChainTriangle& t : ch.triangles)
        if (t.orientation == Orientation::Degenerate) return true;
    return false;
}

// ---------------------------------------------------------------------------
// Feasible pants angles

struct BetaInterval {
    double lo, hi;
};

struct FeasibleBetas {
    Orientation orientation = Orientation::AntiClockwise;
    std::vector<BetaInterval> intervals;  // marginal range of each beta_k
    std::vector<double> beta;             // an interior point of the region
};

namespace detail {

inline Orientation dt_orientation(std::span<const double> alpha) {
    check_angles(alpha);
    const int n = static_cast<int>(alpha.size());
    const double s = angle_sum(alpha);
    if (s < kTwoPi) return Orientation::AntiClockwise;
    if (s > kTwoPi * (n - 1)) return Orientation::Clockwise;
    throw Infeasible("angle sum lies outside the DT band");
}

inline std::vector<double> mirrored(std::span<const double> v) {
    std::vector<double> out;
    for (double x : v) out.push_back(kTwoPi - x);
    return out;
}

// anticlockwise case only
inline FeasibleBetas feasible_ccw(const std::vector<double>& a) {
    const int n = static_cast<int>(a.size());
    const double delta = kTwoPi - angle_sum(a);
    FeasibleBetas fb;
    double head = a[0];
    for (int k = 1; k <= n - 3; ++k) {
        head += a[static_cast<std::size_t>(k)];
        double tail = 0.0;
        for (int j = k + 2; j <= n; ++j) tail += a[static_cast<std::size_t>(j - 1)];
        fb.intervals.push_back({tail, kTwoPi - head});
        // equal slack in every triangle inequality
        fb.beta.push_back(kTwoPi - head - k * delta / (n - 2));
    }
    return fb;
}

}  // namespace detail

/// Pants angles of a DT chain satisfy
///   a1 + a2 + b1 < 2pi,  b_k + a_{k+1} < b_{k-1},  b_{n-3} > a_{n-1} + a_n
/// (anticlockwise); the clockwise region is the mirror image.
inline FeasibleBetas dt_feasible_betas(std::span<const double> alpha) {
    if (alpha.size() < 3) throw PreconditionError("need at least three punctures");
    const Orientation o = detail::dt_orientation(alpha);
    if (o == Orientation::AntiClockwise) return detail::feasible_ccw({alpha.begin(), alpha.end()});
    FeasibleBetas fb = detail::feasible_ccw(detail::mirrored(alpha));
    fb.orientation = Orientation::Clockwise;
    for (BetaInterval& iv : fb.intervals) iv = {kTwoPi - iv.hi, kTwoPi - iv.lo};
    for (double& b : fb.beta) b = kTwoPi - b;
    return fb;
}

inline FeasibleBetas dt_feasible_betas(std::span<const double> alpha, Orientation expected) {
    FeasibleBetas fb = dt_feasible_betas(alpha);
    if (fb.orientation != expected) throw Infeasible("angles do not admit a chain of that orientation");
    return fb;
}

/// True iff beta satisfies every strict chain inequality for alpha.
inline bool betas_feasible(std::span<const double> alpha, std::span<const double> beta) {
    const int n = static_cast<int>(alpha.size());
    if (static_cast<int>(beta.size()) != n - 3) return false;
    Orientation o;
    try {
        o = detail::dt_orientation(alpha);
    } catch (const Infeasible&) {
        return false;
    }
    std::vector<double> a(alpha.begin(), alpha.end()), b(beta.begin(), beta.end());
    if (o == Orientation::Clockwise) {
        a = detail::mirrored(a);
        b = detail::mirrored(b);
    }
    for (double x : b)
        if (!(x > 0.0 && x < kTwoPi)) return false;
    if (n == 3) return true;
    if (!(a[0] + a[1] + b[0] < kTwoPi)) return false;
    for (int k = 2; k <= n - 3; ++k)
        if (!(b[static_cast<std::size_t>(k - 1)] + a[static_cast<std::size_t>(k)] < b[static_cast<std::size_t>(k - 2)]))
            return false;
    return b[static_cast<std::size_t>(n - 4)] > a[static_cast<std::size_t>(n - 2)] + a[static_cast<std::size_t>(n - 1)];
}

// ---------------------------------------------------------------------------
// Construction

/// Side length between the vertices with angles A and B, opposite C.
inline double triangle_side(double A, double B, double C) {
    if (A + B + C >= kPi - 1e-12) throw NumericalCollapse("triangle angle sum reaches pi");
    const double ch = (std::cos(C) + std::cos(A) * std::cos(B)) / (std::sin(A) * std::sin(B));
    if (!(ch >= 1.0) || !std::isfinite(ch)) throw NumericalCollapse("no hyperbolic triangle with these angles");
    return std::acosh(ch);
}

/// A DT representation with peripheral angles alpha and pants angles beta
/// (default: the equal-slack point of the feasible region).
inline RealRep construct_dt(std::span<const double> alpha, std::optional<std::vector<double>> beta = std::nullopt,
                            std::uint64_t seed = 0, double tol = kDefaultTol) {
    const int n = static_cast<int>(alpha.size());
    if (n < 3) throw PreconditionError("need at least three punctures");
    const Orientation o = detail::dt_orientation(alpha);
    std::vector<double> bet = beta ? *beta : dt_feasible_betas(alpha).beta;
    if (!betas_feasible(alpha, bet)) throw Infeasible("pants angles violate the chain inequalities");

    std::vector<double> a(alpha.begin(), alpha.end());
    if (o == Orientation::Clockwise) {
        a = detail::mirrored(a);
        bet = detail::mirrored(bet);
    }
    auto A = [&](int j) { return a[static_cast<std::size_t>(j - 1)]; };
    auto Bt = [&](int k) { return bet[static_cast<std::size_t>(k - 1)]; };

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dir(0.0, kTwoPi);

    std::vector<RealMatrix> imgs;
    imgs.push_back(rotation_about(HPoint{}, A(1)));
    RealMatrix prefix = imgs.back();
    HPoint pivot{};  // C1, then B1, B2, ...
    for (int t = 1; t <= n - 2; ++t) {
        const double a1 = t == 1 ? 0.5 * A(1) : kPi - 0.5 * Bt(t - 1);
        const double a2 = 0.5 * A(t + 1);
        const double a3 = t == n - 2 ? 0.5 * A(n) : 0.5 * Bt(t);
        const double d = triangle_side(a1, a2, a3);
        const HPoint next = point_at(pivot, d, t == 1 ? 0.0 : dir(rng));
        imgs.push_back(rotation_about(next, A(t + 1)));
        prefix = prefix * imgs.back();
        if (t < n - 2) {
            const RealMatrix bt = prefix.inverse();
            if (classify_element(bt, tol) != ElementClass::EllipticRegular)
                throw NumericalCollapse("pants image lost regular ellipticity");
            pivot = rotation_data(bt, tol).centre;
        }
    }
    imgs.push_back(prefix.inverse());
    const RealMatrix& last = imgs.back();
    if (classify_element(last, tol) != ElementClass::EllipticRegular ||
        std::abs(rotation_data(last, tol).angle - A(n)) > 1e-7)
        throw NumericalCollapse("last peripheral image does not close up");

    if (o == Orientation::Clockwise) {
        for (RealMatrix& m : imgs) m = RealMatrix{m.a, -m.b, -m.c, m.d};
    }
    return RealRep::checked(Presentation{0, n}, std::move(imgs), tol);
}

inline double toledo_dt(std::span<const double> alpha) {
    const int n = static_cast<int>(alpha.size());
    const double s = angle_sum(alpha);
    if (s < kTwoPi) return 1.0 - s / kTwoPi;
    if (s > kTwoPi * (n - 1)) return (n - 1) - s / kTwoPi;
    throw OutsideDTBand("angle sum lies outside the DT band");
}

/// The 4-punctured representation on the sub-sphere bounded by
/// b_{i-1}^-1, c_{i+1}, c_{i+2}, b_{i+1} (with b_0 = c_1^-1, b_{n-2} = c_n).
inline RealRep restrict_subsphere(const RealRep& r, int i) {
    const Presentation& p = r.presentation();
    if (p.genus != 0) throw WrongGenus("sub-sphere restriction needs genus 0");
    const int n = p.punctures;
    if (n < 4) throw PreconditionError("sub-sphere restriction needs at least four punctures");
    if (i < 1 || i > n - 3) throw PreconditionError("sub-sphere index out of range");
    if (n == 4) return r;
    auto bword = [&](int k) { return k == 0 ? c(1).inverse() : (k == n - 2 ? c(n) : pants_word(k)); };
    std::vector<RealMatrix> imgs{r.evaluate(bword(i - 1).inverse()), r.peripheral(i + 1), r.peripheral(i + 2),
                                 r.evaluate(bword(i + 1))};
    const std::string names[4] = {"b" + std::to_string(i - 1), "c" + std::to_string(i + 1),
                                  "c" + std::to_string(i + 2), "b" + std::to_string(i + 1)};
    for (int k = 0; k < 4; ++k) detail::regular_rotation(imgs[static_cast<std::size_t>(k)], r.tol(), names[k]);
    return RealRep(Presentation{0, 4}, std::move(imgs), r.tol());
}

}  // namespace telliptic
