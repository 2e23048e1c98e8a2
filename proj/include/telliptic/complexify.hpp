#pragma once

// PSL(2,C) machinery: upper-triangular cocycles, irreducibility, invariant
// Hermitian forms and reducible totally elliptic examples.

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "telliptic/moebius.hpp"
#include "telliptic/rep.hpp"
#include "telliptic/surface.hpp"

namespace telliptic {

// ---------------------------------------------------------------------------
// Upper-triangular data: rho(g) = [[lambda, z/lambda], [0, 1/lambda]]

struct UpperTriangularData {
    Presentation presentation;
    std::vector<cplx> lambda;  // generator order
    std::vector<cplx> z;

    UpperTriangularData(Presentation p, std::vector<cplx> lam, std::vector<cplx> zz, double tol = 1e-9)
        : presentation(p), lambda(std::move(lam)), z(std::move(zz)) {
        const auto m = static_cast<std::size_t>(p.generator_count());
        if (lambda.size() != m || z.size() != m) throw PreconditionError("one lambda and one z per generator");
        for (const cplx& l : lambda)
            if (std::abs(std::abs(l) - 1.0) > tol) throw PreconditionError("lambda values must have modulus 1");
    }

    ComplexMatrix matrix(std::size_t k) const {
        const cplx l = lambda[k];
        return {l, z[k] / l, 0.0, 1.0 / l};
    }
};

struct CocycleValue {
    cplx lambda{1.0, 0.0};
    cplx z{0.0, 0.0};
};

/// Left fold of z(xy) = z(x) + lambda(x)^2 z(y).
inline CocycleValue cocycle_extend(const UpperTriangularData& d, const Word& w) {
    CocycleValue acc;
    for (const Letter& l : w.letters()) {
        const auto k = static_cast<std::size_t>(d.presentation.generator_index(l.kind, l.index));
        cplx lam = d.lambda[k], zz = d.z[k];
        if (l.inverse) {
            zz = -zz / (lam * lam);
            lam = 1.0 / lam;
        }
        acc.z += acc.lambda * acc.lambda * zz;
        acc.lambda *= lam;
    }
    return acc;
}

inline ComplexRep to_representation(const UpperTriangularData& d, double tol = kDefaultTol) {
    std::vector<ComplexMatrix> imgs;
    for (std::size_t k = 0; k < d.lambda.size(); ++k) imgs.push_back(d.matrix(k));
    return ComplexRep(d.presentation, std::move(imgs), tol);
}

/// The commutator [g1, g2] is unipotent with off-diagonal entry z(g1 g2) - z(g2 g1).
inline ComplexMatrix triangular_commutator(const UpperTriangularData& d, const Word& g1, const Word& g2) {
    const cplx diff = cocycle_extend(d, g1 * g2).z - cocycle_extend(d, g2 * g1).z;
    return {1.0, diff, 0.0, 1.0};
}

// ---------------------------------------------------------------------------
// Irreducibility

namespace detail {

// Eigenlines of a non-scalar 2x2 matrix (one line when parabolic).
inline std::vector<Eigen::Vector2cd> eigenlines(const ComplexMatrix& m, double tol) {
    const ComplexMatrix g = m.normalized();
    const cplx tr = g.trace();
    const cplx disc = std::sqrt(tr * tr - 4.0);
    std::vector<Eigen::Vector2cd> out;
    for (const cplx mu : {(tr + disc) / 2.0, (tr - disc) / 2.0}) {
        Eigen::Vector2cd v1(g.b, mu - g.a), v2(mu - g.d, g.c);
        Eigen::Vector2cd v = v1.norm() >= v2.norm() ? v1 : v2;
        if (v.norm() <= tol) continue;
        v.normalize();
        bool dup = false;
        for (const auto& w : out) dup = dup || std::abs(v(0) * w(1) - v(1) * w(0)) <= 1e-9;
        if (!dup) out.push_back(v);
    }
    return out;
}

inline bool is_scalar(const ComplexMatrix& m, double tol) {
    const ComplexMatrix g = m.normalized();
    return std::abs(g.b) <= tol && std::abs(g.c) <= tol && std::abs(g.a - g.d) <= tol;
}

inline bool preserves_line(const ComplexMatrix& m, const Eigen::Vector2cd& v, double tol) {
    const ComplexMatrix g = m.normalized();
    const Eigen::Vector2cd gv(g.a * v(0) + g.b * v(1), g.c * v(0) + g.d * v(1));
    return std::abs(gv(0) * v(1) - gv(1) * v(0)) <= tol * std::max(1.0, gv.norm());
}

}  // namespace detail

/// True iff the image has no common eigenline. Checks the generators and a
/// fixed sample of 16 random words.
inline bool is_irreducible(const ComplexRep& r, double line_tol = 1e-7) {
    std::vector<ComplexMatrix> probe = r.images();
    std::mt19937_64 rng(0x5eedULL);
    const int m = r.presentation().generator_count();
    std::uniform_int_distribution<int> gen(0, m - 1), len(2, 6), coin(0, 1);
    for (int s = 0; s < 16 && m > 0; ++s) {
        ComplexMatrix w = ComplexMatrix::identity();
        for (int k = len(rng); k > 0; --k) {
            const ComplexMatrix& g = r.images()[static_cast<std::size_t>(gen(rng))];
            w = w * (coin(rng) ? g : g.inverse());
        }
        probe.push_back(w);
    }
    std::vector<Eigen::Vector2cd> candidates;
    for (const ComplexMatrix& g : probe) {
        if (detail::is_scalar(g, line_tol)) continue;
        candidates = detail::eigenlines(g, line_tol);
        break;
    }
    if (candidates.empty()) return false;  // image is trivial
    for (const auto& v : candidates) {
        bool common = true;
        for (const ComplexMatrix& g : probe) common = common && detail::preserves_line(g, v, line_tol);
        if (common) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Invariant Hermitian forms

struct FormSolve {
    int null_dim = 0;
    std::vector<ComplexMatrix> basis;  // Hermitian forms spanning the invariant space
    std::vector<double> singular_values;
};

struct UnitaryCheck {
    bool unitary = false;
    std::optional<ComplexMatrix> form;  // positive-definite invariant form when unitary
    FormSolve solve;
};

inline constexpr double kNullRatio = 1e-8;
inline constexpr double kAmbiguousRatio = 1e-5;

namespace detail {

inline ComplexMatrix hermitian_basis(int k) {
    const cplx I(0.0, 1.0);
    switch (k) {
        case 0: return {1.0, 0.0, 0.0, 0.0};
        case 1: return {0.0, 0.0, 0.0, 1.0};
        case 2: return {0.0, 1.0, 1.0, 0.0};
        default: return {0.0, I, -I, 0.0};
    }
}

inline ComplexMatrix combine(const Eigen::Vector4d& x) {
    ComplexMatrix h{0.0, 0.0, 0.0, 0.0};
    for (int k = 0; k < 4; ++k) {
        const ComplexMatrix e = hermitian_basis(k);
        h = ComplexMatrix{h.a + x(k) * e.a, h.b + x(k) * e.b, h.c + x(k) * e.c, h.d + x(k) * e.d};
    }
    return h;
}

inline bool positive_definite(const ComplexMatrix& h, double rel_tol = 1e-10) {
    const double p = h.a.real(), t = h.d.real();
    const double det = p * t - std::norm(h.b);
    const double scale = std::max({std::abs(p), std::abs(t), std::abs(h.b)});
    return p > 0.0 && t > 0.0 && det > rel_tol * scale * scale;
}

}  // namespace detail

/// Solves g* H g = H over all generator images for Hermitian H.
inline FormSolve invariant_forms(const ComplexRep& r) {
    const auto& imgs = r.images();
    const auto rows = static_cast<Eigen::Index>(8 * std::max<std::size_t>(imgs.size(), 1));
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(rows, 4);
    for (std::size_t gi = 0; gi < imgs.size(); ++gi) {
        const ComplexMatrix g = imgs[gi].normalized();
        const ComplexMatrix gs = conjugate_transpose(g);
        for (int k = 0; k < 4; ++k) {
            const ComplexMatrix e = detail::hermitian_basis(k);
            const ComplexMatrix img = gs * e * g;
            const cplx diff[4] = {img.a - e.a, img.b - e.b, img.c - e.c, img.d - e.d};
            for (int q = 0; q < 4; ++q) {
                A(static_cast<Eigen::Index>(8 * gi + 2 * q), k) = diff[q].real();
                A(static_cast<Eigen::Index>(8 * gi + 2 * q + 1), k) = diff[q].imag();
            }
        }
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeFullV);
    const Eigen::VectorXd s = svd.singularValues();
    FormSolve out;
    const double scale = std::max(1.0, s(0));
    for (int k = 0; k < 4; ++k) {
        const double sv = k < s.size() ? s(k) : 0.0;
        out.singular_values.push_back(sv);
        if (sv <= kNullRatio * scale) {
            out.basis.push_back(detail::combine(svd.matrixV().col(k)));
            ++out.null_dim;
        } else if (sv < kAmbiguousRatio * scale) {
            throw IllConditioned("invariant form solve is numerically ambiguous", sv / scale);
        }
    }
    return out;
}

/// Unitary iff some invariant Hermitian form is positive definite.
inline UnitaryCheck is_unitary_conjugate(const ComplexRep& r) {
    UnitaryCheck out;
    out.solve = invariant_forms(r);
    const auto& B = out.solve.basis;
    auto accept = [&](ComplexMatrix h) {
        if (h.a.real() < 0.0) h = -h;
        if (!detail::positive_definite(h)) return false;
        const double s = h.a.real() + h.d.real();
        out.form = ComplexMatrix{h.a / s * 2.0, h.b / s * 2.0, h.c / s * 2.0, h.d / s * 2.0};
        out.unitary = true;
        return true;
    };
    if (B.empty()) return out;
    if (B.size() == 1) {
        accept(B[0]);
        return out;
    }
    // project the identity form onto the invariant space, then sample it
    const ComplexMatrix id = ComplexMatrix::identity();
    std::vector<double> coeff;
    for (const ComplexMatrix& h : B) {
        // real inner product <X,Y> = Re tr(X* Y) on Hermitian matrices
        coeff.push_back((std::conj(h.a) * id.a + std::conj(h.c) * id.c + std::conj(h.b) * id.b +
                         std::conj(h.d) * id.d).real());
    }
    auto sum = [&](const std::vector<double>& w) {
        ComplexMatrix h{0.0, 0.0, 0.0, 0.0};
        for (std::size_t k = 0; k < B.size(); ++k)
            h = ComplexMatrix{h.a + w[k] * B[k].a, h.b + w[k] * B[k].b, h.c + w[k] * B[k].c, h.d + w[k] * B[k].d};
        return h;
    };
    if (accept(sum(coeff))) return out;
    std::mt19937_64 rng(0x10f0ULL);
    std::normal_distribution<double> nd;
    for (int s = 0; s < 512; ++s) {
        std::vector<double> w;
        for (std::size_t k = 0; k < B.size(); ++k) w.push_back(nd(rng));
        if (accept(sum(w))) return out;
    }
    return out;
}

/// For an irreducible representation preserving an indefinite form, conjugates
/// it into PSL(2,R). Returns nothing when the form solve does not single out a
/// signature (1,1) form or the conjugate fails to be real within 1e-6.
inline std::optional<RealRep> real_form_conjugate(const ComplexRep& r) {
    const FormSolve fs = invariant_forms(r);
    if (fs.null_dim != 1) return std::nullopt;
    const ComplexMatrix h = fs.basis[0];
    Eigen::Matrix2cd H;
    H << h.a, h.b, h.c, h.d;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(H);
    const Eigen::Vector2d mu = es.eigenvalues();  // ascending
    const double big = std::max(std::abs(mu(0)), std::abs(mu(1)));
    if (!(mu(0) < -1e-8 * big && mu(1) > 1e-8 * big)) return std::nullopt;
    const Eigen::Matrix2cd U = es.eigenvectors();
    // columns ordered (positive, negative)
    Eigen::Matrix2cd Ud;
    Ud.col(0) = U.col(1) / std::sqrt(mu(1));
    Ud.col(1) = U.col(0) / std::sqrt(-mu(0));
    const cplx I(0.0, 1.0);
    const double s2 = 1.0 / std::sqrt(2.0);
    Eigen::Matrix2cd V;
    V << I * s2, -I * s2, s2, s2;  // eigenvectors of [[0,i],[-i,0]] for +1, -1
    const Eigen::Matrix2cd Q = Ud * V.adjoint();
    const ComplexMatrix q{Q(0, 0), Q(0, 1), Q(1, 0), Q(1, 1)};
    const ComplexMatrix qn = q.normalized();
    const ComplexMatrix qi = qn.inverse();
    std::vector<RealMatrix> imgs;
    for (const ComplexMatrix& g : r.images()) {
        ComplexMatrix x = (qi * g * qn).normalized();
        // projective sign: make the largest entry real-positive-ish
        const double im = std::max({std::abs(x.a.imag()), std::abs(x.b.imag()), std::abs(x.c.imag()),
                                    std::abs(x.d.imag())});
        if (im > 1e-6 * std::max(1.0, max_abs_entry(x))) return std::nullopt;
        imgs.push_back({x.a.real(), x.b.real(), x.c.real(), x.d.real()});
    }
    return RealRep(r.presentation(), std::move(imgs), r.tol());
}

// ---------------------------------------------------------------------------
// Reducible totally elliptic examples on punctured spheres

inline constexpr double kCharacterBand = 1e-6;

inline std::vector<double> default_phases(int count) {
    std::vector<double> out;
    int cand = 2;
    while (static_cast<int>(out.size()) < count) {
        bool prime = true;
        for (int d = 2; d * d <= cand; ++d) prime = prime && cand % d != 0;
        if (prime) {
            const double r = std::sqrt(static_cast<double>(cand));
            out.push_back(kTwoPi * (r - std::floor(r)));
        }
        ++cand;
    }
    return out;
}

/// The character lambda(c_j) = e^{i theta_j}, closed up by lambda(c_n); every
/// proper nonempty subset product must stay away from +-1.
inline UpperTriangularData reducible_example_data(int n, std::optional<std::vector<double>> theta = std::nullopt,
                                                  std::optional<std::vector<cplx>> zvals = std::nullopt,
                                                  double band = kCharacterBand) {
    if (n < 3) throw PreconditionError("the reducible example needs at least three punctures");
    if (n > 24) throw PreconditionError("too many punctures for the exhaustive subset check");
    const std::vector<double> th = theta ? *theta : default_phases(n - 1);
    std::vector<cplx> zz;
    if (zvals) {
        zz = *zvals;
    } else {
        zz.assign(static_cast<std::size_t>(n - 1), 0.0);
        zz[1] = 1.0;
    }
    if (static_cast<int>(th.size()) != n - 1 || static_cast<int>(zz.size()) != n - 1)
        throw PreconditionError("need n-1 phases and n-1 cocycle values");

    std::vector<cplx> lam;
    cplx prod = 1.0;
    for (double t : th) {
        lam.push_back(std::polar(1.0, t));
        prod *= lam.back();
    }
    lam.push_back(1.0 / prod);

    for (std::uint32_t mask = 1; mask + 1 < (1u << n); ++mask) {
        cplx v = 1.0;
        std::vector<int> subset;
        for (int j = 0; j < n; ++j) {
            if (mask & (1u << j)) {
                v *= lam[static_cast<std::size_t>(j)];
                subset.push_back(j + 1);
            }
        }
        if (std::abs(v - 1.0) <= band || std::abs(v + 1.0) <= band) throw ConditionViolated(subset);
    }

    const Presentation p{0, n};
    UpperTriangularData partial(p, lam, [&] {
        std::vector<cplx> z0 = zz;
        z0.push_back(0.0);
        return z0;
    }());
    const CocycleValue pre = cocycle_extend(partial, peripheral_product(1, n - 1));
    zz.push_back(-pre.z / (pre.lambda * pre.lambda));
    for (int j = 0; j < n; ++j) {
        const cplx l = lam[static_cast<std::size_t>(j)];
        if ((std::abs(l - 1.0) <= band || std::abs(l + 1.0) <= band) && std::abs(zz[static_cast<std::size_t>(j)]) <= band)
            throw NotReduced(j + 1);
    }
    return UpperTriangularData(p, std::move(lam), std::move(zz));
}

inline ComplexRep build_reducible_example(int n, std::optional<std::vector<double>> theta = std::nullopt,
                                          std::optional<std::vector<cplx>> zvals = std::nullopt,
                                          double tol = kDefaultTol) {
    return to_representation(reducible_example_data(n, std::move(theta), std::move(zvals)), tol);
}

// ---------------------------------------------------------------------------

struct ComplexTraceReport {
    bool all_real = true;
    std::optional<CurveClass> witness;
    cplx witness_trace{0.0, 0.0};
    int curves_checked = 0;
};

inline ComplexTraceReport classify_complex_traces(const ComplexRep& r, const SccBudget& budget,
                                                  std::uint64_t seed = 0) {
    ComplexTraceReport out;
    for (const CurveClass& cc : certification_curves(r.presentation(), budget, seed)) {
        ++out.curves_checked;
        const ComplexMatrix m = r.evaluate(cc.representative).normalized();
        const cplx t = m.trace();
        if (std::abs(t.imag()) > r.tol() * std::max(1.0, std::abs(t))) {
            out.all_real = false;
            out.witness = cc;
            out.witness_trace = t;
            return out;
        }
    }
    return out;
}

}  // namespace telliptic
