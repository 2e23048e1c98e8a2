#pragma once

// Representations of surface groups into PSL(2,R) and PSL(2,C).

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "telliptic/moebius.hpp"
#include "telliptic/surface.hpp"

namespace telliptic {

template <class T>
class Representation {
public:
    using Matrix = Mat2<T>;

    Representation(Presentation p, std::vector<Matrix> images, double tol = kDefaultTol)
        : presentation_(p), images_(std::move(images)), tol_(tol) {
        if (static_cast<int>(images_.size()) != p.generator_count())
            throw PreconditionError("representation needs one image per generator");
        if (!(tol > 0.0)) throw PreconditionError("tolerance must be positive");
        for (Matrix& m : images_) {
            if (std::abs(m.det()) < 1e-300) throw PreconditionError("singular generator image");
            m = m.normalized();
        }
    }

    /// Same as the constructor but rejects images that violate the surface relation.
    static Representation checked(Presentation p, std::vector<Matrix> images,
                                  double tol = kDefaultTol) {
        Representation r(p, std::move(images), tol);
        const double res = r.relation_residual();
        if (res > tol) throw RelationViolated(res, tol);
        return r;
    }

    const Presentation& presentation() const { return presentation_; }
    const std::vector<Matrix>& images() const { return images_; }
    double tol() const { return tol_; }
    static constexpr Field field() { return field_of<T>(); }

    const Matrix& image(GenKind kind, int index) const {
        return images_[static_cast<std::size_t>(presentation_.generator_index(kind, index))];
    }
    const Matrix& peripheral(int j) const { return image(GenKind::C, j); }

    Matrix evaluate(const Word& w) const {
        Matrix m = Matrix::identity();
        for (const Letter& l : w.letters()) {
            const Matrix& g = image(l.kind, l.index);
            m = m * (l.inverse ? g.inverse() : g);
        }
        return m;
    }

    double relation_residual() const { return distance_to_identity(evaluate(relation_word(presentation_))); }

    /// x -> g rho(x) g^-1
    Representation conjugated(const Matrix& g) const {
        const Matrix gn = g.normalized();
        const Matrix gi = gn.inverse();
        std::vector<Matrix> imgs;
        imgs.reserve(images_.size());
        for (const Matrix& m : images_) imgs.push_back(gn * m * gi);
        return Representation(presentation_, std::move(imgs), tol_);
    }

    Representation with_images(std::vector<Matrix> images) const {
        return Representation(presentation_, std::move(images), tol_);
    }

private:
    Presentation presentation_;
    std::vector<Matrix> images_;
    double tol_;
};

using RealRep = Representation<double>;
using ComplexRep = Representation<cplx>;

inline ComplexRep complexified(const RealRep& r) {
    std::vector<ComplexMatrix> imgs;
    for (const RealMatrix& m : r.images()) imgs.push_back(to_complex(m));
    return ComplexRep(r.presentation(), std::move(imgs), r.tol());
}

template <class T>
bool is_reduced(const Representation<T>& r) {
    for (int j = 1; j <= r.presentation().punctures; ++j) {
        if (classify_element(r.peripheral(j), r.tol()) == ElementClass::Identity) return false;
    }
    return true;
}

/// First puncture (1-based) whose image is the identity, or 0.
template <class T>
int first_trivial_peripheral(const Representation<T>& r) {
    for (int j = 1; j <= r.presentation().punctures; ++j) {
        if (classify_element(r.peripheral(j), r.tol()) == ElementClass::Identity) return j;
    }
    return 0;
}

struct PeripheralData {
    std::vector<double> angles;
    double total = 0.0;
};

inline PeripheralData peripheral_data(const RealRep& r) {
    PeripheralData pd;
    for (int j = 1; j <= r.presentation().punctures; ++j) {
        const RealMatrix& m = r.peripheral(j);
        const ElementClass cls = classify_element(m, r.tol());
        if (cls == ElementClass::Identity) throw NotReduced(j);
        if (cls != ElementClass::EllipticRegular) throw NonEllipticPeripheral(j);
        pd.angles.push_back(rotation_data(m, r.tol()).angle);
        pd.total += pd.angles.back();
    }
    return pd;
}

// ---------------------------------------------------------------------------
// Total ellipticity up to a budget

enum class EllipticityStatus { Certified, Witness, Inconclusive, NotApplicable };

inline std::string to_string(EllipticityStatus s) {
    switch (s) {
        case EllipticityStatus::Certified: return "Certified";
        case EllipticityStatus::Witness: return "Witness";
        case EllipticityStatus::Inconclusive: return "Inconclusive";
        case EllipticityStatus::NotApplicable: return "NotApplicable";
    }
    return "?";
}

struct CurveImage {
    CurveClass curve;
    ElementClass cls;
    double abs_trace;
};

struct EllipticityReport {
    EllipticityStatus status = EllipticityStatus::NotApplicable;
    std::optional<CurveImage> witness;
    std::vector<CurveImage> inconclusive;  // boundary cases inside the parabolic band
    int curves_checked = 0;
    SccBudget budget;
    double max_abs_trace = 0.0;  // over certified elliptic images
    std::string scope;           // "enumerated" or "seed-family"
};

/// The curve classes a certification run checks, in stream order.
inline std::vector<CurveClass> certification_curves(const Presentation& p, const SccBudget& budget,
                                                    std::uint64_t seed) {
    if (p.genus == 0 && p.punctures >= 3) return enumerate_scc(p, budget, seed);
    if (budget.max_curves <= 0) throw BudgetZero("certification budget must be positive");
    std::vector<CurveClass> seeds = scc_seed_family(p);
    if (static_cast<int>(seeds.size()) > budget.max_curves)
        seeds.resize(static_cast<std::size_t>(budget.max_curves));
    return seeds;
}

/// Evaluates every curve in scope; the first non-elliptic image is the witness.
/// Certified only ever means "up to the budget".
template <class T>
EllipticityReport certify_totally_elliptic(const Representation<T>& r, const SccBudget& budget,
                                           std::uint64_t seed = 0) {
    EllipticityReport rep;
    rep.budget = budget;
    const Presentation& p = r.presentation();
    rep.scope = (p.genus == 0 && p.punctures >= 3) ? "enumerated" : "seed-family";
    const std::vector<CurveClass> curves = certification_curves(p, budget, seed);
    if (curves.empty()) return rep;
    for (const CurveClass& cc : curves) {
        const auto m = r.evaluate(cc.representative);
        ++rep.curves_checked;
        const double at = abs_trace(m);
        try {
            const ElementClass cls = classify_element(m, r.tol(), Strictness::Strict);
            if (!is_elliptic(cls)) {
                rep.status = EllipticityStatus::Witness;
                rep.witness = CurveImage{cc, cls, at};
                return rep;
            }
            if (cls == ElementClass::EllipticRegular) rep.max_abs_trace = std::max(rep.max_abs_trace, at);
        } catch (const AmbiguousClass&) {
            rep.inconclusive.push_back({cc, ElementClass::Parabolic, at});
        }
    }
    rep.status = rep.inconclusive.empty() ? EllipticityStatus::Certified : EllipticityStatus::Inconclusive;
    return rep;
}

// ---------------------------------------------------------------------------

struct OrthogonalCheck {
    bool orthogonal = false;
    std::optional<HPoint> centre;
};

/// All non-identity generator images are regular elliptic with one common centre.
inline OrthogonalCheck is_orthogonal(const RealRep& r, double centre_tol = 1e-8) {
    std::optional<HPoint> centre;
    for (const RealMatrix& m : r.images()) {
        const ElementClass cls = classify_element(m, r.tol());
        if (cls == ElementClass::Identity) continue;
        if (cls != ElementClass::EllipticRegular) return {false, std::nullopt};
        const HPoint q = rotation_data(m, r.tol()).centre;
        if (!centre) {
            centre = q;
        } else if (hyperbolic_distance(*centre, q) > centre_tol) {
            return {false, std::nullopt};
        }
    }
    return {true, centre.value_or(HPoint{})};
}

// ---------------------------------------------------------------------------
// Normal form under conjugation

/// Conjugates r so that the first regular elliptic generator centre is i and
/// the next centre distinct from it lies on the imaginary axis above i.
inline RealRep normalized(const RealRep& r) {
    std::vector<HPoint> centres;
    for (const RealMatrix& m : r.images()) {
        if (classify_element(m, r.tol()) == ElementClass::EllipticRegular)
            centres.push_back(rotation_data(m, r.tol()).centre);
    }
    if (centres.empty()) return r;
    const RealMatrix to_i = translation_to(centres.front()).inverse();
    RealMatrix g = to_i;
    for (std::size_t k = 1; k < centres.size(); ++k) {
        const cplx q = act(to_i, centres[k].z);
        if (hyperbolic_distance(HPoint(q), HPoint{}) < 1e-9) continue;
        const cplx w = (q - cplx(0, 1)) / (q + cplx(0, 1));
        // disk direction of i*e^d is +1; rotate by -arg(w)
        const double phi = -std::arg(w);
        g = standard_rotation(phi) * to_i;
        break;
    }
    return r.conjugated(g);
}

// ---------------------------------------------------------------------------
// Sampling in relative character varieties of punctured spheres

struct SampleOptions {
    int attempts = 10000;
    std::uint64_t seed = 0;
    double radius = 2.0;       // hyperbolic radius of the centre disk about i
    double angle_tol = 1e-7;   // acceptance tolerance on the last peripheral angle
    int ray_samples = 64;      // grid resolution of the last-centre search
    double tol = kDefaultTol;  // tolerance of the produced representation
};

struct SampleResult {
    std::optional<RealRep> rep;
    int attempts_made = 0;
    int trace_roots = 0;        // roots of the trace equation found along rays
    int wrong_angle_roots = 0;  // roots rejected because the angle was 2pi - alpha_n
    bool proven_empty = false;  // n = 3 with |alpha| strictly inside (2pi, 4pi)
};

namespace detail {

inline HPoint sample_disk_point(std::mt19937_64& rng, double radius) {
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    const double r = std::acosh(1.0 + u01(rng) * (std::cosh(radius) - 1.0));
    const double phi = kTwoPi * u01(rng);
    return point_at(HPoint{}, r, phi);
}

}  // namespace detail

/// Draws centres p_1..p_{n-2} in a hyperbolic disk and searches a random
/// geodesic ray from p_{n-2} for p_{n-1} such that the forced image of c_n has
/// rotation angle alpha_n. An attempt is rejected when no such point exists on
/// the ray.
inline SampleResult sample_relative(const Presentation& p, std::span<const double> alpha,
                                    const SampleOptions& opt) {
    if (p.genus != 0) throw WrongGenus("sample_relative requires genus 0");
    const int n = p.punctures;
    if (static_cast<int>(alpha.size()) != n) throw PreconditionError("one angle per puncture");
    if (n < 3) throw PreconditionError("sampling needs at least three punctures");
    double total = 0.0;
    for (double x : alpha) {
        if (!(x > 0.0 && x < kTwoPi)) throw PreconditionError("peripheral angles lie in (0, 2pi)");
        total += x;
    }
    SampleResult res;
    res.proven_empty = n == 3 && total > kTwoPi + 1e-9 && total < 2.0 * kTwoPi - 1e-9;

    std::mt19937_64 rng(opt.seed);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    const double alpha_last = alpha[static_cast<std::size_t>(n - 1)];
    const double target = 2.0 * std::abs(std::cos(0.5 * alpha_last));
    const double ray_length = 2.0 * opt.radius + 6.0;

    for (int attempt = 0; attempt < opt.attempts; ++attempt) {
        ++res.attempts_made;
        RealMatrix prefix = RealMatrix::identity();
        std::vector<RealMatrix> imgs;
        HPoint last_centre;
        for (int j = 0; j < n - 2; ++j) {
            last_centre = detail::sample_disk_point(rng, opt.radius);
            imgs.push_back(rotation_about(last_centre, alpha[static_cast<std::size_t>(j)]));
            prefix = prefix * imgs.back();
        }
        const double dir = kTwoPi * u01(rng);
        const double a_prev = alpha[static_cast<std::size_t>(n - 2)];
        auto candidate = [&](double t) {
            return rotation_about(point_at(last_centre, t, dir), a_prev);
        };
        auto f = [&](double t) { return abs_trace(prefix * candidate(t)) - target; };

        const double t0 = 1e-6;
        double prev_t = t0, prev_f = f(t0);
        for (int s = 1; s <= opt.ray_samples && !res.rep; ++s) {
            const double t = t0 + (ray_length - t0) * s / opt.ray_samples;
            const double ft = f(t);
            if ((prev_f < 0.0) != (ft < 0.0)) {
                double lo = prev_t, hi = t, flo = prev_f;
                for (int it = 0; it < 200 && hi - lo > 1e-15 * (1.0 + hi); ++it) {
                    const double mid = 0.5 * (lo + hi);
                    const double fm = f(mid);
                    if ((fm < 0.0) == (flo < 0.0)) {
                        lo = mid;
                        flo = fm;
                    } else {
                        hi = mid;
                    }
                }
                ++res.trace_roots;
                const double troot = 0.5 * (lo + hi);
                const RealMatrix mlast = candidate(troot);
                const RealMatrix forced = (prefix * mlast).inverse();
                if (classify_element(forced, opt.tol) == ElementClass::EllipticRegular) {
                    const double ang = rotation_data(forced, opt.tol).angle;
                    if (std::abs(ang - alpha_last) <= opt.angle_tol) {
                        std::vector<RealMatrix> full = imgs;
                        full.push_back(mlast);
                        full.push_back(forced);
                        res.rep = RealRep(p, std::move(full), opt.tol);
                    } else {
                        ++res.wrong_angle_roots;
                    }
                }
            }
            prev_t = t;
            prev_f = ft;
        }
        if (res.rep) break;
    }
    return res;
}

// ---------------------------------------------------------------------------
// Pure mapping class group action

/// rho'(c_m) = rho(T(c_m)) for the twist T along the window.
template <class T>
Representation<T> mcg_twist(const Representation<T>& r, const TwistWindow& win, int power) {
    const Presentation& p = r.presentation();
    check_window(win, p);
    if (power == 0) return r;
    std::vector<Mat2<T>> imgs;
    imgs.reserve(r.images().size());
    for (int j = 1; j <= p.punctures; ++j)
        imgs.push_back(r.evaluate(dehn_twist_genus0(c(j), win, power, p)));
    return r.with_images(std::move(imgs));
}

/// Pulls a genus-0 representation back onto its relative character variety:
/// rho(c_j) for j < n becomes the exact rotation by alpha_j about its current
/// centre and rho(c_n) is recomputed from the relation.
inline RealRep reproject(const RealRep& r, std::span<const double> alpha) {
    const int n = r.presentation().punctures;
    std::vector<RealMatrix> imgs;
    RealMatrix prefix = RealMatrix::identity();
    for (int j = 1; j < n; ++j) {
        const RotationData rd = rotation_data(r.peripheral(j), r.tol());
        imgs.push_back(rotation_about(rd.centre, alpha[static_cast<std::size_t>(j - 1)]));
        prefix = prefix * imgs.back();
    }
    imgs.push_back(prefix.inverse());
    return r.with_images(std::move(imgs));
}

struct OrbitStep {
    int iterate = 0;
    TwistWindow window;
    int power = 0;
    std::vector<double> abs_traces;  // over the seed family, in its order
    double max_abs_trace = 0.0;
};

struct OrbitSummary {
    int iterations = 0;
    double sup_max_abs_trace = 0.0;
    std::optional<int> first_exceeding;  // first iterate whose max |tr| exceeds the threshold
    double relation_residual = 0.0;      // of the final iterate
    std::vector<std::string> columns;    // seed-family words
    std::string normalization;
    bool reprojected = false;  // iterates pulled back onto the peripheral angles
    bool diverged = false;     // stopped early, entries too large to stay accurate
};

/// Applies `iterations` random twists (uniform window, power +-1), normalizing
/// each iterate under conjugation, and records |tr| over the seed family.
inline OrbitSummary run_twist_orbit(const RealRep& start, int iterations, std::uint64_t seed,
                                    double threshold = 2.0,
                                    const std::function<void(const OrbitStep&)>& sink = {}) {
    const Presentation& p = start.presentation();
    if (p.genus != 0) throw WrongGenus("twist orbits are defined for punctured spheres");
    const std::vector<TwistWindow> windows = twist_windows(p);
    if (windows.empty()) throw PreconditionError("no twist windows for this presentation");
    const std::vector<CurveClass> family = scc_seed_family(p);

    OrbitSummary sum;
    sum.normalization = "first elliptic centre at i, next centre on the imaginary axis above i";
    for (const CurveClass& cc : family) sum.columns.push_back(cc.to_string());

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, windows.size() - 1);
    std::uniform_int_distribution<int> coin(0, 1);
    // Without re-projection, rounding errors in the relation are conjugated
    // by the accumulated normalizers and grow exponentially. Re-projection
    // needs regular elliptic peripherals.
    std::optional<std::vector<double>> alpha;
    try {
        alpha = peripheral_data(start).angles;
    } catch (const Error&) {
    }
    sum.reprojected = alpha.has_value();
    RealRep cur = normalized(start);
    for (int it = 1; it <= iterations; ++it) {
        OrbitStep step;
        step.iterate = it;
        step.window = windows[pick(rng)];
        step.power = coin(rng) ? 1 : -1;
        try {
            cur = mcg_twist(cur, step.window, step.power);
            if (alpha) cur = reproject(cur, *alpha);
            cur = normalized(cur);
        } catch (const Error&) {
            sum.diverged = true;
            break;
        }
        double biggest = 0.0;
        for (const RealMatrix& m : cur.images()) biggest = std::max(biggest, max_abs_entry(m));
        // past this size determinants lose all precision
        if (!(biggest < 1e7)) {
            sum.diverged = true;
            break;
        }
        for (const CurveClass& cc : family) {
            const double t = abs_trace(cur.evaluate(cc.representative));
            step.abs_traces.push_back(t);
            step.max_abs_trace = std::max(step.max_abs_trace, t);
        }
        sum.sup_max_abs_trace = std::max(sum.sup_max_abs_trace, step.max_abs_trace);
        if (!sum.first_exceeding && step.max_abs_trace > threshold) sum.first_exceeding = it;
        if (sink) sink(step);
        ++sum.iterations;
    }
    sum.relation_residual = cur.relation_residual();
    return sum;
}

}  // namespace telliptic
