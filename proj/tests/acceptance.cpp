// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include "oracles.hpp"
#include "telliptic/telliptic.hpp"

using namespace telliptic;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& why) {
        if (!ok && pass) {
            pass = false;
            detail = why;
        }
    }
};

std::vector<double> ccw_alpha(std::mt19937_64& rng, int n, double lo, double hi) {
    std::uniform_real_distribution<double> w(0.2, 1.0), f(lo, hi);
    std::vector<double> a(static_cast<std::size_t>(n));
    double s = 0.0;
    for (double& x : a) s += (x = w(rng));
    const double target = f(rng) * kTwoPi;
    for (double& x : a) x *= target / s;
    return a;
}

std::vector<double> mirror(std::vector<double> a) {
    for (double& x : a) x = kTwoPi - x;
    return a;
}

std::vector<double> dt_alpha(std::mt19937_64& rng, int n, bool clockwise) {
    const std::vector<double> a = ccw_alpha(rng, n, 0.02, 0.98);
    return clockwise ? mirror(a) : a;
}

Outcome elliptic_commutator_trichotomy() {
    Outcome o;
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> ang(0.05, kTwoPi - 0.05), dist(0.0, 2.0), dir(0.0, kTwoPi);
    int identity = 0;
    for (int k = 0; k < 10000; ++k) {
        const HPoint p = point_at(HPoint{}, dist(rng), dir(rng));
        const RealMatrix a = rotation_about(p, ang(rng));
        // a fifth of the partners fix the centre of a
        const RealMatrix x = k % 5 == 0 ? rotation_about(p, ang(rng)) : oracle::random_sl2(rng);
        const CommutatorResult cr = commutator_class(a, x);
        o.require(cr.cls == ElementClass::Identity || cr.cls == ElementClass::Hyperbolic,
                  "commutator class " + to_string(cr.cls));
        const bool fixes = hyperbolic_distance(act(x, p), p) < 1e-8;
        o.require((cr.cls == ElementClass::Identity) == fixes, "identity does not match fixing the centre");
        identity += cr.cls == ElementClass::Identity;
    }
    o.detail = o.pass ? std::to_string(identity) + " identity of 10000" : o.detail;
    return o;
}

Outcome pants_table() {
    Outcome o;
    const int N = 51;
    int counts[4] = {0, 0, 0, 0};
    double worst_res = 0.0, worst_angle = 0.0;
    for (int i = 1; i < N; ++i)
        for (int j = 1; j < N; ++j)
            for (int k = 1; k < N; ++k) {
                const std::vector<double> a{kTwoPi * i / N, kTwoPi * j / N, kTwoPi * k / N};
                const PantsConfiguration pc = pants_configuration(a);
                const int s = i + j + k;
                const PantsConfiguration want = s == N || s == 2 * N ? PantsConfiguration::Degenerate
                                                : s < N               ? PantsConfiguration::AntiClockwise
                                                : s > 2 * N           ? PantsConfiguration::Clockwise
                                                                      : PantsConfiguration::Empty;
                o.require(pc == want, "grid triple misclassified");
                ++counts[static_cast<int>(pc)];
                if (pc != PantsConfiguration::AntiClockwise) continue;
                const RealRep r = construct_dt(a);
                worst_res = std::max(worst_res, r.relation_residual());
                const cplx C1 = rotation_data(r.peripheral(1)).centre.z, C2 = rotation_data(r.peripheral(2)).centre.z,
                           C3 = rotation_data(r.peripheral(3)).centre.z;
                worst_angle = std::max({worst_angle, std::abs(oracle::interior_angle(C1, C2, C3) - a[0] / 2),
                                        std::abs(oracle::interior_angle(C2, C3, C1) - a[1] / 2),
                                        std::abs(oracle::interior_angle(C3, C1, C2) - a[2] / 2)});
            }
    for (int t = 0; t < 4; ++t) o.require(counts[t] > 0, "a configuration never appeared");
    o.require(worst_res <= 1e-9, "relation residual " + std::to_string(worst_res));
    o.require(worst_angle <= 1e-8, "interior angle error " + std::to_string(worst_angle));
    if (o.pass) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "%d degenerate, %d ccw, %d cw, %d empty; residual %.1e, angle err %.1e", counts[0],
                      counts[1], counts[2], counts[3], worst_res, worst_angle);
        o.detail = buf;
    }
    return o;
}

Outcome dt_certified() {
    Outcome o;
    std::mt19937_64 rng(103);
    const SccBudget budget{500, 3, 64};
    int curves = 0;
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
        const int n = 3 + k % 6;
        const std::vector<double> a = dt_alpha(rng, n, k % 2 == 1);
        const RealRep r = construct_dt(a, std::nullopt, static_cast<std::uint64_t>(k));
        const EllipticityReport rep = certify_totally_elliptic(r, budget, static_cast<std::uint64_t>(k));
        o.require(rep.status == EllipticityStatus::Certified, "status " + to_string(rep.status));
        for (const CurveClass& cc : certification_curves(r.presentation(), budget, static_cast<std::uint64_t>(k))) {
            const RealMatrix m = r.evaluate(cc.representative);
            o.require(classify_element(m) == ElementClass::EllipticRegular, cc.to_string() + " not regular elliptic");
            worst = std::max(worst, abs_trace(m));
            ++curves;
        }
    }
    o.require(worst < 2.0 - 1e-6, "trace margin too small: " + std::to_string(worst));
    if (o.pass) o.detail = std::to_string(curves) + " curve images, max |tr| " + std::to_string(worst);
    return o;
}

Outcome toledo_formula() {
    Outcome o;
    std::mt19937_64 rng(104);
    for (int k = 0; k < 1000; ++k) {
        const int n = 3 + k % 6;
        const std::vector<double> a = ccw_alpha(rng, n, 1e-3, 1.0 - 1e-3);
        const double s = angle_sum(a);
        const double t = toledo_dt(a);
        o.require(t == 1.0 - s / kTwoPi, "anticlockwise formula mismatch");
        o.require(t > 0.0 && t < 1.0, "anticlockwise value out of range");
        const std::vector<double> m = mirror(a);
        const double tm = toledo_dt(m);
        o.require(tm == (n - 1) - angle_sum(m) / kTwoPi, "clockwise formula mismatch");
        o.require(tm > -1.0 && tm < 0.0, "clockwise value out of range");
    }
    if (o.pass) o.detail = "2000 values";
    return o;
}

Outcome twist_word() {
    Outcome o;
    const std::string w = dehn_twist_genus0(c(1) * c(2), {2, 3}, 1, Presentation{0, 4}).to_string();
    o.require(w == "c1.C3.c2.c3", "got " + w);
    if (o.pass) o.detail = w;
    return o;
}

Outcome genus_path() {
    Outcome o;
    std::mt19937_64 rng(106);
    std::uniform_real_distribution<double> ang(0.1, kTwoPi - 0.1), dist(0.05, 2.0), dir(0.0, kTwoPi);
    const Presentation p{2, 0};
    const std::vector<CurveClass> seeds = scc_seed_family(p);
    for (int k = 0; k < 100; ++k) {
        const bool orth = k >= 50;
        const HPoint x = point_at(HPoint{}, dist(rng), dir(rng));
        const HPoint y = orth ? x : point_at(x, dist(rng), dir(rng));
        const RealMatrix A = rotation_about(x, ang(rng)), B = rotation_about(y, ang(rng));
        const RealRep r = RealRep::checked(p, {A, B, B, A});
        const Verdict v = classify_real(r);
        if (orth) {
            o.require(v.tag == VerdictTag::Orthogonal, "orthogonal construction gave " + to_string(v.tag));
            continue;
        }
        o.require(v.tag == VerdictTag::NotTotallyElliptic, "non-commuting construction gave " + to_string(v.tag));
        if (v.tag != VerdictTag::NotTotallyElliptic) continue;
        bool listed = false;
        for (const CurveClass& cc : seeds) listed = listed || cc == *v.witness;
        o.require(listed, "witness not in the seed list");
        o.require(classify_element(r.evaluate(v.witness->representative)) == ElementClass::Hyperbolic,
                  "witness image not hyperbolic");
    }
    if (o.pass) o.detail = "50 refuted, 50 orthogonal";
    return o;
}

Outcome subsphere_induction() {
    Outcome o;
    std::mt19937_64 rng(107);
    int restrictions = 0;
    for (int k = 0; k < 50; ++k) {
        const int n = 5 + k % 4;
        const RealRep r = construct_dt(dt_alpha(rng, n, k % 2 == 1), std::nullopt, static_cast<std::uint64_t>(k));
        const std::optional<Orientation> parent = chain_orientation(build_chain(r));
        o.require(parent.has_value(), "parent chain not coherent");
        for (int i = 1; i <= n - 3; ++i) {
            const TriangleChain ch = build_chain(restrict_subsphere(r, i));
            o.require(ch.triangles.size() == 2 && !has_degenerate_triangle(ch), "sub-sphere chain degenerate");
            o.require(chain_orientation(ch) == parent, "sub-sphere orientation differs from parent");
            ++restrictions;
        }
    }
    if (o.pass) o.detail = std::to_string(restrictions) + " restrictions";
    return o;
}

Outcome orbit_boundedness() {
    Outcome o;
    const RealRep dt = construct_dt(std::vector<double>(4, kPi / 3));
    const OrbitSummary s = run_twist_orbit(dt, 10000, 108);
    o.require(s.iterations == 10000 && !s.diverged, "DT orbit stopped early");
    o.require(s.sup_max_abs_trace < 2.0, "DT orbit sup |tr| " + std::to_string(s.sup_max_abs_trace));
    const RealMatrix h1{2, 0, 0, 0.5}, h2{1.25, 0.75, 0.75, 1.25}, h3{1.5, 1.25, 1, 1.5};
    const RealRep fuchsian(Presentation{0, 4}, {h1, h2, h3, (h1 * h2 * h3).inverse()});
    const OrbitSummary f = run_twist_orbit(fuchsian, 100, 108, 10.0);
    o.require(f.first_exceeding.has_value(), "hyperbolic contrast never exceeded trace 10");
    if (o.pass) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "DT sup |tr| %.6f over 10000 twists; contrast exceeds 10 at twist %d",
                      s.sup_max_abs_trace, *f.first_exceeding);
        o.detail = buf;
    }
    return o;
}

Outcome reducible_example() {
    Outcome o;
    std::string counts;
    for (int n = 3; n <= 6; ++n) {
        const UpperTriangularData d = reducible_example_data(n);
        for (std::uint32_t mask = 1; mask + 1 < (1u << n); ++mask) {
            cplx v = 1.0;
            for (int j = 0; j < n; ++j)
                if (mask & (1u << j)) v *= d.lambda[static_cast<std::size_t>(j)];
            o.require(std::abs(std::abs(v) - 1.0) < 1e-12, "subset product off the unit circle");
            o.require(std::abs(v - 1.0) > 1e-6 && std::abs(v + 1.0) > 1e-6, "subset product is +-1");
        }
        const ComplexRep r = to_representation(d);
        const Verdict v = classify_complex(r);
        o.require(v.tag == VerdictTag::ReducibleNonUnitary, "n=" + std::to_string(n) + " gave " + to_string(v.tag));
        const SccBudget budget{1000, 4, 64};
        const EllipticityReport rep = certify_totally_elliptic(r, budget, 0);
        o.require(rep.status == EllipticityStatus::Certified, "certification " + to_string(rep.status));
        for (const CurveClass& cc : certification_curves(r.presentation(), budget, 0)) {
            const cplx t = r.evaluate(cc.representative).trace();
            o.require(std::abs(t.imag()) < 1e-9 && std::abs(t.real()) < 2.0, "trace not real in (-2, 2)");
        }
        counts += (counts.empty() ? "" : ", ") + std::string("n=") + std::to_string(n) + ": " +
                  std::to_string(rep.curves_checked);
    }
    if (o.pass) o.detail = "classes checked " + counts;
    return o;
}

Outcome commutator_equivalence() {
    Outcome o;
    std::mt19937_64 rng(110);
    std::normal_distribution<double> nd;
    std::uniform_real_distribution<double> ph(0.0, kTwoPi);
    std::uniform_int_distribution<int> len(1, 5), gen(1, 4), coin(0, 1);
    auto word = [&] {
        std::vector<Letter> ls;
        for (int k = len(rng); k > 0; --k) ls.push_back({GenKind::C, gen(rng), coin(rng) == 1});
        return Word(std::move(ls));
    };
    int identities = 0;
    double worst = 0.0;
    for (int k = 0; k < 1000; ++k) {
        std::vector<cplx> lam, z;
        const cplx kappa(nd(rng), nd(rng));
        for (int j = 0; j < 4; ++j) {
            lam.push_back(std::polar(1.0, ph(rng)));
            // every third sample is a coboundary, whose image is abelian
            z.push_back(k % 3 == 0 ? kappa * (lam.back() * lam.back() - 1.0) : cplx(nd(rng), nd(rng)));
        }
        const UpperTriangularData d(Presentation{0, 4}, lam, z);
        const ComplexRep r = to_representation(d);
        const Word g1 = word(), g2 = k % 7 == 0 ? g1.pow(2) : word();
        const ComplexMatrix got = triangular_commutator(d, g1, g2);
        const ComplexMatrix want = r.evaluate(commutator(g1, g2));
        worst = std::max(worst, std::min(max_abs_diff(got, want), max_abs_diff(got, -want)));
        const double diff = std::abs(cocycle_extend(d, g1 * g2).z - cocycle_extend(d, g2 * g1).z);
        const bool ident = classify_element(want, 1e-9) == ElementClass::Identity;
        o.require(ident == (diff <= 1e-9), "identity does not match z-symmetry");
        identities += ident;
    }
    o.require(worst <= 1e-9, "max deviation " + std::to_string(worst));
    if (o.pass) {
        char buf[120];
        std::snprintf(buf, sizeof buf, "max deviation %.1e, %d identities", worst, identities);
        o.detail = buf;
    }
    return o;
}

Outcome pants_emptiness() {
    Outcome o;
    SampleOptions opt;
    opt.attempts = 1000000;
    opt.seed = 111;
    const SampleResult empty = sample_relative(Presentation{0, 3}, std::vector<double>{2.4, 2.6, 3.0}, opt);
    o.require(!empty.rep.has_value(), "middle band produced a sample");
    o.require(empty.proven_empty, "middle band not flagged as proven empty");
    o.require(empty.attempts_made == 1000000, "attempt count");
    opt.attempts = 10000;
    const SampleResult full = sample_relative(Presentation{0, 3}, std::vector<double>{1.0, 1.5, 2.0}, opt);
    o.require(full.rep.has_value(), "no acceptance within 10^4 attempts below 2pi");
    if (o.pass)
        o.detail = "10^6 attempts empty (" + std::to_string(empty.wrong_angle_roots) + " mirror-angle roots); accepted after " +
                   std::to_string(full.attempts_made);
    return o;
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"commutator of an elliptic element is identity or hyperbolic", elliptic_commutator_trichotomy},
        {"pants configuration table and n=3 triangles", pants_table},
        {"DT constructions are certified totally elliptic", dt_certified},
        {"Toledo formula on both bands", toledo_formula},
        {"twist word identity", twist_word},
        {"genus path: refuted or orthogonal", genus_path},
        {"sub-sphere restrictions keep the orientation", subsphere_induction},
        {"twist orbits of a DT representation stay elliptic", orbit_boundedness},
        {"reducible non-unitary examples", reducible_example},
        {"triangular commutator formula", commutator_equivalence},
        {"pants emptiness and acceptance", pants_emptiness},
    };
    int failures = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[k].second();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        failures += !o.pass;
        std::printf("%s %2zu  %-58s %7.2fs  %s\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].first.c_str(), secs,
                    o.detail.c_str());
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
