#pragma once

// Top-level classification of totally elliptic representations.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "telliptic/chains.hpp"
#include "telliptic/complexify.hpp"
#include "telliptic/rep.hpp"

namespace telliptic {

enum class VerdictTag {
    Orthogonal,
    DT,
    Unitary,
    RealDT,
    ReducibleNonUnitary,
    NotTotallyElliptic,
    NotReduced,
    Inconclusive
};

inline std::string to_string(VerdictTag t) {
    switch (t) {
        case VerdictTag::Orthogonal: return "Orthogonal";
        case VerdictTag::DT: return "DT";
        case VerdictTag::Unitary: return "Unitary";
        case VerdictTag::RealDT: return "RealDT";
        case VerdictTag::ReducibleNonUnitary: return "ReducibleNonUnitary";
        case VerdictTag::NotTotallyElliptic: return "NotTotallyElliptic";
        case VerdictTag::NotReduced: return "NotReduced";
        case VerdictTag::Inconclusive: return "Inconclusive";
    }
    return "?";
}

inline bool is_definite(VerdictTag t) { return t != VerdictTag::Inconclusive; }

struct Evidence {
    std::string check;
    std::string outcome;
};

struct Verdict {
    VerdictTag tag = VerdictTag::Inconclusive;
    std::optional<double> toledo;
    std::vector<double> alpha;
    std::optional<Orientation> orientation;
    std::optional<CurveClass> witness;
    std::optional<ElementClass> witness_class;
    std::optional<double> witness_trace;
    int puncture = 0;
    std::string reason;
    SccBudget budget;
    std::vector<Evidence> evidence;

    void note(std::string check, std::string outcome) {
        evidence.push_back({std::move(check), std::move(outcome)});
    }
};

inline constexpr int kRechainAttempts = 32;

namespace detail {

inline Verdict inconclusive(Verdict v, std::string reason) {
    v.tag = VerdictTag::Inconclusive;
    v.reason = std::move(reason);
    return v;
}

inline void adopt_report(Verdict& v, const EllipticityReport& rep) {
    std::string outcome = to_string(rep.status) + " (" + std::to_string(rep.curves_checked) + " curves, " + rep.scope;
    if (rep.status == EllipticityStatus::Certified) outcome += ", up to budget";
    v.note("certify_totally_elliptic", outcome + ")");
    if (rep.witness) {
        v.tag = VerdictTag::NotTotallyElliptic;
        v.witness = rep.witness->curve;
        v.witness_class = rep.witness->cls;
        v.witness_trace = rep.witness->abs_trace;
    }
}

inline std::string ambiguous_reason(const EllipticityReport& rep) {
    std::string s = "curve images inside the parabolic tolerance band:";
    for (const CurveImage& ci : rep.inconclusive) s += " " + ci.curve.to_string();
    return s;
}

inline Verdict dt_verdict(Verdict v, const RealRep& r, Orientation o) {
    const PeripheralData pd = peripheral_data(r);
    v.alpha = pd.angles;
    try {
        v.toledo = toledo_dt(pd.angles);
    } catch (const OutsideDTBand&) {
        return inconclusive(std::move(v), "coherent chain but peripheral angles lie outside the DT band");
    }
    if ((*v.toledo > 0.0) != (o == Orientation::AntiClockwise))
        return inconclusive(std::move(v), "Toledo sign disagrees with chain orientation");
    v.tag = VerdictTag::DT;
    v.orientation = o;
    v.note("toledo_dt", std::to_string(*v.toledo));
    return v;
}

inline Verdict classify_pants(Verdict v, const RealRep& r) {
    PeripheralData pd;
    try {
        pd = peripheral_data(r);
    } catch (const NonEllipticPeripheral& e) {
        v.tag = VerdictTag::NotTotallyElliptic;
        v.witness = CurveClass::of(c(e.puncture), r.presentation());
        v.witness_class = classify_element(r.peripheral(e.puncture), r.tol());
        v.witness_trace = abs_trace(r.peripheral(e.puncture));
        v.note("peripheral_data", std::string("c") + std::to_string(e.puncture) + " not elliptic");
        return v;
    }
    const PantsConfiguration pc = pants_configuration(pd.angles, 1e-7);
    v.note("pants_configuration", to_string(pc));
    v.alpha = pd.angles;
    switch (pc) {
        case PantsConfiguration::Degenerate: {
            const OrthogonalCheck oc = is_orthogonal(r, 1e-6);
            v.note("is_orthogonal", oc.orthogonal ? "true" : "false");
            if (!oc.orthogonal) return inconclusive(std::move(v), "degenerate pants but no common fixed point");
            v.tag = VerdictTag::Orthogonal;
            return v;
        }
        case PantsConfiguration::Empty:
            return inconclusive(std::move(v), "peripheral angles lie in the empty band; input is numerically inconsistent");
        default: {
            const TriangleChain ch = build_chain(r);
            v.note("triangle_orientation", to_string(ch.triangles[0].orientation));
            const Orientation want = pc == PantsConfiguration::AntiClockwise ? Orientation::AntiClockwise
                                                                              : Orientation::Clockwise;
            if (ch.triangles[0].orientation != want)
                return inconclusive(std::move(v), "triangle orientation disagrees with the angle table");
            return dt_verdict(std::move(v), r, want);
        }
    }
}

}  // namespace detail

inline Verdict classify_real(const RealRep& r, const SccBudget& budget = {}, std::uint64_t seed = 0) {
    Verdict v;
    v.budget = budget;
    const Presentation& p = r.presentation();
    if (const int j = first_trivial_peripheral(r)) {
        v.tag = VerdictTag::NotReduced;
        v.puncture = j;
        v.note("is_reduced", "false");
        return v;
    }
    v.note("is_reduced", "true");

    if (p.genus == 0 && p.punctures == 3) return detail::classify_pants(std::move(v), r);

    const EllipticityReport rep = certify_totally_elliptic(r, budget, seed);
    detail::adopt_report(v, rep);
    if (v.tag == VerdictTag::NotTotallyElliptic) return v;
    if (rep.status == EllipticityStatus::Inconclusive) return detail::inconclusive(std::move(v), detail::ambiguous_reason(rep));

    const OrthogonalCheck oc = is_orthogonal(r, 1e-6);
    v.note("is_orthogonal", oc.orthogonal ? "true" : "false");
    if (oc.orthogonal) {
        v.tag = VerdictTag::Orthogonal;
        return v;
    }
    if (p.genus >= 1)
        return detail::inconclusive(std::move(v), "all seed words elliptic but no common fixed point");

    // genus 0, n >= 4
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    const std::vector<TwistWindow> windows = twist_windows(p);
    std::uniform_int_distribution<std::size_t> pick(0, windows.size() - 1);
    std::uniform_int_distribution<int> coin(0, 1);
    RealRep cur = r;
    for (int attempt = 0; attempt <= kRechainAttempts; ++attempt) {
        if (attempt > 0) cur = mcg_twist(cur, windows[pick(rng)], coin(rng) ? 1 : -1);
        try {
            const TriangleChain ch = build_chain(cur);
            if (has_degenerate_triangle(ch)) continue;
            std::string os;
            for (const ChainTriangle& t : ch.triangles) os += (os.empty() ? "" : ",") + to_string(t.orientation);
            v.note("build_chain", os + (attempt ? " after " + std::to_string(attempt) + " re-chaining twists" : ""));
            const std::optional<Orientation> o = chain_orientation(ch);
            if (!o) return detail::inconclusive(std::move(v), "chain orientations are mixed although certification passed");
            v.note("is_dt_chain", "true");
            return detail::dt_verdict(std::move(v), r, *o);
        } catch (const NotRegular&) {
            continue;
        }
    }
    return detail::inconclusive(std::move(v), "triangle chain stayed degenerate after " +
                                                  std::to_string(kRechainAttempts) + " re-chaining twists");
}

inline Verdict classify_complex(const ComplexRep& r, const SccBudget& budget = {}, std::uint64_t seed = 0) {
    Verdict v;
    v.budget = budget;
    const Presentation& p = r.presentation();
    if (const int j = first_trivial_peripheral(r)) {
        v.tag = VerdictTag::NotReduced;
        v.puncture = j;
        v.note("is_reduced", "false");
        return v;
    }
    v.note("is_reduced", "true");

    const EllipticityReport rep = certify_totally_elliptic(r, budget, seed);
    detail::adopt_report(v, rep);
    if (v.tag == VerdictTag::NotTotallyElliptic) return v;
    if (rep.status == EllipticityStatus::Inconclusive) return detail::inconclusive(std::move(v), detail::ambiguous_reason(rep));

    try {
        const bool irreducible = is_irreducible(r);
        v.note("is_irreducible", irreducible ? "true" : "false");
        const UnitaryCheck uc = is_unitary_conjugate(r);
        v.note("is_unitary_conjugate", (uc.unitary ? "true" : "false") + std::string(" (invariant forms: ") +
                                           std::to_string(uc.solve.null_dim) + ")");
        if (irreducible) {
            const ComplexTraceReport tr = classify_complex_traces(r, budget, seed);
            v.note("classify_complex_traces", tr.all_real ? "AllRealOnScc" : "NonRealWitness " + tr.witness->to_string());
            if (!tr.all_real) return detail::inconclusive(std::move(v), "non-real trace on a certified curve");
            if (uc.unitary) {
                v.tag = VerdictTag::Unitary;
                return v;
            }
            const std::optional<RealRep> real = real_form_conjugate(r);
            if (!real) return detail::inconclusive(std::move(v), "no well-conditioned conjugation into PSL(2,R)");
            v.note("real_form_conjugate", "PSL(2,R)");
            const Verdict inner = classify_real(*real, budget, seed);
            v.note("classify_real", to_string(inner.tag));
            if (inner.tag != VerdictTag::DT)
                return detail::inconclusive(std::move(v), "real form classified as " + to_string(inner.tag));
            v.tag = VerdictTag::RealDT;
            v.toledo = inner.toledo;
            v.alpha = inner.alpha;
            v.orientation = inner.orientation;
            return v;
        }
        if (uc.unitary) {
            v.tag = VerdictTag::Unitary;
            return v;
        }
        if (p.genus >= 1)
            return detail::inconclusive(std::move(v), "reducible and non-unitary in positive genus");
        v.tag = VerdictTag::ReducibleNonUnitary;
        return v;
    } catch (const IllConditioned& e) {
        v.note("invariant_forms", "ill-conditioned, ratio " + std::to_string(e.ratio));
        return detail::inconclusive(std::move(v), e.what());
    }
}

}  // namespace telliptic
