#pragma once

// JSON forms of the library types.

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "telliptic/chains.hpp"
#include "telliptic/complexify.hpp"
#include "telliptic/rep.hpp"
#include "telliptic/verdict.hpp"

namespace telliptic::io {

using nlohmann::json;

inline constexpr const char* kVersion = "telliptic 0.1.0";

inline json point_json(const HPoint& p) { return json::array({p.z.real(), p.z.imag()}); }

inline json cplx_json(const cplx& z) { return json::array({z.real(), z.imag()}); }

inline cplx cplx_from(const json& j) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (!j.is_array() || j.size() != 2) throw ParseError("complex value must be [re, im]");
    return {j[0].get<double>(), j[1].get<double>()};
}

inline json matrix_json(const RealMatrix& m) { return json::array({m.a, m.b, m.c, m.d}); }

inline json matrix_json(const ComplexMatrix& m) {
    json out = json::array();
    for (const cplx& x : {m.a, m.b, m.c, m.d}) {
        out.push_back(x.real());
        out.push_back(x.imag());
    }
    return out;
}

inline RealMatrix real_matrix_from(const json& j) {
    if (!j.is_array() || j.size() != 4) throw ParseError("real matrix must be 4 numbers, row-major");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>(), j[3].get<double>()};
}

inline ComplexMatrix complex_matrix_from(const json& j) {
    if (!j.is_array()) throw ParseError("complex matrix must be an array");
    if (j.size() == 8)
        return {cplx(j[0].get<double>(), j[1].get<double>()), cplx(j[2].get<double>(), j[3].get<double>()),
                cplx(j[4].get<double>(), j[5].get<double>()), cplx(j[6].get<double>(), j[7].get<double>())};
    if (j.size() == 4) return {cplx_from(j[0]), cplx_from(j[1]), cplx_from(j[2]), cplx_from(j[3])};
    throw ParseError("complex matrix must be 8 numbers (re, im interleaved) or 4 [re, im] pairs");
}

inline json presentation_json(const Presentation& p) { return {{"genus", p.genus}, {"punctures", p.punctures}}; }

inline Presentation presentation_from(const json& j) {
    if (!j.is_object() || !j.contains("genus") || !j.contains("punctures"))
        throw ParseError("presentation needs genus and punctures");
    return Presentation(j.at("genus").get<int>(), j.at("punctures").get<int>());
}

template <class T>
json representation_json(const Representation<T>& r) {
    json imgs = json::object();
    const Presentation& p = r.presentation();
    for (int k = 0; k < p.generator_count(); ++k)
        imgs[p.generator_name(k)] = matrix_json(r.images()[static_cast<std::size_t>(k)]);
    return {{"presentation", presentation_json(p)},
            {"field", to_string(r.field())},
            {"images", imgs},
            {"tol", r.tol()}};
}

inline Field field_from(const json& j) {
    const std::string f = j.value("field", std::string("real"));
    if (f == "real") return Field::Real;
    if (f == "complex") return Field::Complex;
    throw ParseError("field must be \"real\" or \"complex\"");
}

template <class T>
Representation<T> representation_from(const json& j) {
    if (!j.is_object() || !j.contains("presentation") || !j.contains("images"))
        throw ParseError("representation needs presentation and images");
    const Presentation p = presentation_from(j.at("presentation"));
    const double tol = j.value("tol", kDefaultTol);
    const json& imgs = j.at("images");
    if (!imgs.is_object()) throw ParseError("images must be an object keyed by generator name");
    std::vector<Mat2<T>> ms;
    for (int k = 0; k < p.generator_count(); ++k) {
        const std::string name = p.generator_name(k);
        if (!imgs.contains(name)) throw ParseError("missing image for " + name);
        if constexpr (is_complex_v<T>) {
            ms.push_back(imgs.at(name).size() == 4 && imgs.at(name)[0].is_number()
                             ? to_complex(real_matrix_from(imgs.at(name)))
                             : complex_matrix_from(imgs.at(name)));
        } else {
            ms.push_back(real_matrix_from(imgs.at(name)));
        }
    }
    for (auto it = imgs.begin(); it != imgs.end(); ++it) {
        (void)Word::parse(it.key());  // rejects garbage names
        bool known = false;
        for (int k = 0; k < p.generator_count(); ++k) known = known || p.generator_name(k) == it.key();
        if (!known) throw UnknownSymbol(it.key() + " is not a generator of this presentation");
    }
    return Representation<T>::checked(p, std::move(ms), tol);
}

inline json chain_json(const TriangleChain& ch) {
    json C = json::array(), B = json::array(), o = json::array();
    for (const HPoint& p : ch.c_vertices) C.push_back(point_json(p));
    for (const HPoint& p : ch.b_vertices) B.push_back(point_json(p));
    for (const ChainTriangle& t : ch.triangles) o.push_back(to_string(t.orientation));
    return {{"C", C}, {"B", B}, {"beta", ch.beta}, {"orientations", o}};
}

inline json budget_json(const SccBudget& b) {
    return {{"max_curves", b.max_curves}, {"max_twist_depth", b.max_twist_depth}, {"max_word_length", b.max_word_length}};
}

inline json report_json(const EllipticityReport& r) {
    json j = {{"status", to_string(r.status)},
              {"curves_checked", r.curves_checked},
              {"scope", r.scope},
              {"budget", budget_json(r.budget)},
              {"max_abs_trace", r.max_abs_trace}};
    if (r.status == EllipticityStatus::Certified) j["certified"] = "up to budget";
    if (r.witness) {
        j["witness"] = r.witness->curve.to_string();
        j["witness_class"] = to_string(r.witness->cls);
        j["witness_abs_trace"] = r.witness->abs_trace;
    }
    json inc = json::array();
    for (const CurveImage& ci : r.inconclusive) inc.push_back({{"curve", ci.curve.to_string()}, {"abs_trace", ci.abs_trace}});
    j["inconclusive"] = inc;
    return j;
}

inline json utd_json(const UpperTriangularData& d) {
    json lam = json::object(), z = json::object();
    for (int k = 0; k < d.presentation.generator_count(); ++k) {
        const std::string name = d.presentation.generator_name(k);
        lam[name] = cplx_json(d.lambda[static_cast<std::size_t>(k)]);
        z[name] = cplx_json(d.z[static_cast<std::size_t>(k)]);
    }
    return {{"lambda", lam}, {"z", z}};
}

inline UpperTriangularData utd_from(const Presentation& p, const json& j) {
    std::vector<cplx> lam, z;
    for (int k = 0; k < p.generator_count(); ++k) {
        const std::string name = p.generator_name(k);
        lam.push_back(cplx_from(j.at("lambda").at(name)));
        z.push_back(cplx_from(j.at("z").at(name)));
    }
    return UpperTriangularData(p, std::move(lam), std::move(z));
}

inline json verdict_json(const Verdict& v) {
    json ev = json::array();
    for (const Evidence& e : v.evidence) ev.push_back({{"check", e.check}, {"outcome", e.outcome}});
    json j = {{"tag", to_string(v.tag)}, {"evidence", ev}, {"budget", budget_json(v.budget)}};
    if (v.toledo) j["toledo"] = *v.toledo;
    if (!v.alpha.empty()) j["alpha"] = v.alpha;
    if (v.orientation) j["orientation"] = to_string(*v.orientation);
    if (v.witness) j["witness"] = v.witness->to_string();
    if (v.witness_class) j["witness_class"] = to_string(*v.witness_class);
    if (v.witness_trace) j["witness_abs_trace"] = *v.witness_trace;
    if (v.tag == VerdictTag::NotReduced) j["puncture"] = v.puncture;
    if (!v.reason.empty()) j["reason"] = v.reason;
    return j;
}

}  // namespace telliptic::io
