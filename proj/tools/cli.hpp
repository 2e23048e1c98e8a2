#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "telliptic/telliptic.hpp"

namespace telliptic::cli {

using nlohmann::json;

enum ExitCode { kOk = 0, kInconclusive = 2, kInputError = 3 };

/// "2pi/3", "pi/3", "π/3", "-pi", "0.5" ...
inline double parse_angle(std::string s) {
    const std::string pi_utf8 = "\xcf\x80";
    for (std::size_t pos; (pos = s.find(pi_utf8)) != std::string::npos;) s.replace(pos, pi_utf8.size(), "pi");
    s.erase(std::remove_if(s.begin(), s.end(), ::isspace), s.end());
    static const std::regex with_pi(R"(^([+-]?(?:\d+(?:\.\d*)?|\.\d+)?)\*?pi(?:/((?:\d+(?:\.\d*)?|\.\d+)))?$)");
    std::smatch m;
    if (std::regex_match(s, m, with_pi)) {
        double coef = 1.0;
        const std::string cs = m[1].str();
        if (cs == "-") coef = -1.0;
        else if (!cs.empty() && cs != "+") coef = std::stod(cs);
        double den = m[2].matched ? std::stod(m[2].str()) : 1.0;
        if (den == 0.0) throw ParseError("zero denominator in angle " + s);
        return coef * kPi / den;
    }
    std::size_t used = 0;
    double v;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw ParseError("cannot parse angle '" + s + "'");
    }
    if (used != s.size()) throw ParseError("cannot parse angle '" + s + "'");
    return v;
}

inline std::vector<std::string> split(const std::string& s, char sep = ',') {
    std::vector<std::string> out;
    std::stringstream ss(s);
    for (std::string item; std::getline(ss, item, sep);)
        if (!item.empty()) out.push_back(item);
    return out;
}

inline std::vector<double> parse_angles(const std::string& s) {
    std::vector<double> out;
    for (const std::string& t : split(s)) out.push_back(parse_angle(t));
    return out;
}

/// "1", "0.5:-2" (re:im)
inline std::vector<cplx> parse_complex_list(const std::string& s) {
    std::vector<cplx> out;
    for (const std::string& t : split(s)) {
        const auto parts = split(t, ':');
        if (parts.empty() || parts.size() > 2) throw ParseError("complex values are re or re:im");
        out.emplace_back(std::stod(parts[0]), parts.size() == 2 ? std::stod(parts[1]) : 0.0);
    }
    return out;
}

inline double default_tol() {
    if (const char* env = std::getenv("TELLIPTIC_TOL")) {
        try {
            const double t = std::stod(env);
            if (t > 0.0) return t;
        } catch (const std::exception&) {
        }
        throw ParseError("TELLIPTIC_TOL must be a positive number");
    }
    return kDefaultTol;
}

inline void write_atomic(const std::string& path, const std::string& text) {
    const std::filesystem::path target(path);
    std::filesystem::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw ParseError("cannot open " + tmp.string() + " for writing");
        f << text;
        if (!f) throw ParseError("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, target);
}

inline json read_json(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ParseError("cannot read " + path);
    try {
        return json::parse(f);
    } catch (const json::exception& e) {
        throw ParseError(std::string("malformed JSON in ") + path + ": " + e.what());
    }
}

struct Options {
    std::string input, output, csv;
    int genus = 0, punctures = 0;
    std::string alpha, beta, theta, z;
    SccBudget budget;
    double tol = kDefaultTol;
    std::optional<std::uint64_t> seed;
    double attempts = 10000;
    double radius = 2.0;
    int iterations = 1000;
    double threshold = 2.0;
    std::string format = "json";
};

inline json config_json(const std::string& command, const Options& o) {
    json j = {{"command", command},
              {"budget", io::budget_json(o.budget)},
              {"tol", o.tol},
              {"format", o.format}};
    if (o.seed) j["seed"] = *o.seed;
    if (!o.input.empty()) j["input"] = o.input;
    if (o.punctures) j["punctures"] = o.punctures;
    if (o.genus) j["genus"] = o.genus;
    if (!o.alpha.empty()) j["alpha"] = o.alpha;
    if (!o.beta.empty()) j["beta"] = o.beta;
    if (!o.theta.empty()) j["theta"] = o.theta;
    if (!o.z.empty()) j["z"] = o.z;
    if (command == "sample") {
        j["attempts"] = o.attempts;
        j["radius"] = o.radius;
    }
    if (command == "orbit") {
        j["iterations"] = o.iterations;
        j["threshold"] = o.threshold;
    }
    return j;
}

class Runner {
public:
    Runner(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

    int run(int argc, const char* const* argv) {
        CLI::App app{"Totally elliptic surface group representations"};
        app.require_subcommand(1);
        app.set_version_flag("--version", io::kVersion);
        Options o;
        o.tol = default_tol();

        auto common = [&](CLI::App* sc) {
            sc->add_option("-o,--output", o.output, "output file (default stdout)");
            sc->add_option("--tol", o.tol, "numerical tolerance (env TELLIPTIC_TOL)")->check(CLI::PositiveNumber);
            sc->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
        };
        auto budget = [&](CLI::App* sc) {
            sc->add_option("--max-curves", o.budget.max_curves)->check(CLI::PositiveNumber);
            sc->add_option("--max-twist-depth", o.budget.max_twist_depth)->check(CLI::NonNegativeNumber);
            sc->add_option("--max-word-length", o.budget.max_word_length)->check(CLI::PositiveNumber);
        };
        auto seed = [&](CLI::App* sc, bool required) {
            auto* opt = sc->add_option_function<std::uint64_t>("--seed", [&](std::uint64_t s) { o.seed = s; }, "RNG seed");
            if (required) opt->required();
        };

        auto* classify = app.add_subcommand("classify", "classify a representation (JSON) and emit a verdict");
        classify->add_option("-i,--input", o.input)->required();
        common(classify), budget(classify), seed(classify, false);

        auto* build = app.add_subcommand("build-dt", "construct a DT representation from peripheral angles");
        build->add_option("-n,--punctures", o.punctures)->required();
        build->add_option("--alpha", o.alpha)->required();
        build->add_option("--beta", o.beta);
        common(build), seed(build, true);

        auto* sample = app.add_subcommand("sample", "sample a point of a relative character variety");
        sample->add_option("-n,--punctures", o.punctures)->required();
        sample->add_option("--alpha", o.alpha)->required();
        sample->add_option("--attempts", o.attempts)->check(CLI::PositiveNumber);
        sample->add_option("--radius", o.radius)->check(CLI::PositiveNumber);
        common(sample), seed(sample, true);

        auto* certify = app.add_subcommand("certify", "check total ellipticity up to a curve budget");
        certify->add_option("-i,--input", o.input)->required();
        common(certify), budget(certify), seed(certify, false);

        auto* orbit = app.add_subcommand("orbit", "random mapping class group orbit with trace statistics");
        orbit->add_option("-i,--input", o.input)->required();
        orbit->add_option("--iterations", o.iterations)->check(CLI::NonNegativeNumber);
        orbit->add_option("--threshold", o.threshold);
        orbit->add_option("--csv", o.csv, "per-iterate trace CSV");
        common(orbit), seed(orbit, true);

        auto* cex = app.add_subcommand("complex-example", "reducible non-unitary totally elliptic example");
        cex->add_option("-n,--punctures", o.punctures)->required();
        cex->add_option("--theta", o.theta);
        cex->add_option("--z", o.z, "cocycle values re or re:im");
        common(cex), budget(cex), seed(cex, false);

        auto* fb = app.add_subcommand("feasible-betas", "feasible pants angles of a DT chain");
        fb->add_option("--alpha", o.alpha)->required();
        fb->add_option("-n,--punctures", o.punctures);
        common(fb);

        try {
            app.parse(argc, argv);
        } catch (const CLI::Success& e) {
            return app.exit(e, out_, err_);
        } catch (const CLI::ParseError& e) {
            app.exit(e, out_, err_);
            return kInputError;
        }

        try {
            if (*classify) return do_classify(o);
            if (*build) return do_build(o);
            if (*sample) return do_sample(o);
            if (*certify) return do_certify(o);
            if (*orbit) return do_orbit(o);
            if (*cex) return do_complex_example(o);
            if (*fb) return do_feasible(o);
        } catch (const Error& e) {
            err_ << "error: " << e.what() << "\n";
            return kInputError;
        } catch (const json::exception& e) {
            err_ << "error: " << e.what() << "\n";
            return kInputError;
        } catch (const std::invalid_argument& e) {
            err_ << "error: bad number: " << e.what() << "\n";
            return kInputError;
        }
        return kInputError;
    }

private:
    void emit(const Options& o, const json& j, const std::string& path_override = {}) {
        const std::string text = j.dump(2) + "\n";
        const std::string& path = path_override.empty() ? o.output : path_override;
        if (path.empty()) out_ << text;
        else write_atomic(path, text);
    }

    json envelope(const std::string& cmd, const Options& o) {
        return {{"version", io::kVersion}, {"config", config_json(cmd, o)}};
    }

    static json representation_input(const json& j) { return j.contains("representation") ? j.at("representation") : j; }

    int do_classify(const Options& o) {
        const json in = representation_input(read_json(o.input));
        json out = envelope("classify", o);
        Verdict v;
        if (io::field_from(in) == Field::Real) v = classify_real(io::representation_from<double>(in), o.budget, o.seed.value_or(0));
        else v = classify_complex(io::representation_from<cplx>(in), o.budget, o.seed.value_or(0));
        out["verdict"] = io::verdict_json(v);
        emit(o, out);
        return is_definite(v.tag) ? kOk : kInconclusive;
    }

    int do_build(const Options& o) {
        const std::vector<double> alpha = parse_angles(o.alpha);
        if (static_cast<int>(alpha.size()) != o.punctures) throw PreconditionError("--alpha needs one angle per puncture");
        std::optional<std::vector<double>> beta;
        if (!o.beta.empty()) beta = parse_angles(o.beta);
        const RealRep r = construct_dt(alpha, beta, *o.seed, o.tol);
        json out = envelope("build-dt", o);
        out["representation"] = io::representation_json(r);
        out["chain"] = io::chain_json(build_chain(r));
        out["relation_residual"] = r.relation_residual();
        out["toledo"] = toledo_dt(alpha);
        emit(o, out);
        return kOk;
    }

    int do_sample(const Options& o) {
        const std::vector<double> alpha = parse_angles(o.alpha);
        SampleOptions so;
        so.attempts = static_cast<int>(o.attempts);
        so.seed = *o.seed;
        so.radius = o.radius;
        so.tol = o.tol;
        const SampleResult res = sample_relative(Presentation{0, o.punctures}, alpha, so);
        json out = envelope("sample", o);
        out["attempts_made"] = res.attempts_made;
        out["trace_roots"] = res.trace_roots;
        out["wrong_angle_roots"] = res.wrong_angle_roots;
        out["acceptance_rate"] = res.rep ? 1.0 / res.attempts_made : 0.0;
        if (res.rep) {
            out["status"] = "Accepted";
            out["representation"] = io::representation_json(*res.rep);
            emit(o, out);
            return kOk;
        }
        out["status"] = "Empty";
        out["proven"] = res.proven_empty;
        out["note"] = res.proven_empty ? "angle sum in the empty band of a pair of pants"
                                       : "advisory only: no sample accepted within the attempt budget";
        emit(o, out);
        return res.proven_empty ? kOk : kInconclusive;
    }

    int do_certify(const Options& o) {
        const json in = representation_input(read_json(o.input));
        json out = envelope("certify", o);
        EllipticityReport rep;
        if (io::field_from(in) == Field::Real)
            rep = certify_totally_elliptic(io::representation_from<double>(in), o.budget, o.seed.value_or(0));
        else
            rep = certify_totally_elliptic(io::representation_from<cplx>(in), o.budget, o.seed.value_or(0));
        out["report"] = io::report_json(rep);
        emit(o, out);
        return rep.status == EllipticityStatus::Inconclusive ? kInconclusive : kOk;
    }

    int do_orbit(const Options& o) {
        const json in = representation_input(read_json(o.input));
        if (io::field_from(in) != Field::Real) throw PreconditionError("orbit runs on real representations");
        const RealRep r = io::representation_from<double>(in);
        std::ostringstream csv;
        bool header = false;
        const OrbitSummary sum = run_twist_orbit(r, o.iterations, *o.seed, o.threshold, [&](const OrbitStep& st) {
            if (o.csv.empty()) return;
            if (!header) {
                csv << "iterate,window,power";
                for (const CurveClass& cc : scc_seed_family(r.presentation())) csv << "," << cc.to_string();
                csv << ",max_abs_trace\n";
                header = true;
            }
            csv << st.iterate << ",c" << st.window.first << "..c" << st.window.last << "," << st.power;
            csv.precision(17);
            for (double t : st.abs_traces) csv << "," << t;
            csv << "," << st.max_abs_trace << "\n";
        });
        if (!o.csv.empty()) write_atomic(o.csv, csv.str());
        json out = envelope("orbit", o);
        out["summary"] = {{"iterations", sum.iterations},
                          {"sup_max_abs_trace", sum.sup_max_abs_trace},
                          {"bounded_by_two", sum.sup_max_abs_trace < 2.0},
                          {"first_exceeding", sum.first_exceeding ? json(*sum.first_exceeding) : json(nullptr)},
                          {"relation_residual", sum.relation_residual},
                          {"columns", sum.columns},
                          {"normalization", sum.normalization},
                          {"reprojected", sum.reprojected},
                          {"diverged", sum.diverged}};
        emit(o, out);
        return kOk;
    }

    int do_complex_example(const Options& o) {
        std::optional<std::vector<double>> theta;
        std::optional<std::vector<cplx>> z;
        if (!o.theta.empty()) theta = parse_angles(o.theta);
        if (!o.z.empty()) z = parse_complex_list(o.z);
        const UpperTriangularData d = reducible_example_data(o.punctures, theta, z);
        const ComplexRep r = to_representation(d, o.tol);
        const Verdict v = classify_complex(r, o.budget, o.seed.value_or(0));
        json out = envelope("complex-example", o);
        out["data"] = io::utd_json(d);
        out["representation"] = io::representation_json(r);
        out["verdict"] = io::verdict_json(v);
        emit(o, out);
        return is_definite(v.tag) ? kOk : kInconclusive;
    }

    int do_feasible(const Options& o) {
        const std::vector<double> alpha = parse_angles(o.alpha);
        if (o.punctures && static_cast<int>(alpha.size()) != o.punctures)
            throw PreconditionError("--alpha needs one angle per puncture");
        const FeasibleBetas fbs = dt_feasible_betas(alpha);
        if (o.format == "csv") {
            std::ostringstream s;
            s.precision(17);
            s << "k,lo,hi,beta\n";
            for (std::size_t k = 0; k < fbs.beta.size(); ++k)
                s << k + 1 << "," << fbs.intervals[k].lo << "," << fbs.intervals[k].hi << "," << fbs.beta[k] << "\n";
            if (o.output.empty()) out_ << s.str();
            else write_atomic(o.output, s.str());
            return kOk;
        }
        json iv = json::array();
        for (const BetaInterval& b : fbs.intervals) iv.push_back(json::array({b.lo, b.hi}));
        json out = envelope("feasible-betas", o);
        out["orientation"] = to_string(fbs.orientation);
        out["intervals"] = iv;
        out["beta"] = fbs.beta;
        out["toledo"] = toledo_dt(alpha);
        emit(o, out);
        return kOk;
    }

    std::ostream& out_;
    std::ostream& err_;
};

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    return Runner(out, err).run(argc, argv);
}

}  // namespace telliptic::cli
