#include "darboux/report.hpp"
#include "darboux/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <random>

namespace darboux {

using nlohmann::json;

namespace {

int positive_int(const std::string &name, const std::string &value) {
    size_t used = 0;
    int v = 0;
    try {
        v = std::stoi(value, &used);
    } catch (const std::exception &) {
        used = 0;
    }
    if (used != value.size() || v <= 0)
        throw PreconditionFailed("option " + name + " must be a positive integer, got '" + value + "'");
    return v;
}

constexpr double kReportRelMargin = 1e-11;

bool text_less(const std::string &a, const std::string &b, int da, int db) {
    return da != db ? da < db : a < b;
}

void sort_by_poly(json &arr, const char *key) {
    std::vector<json> items(arr.begin(), arr.end());
    std::stable_sort(items.begin(), items.end(), [&](const json &a, const json &b) {
        return text_less(a[key].get<std::string>(), b[key].get<std::string>(), a["degree"].get<int>(),
                         b["degree"].get<int>());
    });
    arr = json(items);
}

BivarPoly poly_field(const json &j, const char *key) {
    if (!j.contains(key) || !j[key].is_string())
        throw Error(std::string("report field '") + key + "' missing or not text");
    return parse_polynomial(j[key].get<std::string>());
}

GR scalar_field(const json &j, const char *key) {
    BivarPoly p = poly_field(j, key);
    if (!p.is_constant())
        throw Error(std::string("report field '") + key + "' is not a constant");
    return p.coeff(0, 0);
}

json exp_json(const ExponentialFactor &e) {
    return {{"h", e.h.str()},
            {"f0", e.f0.str()},
            {"cofactor", e.kt.str()},
            {"degree", e.f0.degree()},
            {"expression", "exp((" + e.h.str() + ")/(" + e.f0.str() + "))"}};
}

ExponentialFactor exp_from_json(const json &j) {
    return {poly_field(j, "h"), poly_field(j, "f0"), poly_field(j, "cofactor")};
}

std::string power_text(const BivarPoly &f, const GR &lambda) {
    std::string base = "(" + f.str() + ")";
    if (lambda == GR(1))
        return base;
    return base + "^(" + lambda.str() + ")";
}

json darboux_json(const DarbouxFunction &fn) {
    json factors = json::array();
    std::vector<std::string> parts;
    for (const auto &[f, lambda] : fn.factors) {
        if (lambda.is_zero())
            continue;
        factors.push_back({{"f", f.str()}, {"exponent", lambda.str()}});
        parts.push_back(power_text(f, lambda));
    }
    json e = nullptr;
    if (fn.exp_part) {
        e = exp_json(*fn.exp_part);
        parts.push_back(e["expression"].get<std::string>());
    }
    std::string expr;
    for (const auto &p : parts)
        expr += (expr.empty() ? "" : "*") + p;
    return {{"factors", factors},
            {"exp_part", e},
            {"cofactor", fn.cofactor.str()},
            {"role", role_name(fn.role)},
            {"rational", fn.rational},
            {"expression", expr.empty() ? "1" : expr}};
}

DarbouxFunction darboux_from_json(const json &j) {
    DarbouxFunction fn;
    for (const auto &f : j.at("factors"))
        fn.factors.push_back({poly_field(f, "f"), scalar_field(f, "exponent")});
    if (!j.at("exp_part").is_null())
        fn.exp_part = exp_from_json(j["exp_part"]);
    fn.cofactor = poly_field(j, "cofactor");
    std::string role = j.at("role").get<std::string>();
    if (role == role_name(DarbouxRole::FirstIntegral))
        fn.role = DarbouxRole::FirstIntegral;
    else if (role == role_name(DarbouxRole::IntegratingFactorInverse))
        fn.role = DarbouxRole::IntegratingFactorInverse;
    else if (role == role_name(DarbouxRole::GeneralInvariant))
        fn.role = DarbouxRole::GeneralInvariant;
    else
        throw Error("unknown role '" + role + "'");
    fn.rational = j.at("rational").get<bool>();
    return fn;
}

std::vector<ExponentialFactor> exponential_search(const PlanarSystem &sys, const std::vector<CurveWithCofactor> &curves,
                                                  int H, int power) {
    std::vector<BivarPoly> bases;
    for (const auto &c : curves)
        bases.push_back(c.f);
    for (size_t i = 0; i < curves.size(); ++i) {
        if (curves[i].f.is_real())
            continue;
        BivarPoly conj = curves[i].f.conj();
        for (size_t j = i + 1; j < curves.size(); ++j)
            if (associates(curves[j].f, conj))
                bases.push_back(realify(curves[i].f).primitive());
    }
    std::vector<BivarPoly> denominators{BivarPoly(1)};
    for (const auto &b : bases)
        for (int e = 1; e <= power; ++e)
            denominators.push_back(b.pow(e));
    std::vector<std::future<std::vector<ExponentialFactor>>> jobs;
    for (const auto &f0 : denominators)
        jobs.push_back(std::async(std::launch::async, [&sys, f0, H] { return find_exponential_factors(sys, f0, H); }));
    std::vector<ExponentialFactor> out;
    for (size_t i = 0; i < jobs.size(); ++i)
        for (auto &e : jobs[i].get()) {
            // exp(h/f^e) with f | h is already listed under a lower power
            if (!e.f0.is_constant() && !gcd(e.h, e.f0).is_constant())
                continue;
            out.push_back(std::move(e));
        }
    return out;
}

json puiseux_entry(const BivarPoly &f, int order, std::vector<std::string> &diag) {
    json roots = json::array();
    std::vector<PuiseuxSeries> gs;
    try {
        gs = newton_puiseux(f, order);
    } catch (const Error &e) {
        diag.push_back("puiseux: " + f.str() + ": " + e.what());
        return {{"curve", f.str()}, {"degree", f.degree()}, {"roots", roots}, {"error", e.what()}};
    }
    std::vector<std::future<json>> jobs;
    for (const auto &g : gs)
        jobs.push_back(std::async(std::launch::async, [&f, g] {
            json r = {{"series", g.str()}, {"polydromy", g.is_zero() ? 1 : g.polydromy()}};
            try {
                BivarPoly mp = minimal_polynomial(g, f.deg_x(), f.deg_y());
                r["minimal_polynomial"] = mp.str();
                r["round_trip"] = try_divide(f, mp).has_value();
            } catch (const Error &e) {
                r["minimal_polynomial"] = nullptr;
                r["round_trip"] = false;
                r["error"] = e.what();
            }
            return r;
        }));
    for (auto &j : jobs)
        roots.push_back(j.get());
    return {{"curve", f.str()}, {"degree", f.degree()}, {"roots", roots}};
}

json phi_section(const PlanarSystem &sys, const SystemSpec &spec, const AnalysisConfig &cfg) {
    const auto &o = spec.options;
    BivarPoly a0 = parse_polynomial(o.at("phi_a0"));
    BivarPoly num = parse_polynomial(o.at("phi_num"));
    int ram = o.count("phi_ram") ? positive_int("phi_ram", o.at("phi_ram")) : 1;
    json out = {{"input", {{"a0", a0.str()}, {"numerator", num.str()}, {"ramification", ram}}}};
    PhiInvariant phi = PhiInvariant::from_polynomials(a0, num, ram, cfg.order);
    try {
        out["M"] = verify_phi(phi, sys).str();
    } catch (const PhiNotInvariant &e) {
        out["verdict"] = "not_invariant";
        out["clause"] = e.clause();
        out["detail"] = e.what();
        return out;
    }
    try {
        PhiSynthesis syn = synthesize_exponential_factor(phi, sys, cfg.exp_degree.value_or(sys.degree()));
        out["R0"] = syn.eps.R[0].str();
        json rl = json::array();
        for (const auto &r : syn.eps.R)
            rl.push_back(r.str());
        out["R_list"] = rl;
        json raw = {{"h", syn.raw_candidate.h.str()}, {"f0", syn.raw_candidate.f0.str()}, {"passed", syn.raw_passed}};
        out["raw_candidate"] = raw;
        out["exponential_factor"] = exp_json(syn.factor);
        out["psi_cofactor"] = syn.psi_cofactor.str();
        out["psi_verified"] = syn.psi_verified;
        out["verdict"] = syn.psi_verified ? "exponential_factor" : "exponential_factor_unconfirmed";
    } catch (const Error &e) {
        out["verdict"] = "no_factor";
        out["detail"] = e.what();
    }
    return out;
}

// Drift on the part of the orbit before it first enters the excluded region.
json drift_check(const EvaluableInvariant &H, const Orbit &orbit) {
    json c;
    auto cut = H.first_excluded(orbit);
    if (cut && *cut < 2) {
        c["drift"] = nullptr;
        c["status"] = "excluded";
        return c;
    }
    Orbit prefix = orbit;
    if (cut) {
        prefix.samples.resize(*cut);
        c["excluded_from_t"] = static_cast<double>(orbit.samples[*cut][0]);
    }
    double drift = check_conserved(H, prefix);
    c["drift"] = drift;
    c["status"] = drift <= 1e-6 ? "conserved" : "drifting";
    return c;
}

json numeric_section(const PlanarSystem &sys, const json &integrals, const AnalysisConfig &cfg,
                     std::vector<std::string> &diag) {
    std::vector<OrbitRequest> orbits = cfg.orbits;
    if (orbits.empty()) {
        std::mt19937 rng(cfg.seed);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        for (int i = 0; i < cfg.random_orbits; ++i) {
            double x0 = u(rng);
            double y0 = u(rng);
            orbits.push_back({x0, y0, 1.0, 1e-3});
        }
    }
    std::vector<EvaluableInvariant> invariants;
    for (const auto &j : integrals)
        invariants.emplace_back(darboux_from_json(j), 1e-15, kReportRelMargin);
    json out = json::array();
    for (const auto &req : orbits) {
        json entry = {{"start", {req.x0, req.y0}}, {"h", req.h}, {"t_end", req.t_end}};
        json checks = json::array();
        try {
            Orbit orbit = integrate(sys, req.x0, req.y0, req.t_end, req.h);
            entry["samples"] = orbit.samples.size();
            entry["aborted"] = orbit.aborted;
            entry["t_reached"] = static_cast<double>(orbit.samples.back()[0]);
            for (size_t i = 0; i < invariants.size(); ++i) {
                json c = drift_check(invariants[i], orbit);
                c["first_integral"] = i;
                checks.push_back(c);
            }
            entry["status"] = "ok";
        } catch (const Error &e) {
            entry["status"] = "not_integrated";
            entry["detail"] = e.what();
            diag.push_back("numeric: orbit not integrated: " + std::string(e.what()));
        }
        entry["checks"] = checks;
        out.push_back(entry);
    }
    return out;
}

bool near(double a, double b) { return std::abs(a - b) <= 1e-12 + 1e-9 * std::abs(b); }

} // namespace

AnalysisConfig config_from_options(const std::map<std::string, std::string> &options) {
    AnalysisConfig cfg;
    if (auto it = options.find("max_degree"); it != options.end())
        cfg.max_degree = positive_int(it->first, it->second);
    if (auto it = options.find("exp_degree"); it != options.end())
        cfg.exp_degree = positive_int(it->first, it->second);
    if (auto it = options.find("exp_power"); it != options.end())
        cfg.exp_power = positive_int(it->first, it->second);
    if (auto it = options.find("order"); it != options.end())
        cfg.order = positive_int(it->first, it->second);
    if (auto it = options.find("seed"); it != options.end())
        cfg.seed = static_cast<unsigned>(positive_int(it->first, it->second));
    return cfg;
}

bool is_analysis_command(const std::string &c) {
    return c == "curves" || c == "expfactors" || c == "integral" || c == "puiseux" || c == "phi" || c == "all";
}

json analyze(const SystemSpec &spec, const std::string &command, const AnalysisConfig &cfg) {
    if (!is_analysis_command(command))
        throw PreconditionFailed("unknown command '" + command + "'");
    PlanarSystem sys = parse_system(spec);
    const bool all = command == "all";
    const bool want_curves = command != "phi";
    const bool want_exp = all || command == "expfactors" || command == "integral";
    const bool want_int = all || command == "integral";
    const bool want_puiseux = all || command == "puiseux";
    const bool want_phi = all || command == "phi";
    const int H = cfg.exp_degree.value_or(sys.degree());

    json options = {{"max_degree", cfg.max_degree},
                    {"exp_degree", H},
                    {"exp_power", cfg.exp_power},
                    {"order", cfg.order}};
    if (all)
        options["seed"] = cfg.seed;
    json report = {{"system",
                    {{"dx", sys.P().str()},
                     {"dy", sys.Q().str()},
                     {"degree", sys.degree()},
                     {"m", sys.m()},
                     {"command", command},
                     {"options", options}}},
                   {"curves", json::array()},
                   {"exponential_factors", json::array()},
                   {"first_integrals", json::array()},
                   {"inverse_integrating_factors", json::array()},
                   {"puiseux", json::array()},
                   {"phi", nullptr},
                   {"numeric_checks", json::array()}};
    std::vector<std::string> diag;

    std::future<json> phi_job;
    if (want_phi) {
        if (!spec.options.count("phi_a0") || !spec.options.count("phi_num")) {
            if (command == "phi")
                throw PreconditionFailed("the phi command needs option.phi_a0 and option.phi_num in the system file");
        } else {
            phi_job = std::async(std::launch::async, [&] { return phi_section(sys, spec, cfg); });
        }
    }

    CurveSearchResult cs;
    if (want_curves) {
        cs = find_invariant_curves(sys, cfg.max_degree);
        for (const auto &d : cs.diagnostics)
            diag.push_back("curves: " + d);
        if (!cs.complete)
            diag.push_back("curves: search incomplete; the list may miss curves");
        if (cs.has_families)
            diag.push_back("curves: some degrees carry families of curves; unit representatives listed");
        for (const auto &c : cs.curves)
            report["curves"].push_back({{"f", c.f.str()}, {"cofactor", c.k.str()}, {"degree", c.f.degree()}});
        sort_by_poly(report["curves"], "f");
    }

    std::vector<ExponentialFactor> exps;
    if (want_exp) {
        exps = exponential_search(sys, cs.curves, H, cfg.exp_power);
        json arr = json::array();
        for (const auto &e : exps)
            arr.push_back(exp_json(e));
        std::vector<json> items(arr.begin(), arr.end());
        std::stable_sort(items.begin(), items.end(), [](const json &a, const json &b) {
            if (a["degree"] != b["degree"])
                return a["degree"].get<int>() < b["degree"].get<int>();
            if (a["f0"] != b["f0"])
                return a["f0"].get<std::string>() < b["f0"].get<std::string>();
            return a["h"].get<std::string>() < b["h"].get<std::string>();
        });
        report["exponential_factors"] = json(items);
    }

    if (want_int) {
        DarbouxMembers members{cs.curves, exps};
        for (const auto &fn : find_first_integral(sys, members))
            report["first_integrals"].push_back(darboux_json(fn));
        for (const auto &fn : find_inverse_integrating_factor(sys, members))
            report["inverse_integrating_factors"].push_back(darboux_json(fn));
        if (members.empty())
            diag.push_back("integral: no invariant curves or exponential factors to combine");
    }

    if (want_puiseux) {
        for (const auto &c : cs.curves)
            if (c.f.deg_y() >= 1)
                report["puiseux"].push_back(puiseux_entry(c.f, cfg.order, diag));
        sort_by_poly(report["puiseux"], "curve");
    }

    if (phi_job.valid()) {
        report["phi"] = phi_job.get();
        if (report["phi"].contains("detail"))
            diag.push_back("phi: " + report["phi"]["detail"].get<std::string>());
    }

    if (all)
        report["numeric_checks"] = numeric_section(sys, report["first_integrals"], cfg, diag);
    report["diagnostics"] = diag;
    return report;
}

std::string emit_report(const json &report) { return report.dump(2) + "\n"; }

VerifyOutcome verify_report(const json &report) {
    VerifyOutcome out;
    if (!report.is_object() || !report.contains("system"))
        throw Error("not a report: missing 'system'");
    const json &s = report["system"];
    PlanarSystem sys(poly_field(s, "dx"), poly_field(s, "dy"));
    auto fail = [&](const std::string &what) { out.failures.push_back(what); };
    auto section = [&](const char *key) -> json {
        if (!report.contains(key) || report[key].is_null())
            return json::array();
        if (!report[key].is_array())
            throw Error(std::string("report section '") + key + "' is not an array");
        return report[key];
    };

    for (const auto &c : section("curves")) {
        ++out.checked;
        BivarPoly f = poly_field(c, "f"), k = poly_field(c, "cofactor");
        if (f.is_constant() || sys.apply(f) != k * f)
            fail("curve " + f.str() + ": X(f) != k f for k = " + k.str());
    }
    for (const auto &e : section("exponential_factors")) {
        ++out.checked;
        ExponentialFactor ef = exp_from_json(e);
        if (!verify_exponential_factor(ef, sys))
            fail("exponential factor exp((" + ef.h.str() + ")/(" + ef.f0.str() + ")): cofactor identity fails");
    }
    for (const char *key : {"first_integrals", "inverse_integrating_factors"})
        for (const auto &j : section(key)) {
            ++out.checked;
            DarbouxFunction fn = darboux_from_json(j);
            if (!verify_darboux(fn, sys))
                fail(std::string(key) + ": " + j.value("expression", std::string("?")) +
                     ": cofactor sum or role identity fails");
            if (std::string(key) == "first_integrals" && fn.role != DarbouxRole::FirstIntegral)
                fail("first_integrals entry with role " + role_name(fn.role));
        }

    const json &opts = s.contains("options") ? s["options"] : json::object();
    AnalysisConfig cfg;
    cfg.order = opts.value("order", kDefaultOrder);
    if (opts.contains("exp_degree"))
        cfg.exp_degree = opts["exp_degree"].get<int>();

    for (const auto &p : section("puiseux")) {
        ++out.checked;
        std::vector<std::string> scratch;
        json again = puiseux_entry(poly_field(p, "curve"), cfg.order, scratch);
        if (again != p)
            fail("puiseux data for " + p["curve"].get<std::string>() + " does not recompute");
        for (const auto &r : p.at("roots"))
            if (!r.value("round_trip", false))
                fail("puiseux root " + r["series"].get<std::string>() + " of " + p["curve"].get<std::string>() +
                     " does not round-trip");
    }

    if (report.contains("phi") && !report["phi"].is_null()) {
        ++out.checked;
        const json &ph = report["phi"];
        SystemSpec spec;
        const json &in = ph.at("input");
        spec.options["phi_a0"] = in.at("a0").get<std::string>();
        spec.options["phi_num"] = in.at("numerator").get<std::string>();
        spec.options["phi_ram"] = std::to_string(in.at("ramification").get<int>());
        if (phi_section(sys, spec, cfg) != ph)
            fail("phi section does not recompute");
        if (ph.contains("exponential_factor") && !verify_exponential_factor(exp_from_json(ph["exponential_factor"]), sys))
            fail("phi exponential factor fails the cofactor identity");
    }

    json nc = section("numeric_checks");
    if (!nc.empty()) {
        json integrals = section("first_integrals");
        std::vector<EvaluableInvariant> invariants;
        for (const auto &j : integrals)
            invariants.emplace_back(darboux_from_json(j), 1e-15, kReportRelMargin);
        for (const auto &entry : nc) {
            ++out.checked;
            if (entry.value("status", std::string()) != "ok")
                continue;
            auto start = entry.at("start");
            Orbit orbit = integrate(sys, start.at(0).get<double>(), start.at(1).get<double>(),
                                    entry.at("t_end").get<double>(), entry.at("h").get<double>());
            for (const auto &c : entry.at("checks")) {
                size_t i = c.at("first_integral").get<size_t>();
                if (i >= invariants.size()) {
                    fail("numeric check names a missing first integral");
                    continue;
                }
                json again = drift_check(invariants[i], orbit);
                again["first_integral"] = i;
                bool same = again.value("status", std::string()) == c.value("status", std::string()) &&
                            again["drift"].is_null() == c.at("drift").is_null();
                if (same && !c["drift"].is_null())
                    same = near(again["drift"].get<double>(), c["drift"].get<double>());
                if (!same)
                    fail("numeric drift of first integral " + std::to_string(i) + " does not recompute");
            }
        }
    }
    return out;
}

} // namespace darboux
