#include "darboux/report.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace darboux;

namespace {

constexpr int kOk = 0;
constexpr int kInputError = 1;
constexpr int kVerifyFailed = 2;

OrbitRequest parse_orbit(const std::string &text) {
    std::vector<double> v;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) {
        size_t used = 0;
        double d = 0;
        try {
            d = std::stod(part, &used);
        } catch (const std::exception &) {
            used = 0;
        }
        if (used == 0 || used != part.size())
            throw PreconditionFailed("--orbit expects x0,y0,tend,h; cannot read '" + part + "'");
        v.push_back(d);
    }
    if (v.size() != 4)
        throw PreconditionFailed("--orbit expects four comma-separated numbers, got '" + text + "'");
    if (!(v[2] > 0) || !(v[3] > 0))
        throw PreconditionFailed("--orbit needs positive tend and h");
    return {v[0], v[1], v[2], v[3]};
}

void write_output(const std::string &text, const std::string &path) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw PreconditionFailed("cannot write " + path);
    f << text;
}

struct Flags {
    std::string input;
    std::string out;
    std::optional<int> max_degree, exp_degree, exp_power, order;
    std::optional<unsigned> seed;
    std::vector<std::string> orbits;
};

int run_analysis(const std::string &command, const Flags &fl) {
    if (!std::ifstream(fl.input))
        throw PreconditionFailed("cannot read " + fl.input);
    SystemSpec spec = load_system_file(fl.input);
    AnalysisConfig cfg = config_from_options(spec.options);
    if (fl.max_degree)
        cfg.max_degree = *fl.max_degree;
    if (fl.exp_degree)
        cfg.exp_degree = *fl.exp_degree;
    if (fl.exp_power)
        cfg.exp_power = *fl.exp_power;
    if (fl.order)
        cfg.order = *fl.order;
    if (fl.seed)
        cfg.seed = *fl.seed;
    for (const auto &o : fl.orbits)
        cfg.orbits.push_back(parse_orbit(o));

    nlohmann::json report = analyze(spec, command, cfg);
    write_output(emit_report(report), fl.out);
    VerifyOutcome v = verify_report(report);
    for (const auto &f : v.failures)
        std::cerr << "verification failed: " << f << "\n";
    return v.ok() ? kOk : kVerifyFailed;
}

int run_verify(const Flags &fl) {
    std::ifstream f(fl.input, std::ios::binary);
    if (!f)
        throw PreconditionFailed("cannot read " + fl.input);
    nlohmann::json report;
    try {
        report = nlohmann::json::parse(f);
    } catch (const nlohmann::json::exception &e) {
        throw PreconditionFailed(std::string("report is not valid JSON: ") + e.what());
    }
    VerifyOutcome v;
    try {
        v = verify_report(report);
    } catch (const nlohmann::json::exception &e) {
        throw PreconditionFailed(std::string("malformed report: ") + e.what());
    }
    std::ostringstream msg;
    for (const auto &failure : v.failures)
        msg << "FAIL " << failure << "\n";
    msg << (v.ok() ? "verified " : "rejected ") << v.checked << " items\n";
    write_output(msg.str(), fl.out);
    return v.ok() ? kOk : kVerifyFailed;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Darboux integrability analysis of planar polynomial systems"};
    app.require_subcommand(1);
    Flags fl;

    const std::vector<std::pair<std::string, std::string>> commands{
        {"curves", "invariant algebraic curves up to --max-degree"},
        {"expfactors", "exponential factors over the found curves and their powers"},
        {"integral", "Darboux first integrals and inverse integrating factors"},
        {"puiseux", "Puiseux roots of the found curves with minimal-polynomial round trips"},
        {"phi", "check exp(N/A0) from option.phi_a0 / phi_num and synthesize its exponential factor"},
        {"all", "full pipeline plus numeric conservation checks"},
        {"verify", "re-check every identity in a report"}};
    for (const auto &[name, help] : commands) {
        CLI::App *sub = app.add_subcommand(name, help);
        sub->add_option("input", fl.input, name == "verify" ? "report file" : "system file")->required();
        sub->add_option("--out", fl.out, "output path (default stdout)");
        if (name == "verify")
            continue;
        sub->add_option("--max-degree", fl.max_degree, "curve degree bound (default 4)")->check(CLI::PositiveNumber);
        sub->add_option("--exp-degree", fl.exp_degree, "exponential numerator degree bound (default: system degree)")
            ->check(CLI::PositiveNumber);
        sub->add_option("--exp-power", fl.exp_power, "largest curve power used as denominator (default 2)")
            ->check(CLI::PositiveNumber);
        sub->add_option("--order", fl.order, "Puiseux truncation order (default 24)")->check(CLI::PositiveNumber);
        sub->add_option("--seed", fl.seed, "seed for random orbit starts")->check(CLI::PositiveNumber);
        sub->add_option("--orbit", fl.orbits, "orbit x0,y0,tend,h (repeatable)")->allow_extra_args(false);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e);
        return code == 0 ? kOk : kInputError;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    try {
        return command == "verify" ? run_verify(fl) : run_analysis(command, fl);
    } catch (const ParseError &e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kInputError;
    } catch (const CoprimalityViolation &e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kInputError;
    } catch (const PreconditionFailed &e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kInputError;
    } catch (const Error &e) {
        std::cerr << "analysis error: " << e.what() << "\n";
        return kVerifyFailed;
    }
}
