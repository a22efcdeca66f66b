#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "cycledeg/arith.hpp"
#include "cycledeg/certify.hpp"
#include "cycledeg/density.hpp"
#include "cycledeg/dickman.hpp"
#include "cycledeg/errors.hpp"
#include "cycledeg/kernels.hpp"
#include "cycledeg/serialize.hpp"

namespace cycledeg::cli {
namespace {

using nlohmann::json;

enum class Format { Text, Json, Csv };

// Everything a subcommand may read. Validated before execution.
struct RunConfig {
    std::string subcommand;
    unsigned n = 3;
    std::string d, d_max, N, range_lo = "1";
    std::string mode = "FULL";
    std::string lambda, lambda_pow;
    double tol = 1e-9;
    double u = -1.0, u_max = -1.0, step = 0.0625;
    std::string format = "text";
    unsigned threads = 1;
    std::string budget;
    std::string checkpoints;
    std::string qs;
    std::string file, out_file;
    bool bounds = false;
    std::string isa;
};

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Decimal integer, optionally in "AeB" / "10^B" shorthand.
std::uint64_t parse_count(const std::string& text, const char* what) {
    auto digits = [](const std::string& s) {
        return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
    };
    auto bad = [&] { return UsageError(std::string("invalid ") + what + ": '" + text + "'"); };
    std::string mant = text, exp;
    if (auto e = text.find_first_of("eE"); e != std::string::npos) {
        mant = text.substr(0, e);
        exp = text.substr(e + 1);
    } else if (auto c = text.find('^'); c != std::string::npos) {
        mant = text.substr(0, c);
        exp = text.substr(c + 1);
        if (mant != "10") throw bad();
        mant = "1";
    }
    if (!digits(mant) || (!exp.empty() && !digits(exp)) || mant.size() > 19 || exp.size() > 2) throw bad();
    u128 v = std::stoull(mant);
    const unsigned e = exp.empty() ? 0 : static_cast<unsigned>(std::stoul(exp));
    for (unsigned i = 0; i < e; ++i) {
        v *= 10;
        if (v > ~std::uint64_t{0}) throw bad();
    }
    return static_cast<std::uint64_t>(v);
}

std::vector<std::uint64_t> parse_list(const std::string& text, const char* what) {
    std::vector<std::uint64_t> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(parse_count(item, what));
    return out;
}

Format parse_format(const std::string& text, std::initializer_list<Format> allowed) {
    Format f;
    if (text == "text")
        f = Format::Text;
    else if (text == "json")
        f = Format::Json;
    else if (text == "csv")
        f = Format::Csv;
    else
        throw UsageError("unknown format '" + text + "'");
    if (std::find(allowed.begin(), allowed.end(), f) == allowed.end())
        throw UsageError("format '" + text + "' is not supported by this subcommand");
    return f;
}

std::string fmt_double(double v, int digits = 12) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

void require(const std::string& value, const char* flag) {
    if (value.empty()) throw UsageError(std::string("missing required option ") + flag);
}

std::optional<Lambda> lambda_of(const RunConfig& cfg) {
    if (!cfg.lambda.empty() && !cfg.lambda_pow.empty())
        throw UsageError("--lambda and --lambda-pow are mutually exclusive");
    try {
        if (!cfg.lambda.empty()) return Lambda::value(Rational::parse(cfg.lambda));
        if (!cfg.lambda_pow.empty()) return Lambda::nth_power(Rational::parse(cfg.lambda_pow));
    } catch (const ParameterError& e) {
        throw UsageError(e.what());
    }
    return std::nullopt;
}

std::uint64_t budget_of(const RunConfig& cfg, std::uint64_t fallback) {
    return cfg.budget.empty() ? fallback : parse_count(cfg.budget, "--budget");
}

void check_budget(std::uint64_t value, std::uint64_t budget, const char* what) {
    if (value > budget)
        throw CapacityError(std::string(what) + " = " + std::to_string(value) + " exceeds budget " + std::to_string(budget));
}

Mode mode_of(const RunConfig& cfg) {
    try {
        return parse_mode(cfg.mode);
    } catch (const ParameterError& e) {
        throw UsageError(e.what());
    }
}

// ---------------------------------------------------------------------------

void print_certificate_text(std::ostream& out, const Certificate& cert, const VerificationReport& report) {
    out << "certificate n=" << cert.n << " d=" << cert.d << " mode=" << to_string(cert.mode) << "\n";
    for (const auto& e : cert.entries)
        out << "  q=" << e.q << " i=" << e.i << " j=" << e.j << " k=" << e.k << "\n";
    out << "premises:";
    for (const auto& p : cert.premises) {
        out << " " << to_string(p.kind) << "(" << p.q;
        if (p.kind == PremiseKind::AbelianFactorial) out << ", k=" << p.k;
        out << ")";
    }
    out << "\nverification: " << (report.passed ? "PASS" : "FAIL") << "\n";
    for (const auto& f : report.failures()) out << "  failed: " << f << "\n";
    out << "conditional on: " << report.conditional_on << "\n";
}

int cmd_certify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    require(cfg.d, "--d");
    const auto format = parse_format(cfg.format, {Format::Text, Format::Json});
    const std::uint64_t d = parse_count(cfg.d, "--d");
    const Mode mode = mode_of(cfg);
    Certificate cert;
    try {
        cert = build_certificate(cfg.n, d, mode);
    } catch (const PreconditionError& e) {
        if (format == Format::Json) {
            out << canonical(json{{"schema_version", kReportSchemaVersion},
                                  {"kind", "condition_failure"},
                                  {"n", cfg.n},
                                  {"d", d},
                                  {"mode", to_string(mode)},
                                  {"constraint", e.constraint()},
                                  {"detail", e.detail()}});
        }
        std::string constraint = e.constraint();
        if (constraint == "gcd(d, n!) = 1") constraint = "gcd(d, n!) != 1";
        err << "condition failed: " << constraint << " (" << e.detail() << ")\n";
        return kPredicateFalse;
    }
    const auto report = verify_certificate(cert);
    if (!cfg.out_file.empty()) {
        std::ofstream file(cfg.out_file);
        if (!file) throw UsageError("cannot write " + cfg.out_file);
        file << canonical(to_json(cert));
    }
    if (format == Format::Json)
        out << canonical(json{{"schema_version", kReportSchemaVersion},
                              {"kind", "certify"},
                              {"certificate", to_json(cert)},
                              {"verification", to_json(report, cert)}});
    else
        print_certificate_text(out, cert, report);
    return report.passed ? kOk : kPredicateFalse;
}

int cmd_check(const RunConfig& cfg, std::ostream& out, std::ostream&) {
    require(cfg.file, "--file");
    const auto format = parse_format(cfg.format, {Format::Text, Format::Json});
    std::ifstream in(cfg.file);
    if (!in) throw UsageError("cannot read " + cfg.file);
    std::stringstream buffer;
    buffer << in.rdbuf();
    Certificate cert;
    try {
        cert = parse_certificate(buffer.str());
    } catch (const ParameterError& e) {
        throw UsageError(e.what());
    }
    const auto report = verify_certificate(cert);
    if (format == Format::Json)
        out << canonical(to_json(report, cert));
    else
        print_certificate_text(out, cert, report);
    return report.passed ? kOk : kPredicateFalse;
}

int cmd_enumerate(const RunConfig& cfg, std::ostream& out, std::ostream&) {
    require(cfg.d_max, "--d-max");
    const auto format = parse_format(cfg.format, {Format::Text, Format::Json, Format::Csv});
    const std::uint64_t d_max = parse_count(cfg.d_max, "--d-max");
    check_budget(d_max, budget_of(cfg, kMaxFactorRange), "d_max");
    const Mode mode = mode_of(cfg);
    const auto list = enumerate_qualifying(cfg.n, d_max, mode, cfg.threads);
    if (format == Format::Json) {
        out << canonical(json{{"schema_version", kReportSchemaVersion},
                              {"kind", "enumerate"},
                              {"n", cfg.n},
                              {"d_max", d_max},
                              {"mode", to_string(mode)},
                              {"count", list.size()},
                              {"degrees", list}});
    } else {
        if (format == Format::Csv) out << "d\n";
        for (auto d : list) out << d << "\n";
    }
    return kOk;
}

int cmd_smallest(const RunConfig& cfg, std::ostream& out, std::ostream&) {
    const auto format = parse_format(cfg.format, {Format::Text, Format::Json});
    const Mode mode = mode_of(cfg);
    const auto d = smallest_qualifying(cfg.n, mode, cfg.threads, budget_of(cfg, kMaxFactorRange));
    if (format == Format::Json)
        out << canonical(json{{"schema_version", kReportSchemaVersion},
                              {"kind", "smallest"},
                              {"n", cfg.n},
                              {"mode", to_string(mode)},
                              {"d", d}});
    else
        out << d << "\n";
    return kOk;
}

int cmd_dickman(const RunConfig& cfg, std::ostream& out, std::ostream&) {
    const bool single = cfg.u >= 0.0;
    const bool table = cfg.u_max >= 0.0;
    if (single == table) throw UsageError("give exactly one of --u or --u-max");
    if (single) {
        const auto format = parse_format(cfg.format, {Format::Text, Format::Json});
        const double value = rho(cfg.u, cfg.tol);
        if (format == Format::Json)
            out << canonical(json{{"schema_version", kReportSchemaVersion},
                                  {"kind", "dickman"},
                                  {"u", cfg.u},
                                  {"tol", cfg.tol},
                                  {"rho", value}});
        else
            out << fmt_double(value, 16) << "\n";
        return kOk;
    }
    const auto format = parse_format(cfg.format == "text" ? "csv" : cfg.format, {Format::Csv, Format::Json});
    const auto t = rho_table(cfg.u_max, cfg.step, cfg.tol);
    if (format == Format::Json)
        out << canonical(json{{"schema_version", kReportSchemaVersion},
                              {"kind", "dickman_table"},
                              {"step", t.step},
                              {"u_max", t.u_max},
                              {"abs_error_bound", t.abs_error_bound},
                              {"values", t.values}});
    else
        out << t.to_csv();
    return kOk;
}

int cmd_density(const RunConfig& cfg, std::ostream& out, std::ostream&) {
    require(cfg.N, "--N");
    const auto format = parse_format(cfg.format, {Format::Text, Format::Json, Format::Csv});
    const std::uint64_t N = parse_count(cfg.N, "--N");
    check_budget(N, budget_of(cfg, kMaxFactorRange), "N");
    DensityMode mode;
    try {
        mode = parse_density_mode(cfg.mode);
    } catch (const ParameterError& e) {
        throw UsageError(e.what());
    }
    const auto lambda = lambda_of(cfg);
    if ((mode == DensityMode::LambdaPrime || mode == DensityMode::LambdaPrimePower) && !lambda)
        throw UsageError(to_string(mode) + " requires --lambda or --lambda-pow");
    auto checkpoints = parse_list(cfg.checkpoints, "--checkpoints");
    if (std::find(checkpoints.begin(), checkpoints.end(), N) == checkpoints.end()) checkpoints.push_back(N);
    for (auto m : checkpoints)
        if (m < 1 || m > N) throw UsageError("checkpoints must lie in [1, N]");
    const auto r = empirical_density(cfg.n, N, mode, lambda, checkpoints, cfg.threads);
    if (format == Format::Csv) {
        out << trajectory_csv(r);
    } else if (format == Format::Json) {
        json samples = json::array();
        for (auto [m, c] : r.samples) samples.push_back({{"m", m}, {"count", c}});
        out << canonical(json{{"schema_version", kReportSchemaVersion},
                              {"kind", "density"},
                              {"n", r.n},
                              {"N", r.N},
                              {"mode", to_string(r.mode)},
                              {"lambda", r.lambda ? json(r.lambda->describe()) : json(nullptr)},
                              {"count", r.count},
                              {"empirical", r.empirical},
                              {"theoretical", std::isnan(r.theoretical) ? json(nullptr) : json(r.theoretical)},
                              {"samples", samples}});
    } else {
        out << "mode=" << to_string(r.mode) << " n=" << r.n << " N=" << r.N;
        if (r.lambda) out << " " << r.lambda->describe();
        out << "\ncount=" << r.count << " empirical=" << fmt_double(r.empirical)
            << " theoretical=" << fmt_double(r.theoretical) << "\n";
    }
    return kOk;
}

int cmd_ihc(const RunConfig& cfg, std::ostream& out, std::ostream&) {
    require(cfg.N, "--N");
    const auto format = parse_format(cfg.format, {Format::Text, Format::Json});
    const std::uint64_t N = parse_count(cfg.N, "--N");
    const std::uint64_t lo = parse_count(cfg.range_lo, "--range-lo");
    check_budget(N, budget_of(cfg, kMaxFactorRange), "N");
    if (lo < 1 || lo > N) throw UsageError("need 1 <= --range-lo <= --N");
    const auto r = ihc_fraction(cfg.n, N, lo, cfg.threads);
    if (format == Format::Json)
        out << canonical(json{{"schema_version", kReportSchemaVersion},
                              {"kind", "ihc"},
                              {"n", r.n},
                              {"N", r.N},
                              {"range_lo", r.range_lo},
                              {"count", r.count},
                              {"fraction", r.fraction}});
    else
        out << "n=" << r.n << " range=[" << r.range_lo << ", " << r.N << "] count=" << r.count
            << " fraction=" << fmt_double(r.fraction) << "\n";
    return kOk;
}

int cmd_diagnostics(const RunConfig& cfg, std::ostream& out, std::ostream&) {
    require(cfg.checkpoints, "--checkpoints");
    const auto format = parse_format(cfg.format, {Format::Text, Format::Json, Format::Csv});
    auto checkpoints = parse_list(cfg.checkpoints, "--checkpoints");
    std::sort(checkpoints.begin(), checkpoints.end());
    const auto budget = budget_of(cfg, kDefaultSieveBudget);
    for (auto m : checkpoints) {
        if (m < 2) throw UsageError("checkpoints must be >= 2");
        check_budget(m, budget, "checkpoint");
    }
    std::optional<Lambda> lambda = lambda_of(cfg);
    if (cfg.bounds && !lambda) lambda = Lambda::value(Rational{1, 1});
    const auto rows = convergence_diagnostics(cfg.n, checkpoints, cfg.threads, cfg.bounds ? lambda : std::nullopt);
    const double limit = std::log(static_cast<double>(cfg.n));
    if (format == Format::Json) {
        json items = json::array();
        for (const auto& r : rows) {
            json item{{"m", r.m}, {"prime_powers", r.prime_powers}, {"prime_power_ratio", r.prime_power_ratio},
                      {"mertens", r.mertens}, {"mertens_limit", limit}};
            if (r.bound)
                item["bound"] = {{"small_over_x", r.bound->small_over_x}, {"large_sum", r.bound->large_sum}};
            items.push_back(std::move(item));
        }
        out << canonical(json{{"schema_version", kReportSchemaVersion}, {"kind", "diagnostics"}, {"n", cfg.n},
                              {"rows", items}});
    } else {
        out << "m,prime_powers,prime_power_ratio,mertens,mertens_limit";
        if (cfg.bounds) out << ",small_over_x,large_sum";
        out << "\n";
        for (const auto& r : rows) {
            out << r.m << "," << r.prime_powers << "," << fmt_double(r.prime_power_ratio, 17) << ","
                << fmt_double(r.mertens, 17) << "," << fmt_double(limit, 17);
            if (r.bound) out << "," << fmt_double(r.bound->small_over_x, 17) << "," << fmt_double(r.bound->large_sum, 17);
            out << "\n";
        }
    }
    return kOk;
}

int cmd_verify_q_example(const RunConfig& cfg, std::ostream& out, std::ostream&) {
    require(cfg.d, "--d");
    const auto format = parse_format(cfg.format, {Format::Text, Format::Json});
    const std::uint64_t d = parse_count(cfg.d, "--d");
    if (d == 0) throw UsageError("--d must be >= 1");
    std::vector<std::uint64_t> qs;
    if (cfg.qs.empty())
        for (const auto& f : factorize(d).factors) qs.push_back(f.prime);
    else
        qs = parse_list(cfg.qs, "--qs");
    const auto report = verify_rational_example(d, qs);
    if (format == Format::Json) {
        out << canonical(to_json(report));
    } else {
        out << "d=" << d << " " << (report.passed ? "PASS" : "FAIL") << "\n";
        for (const auto& rc : report.checks) {
            out << "  q=" << rc.q << " k=" << (rc.k ? std::to_string(*rc.k) : std::string("-")) << " "
                << (rc.passed ? "pass" : "fail");
            for (const auto& c : rc.checks)
                if (!c.passed) out << " [" << c.name << " failed]";
            if (rc.small_k_warning) out << " [warning: k in [9, 37]]";
            out << "\n";
        }
        if (!report.coverage.passed) out << "  " << report.coverage.detail << "\n";
    }
    return report.passed ? kOk : kPredicateFalse;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"cycledeg: degree certificates and density sieves for curves on hypersurfaces"};
    app.require_subcommand(1);
    RunConfig cfg;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--format", cfg.format, "Output format: text, json or csv")->capture_default_str();
        sub->add_option("--threads", cfg.threads, "Worker threads (output does not depend on it)")
            ->capture_default_str()
            ->check(CLI::Range(1u, 256u));
        sub->add_option("--isa", cfg.isa, "Force kernel ISA: scalar or avx2");
    };
    auto add_n = [&](CLI::App* sub) {
        sub->add_option("--n", cfg.n, "Dimension n")->capture_default_str();
    };

    auto* certify = app.add_subcommand("certify", "Build and verify a certificate that d | f_n(d)");
    add_n(certify);
    certify->add_option("--d", cfg.d, "Degree d")->required();
    certify->add_option("--mode", cfg.mode, "FULL or WEAK")->capture_default_str();
    certify->add_option("--out", cfg.out_file, "Also write the certificate to this file");
    add_common(certify);

    auto* check = app.add_subcommand("check", "Verify a serialized certificate");
    check->add_option("--file", cfg.file, "Certificate file")->required();
    add_common(check);

    auto* enumerate = app.add_subcommand("enumerate", "List qualifying degrees d <= d_max");
    add_n(enumerate);
    enumerate->add_option("--d-max", cfg.d_max, "Upper bound")->required();
    enumerate->add_option("--mode", cfg.mode, "FULL or WEAK")->capture_default_str();
    enumerate->add_option("--budget", cfg.budget, "Sieve budget");
    add_common(enumerate);

    auto* smallest = app.add_subcommand("smallest", "Smallest qualifying degree");
    add_n(smallest);
    smallest->add_option("--mode", cfg.mode, "FULL or WEAK")->capture_default_str();
    smallest->add_option("--budget", cfg.budget, "Largest d to search");
    add_common(smallest);

    auto* dickman = app.add_subcommand("dickman", "Dickman rho at a point or as a table");
    dickman->add_option("--u", cfg.u, "Evaluate rho(u)");
    dickman->add_option("--u-max", cfg.u_max, "Tabulate rho on [0, u_max]");
    dickman->add_option("--step", cfg.step, "Table step (1/step integer)")->capture_default_str();
    dickman->add_option("--tol", cfg.tol, "Absolute tolerance")->capture_default_str();
    add_common(dickman);

    auto* density = app.add_subcommand("density", "Empirical density of qualifying degrees");
    add_n(density);
    density->add_option("--N", cfg.N, "Sieve bound")->required();
    density->add_option("--mode", cfg.mode, "PROP16_FULL, PROP16_WEAK, LAMBDA_PRIMEPOWER or LAMBDA_PRIME")
        ->capture_default_str();
    density->add_option("--lambda", cfg.lambda, "lambda as p/q or decimal");
    density->add_option("--lambda-pow", cfg.lambda_pow, "lambda^n as p/q or decimal");
    density->add_option("--checkpoints", cfg.checkpoints, "Comma-separated m values for the trajectory");
    density->add_option("--budget", cfg.budget, "Sieve budget");
    add_common(density);

    auto* ihc = app.add_subcommand("ihc", "Fraction of degrees with a certified prime divisor of f_n(d)");
    add_n(ihc);
    ihc->add_option("--N", cfg.N, "Range end")->required();
    ihc->add_option("--range-lo", cfg.range_lo, "Range start")->capture_default_str();
    ihc->add_option("--budget", cfg.budget, "Sieve budget");
    add_common(ihc);

    auto* diagnostics = app.add_subcommand("diagnostics", "Prime-power ratios and reciprocal prime sums");
    add_n(diagnostics);
    diagnostics->add_option("--checkpoints", cfg.checkpoints, "Comma-separated m values")->required();
    diagnostics->add_flag("--bounds", cfg.bounds, "Include the prime-power (e >= 2) bound sums");
    diagnostics->add_option("--lambda", cfg.lambda, "lambda for the bound sums (default 1)");
    diagnostics->add_option("--budget", cfg.budget, "Sieve budget");
    add_common(diagnostics);

    auto* qexample = app.add_subcommand("verify-q-example", "Check d = q^3 + 6k conditions for each prime q | d");
    qexample->add_option("--d", cfg.d, "Degree d")->required();
    qexample->add_option("--qs", cfg.qs, "Comma-separated primes (default: prime divisors of d)");
    add_common(qexample);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n" << app.help();
        return kUsage;
    }

    const std::map<CLI::App*, std::function<int(const RunConfig&, std::ostream&, std::ostream&)>> handlers{
        {certify, cmd_certify},     {check, cmd_check},     {enumerate, cmd_enumerate},
        {smallest, cmd_smallest},   {dickman, cmd_dickman}, {density, cmd_density},
        {ihc, cmd_ihc},             {diagnostics, cmd_diagnostics}, {qexample, cmd_verify_q_example},
    };
    try {
        for (auto& [sub, handler] : handlers) {
            if (!sub->parsed()) continue;
            cfg.subcommand = sub->get_name();
            if (!cfg.isa.empty()) {
                if (cfg.isa == "scalar")
                    kernels::force_isa(kernels::Isa::Scalar);
                else if (cfg.isa == "avx2")
                    kernels::force_isa(kernels::Isa::Avx2);
                else
                    throw UsageError("unknown --isa '" + cfg.isa + "'");
            }
            return handler(cfg, out, err);
        }
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const ParameterError& e) {
        err << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::invalid_argument& e) {
        err << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const CapacityError& e) {
        err << "capacity error: " << e.what() << "\n";
        return kCapacity;
    } catch (const PreconditionError& e) {
        err << "condition failed: " << e.what() << "\n";
        return kPredicateFalse;
    }
    return kUsage;
}

}  // namespace cycledeg::cli
