#include "cycledeg/serialize.hpp"

#include "cycledeg/errors.hpp"

namespace cycledeg {

using nlohmann::json;

namespace {

json checks_json(const std::vector<Check>& checks) {
    json out = json::array();
    for (const auto& c : checks) {
        json item{{"name", c.name}, {"passed", c.passed}};
        if (!c.detail.empty()) item["detail"] = c.detail;
        out.push_back(std::move(item));
    }
    return out;
}

std::uint64_t get_u64(const json& j, const char* key) {
    if (!j.contains(key)) throw ParameterError(std::string("certificate: missing field '") + key + "'");
    const auto& v = j.at(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
        throw ParameterError(std::string("certificate: field '") + key + "' must be a non-negative integer");
    return v.get<std::uint64_t>();
}

}  // namespace

json to_json(const Certificate& cert) {
    json entries = json::array();
    for (const auto& e : cert.entries) entries.push_back({{"q", e.q}, {"i", e.i}, {"j", e.j}, {"k", e.k}});
    json premises = json::array();
    for (const auto& p : cert.premises) {
        json item{{"kind", to_string(p.kind)}, {"q", p.q}};
        if (p.kind == PremiseKind::AbelianFactorial) item["k"] = p.k;
        premises.push_back(std::move(item));
    }
    return json{{"schema_version", Certificate::kSchemaVersion},
                {"n", cert.n},
                {"d", cert.d},
                {"mode", to_string(cert.mode)},
                {"entries", std::move(entries)},
                {"premises", std::move(premises)}};
}

json to_json(const VerificationReport& report, const Certificate& cert) {
    json entries = json::array();
    for (const auto& e : report.entries)
        entries.push_back({{"q", e.q}, {"passed", e.passed}, {"checks", checks_json(e.checks)}});
    return json{{"schema_version", kReportSchemaVersion},
                {"kind", "verification_report"},
                {"n", cert.n},
                {"d", cert.d},
                {"mode", to_string(cert.mode)},
                {"passed", report.passed},
                {"conditional_on", report.conditional_on},
                {"checks", checks_json(report.checks)},
                {"entries", std::move(entries)}};
}

json to_json(const RationalExampleReport& report) {
    json qs = json::array();
    for (const auto& rc : report.checks) {
        json item{{"q", rc.q}, {"passed", rc.passed}, {"checks", checks_json(rc.checks)},
                  {"small_k_warning", rc.small_k_warning}};
        item["k"] = rc.k ? json(*rc.k) : json(nullptr);
        qs.push_back(std::move(item));
    }
    return json{{"schema_version", kReportSchemaVersion},
                {"kind", "rational_example_report"},
                {"d", report.d},
                {"passed", report.passed},
                {"coverage", checks_json({report.coverage}).front()},
                {"qs", std::move(qs)}};
}

Certificate certificate_from_json(const json& j) {
    if (!j.is_object()) throw ParameterError("certificate: expected a JSON object");
    const auto version = get_u64(j, "schema_version");
    if (version != static_cast<std::uint64_t>(Certificate::kSchemaVersion))
        throw ParameterError("certificate: unsupported schema_version " + std::to_string(version));
    Certificate cert;
    cert.n = static_cast<unsigned>(get_u64(j, "n"));
    cert.d = get_u64(j, "d");
    if (!j.contains("mode") || !j.at("mode").is_string()) throw ParameterError("certificate: missing 'mode'");
    cert.mode = parse_mode(j.at("mode").get<std::string>());
    if (!j.contains("entries") || !j.at("entries").is_array()) throw ParameterError("certificate: missing 'entries'");
    for (const auto& e : j.at("entries"))
        cert.entries.push_back({get_u64(e, "q"), get_u64(e, "i"), get_u64(e, "j"), get_u64(e, "k"), cert.mode});
    if (!j.contains("premises") || !j.at("premises").is_array())
        throw ParameterError("certificate: missing 'premises'");
    for (const auto& p : j.at("premises")) {
        if (!p.contains("kind") || !p.at("kind").is_string()) throw ParameterError("certificate: premise without kind");
        Premise premise{parse_premise_kind(p.at("kind").get<std::string>()), get_u64(p, "q"), 0};
        if (premise.kind == PremiseKind::AbelianFactorial) premise.k = get_u64(p, "k");
        cert.premises.push_back(premise);
    }
    return cert;
}

Certificate parse_certificate(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParameterError(std::string("certificate: invalid JSON: ") + e.what());
    }
    return certificate_from_json(j);
}

std::string canonical(const json& j) { return j.dump(2) + "\n"; }

}  // namespace cycledeg
