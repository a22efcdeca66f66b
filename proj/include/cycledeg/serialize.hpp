#pragma once
// Canonical text form of certificates and reports: JSON with sorted keys,
// two-space indent, decimal integers, trailing newline. Byte-stable for a
// fixed input.

#include <string>

#include "json.hpp"

#include "cycledeg/certify.hpp"

namespace cycledeg {

inline constexpr int kReportSchemaVersion = 1;

nlohmann::json to_json(const Certificate& cert);
nlohmann::json to_json(const VerificationReport& report, const Certificate& cert);
nlohmann::json to_json(const RationalExampleReport& report);

// Throws ParameterError on malformed input or an unknown schema version.
Certificate certificate_from_json(const nlohmann::json& j);
Certificate parse_certificate(const std::string& text);

std::string canonical(const nlohmann::json& j);

}  // namespace cycledeg
