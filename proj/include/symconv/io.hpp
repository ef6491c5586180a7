#pragma once

#include "symconv/harness.hpp"

#include <json.hpp>

#include <string>

namespace symconv {

using Json = nlohmann::ordered_json;

/// {roots, gram, sigma, multiplicities}; rationals as "p/q" strings.
Json to_json(const SymmetricPairDatum& d);
/// Throws ConfigError on malformed input, plus the errors of SymmetricPairDatum::build.
SymmetricPairDatum datum_from_json(const Json& j);

Json to_json(const QVector& v);
Json to_json(const PolyhedralSet& s);
Json to_json(const PositiveSystem& P);
Json to_json(const ExtremizeResult& r);
Json to_json(const HessianReport& r);
Json to_json(const Report& r);
/// Inverse of to_json(Report). Throws ConfigError.
Report report_from_json(const Json& j);

/// Overlays the keys present in j onto base. Keys mirror the CLI flags. Throws ConfigError.
VerificationConfig config_from_json(const Json& j, VerificationConfig base = {});

/// Throws IoError, ConfigError.
Json read_json_file(const std::string& path);

}  // namespace symconv
