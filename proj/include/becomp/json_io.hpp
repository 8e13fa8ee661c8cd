#pragma once

// JSON encoding of model objects and reports. Parsing is strict: unknown keys
// and missing parameters raise ConfigError naming the offending path.

#include <json.hpp>
#include <string>
#include <vector>

#include "becomp/manifold.hpp"
#include "becomp/profiles.hpp"
#include "becomp/report.hpp"
#include "becomp/sobolev.hpp"

namespace becomp {

using Json = nlohmann::json;

// Finite values as numbers; inf, -inf and nan as the strings "inf", "-inf", "nan".
Json number_to_json(double v);

Json to_json(const VerificationReport& r, bool include_runtime = true);
Json to_json(const DecayProfile& p);
Json to_json(const ModelManifold& m);
Json to_json(const RadialDomain& d);
Json to_json(const RadialFunction& f);

DecayProfile profile_from_json(const Json& j, const std::string& path = "profile");
ModelManifold manifold_from_json(const Json& j, const std::string& path = "manifold");
RadialDomain domain_from_json(const Json& j, const std::string& path = "domain");
RadialFunction function_from_json(const Json& j, const std::string& path = "function");

// Helpers shared by the config parser.
void require_keys(const Json& obj, const std::string& path, const std::vector<std::string>& required,
                  const std::vector<std::string>& optional = {});
double get_number(const Json& obj, const std::string& key, const std::string& path);

// 64-bit FNV-1a of the compact dump, as 16 hex digits.
std::string fnv1a_digest(const std::string& text);

}  // namespace becomp
