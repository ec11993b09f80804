#pragma once

// JSON variety specs and run reports.  Schema: docs/schema.md.
//
// Input integers may be JSON numbers or decimal strings.  In reports, arithmetic values
// (primes, coefficients, point counts, p-adic entries) are decimal strings; structural counts
// (dimensions, digits of precision, bounds, tallies) are plain numbers.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dagger/presentation.hpp"

namespace dagger {

class SchemaError : public Error {
public:
    using Error::Error;
};

using Json = nlohmann::ordered_json;

inline constexpr int kSpecVersion = 1;
inline constexpr int kReportVersion = 1;

// Command-line values that take precedence over the spec.
struct Overrides {
    std::optional<int> precision;
    std::optional<int> D, E;
    std::optional<int> depth;
    std::optional<std::uint64_t> seed;
};

// Parses a spec document and checks spec_version; SchemaError on malformed JSON.
Json parse_spec(const std::string& text);
Json read_spec_file(const std::string& path);

// Integer field accepting a number or a decimal string; SchemaError if missing (without default) or malformed.
std::int64_t json_int(const Json& obj, const std::string& key, std::optional<std::int64_t> fallback = std::nullopt);
std::int64_t json_int_value(const Json& v, const std::string& what);

// {"family": ...} object; the spec itself may carry the family fields or nest them under "variety".
VarietyPresentation parse_variety(const Json& v);
// [{"c": "3", "e": [1, 0]}, ...] with exponent vectors of length n.
TruncSeries parse_polynomial(const Json& v, const PrecisionPolicy& pol, int n);
Json polynomial_json(const TruncSeries& f);

struct RunOutcome {
    Json report;
    int exit_code = 0;  // 0 PASS, 1 FAIL
};

RunOutcome run_zeta(const Json& spec, const Overrides& o);
RunOutcome run_cohomology(const Json& spec, const Overrides& o);
// spec may be null: the default battery (p = 5, s = 4, n = 2, 100 elements).
RunOutcome run_group(const Json& spec, const Overrides& o);
RunOutcome run_localcoh(const Json& spec, const Overrides& o);

// Error document for a failed run (kind: schema, domain, precision, instability).
Json error_report(const std::string& command, const std::string& kind, const std::string& message);
// Two-space indented dump with a trailing newline.
std::string dump_report(const Json& report);

// "1 - 7t + 3t^2" from low-first integer coefficients.
std::string format_integer_poly(const std::vector<std::int64_t>& c, const std::string& var = "t");

}  // namespace dagger
