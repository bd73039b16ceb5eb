#pragma once

#include <json.hpp>

#include <optional>
#include <set>
#include <string>
#include <string_view>

#include "testrisk/error.hpp"
#include "testrisk/matrix.hpp"
#include "testrisk/planning.hpp"

namespace testrisk::detail {

using Json = nlohmann::ordered_json;

/// Dump in the canonical layout: 2-space indent, newline-terminated.
inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

/// Parses text, mapping failures to parse-error with a line/column location.
Json parse_json(std::string_view text);

/// Read-side view of a JSON object that tracks its JSON pointer so schema
/// errors name the offending field.
class Fields {
 public:
  Fields(const Json& object, std::string pointer);

  bool has(const char* key) const;
  /// Throws schema-error for keys outside `allowed`.
  void only(std::initializer_list<const char*> allowed) const;

  double number(const char* key) const;
  std::optional<double> opt_number(const char* key) const;
  long long integer(const char* key) const;
  std::optional<long long> opt_integer(const char* key) const;
  std::string string(const char* key) const;
  std::optional<std::string> opt_string(const char* key) const;
  std::optional<bool> opt_bool(const char* key) const;
  const Json& raw(const char* key) const;

  std::string pointer(const char* key) const { return pointer_ + "/" + key; }
  const std::string& pointer() const { return pointer_; }

 private:
  const Json& at(const char* key, const char* expected, bool ok) const;

  const Json& object_;
  std::string pointer_;
};

[[noreturn]] void schema_error(const std::string& pointer,
                               const std::string& message);

// Shared builders for rendered JSON.
Json to_json(const DefectPrediction& prediction);
Json to_json(const ScopeMatrix& scope);
Json to_json(const Finding& finding);
Json to_json(const Selection& selection);
Json matrix_json(const RiskMatrix& matrix, const ScopeMatrix& scope,
                 const std::optional<std::string>& selected_level);

}  // namespace testrisk::detail
