#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qtj/field.hpp"
#include "qtj/laurent.hpp"
#include "qtj/poly.hpp"

namespace qtj::cli {

using Json = nlohmann::ordered_json;

/// Everything a run needs. Polynomials are coefficient lists ascending in
/// degree; an F_q element is an integer (read mod p) or a list of F_p digits.
struct RunConfig {
  FieldPtr field;
  std::optional<Poly> a;
  std::optional<Fq> b;
  std::optional<std::pair<Poly, Poly>> rational;
  std::optional<std::array<Poly, 3>> general;  // x, y, z
  long long precision = 16;
  std::optional<int> m_cutoff;
  int n_max = 8;
  std::vector<int> l_list;  // empty: every l in [0, d-1]
  int N = 1;
  int l = 0;
  std::optional<int> deg_bound;
  std::vector<int> eps_logs;  // sandwich / coset epsilons for `general`
  long long comparison_floor = 8;
  std::string format = "json";
  std::string out = "-";
  int parallel = 1;
};

/// Flag values that override the config file.
struct Overrides {
  std::optional<long long> precision;
  std::optional<int> m_cutoff;
  std::optional<int> n_max;
  std::optional<int> N;
  std::optional<int> l;
  std::optional<int> deg_bound;
  std::optional<long long> comparison_floor;
  std::optional<std::string> format;
  std::optional<std::string> out;
  std::optional<int> parallel;
};

/// Throws ConfigError on unknown keys, wrong types or failed preconditions.
RunConfig parse_config(const Json& j);
void apply(RunConfig& cfg, const Overrides& o);

Json to_json(const Field& F, Fq x);
Json to_json(const Poly& p);
Json to_json(const Laurent& x);
Json to_json(const AbsValue& v);

/// One verb: solve, lattice, approx, limits, general or selftest. Throws the
/// library's error types; selftest and lattice throw InvariantViolation when a
/// check fails, after filling `partial` with the report.
Json run_verb(const std::string& verb, const RunConfig& cfg, Json* partial = nullptr);

/// Flat table for plotting; one header line.
std::string to_csv(const std::string& verb, const Json& result);

/// {"error": {"kind": ..., "message": ...}}
Json error_object(const std::string& kind, const std::string& message);

}  // namespace qtj::cli
