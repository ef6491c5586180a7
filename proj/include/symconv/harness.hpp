#pragma once

#include "symconv/critical.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace symconv {

enum class Check { Main, Kostant, GK, Hessian, CriticalImage, InclusionCone, NoLine, Limits };

std::string check_name(Check c);
/// Throws ConfigError.
Check parse_check(const std::string& s);
std::vector<Check> all_checks();

/// Per-preset defaults: a regular log a, coverage thresholds.
struct PresetDefaults {
  QVector a_log;
  double vertex_bound = 1e-2;  // max distance from a vertex to the nearest sample
  double angle_bound = 0.05;   // radians, cone generator vs nearest sample direction
};
PresetDefaults preset_defaults(const std::string& preset);

struct VerificationConfig {
  std::string preset = "sl3_so21";
  std::optional<QVector> chamber;  // default: the preset's base chamber
  std::optional<QVector> a_log;    // default: preset_defaults
  std::size_t samples = 10000;
  std::vector<double> radii{4.0};
  double tol = 1e-7;
  std::uint64_t seed = 1;
  std::set<Check> checks{Check::Main};
  std::size_t max_witnesses = 10;
  SamplingOptions sampling;
  std::optional<double> vertex_bound, angle_bound;  // override the preset table
  std::size_t hessian_X = 100;    // random X per preset for the Hessian check
  std::size_t pattern_X = 10;     // X per vanishing pattern for the critical image check
  bool timing = false;            // include the runtime in reports

  /// Throws ConfigError.
  void validate() const;
};

struct Witness {
  std::vector<double> point;
  double slack = 0;
  std::string note;
};

struct CheckResult {
  CheckResult() = default;
  explicit CheckResult(std::string n) : name(std::move(n)) {}

  std::string name;
  bool pass = true;
  bool skipped = false;
  std::size_t count = 0;
  std::size_t failures = 0;
  double worst_slack = 0;  // most negative membership slack seen (0 when not applicable)
  std::vector<Witness> witnesses;
  std::map<std::string, double> metrics;
  std::vector<std::string> notes;

  void fail(const Witness& w, std::size_t max_witnesses);
};

struct SampleRecord {
  std::size_t radius_index = 0;
  std::vector<double> y;  // a-coordinates of h_pq(ah)
  double slack = 0;
};

struct Report {
  std::string preset;
  std::uint64_t seed = 0;
  std::vector<double> a_log;
  std::vector<CheckResult> checks;
  std::vector<SampleRecord> samples;
  // Omega for rendering
  std::vector<std::vector<double>> omega_vertices;
  std::vector<std::vector<double>> omega_generators;
  std::vector<std::vector<double>> aq_basis;  // a-coordinates of the a_q basis used for 2D sections
  std::optional<double> runtime;

  bool pass() const;
  bool empty() const { return checks.empty() && samples.empty(); }
};

/// Dispatches every check in the config. Throws ConfigError, RealizationError.
Report run(const VerificationConfig& config);

/// Inclusion, vertex attainment, cone coverage, and the no-line and cone-inclusion corollaries when requested.
Report verify_main(const VerificationConfig& config);
/// Regular sequence a_j -> a, consistency of the sampled images with Omega(a).
Report verify_limits(const VerificationConfig& config);
/// H_P(N_Q and N-bar_P) inside Gamma_a(Sigma(P) and Sigma(Q-bar)) over all ordered pairs.
Report verify_gk(const VerificationConfig& config);

CheckResult check_closed_form(const VerificationConfig& config);
CheckResult check_hessian(const VerificationConfig& config);
CheckResult check_critical_image(const VerificationConfig& config);

enum class Format { Json, Csv, Svg };
/// Throws ConfigError.
Format parse_format(const std::string& s);

std::string render(const Report& report, Format format);
/// Throws IoError.
void emit_report(const Report& report, Format format, const std::string& path);

}  // namespace symconv
