#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "uwoc/malaga.hpp"
#include "uwoc/metrics.hpp"
#include "uwoc/mixed_link.hpp"

namespace uwoc {

enum class Scenario { uwoc, mixed };
enum class Metric { outage, ber, capacity };
enum class SweepAxis { power_dbm, snr_db };

std::string to_string(Scenario s);
std::string to_string(Metric m);
std::string to_string(DetectionKind d);

/// start, start + step, ... up to stop (inclusive, with a 1e-9 step slack).
struct Sweep {
  SweepAxis axis = SweepAxis::snr_db;
  double start = 0.0;
  double stop = 0.0;
  double step = 1.0;
  std::vector<double> values() const;
  bool operator==(const Sweep&) const = default;
};

/// Terrestrial hop of a mixed curve, in the units of the parameter table.
struct TerrestrialSpec {
  double alpha = 1.0;         // Malaga alpha
  double beta = 1.0;          // Malaga beta, rounded to an integer when built
  double k = 1.0;             // fog shape
  double beta_f = 1.0;        // fog attenuation, dB/km
  double rho2 = 1.0;
  double A = 1.0;
  MalagaShape shape;
  double C = 1.0;             // fixed relay gain constant
  bool operator==(const TerrestrialSpec&) const = default;
};

struct CurveSpec {
  std::string label;
  std::vector<LayerModel> layers;
  PointingError pointing;
  std::optional<TerrestrialSpec> terrestrial;  // mixed scenario only
  bool operator==(const CurveSpec&) const = default;
};

struct LinkBudget {
  double alpha_ext = 0.056;       // 1/m
  double l_U = 50.0;              // m
  double l_T = 400.0;             // m
  double noise_variance = 1e-14;  // A^2
  bool operator==(const LinkBudget&) const = default;
};

struct PlanSpec {
  std::uint64_t trials = 1000000;  // 0 = analytic only
  std::uint64_t seed = 1;
  unsigned workers = 1;
  bool operator==(const PlanSpec&) const = default;
};

struct RunConfig {
  std::string name = "run";
  Scenario scenario = Scenario::uwoc;
  std::vector<CurveSpec> curves;
  LinkBudget link;
  Sweep sweep;
  std::vector<Metric> metrics;
  ModulationScheme modulation;
  DetectionKind detection = DetectionKind::IMDD;
  double gamma_th_db = 0.0;
  PlanSpec plan;
  std::string out_dir = "out";
  std::string format = "csv";
  bool operator==(const RunConfig&) const = default;
};

/// Every violation found while parsing, each prefixed by its field path.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> violations);
  const std::vector<std::string>& violations() const { return violations_; }

 private:
  std::vector<std::string> violations_;
};

RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_file(const std::string& path);
/// Pretty JSON whose numbers round-trip exactly; parse_config_text inverts it.
std::string serialize_config(const RunConfig& cfg);

std::vector<std::string> preset_names();
/// Throws ConfigError for an unknown name.
RunConfig preset(const std::string& name);

UwocStack build_stack(const RunConfig& cfg, const CurveSpec& curve);
/// Mixed link at unit gamma_bar on both hops; the runner applies at_power.
MixedLinkConfig build_mixed(const RunConfig& cfg, const CurveSpec& curve);

}  // namespace uwoc
