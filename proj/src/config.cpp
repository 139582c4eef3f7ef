#include "uwoc/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <sstream>

#include <json.hpp>

#include "uwoc/errors.hpp"
#include "uwoc/reference_params.hpp"

namespace uwoc {

using json = nlohmann::ordered_json;

namespace {

struct Bound {
  std::function<bool(double)> ok;
  const char* rule;
};

const Bound kAny{[](double v) { return std::isfinite(v); }, "must be finite"};
const Bound kPositive{[](double v) { return std::isfinite(v) && v > 0.0; }, "must be > 0"};
const Bound kNonNeg{[](double v) { return std::isfinite(v) && v >= 0.0; }, "must be >= 0"};
const Bound kUnit{[](double v) { return v >= 0.0 && v <= 1.0; }, "must be in [0, 1]"};
const Bound kUnitOpen{[](double v) { return v > 0.0 && v <= 1.0; }, "must be in (0, 1]"};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

// Walks a JSON document and records every violation instead of stopping at
// the first.
class Reader {
 public:
  std::vector<std::string> errors;

  void fail(const std::string& path, const std::string& msg) { errors.push_back(path + ": " + msg); }

  static std::string join(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
  }

  bool object(const json& j, const std::string& path, std::initializer_list<const char*> keys) {
    if (!j.is_object()) {
      fail(path.empty() ? "(root)" : path, "must be an object");
      return false;
    }
    for (auto it = j.begin(); it != j.end(); ++it) {
      bool known = false;
      for (const char* k : keys) known = known || it.key() == k;
      if (!known) fail(join(path, it.key()), "unknown key");
    }
    return true;
  }

  double number(const json& obj, const std::string& path, const char* key, const Bound& b,
                std::optional<double> fallback = std::nullopt) {
    const std::string p = join(path, key);
    if (!obj.contains(key)) {
      if (!fallback) fail(p, "required");
      return fallback.value_or(std::numeric_limits<double>::quiet_NaN());
    }
    const json& v = obj.at(key);
    if (!v.is_number()) {
      fail(p, "must be a number");
      return std::numeric_limits<double>::quiet_NaN();
    }
    const double x = v.get<double>();
    if (!b.ok(x)) fail(p, std::string(b.rule) + " (got " + fmt(x) + ")");
    return x;
  }

  std::uint64_t unsigned_int(const json& obj, const std::string& path, const char* key,
                             std::uint64_t fallback, std::uint64_t min = 0) {
    const std::string p = join(path, key);
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number_unsigned()) {
      fail(p, "must be a non-negative integer");
      return fallback;
    }
    const auto x = v.get<std::uint64_t>();
    if (x < min) fail(p, "must be >= " + std::to_string(min));
    return x;
  }

  std::string text(const json& obj, const std::string& path, const char* key,
                   std::optional<std::string> fallback = std::nullopt) {
    const std::string p = join(path, key);
    if (!obj.contains(key)) {
      if (!fallback) fail(p, "required");
      return fallback.value_or("");
    }
    if (!obj.at(key).is_string()) {
      fail(p, "must be a string");
      return fallback.value_or("");
    }
    return obj.at(key).get<std::string>();
  }

  template <class E>
  E choice(const json& obj, const std::string& path, const char* key,
           const std::vector<std::pair<std::string, E>>& options, std::optional<E> fallback) {
    const std::string p = join(path, key);
    if (!obj.contains(key) && fallback) return *fallback;
    const std::string s = text(obj, path, key);
    for (const auto& [name, e] : options)
      if (s == name) return e;
    if (obj.contains(key) && obj.at(key).is_string()) {
      std::string list;
      for (const auto& o : options) list += (list.empty() ? "" : ", ") + o.first;
      fail(p, "must be one of {" + list + "} (got \"" + s + "\")");
    }
    return fallback.value_or(options.front().second);
  }
};

const std::vector<std::pair<std::string, Scenario>> kScenarios{{"uwoc", Scenario::uwoc},
                                                               {"mixed", Scenario::mixed}};
const std::vector<std::pair<std::string, Metric>> kMetrics{
    {"outage", Metric::outage}, {"ber", Metric::ber}, {"capacity", Metric::capacity}};
const std::vector<std::pair<std::string, DetectionKind>> kDetections{{"IMDD", DetectionKind::IMDD},
                                                                     {"HD", DetectionKind::HD}};

LayerModel read_layer(Reader& r, const json& j, const std::string& path) {
  if (!j.is_object()) {
    r.fail(path, "must be an object");
    return GGParams{};
  }
  const std::string fam = r.text(j, path, "family");
  if (fam == "GG") {
    r.object(j, path, {"family", "a", "d", "p"});
    return GGParams{r.number(j, path, "a", kPositive), r.number(j, path, "d", kPositive),
                    r.number(j, path, "p", kPositive)};
  }
  if (fam == "EGG") {
    r.object(j, path, {"family", "omega", "lambda", "a", "d", "p"});
    return EGGParams{r.number(j, path, "omega", kUnit), r.number(j, path, "lambda", kPositive),
                     r.number(j, path, "a", kPositive), r.number(j, path, "d", kPositive),
                     r.number(j, path, "p", kPositive)};
  }
  if (fam == "EW") {
    r.object(j, path, {"family", "alpha", "beta", "eta"});
    return EWParams{r.number(j, path, "alpha", kPositive), r.number(j, path, "beta", kPositive),
                    r.number(j, path, "eta", kPositive)};
  }
  if (fam == "GammaGamma") {
    r.object(j, path, {"family", "alpha", "beta"});
    return GammaGammaParams{r.number(j, path, "alpha", kPositive),
                            r.number(j, path, "beta", kPositive)};
  }
  if (j.contains("family") && j.at("family").is_string())
    r.fail(path + ".family", "must be one of {GG, EGG, EW, GammaGamma} (got \"" + fam + "\")");
  return GGParams{};
}

PointingError read_pointing(Reader& r, const json& j, const std::string& path) {
  if (!r.object(j, path, {"rho2", "A0"})) return {};
  return {r.number(j, path, "rho2", kPositive), r.number(j, path, "A0", kUnitOpen)};
}

TerrestrialSpec read_terrestrial(Reader& r, const json& j, const std::string& path) {
  TerrestrialSpec t;
  if (!r.object(j, path, {"alpha", "beta", "k", "beta_f", "rho2", "A", "shape", "C"})) return t;
  t.alpha = r.number(j, path, "alpha", kPositive);
  t.beta = r.number(j, path, "beta", {[](double v) { return std::isfinite(v) && v >= 0.5; },
                                      "must be >= 0.5 (rounded to an integer >= 1)"});
  t.k = r.number(j, path, "k", kPositive);
  t.beta_f = r.number(j, path, "beta_f", kPositive);
  t.rho2 = r.number(j, path, "rho2", kPositive);
  t.A = r.number(j, path, "A", kUnitOpen);
  t.C = r.number(j, path, "C", kPositive, 1.0);
  if (j.contains("shape")) {
    const std::string sp = path + ".shape";
    const json& s = j.at("shape");
    if (r.object(s, sp, {"b0", "rho", "Omega", "phase"})) {
      const MalagaShape d;
      t.shape.b0 = r.number(s, sp, "b0", kPositive, d.b0);
      t.shape.rho = r.number(s, sp, "rho", {[](double v) { return v >= 0.0 && v < 1.0; },
                                            "must be in [0, 1)"},
                             d.rho);
      t.shape.Omega = r.number(s, sp, "Omega", kNonNeg, d.Omega);
      t.shape.phase = r.number(s, sp, "phase", kAny, d.phase);
    }
  }
  return t;
}

Sweep read_sweep(Reader& r, const json& j, const std::string& path, SweepAxis axis) {
  Sweep s;
  s.axis = axis;
  if (!r.object(j, path, {"start", "stop", "step"})) return s;
  s.start = r.number(j, path, "start", kAny);
  s.stop = r.number(j, path, "stop", kAny);
  s.step = r.number(j, path, "step", kPositive);
  if (s.stop < s.start) r.fail(path + ".stop", "must be >= start");
  if (s.step > 0.0 && s.stop >= s.start && (s.stop - s.start) / s.step > 10000.0)
    r.fail(path, "more than 10001 points");
  return s;
}

RunConfig read_config(Reader& r, const json& j) {
  RunConfig c;
  if (!r.object(j, "", {"name", "scenario", "curves", "link", "power_sweep", "snr_sweep",
                        "metrics", "modulation", "detection", "gamma_th_db", "plan", "outputs"}))
    return c;
  c.name = r.text(j, "", "name", std::string("run"));
  c.scenario = r.choice<Scenario>(j, "", "scenario", kScenarios, std::nullopt);
  const bool mixed = c.scenario == Scenario::mixed;

  if (!j.contains("curves")) {
    r.fail("curves", "required");
  } else if (!j.at("curves").is_array() || j.at("curves").empty()) {
    r.fail("curves", "must be a non-empty array");
  } else {
    const json& arr = j.at("curves");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string p = "curves[" + std::to_string(i) + "]";
      CurveSpec cs;
      if (!r.object(arr[i], p, {"label", "layers", "pointing", "terrestrial"})) continue;
      cs.label = r.text(arr[i], p, "label");
      if (!arr[i].contains("layers") || !arr[i].at("layers").is_array() ||
          arr[i].at("layers").empty()) {
        r.fail(p + ".layers", "must be a non-empty array");
      } else {
        const json& ls = arr[i].at("layers");
        for (std::size_t k = 0; k < ls.size(); ++k)
          cs.layers.push_back(read_layer(r, ls[k], p + ".layers[" + std::to_string(k) + "]"));
      }
      if (arr[i].contains("pointing"))
        cs.pointing = read_pointing(r, arr[i].at("pointing"), p + ".pointing");
      else
        r.fail(p + ".pointing", "required");
      if (arr[i].contains("terrestrial")) {
        if (!mixed) r.fail(p + ".terrestrial", "only valid for scenario mixed");
        cs.terrestrial = read_terrestrial(r, arr[i].at("terrestrial"), p + ".terrestrial");
      } else if (mixed) {
        r.fail(p + ".terrestrial", "required for scenario mixed");
      }
      c.curves.push_back(std::move(cs));
    }
  }

  if (j.contains("link")) {
    const json& l = j.at("link");
    if (r.object(l, "link", {"alpha_ext", "l_U", "l_T", "noise_variance"})) {
      const LinkBudget d;
      c.link.alpha_ext = r.number(l, "link", "alpha_ext", kNonNeg, d.alpha_ext);
      c.link.l_U = r.number(l, "link", "l_U", kNonNeg, d.l_U);
      c.link.l_T = r.number(l, "link", "l_T", kPositive, d.l_T);
      c.link.noise_variance = r.number(l, "link", "noise_variance", kPositive, d.noise_variance);
    }
  }

  const bool has_p = j.contains("power_sweep"), has_s = j.contains("snr_sweep");
  if (has_p == has_s) {
    r.fail("sweep", "exactly one of power_sweep, snr_sweep");
  } else if (has_p) {
    c.sweep = read_sweep(r, j.at("power_sweep"), "power_sweep", SweepAxis::power_dbm);
  } else {
    c.sweep = read_sweep(r, j.at("snr_sweep"), "snr_sweep", SweepAxis::snr_db);
    if (mixed) r.fail("snr_sweep", "scenario mixed needs power_sweep (both hops share P_t)");
  }

  if (!j.contains("metrics") || !j.at("metrics").is_array() || j.at("metrics").empty()) {
    r.fail("metrics", "must be a non-empty array of {outage, ber, capacity}");
  } else {
    const json& m = j.at("metrics");
    for (std::size_t i = 0; i < m.size(); ++i) {
      const std::string p = "metrics[" + std::to_string(i) + "]";
      json wrap = json::object();
      wrap["m"] = m[i];
      Reader sub;
      const Metric v = sub.choice<Metric>(wrap, "", "m", kMetrics, std::nullopt);
      for (const auto& e : sub.errors) r.fail(p, e.substr(e.find(": ") + 2));
      if (!sub.errors.empty()) continue;
      if (mixed && v == Metric::capacity) r.fail(p, "capacity is not available for scenario mixed");
      bool dup = false;
      for (Metric x : c.metrics) dup = dup || x == v;
      if (dup)
        r.fail(p, "duplicate metric");
      else
        c.metrics.push_back(v);
    }
  }

  if (j.contains("modulation")) {
    const json& m = j.at("modulation");
    if (r.object(m, "modulation", {"delta", "phi", "q"})) {
      c.modulation.delta = r.number(m, "modulation", "delta", kPositive, 1.0);
      c.modulation.phi = r.number(m, "modulation", "phi", kPositive, 0.5);
      if (m.contains("q")) {
        c.modulation.q.clear();
        if (!m.at("q").is_array() || m.at("q").empty()) {
          r.fail("modulation.q", "must be a non-empty array");
        } else {
          for (std::size_t i = 0; i < m.at("q").size(); ++i) {
            json wrap = json::object();
            wrap["q"] = m.at("q")[i];
            Reader sub;
            c.modulation.q.push_back(sub.number(wrap, "", "q", kPositive));
            for (const auto& e : sub.errors)
              r.fail("modulation.q[" + std::to_string(i) + "]", e.substr(e.find(": ") + 2));
          }
        }
      }
    }
  }
  c.detection = r.choice<DetectionKind>(j, "", "detection", kDetections, DetectionKind::IMDD);
  c.gamma_th_db = r.number(j, "", "gamma_th_db", kAny, 0.0);

  if (j.contains("plan")) {
    const json& p = j.at("plan");
    if (r.object(p, "plan", {"trials", "seed", "workers"})) {
      const PlanSpec d;
      c.plan.trials = r.unsigned_int(p, "plan", "trials", d.trials);
      if (c.plan.trials != 0 && c.plan.trials < 10000)
        r.fail("plan.trials", "must be 0 (analytic only) or >= 10000");
      c.plan.seed = r.unsigned_int(p, "plan", "seed", d.seed);
      c.plan.workers = static_cast<unsigned>(r.unsigned_int(p, "plan", "workers", d.workers, 1));
    }
  }
  if (j.contains("outputs")) {
    const json& o = j.at("outputs");
    if (r.object(o, "outputs", {"dir", "format"})) {
      c.out_dir = r.text(o, "outputs", "dir", std::string("out"));
      c.format = r.text(o, "outputs", "format", std::string("csv"));
      if (c.format != "csv") r.fail("outputs.format", "must be one of {csv} (got \"" + c.format + "\")");
    }
  }
  return c;
}

json layer_json(const LayerModel& m) {
  json j;
  j["family"] = family_name(m);
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, GGParams>) {
          j["a"] = p.a;
          j["d"] = p.d;
          j["p"] = p.p;
        } else if constexpr (std::is_same_v<T, EGGParams>) {
          j["omega"] = p.omega;
          j["lambda"] = p.lambda;
          j["a"] = p.a;
          j["d"] = p.d;
          j["p"] = p.p;
        } else if constexpr (std::is_same_v<T, EWParams>) {
          j["alpha"] = p.alpha;
          j["beta"] = p.beta;
          j["eta"] = p.eta;
        } else {
          j["alpha"] = p.alpha;
          j["beta"] = p.beta;
        }
      },
      m);
  return j;
}

std::vector<LayerModel> gg_single() { return {ref::gg5()[0]}; }

CurveSpec uwoc_curve(std::string label, std::vector<LayerModel> layers, double rho2) {
  return {std::move(label), std::move(layers), {rho2, ref::kA0}, std::nullopt};
}

CurveSpec mixed_curve(std::string label, int malaga, int fog, double rho2) {
  TerrestrialSpec t;
  t.alpha = ref::kMalaga[malaga].alpha;
  t.beta = ref::kMalaga[malaga].beta;
  t.k = ref::kFog[fog].k;
  t.beta_f = ref::kFog[fog].beta_f;
  t.rho2 = rho2;
  t.A = ref::kA0;
  return {std::move(label), ref::egg5(), {rho2, ref::kA0}, t};
}

RunConfig base(std::string name, Scenario sc, std::vector<Metric> metrics, Sweep sweep) {
  RunConfig c;
  c.name = std::move(name);
  c.scenario = sc;
  c.metrics = std::move(metrics);
  c.sweep = sweep;
  c.out_dir = "out/" + c.name;
  return c;
}

// gamma_bar sweep of the single-layer and multi-layer figures (dB).
constexpr Sweep kSnrSweep{SweepAxis::snr_db, 40.0, 120.0, 5.0};
// Transmit power range of the parameter table (dBm).
constexpr Sweep kPowerSweep{SweepAxis::power_dbm, -10.0, 60.0, 5.0};
// Outage threshold of the calibrated outage figures (see README).
constexpr double kUwocThresholdDb = -45.0;

std::vector<CurveSpec> single_layer_models() {
  const auto egg = ref::egg2();
  return {uwoc_curve("GG", gg_single(), 1.0), uwoc_curve("EGG-1", {egg[0]}, 1.0),
          uwoc_curve("EGG-2", {egg[1]}, 1.0), uwoc_curve("EW", {ref::ew()}, 1.0),
          uwoc_curve("GammaGamma", {ref::gamma_gamma()}, 1.0)};
}

const std::map<std::string, std::function<RunConfig()>>& presets() {
  static const std::map<std::string, std::function<RunConfig()>> table{
      {"fig2a",
       [] {
         RunConfig c = base("fig2a", Scenario::uwoc, {Metric::outage}, kSnrSweep);
         c.curves = single_layer_models();
         c.gamma_th_db = kUwocThresholdDb;
         return c;
       }},
      {"fig2b",
       [] {
         RunConfig c = base("fig2b", Scenario::uwoc, {Metric::outage}, kSnrSweep);
         c.curves = {uwoc_curve("table-rho2-1", ref::gg5(), 1.0),
                     uwoc_curve("modified-d-rho2-1", ref::gg5_modified_d(), 1.0),
                     uwoc_curve("modified-d-rho2-6", ref::gg5_modified_d(), 6.0)};
         c.gamma_th_db = kUwocThresholdDb;
         return c;
       }},
      {"fig3a",
       [] {
         RunConfig c = base("fig3a", Scenario::uwoc, {Metric::ber}, kSnrSweep);
         c.curves = single_layer_models();
         return c;
       }},
      {"fig3b",
       [] {
         RunConfig c = base("fig3b", Scenario::uwoc, {Metric::ber}, kSnrSweep);
         c.curves = {uwoc_curve("table-rho2-6", ref::gg5(), 6.0),
                     uwoc_curve("modified-d-rho2-6", ref::gg5_modified_d(), 6.0)};
         return c;
       }},
      {"fig4a",
       [] {
         RunConfig c = base("fig4a", Scenario::uwoc, {Metric::capacity}, kPowerSweep);
         c.curves = single_layer_models();
         return c;
       }},
      {"fig4b",
       [] {
         RunConfig c = base("fig4b", Scenario::uwoc, {Metric::capacity}, kPowerSweep);
         c.curves = {uwoc_curve("table-rho2-1", ref::gg5(), 1.0),
                     uwoc_curve("modified-layer3-rho2-1", ref::gg5_modified_layer3(), 1.0),
                     uwoc_curve("table-rho2-6", ref::gg5(), 6.0),
                     uwoc_curve("modified-layer3-rho2-6", ref::gg5_modified_layer3(), 6.0)};
         return c;
       }},
      {"fig5a",
       [] {
         RunConfig c = base("fig5a", Scenario::mixed, {Metric::outage}, kPowerSweep);
         c.curves = {mixed_curve("light-fog-weak-rho2-1", 0, 0, 1.0),
                     mixed_curve("moderate-fog-moderate-rho2-1", 1, 1, 1.0),
                     mixed_curve("light-fog-weak-rho2-6", 0, 0, 6.0),
                     mixed_curve("moderate-fog-moderate-rho2-6", 1, 1, 6.0)};
         return c;
       }},
      {"fig5b",
       [] {
         RunConfig c = base("fig5b", Scenario::mixed, {Metric::ber}, kPowerSweep);
         const char* turb[] = {"weak", "moderate", "strong"};
         const char* fog[] = {"light", "moderate"};
         for (int f = 0; f < 2; ++f)
           for (int m = 0; m < 3; ++m)
             c.curves.push_back(mixed_curve(std::string(fog[f]) + "-fog-" + turb[m], m, f, 6.0));
         return c;
       }},
  };
  return table;
}

}  // namespace

std::string to_string(Scenario s) { return s == Scenario::uwoc ? "uwoc" : "mixed"; }

std::string to_string(Metric m) {
  for (const auto& [name, v] : kMetrics)
    if (v == m) return name;
  return "?";
}

std::string to_string(DetectionKind d) { return d == DetectionKind::IMDD ? "IMDD" : "HD"; }

std::vector<double> Sweep::values() const {
  std::vector<double> out;
  if (!(step > 0.0) || !(stop >= start)) return out;
  const auto n = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9));
  for (std::size_t i = 0; i <= n; ++i) out.push_back(start + static_cast<double>(i) * step);
  return out;
}

namespace {
std::string join_violations(const std::vector<std::string>& v) {
  std::string s = "invalid config:";
  for (const auto& e : v) s += "\n  " + e;
  return s;
}
}  // namespace

ConfigError::ConfigError(std::vector<std::string> violations)
    : std::runtime_error(join_violations(violations)), violations_(std::move(violations)) {}

RunConfig parse_config_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError({std::string("(root): not valid JSON: ") + e.what()});
  }
  Reader r;
  RunConfig c = read_config(r, j);
  if (!r.errors.empty()) throw ConfigError(r.errors);
  return c;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError({path + ": cannot open"});
  std::ostringstream os;
  os << in.rdbuf();
  return parse_config_text(os.str());
}

std::string serialize_config(const RunConfig& c) {
  json j;
  j["name"] = c.name;
  j["scenario"] = to_string(c.scenario);
  j["curves"] = json::array();
  for (const auto& cs : c.curves) {
    json cj;
    cj["label"] = cs.label;
    cj["layers"] = json::array();
    for (const auto& l : cs.layers) cj["layers"].push_back(layer_json(l));
    cj["pointing"] = {{"rho2", cs.pointing.rho2}, {"A0", cs.pointing.A0}};
    if (cs.terrestrial) {
      const TerrestrialSpec& t = *cs.terrestrial;
      cj["terrestrial"] = {{"alpha", t.alpha},   {"beta", t.beta}, {"k", t.k},
                           {"beta_f", t.beta_f}, {"rho2", t.rho2}, {"A", t.A},
                           {"shape",
                            {{"b0", t.shape.b0},
                             {"rho", t.shape.rho},
                             {"Omega", t.shape.Omega},
                             {"phase", t.shape.phase}}},
                           {"C", t.C}};
    }
    j["curves"].push_back(cj);
  }
  j["link"] = {{"alpha_ext", c.link.alpha_ext},
               {"l_U", c.link.l_U},
               {"l_T", c.link.l_T},
               {"noise_variance", c.link.noise_variance}};
  const json sweep = {{"start", c.sweep.start}, {"stop", c.sweep.stop}, {"step", c.sweep.step}};
  j[c.sweep.axis == SweepAxis::power_dbm ? "power_sweep" : "snr_sweep"] = sweep;
  j["metrics"] = json::array();
  for (Metric m : c.metrics) j["metrics"].push_back(to_string(m));
  j["modulation"] = {{"delta", c.modulation.delta}, {"phi", c.modulation.phi}, {"q", c.modulation.q}};
  j["detection"] = to_string(c.detection);
  j["gamma_th_db"] = c.gamma_th_db;
  j["plan"] = {{"trials", c.plan.trials}, {"seed", c.plan.seed}, {"workers", c.plan.workers}};
  j["outputs"] = {{"dir", c.out_dir}, {"format", c.format}};
  return j.dump(2) + "\n";
}

std::vector<std::string> preset_names() {
  std::vector<std::string> out;
  for (const auto& [name, fn] : presets()) out.push_back(name);
  return out;
}

RunConfig preset(const std::string& name) {
  const auto it = presets().find(name);
  if (it == presets().end()) {
    std::string list;
    for (const auto& n : preset_names()) list += (list.empty() ? "" : ", ") + n;
    throw ConfigError({"preset: unknown name \"" + name + "\" (one of " + list + ")"});
  }
  return it->second();
}

UwocStack build_stack(const RunConfig& cfg, const CurveSpec& curve) {
  return {curve.layers, curve.pointing, {cfg.link.alpha_ext, cfg.link.l_U}};
}

MixedLinkConfig build_mixed(const RunConfig& cfg, const CurveSpec& curve) {
  if (!curve.terrestrial) throw ParameterError("curve " + curve.label + " has no terrestrial hop");
  const TerrestrialSpec& t = *curve.terrestrial;
  MixedLinkConfig m;
  m.towc = make_malaga_fog(t.alpha, t.beta, t.k, fog_rate(t.beta_f, cfg.link.l_T), t.rho2, t.A,
                           t.shape);
  m.stack = build_stack(cfg, curve);
  m.C = t.C;
  m.l_T = cfg.link.l_T;
  return m;
}

}  // namespace uwoc
