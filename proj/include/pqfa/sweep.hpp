#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>
#include <type_traits>
#include <vector>

#include "json.hpp"
#include "pqfa/montecarlo.hpp"
#include "pqfa/photon_model.hpp"
#include "pqfa/strategies.hpp"
#include "pqfa/version.hpp"

namespace pqfa {

// What a sweep tabulates: analytic (and optionally empirical) error rates
// over a photon-budget grid, or the noiseless minimum photon numbers as a
// function of the period alone.
enum class SweepRegime { kError, kIdealMinima };

inline const char* to_string(SweepRegime r) {
  return r == SweepRegime::kError ? "error" : "ideal";
}

// Grid description for a parameter sweep. In the error regime the cartesian
// product ms x signal_means x dark_means is evaluated for every selected
// strategy; repetitions > 0 additionally attaches a Monte Carlo estimate to
// every point row. In the ideal regime only ms is used.
struct SweepConfig {
  std::vector<std::uint32_t> ms;
  std::vector<double> signal_means;
  std::vector<double> dark_means;
  std::vector<StrategyKind> strategies{StrategyKind::kH, StrategyKind::kV, StrategyKind::kJoint};
  SweepRegime regime = SweepRegime::kError;
  Variant variant = Variant::kA1HProjector;
  std::uint64_t repetitions = 0;  // 0 = analytic columns only
  std::uint64_t seed = 0;
  unsigned threads = 0;  // 0 = one per hardware thread
};

// One output row, tagged by kind:
//  - "point": analytic/empirical error of one strategy at one grid point,
//    with the decision threshold of that strategy's detector (the joint
//    strategy reads both detectors, so its rows leave the threshold empty);
//  - "binary_min": smallest mean photon number for which the binary-regime
//    reading of one detector is reliable at a given (m, dark mean);
//  - "ideal_min": smallest mean photon number for an exact noiseless
//    decision at one detector, a function of m alone.
// Fields that do not apply to a row's kind stay empty.
struct SweepRow {
  std::string kind;
  std::uint32_t m = 0;
  std::optional<double> nc;
  std::optional<double> ndc;
  std::string strategy;  // H, V or Joint
  std::optional<double> analytic_error;
  std::optional<double> threshold;
  std::optional<std::int64_t> floor;
  std::optional<bool> binary_valid;
  std::optional<double> empirical_error;
  std::optional<double> std_error;
  std::optional<std::uint64_t> min_photons;
};

struct SweepResult {
  SweepConfig config;  // normalized: lists sorted and deduplicated
  std::vector<SweepRow> rows;
};

namespace detail {

/// Work sharing through an atomic index counter. Every index writes only
/// its own output slots, so results are identical for any thread count.
/// The first exception thrown by a body is rethrown on the calling thread.
template <typename Body>
inline void parallel_for(std::size_t count, unsigned threads, const Body& body) {
  unsigned n = threads != 0 ? threads : std::thread::hardware_concurrency();
  if (n == 0) n = 1;
  if (n == 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr error;
  const auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        body(i);
      } catch (...) {
        const std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(n);
  for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

template <typename T>
inline void sort_unique(std::vector<T>& values) {
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
}

/// Sort and deduplicate the parameter lists so that row order depends only
/// on the set of requested values, then reject anything out of domain.
inline SweepConfig normalize(SweepConfig cfg) {
  if (cfg.ms.empty()) {
    throw std::invalid_argument("sweep: at least one modulus is required");
  }
  sort_unique(cfg.ms);
  if (cfg.ms.front() < 2) {
    throw std::invalid_argument("sweep: modulus values must be at least 2");
  }
  if (cfg.regime == SweepRegime::kIdealMinima) return cfg;

  if (cfg.signal_means.empty() || cfg.dark_means.empty() || cfg.strategies.empty()) {
    throw std::invalid_argument("sweep: every parameter list needs at least one value");
  }
  sort_unique(cfg.signal_means);
  sort_unique(cfg.dark_means);
  sort_unique(cfg.strategies);
  if (!(cfg.signal_means.front() > 0.0)) {
    throw std::invalid_argument("sweep: signal means must be positive");
  }
  if (!(cfg.dark_means.front() >= 0.0)) {
    throw std::invalid_argument("sweep: dark means must be non-negative");
  }
  return cfg;
}

}  // namespace detail

/// Evaluate the requested sweep. Error-regime row order is fixed: points
/// sorted by (m, nc, ndc, strategy) with strategies in the order H, V,
/// Joint; after all points, one binary_min row per (m, ndc, detector) for
/// m >= 3 (for m = 2 the two-hypothesis reading is exact at any budget, so
/// there is no minimum to report). The ideal regime emits one ideal_min row
/// per (m, detector).
inline SweepResult run_sweep(const SweepConfig& raw) {
  const SweepConfig cfg = detail::normalize(raw);
  SweepResult result{cfg, {}};

  if (cfg.regime == SweepRegime::kIdealMinima) {
    for (const std::uint32_t m : cfg.ms) {
      const AutomatonSpec spec(m, cfg.variant);
      for (const Detector d : {Detector::kH, Detector::kV}) {
        SweepRow row;
        row.kind = "ideal_min";
        row.m = m;
        row.strategy = to_string(d);
        row.min_photons = ideal_min_photons(spec, d);
        result.rows.push_back(std::move(row));
      }
    }
    return result;
  }

  struct Point {
    std::uint32_t m;
    double nc;
    double ndc;
  };
  std::vector<Point> points;
  points.reserve(cfg.ms.size() * cfg.signal_means.size() * cfg.dark_means.size());
  for (const std::uint32_t m : cfg.ms) {
    for (const double nc : cfg.signal_means) {
      for (const double ndc : cfg.dark_means) points.push_back({m, nc, ndc});
    }
  }

  const std::size_t n_strategies = cfg.strategies.size();
  result.rows.resize(points.size() * n_strategies);

  detail::parallel_for(points.size(), cfg.threads, [&](std::size_t i) {
    const Point& p = points[i];
    const AutomatonSpec spec(p.m, cfg.variant);
    const PhotonBudget budget(p.nc, p.ndc);
    const ThresholdSet t = thresholds(spec, budget);

    for (std::size_t s = 0; s < n_strategies; ++s) {
      const StrategyKind strategy = cfg.strategies[s];
      SweepRow& row = result.rows[i * n_strategies + s];
      row.kind = "point";
      row.m = p.m;
      row.nc = p.nc;
      row.ndc = p.ndc;
      row.strategy = to_string(strategy);
      row.analytic_error = error_probability(strategy, spec, budget);
      if (strategy == StrategyKind::kH) {
        row.threshold = t.n_th_h;
        row.floor = t.floor_h;
      } else if (strategy == StrategyKind::kV) {
        row.threshold = t.n_th_v;
        row.floor = t.floor_v;
      }
      row.binary_valid = binary_regime_valid(strategy, spec, budget);
      if (cfg.repetitions > 0) {
        const EmpiricalReport report =
            empirical_error(strategy, spec, budget, cfg.repetitions, cfg.seed);
        row.empirical_error = report.empirical;
        row.std_error = report.std_error;
      }
    }
  });

  for (const std::uint32_t m : cfg.ms) {
    if (m < 3) continue;
    const AutomatonSpec spec(m, cfg.variant);
    for (const double ndc : cfg.dark_means) {
      for (const Detector d : {Detector::kH, Detector::kV}) {
        SweepRow row;
        row.kind = "binary_min";
        row.m = m;
        row.ndc = ndc;
        row.strategy = to_string(d);
        row.min_photons = binary_regime_min_photons(spec, ndc, d);
        result.rows.push_back(std::move(row));
      }
    }
  }
  return result;
}

namespace detail {

/// Deterministic C-locale decimal with 12 significant digits — enough for
/// any analysis downstream while keeping files diff-friendly.
inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

template <typename T>
inline std::string csv_field(const std::optional<T>& v) {
  if (!v) return "";
  if constexpr (std::is_same_v<T, double>) {
    return format_double(*v);
  } else if constexpr (std::is_same_v<T, bool>) {
    return *v ? "1" : "0";
  } else {
    return std::to_string(*v);
  }
}

template <typename T>
inline std::string join_values(const std::vector<T>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i != 0) out += ' ';
    if constexpr (std::is_same_v<T, double>) {
      out += format_double(values[i]);
    } else {
      out += std::to_string(values[i]);
    }
  }
  return out;
}

inline std::string join_strategies(const std::vector<StrategyKind>& strategies) {
  std::string out;
  for (std::size_t i = 0; i < strategies.size(); ++i) {
    if (i != 0) out += ' ';
    out += to_string(strategies[i]);
  }
  return out;
}

}  // namespace detail

inline constexpr const char* kSweepSchemaId = "pqfa sweep schema v1";
inline constexpr const char* kSweepCsvHeader =
    "kind,m,nc,ndc,strategy,analytic_error,threshold,floor,binary_valid,"
    "empirical_error,std_error,min_photons";

/// CSV layout: one schema comment line, the column header, the data rows,
/// then a `#`-prefixed metadata block echoing the configuration. Output is
/// byte-identical across runs of the same configuration.
inline void write_csv(std::ostream& os, const SweepResult& result) {
  os << "# " << kSweepSchemaId << "\n" << kSweepCsvHeader << "\n";
  for (const SweepRow& r : result.rows) {
    os << r.kind << ',' << r.m << ',' << detail::csv_field(r.nc) << ','
       << detail::csv_field(r.ndc) << ',' << r.strategy << ','
       << detail::csv_field(r.analytic_error) << ',' << detail::csv_field(r.threshold) << ','
       << detail::csv_field(r.floor) << ',' << detail::csv_field(r.binary_valid) << ','
       << detail::csv_field(r.empirical_error) << ',' << detail::csv_field(r.std_error) << ','
       << detail::csv_field(r.min_photons) << '\n';
  }
  const SweepConfig& cfg = result.config;
  os << "# tool: " << kToolName << ' ' << kVersion << '\n';
  os << "# rng: " << kRngId << '\n';
  os << "# regime: " << to_string(cfg.regime) << '\n';
  os << "# variant: " << to_string(cfg.variant) << '\n';
  os << "# m: " << detail::join_values(cfg.ms) << '\n';
  if (cfg.regime == SweepRegime::kError) {
    os << "# nc: " << detail::join_values(cfg.signal_means) << '\n';
    os << "# ndc: " << detail::join_values(cfg.dark_means) << '\n';
    os << "# strategies: " << detail::join_strategies(cfg.strategies) << '\n';
    os << "# repetitions: " << cfg.repetitions << '\n';
    if (cfg.repetitions > 0) os << "# seed: " << cfg.seed << '\n';
  }
}

/// JSON layout: {"metadata": {...}, "rows": [...]}. Field names match the
/// CSV columns; fields that would be empty in CSV are null here.
inline void write_json(std::ostream& os, const SweepResult& result) {
  nlohmann::ordered_json doc;
  const SweepConfig& cfg = result.config;
  std::vector<std::string> strategy_names;
  strategy_names.reserve(cfg.strategies.size());
  for (const StrategyKind s : cfg.strategies) strategy_names.emplace_back(to_string(s));
  nlohmann::ordered_json metadata{{"schema", kSweepSchemaId},
                                  {"tool", kToolName},
                                  {"version", kVersion},
                                  {"rng", kRngId},
                                  {"regime", to_string(cfg.regime)},
                                  {"variant", to_string(cfg.variant)},
                                  {"m", cfg.ms}};
  if (cfg.regime == SweepRegime::kError) {
    metadata["nc"] = cfg.signal_means;
    metadata["ndc"] = cfg.dark_means;
    metadata["strategies"] = strategy_names;
    metadata["repetitions"] = cfg.repetitions;
    if (cfg.repetitions > 0) metadata["seed"] = cfg.seed;
  }
  doc["metadata"] = std::move(metadata);
  doc["rows"] = nlohmann::ordered_json::array();
  const auto set = [](nlohmann::ordered_json& obj, const char* key, const auto& opt) {
    if (opt) {
      obj[key] = *opt;
    } else {
      obj[key] = nullptr;
    }
  };
  for (const SweepRow& r : result.rows) {
    nlohmann::ordered_json obj;
    obj["kind"] = r.kind;
    obj["m"] = r.m;
    set(obj, "nc", r.nc);
    set(obj, "ndc", r.ndc);
    obj["strategy"] = r.strategy;
    set(obj, "analytic_error", r.analytic_error);
    set(obj, "threshold", r.threshold);
    set(obj, "floor", r.floor);
    set(obj, "binary_valid", r.binary_valid);
    set(obj, "empirical_error", r.empirical_error);
    set(obj, "std_error", r.std_error);
    set(obj, "min_photons", r.min_photons);
    doc["rows"].push_back(std::move(obj));
  }
  os << doc.dump(2) << '\n';
}

namespace detail {

inline std::ofstream open_output(const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open output file: " + path);
  return os;
}

}  // namespace detail

inline void write_csv(const std::string& path, const SweepResult& result) {
  std::ofstream os = detail::open_output(path);
  write_csv(os, result);
  if (!os) throw std::runtime_error("failed while writing: " + path);
}

inline void write_json(const std::string& path, const SweepResult& result) {
  std::ofstream os = detail::open_output(path);
  write_json(os, result);
  if (!os) throw std::runtime_error("failed while writing: " + path);
}

}  // namespace pqfa
