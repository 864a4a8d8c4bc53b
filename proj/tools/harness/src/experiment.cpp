#include "v2x/harness/experiment.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <chrono>
#include <ctime>
#include <fstream>
#include <sstream>

#include "v2x/channel_model.hpp"
#include "v2x/error.hpp"
#include "v2x/link_instance.hpp"
#include "v2x/orchestrate.hpp"
#include "v2x/random.hpp"
#include "v2x/sweep.hpp"

#ifndef V2XRELAY_VERSION
#define V2XRELAY_VERSION "0.0.0"
#endif

namespace v2x::harness {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// LF line endings regardless of platform; every field is comma free.
class CsvFile {
 public:
  CsvFile(const fs::path& path, std::initializer_list<std::string_view> header)
      : out_(path, std::ios::binary | std::ios::trunc) {
    if (!out_) throw std::runtime_error("cannot write " + path.string());
    write(std::vector<std::string>(header.begin(), header.end()));
  }

  void write(const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out_ << ',';
      out_ << fields[i];
    }
    out_ << '\n';
  }

 private:
  std::ofstream out_;
};

std::string str(bool v) { return v ? "true" : "false"; }
std::string str(std::size_t v) { return std::to_string(v); }

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::array<char, 32> buf{};
  std::strftime(buf.data(), buf.size(), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf.data();
}

void fail(RunManifest& m, int code, std::string kind, std::string message, json details = {}) {
  // The most severe failure wins.
  if (m.exit_code != kExitOk && m.exit_code >= code) return;
  m.exit_code = code;
  m.failure = json{{"exit_code", code},
                   {"kind", std::move(kind)},
                   {"message", std::move(message)},
                   {"details", details.is_null() ? json::array() : std::move(details)}};
}

ExperimentConfig apply_overrides(const ExperimentConfig& base, const RunOptions& opt) {
  ExperimentConfig c = base;
  c.population.seed = opt.seed;
  if (opt.trials) {
    if (*opt.trials < 1) throw Error(ErrorCode::InvalidConfig, "--trials must be >= 1");
    c.sweep.trials = *opt.trials;
    c.chain.populations = *opt.trials;
    c.bound.instances = *opt.trials;
  }
  for (SweepRange* range : {&c.sweep.range, &c.orchestrate.range}) {
    if (opt.l_min) range->l_min = *opt.l_min;
    if (opt.l_max) range->l_max = *opt.l_max;
    if (range->l_min < 1 || range->l_min > range->l_max ||
        range->l_max > c.population.n_total) {
      throw Error(ErrorCode::InvalidConfig,
                  "relay count range [" + std::to_string(range->l_min) + ", " +
                      std::to_string(range->l_max) + "] must lie within [1, n_total = " +
                      std::to_string(c.population.n_total) + "]");
    }
  }
  return c;
}

struct Variant {
  PopulationSpec spec;
  ScenarioConfig scenario;
  std::string suffix;
};

std::vector<Variant> variants(const ExperimentConfig& c) {
  std::vector<Variant> out;
  for (double d : c.d_values) {
    for (double q : c.source_powers) {
      Variant v{c.population, c.scenario, {}};
      v.spec.d = d;
      v.scenario.source_power = q;
      if (c.d_values.size() > 1) v.suffix += "@d=" + format_number(d);
      if (c.source_powers.size() > 1) v.suffix += "@source_power=" + format_number(q);
      out.push_back(std::move(v));
    }
  }
  return out;
}

void run_sweep(const ExperimentConfig& c, bool with_margins, RunManifest& m) {
  CsvFile capacity(m.out_dir / "capacity.csv",
                   {"L", "label", "mean_capacity_kbps", "trials", "seed"});
  m.outputs.emplace_back("capacity.csv");
  std::optional<CsvFile> margins;
  if (with_margins) {
    margins.emplace(m.out_dir / "margins.csv",
                    std::initializer_list<std::string_view>{"L", "baseline_label", "margin_kbps"});
    m.outputs.emplace_back("margins.csv");
  }

  json curves = json::array();
  json invalid = json::array();
  json violations = json::array();
  for (const Variant& v : variants(c)) {
    Comparison cmp;
    if (with_margins) {
      cmp = compare_algorithms(v.spec, v.scenario, c.sweep.range, c.sweep.trials, c.allocation);
    } else {
      cmp.sweep = sweep_capacity(v.spec, v.scenario, c.sweep.range, c.sweep.algorithms,
                                 c.sweep.trials, c.allocation);
    }
    const SweepResult& r = cmp.sweep;
    for (const SweepCell& cell : r.cells) {
      const std::string name = std::string(label(cell.algorithm)) + v.suffix;
      capacity.write({str(cell.count), name,
                      cell.valid ? format_number(cell.mean_capacity_kbps) : "invalid",
                      str(cell.trials), std::to_string(v.spec.seed)});
      if (!cell.valid) invalid.push_back({{"L", cell.count}, {"label", name}, {"error", cell.error}});
    }
    for (const MarginRow& row : cmp.margins) {
      margins->write({str(row.count), std::string(label(row.baseline)) + v.suffix,
                      row.valid ? format_number(row.margin_kbps) : "invalid"});
    }
    for (std::size_t L : r.dominance_violations()) {
      violations.push_back({{"L", L}, {"variant", v.suffix}});
    }

    for (Algorithm a : r.algorithms) {
      std::optional<std::size_t> best;
      double best_value = 0.0;
      for (std::size_t L = r.range.l_min; L <= r.range.l_max; ++L) {
        const SweepCell* cell = r.find(L, a);
        if (cell->valid && (!best || cell->mean_capacity_kbps > best_value)) {
          best = L;
          best_value = cell->mean_capacity_kbps;
        }
      }
      json curve{{"label", std::string(label(a)) + v.suffix}};
      if (best) {
        curve["argmax_L"] = *best;
        curve["max_capacity_kbps"] = best_value;
      }
      curves.push_back(std::move(curve));
    }
  }
  m.summary["curves"] = std::move(curves);
  if (!invalid.empty()) {
    fail(m, kExitInfeasible, "infeasible", "some sweep cells could not be evaluated", invalid);
  }
  if (!violations.empty()) {
    fail(m, kExitInvariantViolation, "invariant_violation",
         "proposed_b3 fell below topk_b2 in some cells", violations);
  }
}

void run_chain(const ExperimentConfig& c, RunManifest& m) {
  CsvFile out(m.out_dir / "chain.csv",
              {"population", "L", "c_b3_kbps", "c_b2_kbps", "c_b1_mean_kbps", "b3_dominates_b2",
               "b2_dominates_b1_mean", "chain_holds", "b1_draws_above_b2"});
  m.outputs.emplace_back("chain.csv");
  const SourceSignal source = c.scenario.source();
  const DestinationNode dest = c.scenario.destination();

  json per_count = json::object();
  json b3_violations = json::array();
  json counterexamples = json::array();
  std::vector<std::size_t> dominated(c.chain.counts.size(), 0);
  for (std::size_t p = 0; p < c.chain.populations; ++p) {
    const Population pop = generate_population(c.population, p);
    for (std::size_t k = 0; k < c.chain.counts.size(); ++k) {
      const std::size_t L = c.chain.counts[k];
      const ChainReport rep = verify_capacity_chain(
          source, pop.relays, dest, L, c.scenario.total_power(L, c.population), c.allocation,
          c.scenario.bandwidth_kbps, c.chain.b1_draws, mix_seed({c.population.seed, p, L}));
      out.write({str(p), str(L), format_number(rep.c_b3), format_number(rep.c_b2),
                 format_number(rep.c_b1_mean), str(rep.b3_dominates_b2),
                 str(rep.b2_dominates_b1_mean), str(rep.chain_holds),
                 str(rep.b1_draws_above_b2.size())});
      if (rep.b2_dominates_b1_mean) ++dominated[k];
      if (!rep.b3_dominates_b2) b3_violations.push_back({{"population", p}, {"L", L}});
      if (!rep.b2_dominates_b1_mean) {
        counterexamples.push_back({{"population", p},
                                   {"L", L},
                                   {"c_b2_kbps", rep.c_b2},
                                   {"c_b1_mean_kbps", rep.c_b1_mean}});
      }
    }
  }
  for (std::size_t k = 0; k < c.chain.counts.size(); ++k) {
    per_count[std::to_string(c.chain.counts[k])] =
        static_cast<double>(dominated[k]) / static_cast<double>(c.chain.populations);
  }
  m.summary["b2_dominates_b1_mean_fraction"] = std::move(per_count);
  m.summary["b2_below_b1_mean"] = std::move(counterexamples);
  if (!b3_violations.empty()) {
    fail(m, kExitInvariantViolation, "invariant_violation",
         "optimized allocation fell below uniform allocation", b3_violations);
  }
}

void run_bound(const ExperimentConfig& c, RunManifest& m) {
  CsvFile out(m.out_dir / "bound.csv",
              {"instance", "L", "combined_snr", "summed_snr", "holds", "expanded_square",
               "sum_lower_bound", "cauchy_schwarz", "combined_form"});
  m.outputs.emplace_back("bound.csv");
  json violations = json::array();
  for (std::size_t i = 0; i < c.bound.instances; ++i) {
    const LinkInstance inst = random_link_instance(c.population.seed, i, c.bound.max_relays);
    const BoundReport rep = verify_snr_bound(inst.source, inst.relays, inst.dest);
    std::vector<std::string> row{str(i), str(inst.relays.size()), format_number(rep.combined),
                                 format_number(rep.summed), str(rep.holds)};
    bool all = rep.holds;
    for (const BoundStep& s : rep.steps) {
      row.push_back(str(s.holds));
      all = all && s.holds;
    }
    out.write(row);
    if (!all) violations.push_back(i);
  }
  m.summary["violations"] = violations.size();
  if (!violations.empty()) {
    fail(m, kExitInvariantViolation, "invariant_violation", "SNR bound check failed", violations);
  }
}

void run_orchestrate(const ExperimentConfig& c, RunManifest& m) {
  CsvFile out(m.out_dir / "orchestrate.csv",
              {"destination", "L", "relay_ids", "capacity_kbps", "status"});
  m.outputs.emplace_back("orchestrate.csv");
  OrchestrationConfig oc;
  oc.l_min = c.orchestrate.range.l_min;
  oc.l_max = c.orchestrate.range.l_max;
  oc.per_relay_power = c.scenario.per_relay_power.value_or(c.population.mean_relay_power());
  oc.bandwidth_kbps = c.scenario.bandwidth_kbps;
  oc.allocation = c.allocation;
  const auto links = make_destination_links(c.population, c.scenario, c.orchestrate.destinations);
  json failures = json::array();
  for (const auto& e : orchestrate_multi_destination(links, oc)) {
    if (!e.ok()) {
      out.write({str(std::size_t{e.destination_id}), "0", "", "invalid", "infeasible"});
      failures.push_back({{"destination", e.destination_id}, {"error", e.error}});
      continue;
    }
    std::string ids;
    for (RelayId id : e.selection->relay_ids()) {
      if (!ids.empty()) ids += ';';
      ids += std::to_string(id);
    }
    out.write({str(std::size_t{e.destination_id}), str(e.selection->size()), ids,
               format_number(e.capacity.kbps), "ok"});
  }
  if (!failures.empty()) {
    fail(m, kExitInfeasible, "infeasible", "some destinations have no feasible selection",
         failures);
  }
}

}  // namespace

bool is_known_experiment(std::string_view name) noexcept {
  return std::find(std::begin(kExperiments), std::end(kExperiments), name) !=
         std::end(kExperiments);
}

std::string_view tool_version() noexcept { return V2XRELAY_VERSION; }

std::string format_number(double value) {
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), res.ptr);
}

json RunManifest::to_json() const {
  json j{{"experiment", experiment},
         {"scenario", scenario},
         {"config_path", config_path},
         {"config_sha256", config_digest},
         {"master_seed", seed},
         {"tool_version", tool_version},
         {"timestamp", timestamp},
         {"out_dir", out_dir.string()},
         {"prng", "mt19937_64 per substream, seeded by SplitMix64 over (master_seed, trial, index)"},
         {"effective_config", effective_config},
         {"summary", summary},
         {"exit_code", exit_code}};
  json outs = json::array();
  for (const auto& p : outputs) outs.push_back(p.string());
  j["outputs"] = std::move(outs);
  j["out_dir_override"] =
      out_dir_override ? json{{"variable", kOutDirEnv}, {"value", *out_dir_override}} : json();
  if (exit_code != kExitOk) j["failure"] = failure;
  return j;
}

RunManifest run_experiment(std::string_view name, const ExperimentConfig& config,
                           const RunOptions& options) {
  if (!is_known_experiment(name)) {
    throw Error(ErrorCode::InvalidConfig, "unknown experiment '" + std::string(name) + "'");
  }
  const ExperimentConfig c = apply_overrides(config, options);

  RunManifest m;
  m.experiment = name;
  m.scenario = c.name;
  m.config_path = c.source_path;
  m.config_digest = c.digest;
  m.seed = options.seed;
  m.tool_version = tool_version();
  m.timestamp = utc_timestamp();
  m.out_dir = options.out_dir;
  m.out_dir_override = options.out_dir_override;
  m.effective_config = c.to_json();
  m.effective_config["master_seed"] = options.seed;
  m.summary = json::object();
  if (name == "fig4") {
    m.summary["note"] =
        "relay power distribution for this scenario is not published; the configured range is "
        "used as is";
  }

  fs::create_directories(m.out_dir);
  try {
    if (name == "fig3" || name == "fig4") {
      run_sweep(c, false, m);
    } else if (name == "fig5") {
      run_sweep(c, true, m);
    } else if (name == "chain-check") {
      run_chain(c, m);
    } else if (name == "bound-check") {
      run_bound(c, m);
    } else {
      run_orchestrate(c, m);
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::InvalidConfig) throw;
    const bool infeasible = e.code() == ErrorCode::InfeasibleBudget ||
                            e.code() == ErrorCode::InsufficientRelays ||
                            e.code() == ErrorCode::EmptyPool;
    fail(m, infeasible ? kExitInfeasible : kExitInvariantViolation,
         infeasible ? "infeasible" : "invariant_violation", e.what());
  }

  if (m.exit_code != kExitOk) {
    std::ofstream(m.out_dir / "failure.json", std::ios::binary) << m.failure.dump(2) << '\n';
    m.outputs.emplace_back("failure.json");
  }
  m.outputs.emplace_back("manifest.json");
  std::ofstream(m.out_dir / "manifest.json", std::ios::binary) << m.to_json().dump(2) << '\n';
  return m;
}

}  // namespace v2x::harness
