#include "v2x/harness/config.hpp"

#include <openssl/evp.h>

#include <array>
#include <charconv>
#include <concepts>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "v2x/error.hpp"

namespace v2x::harness {
namespace {

namespace pt = boost::property_tree;

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> s = {
      {"scenario",
       {"name", "source_power", "y_sq", "dest_noise_var", "bandwidth_kbps", "per_relay_power"}},
      {"population",
       {"n_total", "d", "motion_split", "h_src", "h_dst", "toward_source_h_src",
        "toward_source_h_dst", "toward_destination_h_src", "toward_destination_h_dst",
        "relay_power", "noise", "min_power", "kind"}},
      {"sweep", {"l_min", "l_max", "trials", "algorithms"}},
      {"allocation", {"quantum", "max_iters"}},
      {"chain", {"populations", "b1_draws", "counts"}},
      {"bound", {"instances", "max_relays"}},
      {"orchestrate", {"destinations", "l_min", "l_max"}},
  };
  return s;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

// Maps "section.key" to its 1-based line so that value errors can point at it.
std::map<std::string, int> key_lines(std::string_view text) {
  std::map<std::string, int> lines;
  std::string section;
  std::istringstream in{std::string(text)};
  std::string line;
  for (int n = 1; std::getline(in, line); ++n) {
    const std::string t = trim(line);
    if (t.empty() || t[0] == ';' || t[0] == '#') continue;
    if (t.front() == '[' && t.back() == ']') {
      section = trim(std::string_view(t).substr(1, t.size() - 2));
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = trim(std::string_view(t).substr(0, eq));
    lines[section.empty() ? key : section + "." + key] = n;
  }
  return lines;
}

class Reader {
 public:
  Reader(const pt::ptree& tree, std::map<std::string, int> lines, std::string source)
      : tree_(tree), lines_(std::move(lines)), source_(std::move(source)) {}

  [[noreturn]] void fail(const std::string& field, const std::string& what) const {
    std::string where = source_;
    if (auto it = lines_.find(field); it != lines_.end()) {
      where += ":" + std::to_string(it->second);
    }
    throw Error(ErrorCode::InvalidConfig, where + ": " + field + ": " + what);
  }

  [[nodiscard]] const std::string* raw(const std::string& field) const {
    const auto node = tree_.get_child_optional(pt::ptree::path_type(field, '.'));
    if (!node) return nullptr;
    return &node->data();
  }

  double number(const std::string& field, const std::string& text) const {
    double v = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || text.empty()) {
      fail(field, "'" + text + "' is not a number");
    }
    return v;
  }

  std::uint64_t integer(const std::string& field, const std::string& text) const {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
      fail(field, "'" + text + "' is not a non-negative integer");
    }
    return v;
  }

  void get(const std::string& field, double& out) const {
    if (const auto* r = raw(field)) out = number(field, trim(*r));
  }

  template <std::unsigned_integral T>
  void get(const std::string& field, T& out) const {
    if (const auto* r = raw(field)) out = static_cast<T>(integer(field, trim(*r)));
  }

  void get_list(const std::string& field, std::vector<double>& out) const {
    if (const auto* r = raw(field)) {
      out.clear();
      for (const auto& item : split(*r, ',')) out.push_back(number(field, item));
    }
  }

  void get_list(const std::string& field, std::vector<std::size_t>& out) const {
    if (const auto* r = raw(field)) {
      out.clear();
      for (const auto& item : split(*r, ',')) {
        out.push_back(static_cast<std::size_t>(integer(field, item)));
      }
    }
  }

  void get_interval(const std::string& field, Interval& out) const {
    std::vector<double> v;
    get_list(field, v);
    if (v.empty()) return;
    if (v.size() != 2) fail(field, "expected an interval 'lo, hi'");
    if (v[0] > v[1]) {
      fail(field, "interval [" + format(v[0]) + ", " + format(v[1]) + "] has lo > hi");
    }
    if (v[0] < 0.0 || v[1] > 1.0) fail(field, "coefficient interval must lie within [0, 1]");
    out = {v[0], v[1]};
  }

  static std::string format(double v) {
    std::array<char, 32> buf{};
    auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
  }

 private:
  const pt::ptree& tree_;
  std::map<std::string, int> lines_;
  std::string source_;
};

void check_schema(const pt::ptree& tree, const Reader& reader) {
  for (const auto& [name, node] : tree) {
    if (node.empty()) {
      if (name != "version") reader.fail(name, "unknown top-level key");
      continue;
    }
    const auto it = schema().find(name);
    if (it == schema().end()) reader.fail(name, "unknown section");
    for (const auto& [key, child] : node) {
      if (!it->second.contains(key)) reader.fail(name + "." + key, "unknown key");
    }
  }
}

void read_noise(const Reader& r, NoisePattern& noise) {
  const std::string* raw = r.raw("population.noise");
  if (!raw) return;
  std::istringstream in(*raw);
  std::string kind;
  in >> kind;
  std::vector<std::string> args;
  for (std::string a; in >> a;) args.push_back(a);
  if (kind == "constant" && args.size() == 1) {
    noise = {NoisePatternKind::constant, r.number("population.noise", args[0]), 0.0};
  } else if (kind == "mod3" && args.size() == 2) {
    noise = {NoisePatternKind::mod3, r.number("population.noise", args[0]),
             r.number("population.noise", args[1])};
  } else {
    r.fail("population.noise", "expected 'constant <var>' or 'mod3 <var> <var_every_third>'");
  }
  if (noise.base < 0.0 || noise.every_third < 0.0) {
    r.fail("population.noise", "noise variances must be >= 0");
  }
}

void read_kind(const Reader& r, RelayKind& kind) {
  const std::string* raw = r.raw("population.kind");
  if (!raw) return;
  const std::string v = trim(*raw);
  for (RelayKind k : {RelayKind::vehicle, RelayKind::uav, RelayKind::mobile,
                      RelayKind::fixed_station}) {
    if (to_string(k) == v) {
      kind = k;
      return;
    }
  }
  r.fail("population.kind", "unknown relay kind '" + v + "'");
}

void read_algorithms(const Reader& r, std::vector<Algorithm>& out) {
  const std::string* raw = r.raw("sweep.algorithms");
  if (!raw) return;
  out.clear();
  for (const auto& item : split(*raw, ',')) {
    const auto a = parse_algorithm(item);
    if (!a) r.fail("sweep.algorithms", "unknown algorithm '" + item + "'");
    out.push_back(*a);
  }
}

void validate(const ExperimentConfig& c, const Reader& r) {
  if (c.d_values.empty()) r.fail("population.d", "at least one value is required");
  if (c.source_powers.empty()) r.fail("scenario.source_power", "at least one value is required");
  for (double d : c.d_values) {
    if (!(d > 0.0)) r.fail("population.d", "grid step must be > 0");
  }
  for (double q : c.source_powers) {
    if (!(q >= 0.0)) r.fail("scenario.source_power", "must be >= 0");
  }
  const auto& p = c.population;
  if (p.n_total < 1) r.fail("population.n_total", "must be >= 1");
  if (!(p.relay_power.lo > 0.0)) r.fail("population.relay_power", "must be > 0");
  if (!(p.motion_split >= 0.0 && p.motion_split <= 1.0)) {
    r.fail("population.motion_split", "must lie in [0, 1]");
  }
  if (!(p.min_power >= 0.0) || p.min_power > p.relay_power.lo) {
    r.fail("population.min_power", "must lie in [0, relay_power]");
  }
  const auto& s = c.scenario;
  if (!(s.y_sq >= 0.0)) r.fail("scenario.y_sq", "must be >= 0");
  if (!(s.dest_noise_var >= 0.0)) r.fail("scenario.dest_noise_var", "must be >= 0");
  if (!(s.bandwidth_kbps > 0.0)) r.fail("scenario.bandwidth_kbps", "must be > 0");
  if (s.per_relay_power && !(*s.per_relay_power > 0.0)) {
    r.fail("scenario.per_relay_power", "must be > 0");
  }
  const auto check_range = [&](const SweepRange& range, const std::string& section) {
    if (range.l_min < 1) r.fail(section + ".l_min", "must be >= 1");
    if (range.l_min > range.l_max) r.fail(section + ".l_max", "must be >= l_min");
    if (range.l_max > p.n_total) r.fail(section + ".l_max", "exceeds population.n_total");
  };
  check_range(c.sweep.range, "sweep");
  check_range(c.orchestrate.range, "orchestrate");
  if (c.sweep.trials < 1) r.fail("sweep.trials", "must be >= 1");
  if (c.sweep.algorithms.empty()) r.fail("sweep.algorithms", "at least one algorithm is required");
  if (c.allocation.quantum && !(*c.allocation.quantum > 0.0)) {
    r.fail("allocation.quantum", "must be > 0");
  }
  if (c.allocation.max_iters < 1) r.fail("allocation.max_iters", "must be >= 1");
  if (c.chain.populations < 1) r.fail("chain.populations", "must be >= 1");
  if (c.chain.b1_draws < 1) r.fail("chain.b1_draws", "must be >= 1");
  if (c.chain.counts.empty()) r.fail("chain.counts", "at least one relay count is required");
  for (std::size_t L : c.chain.counts) {
    if (L < 1 || L > p.n_total) r.fail("chain.counts", "each count must lie in [1, n_total]");
  }
  if (c.bound.instances < 1) r.fail("bound.instances", "must be >= 1");
  if (c.bound.max_relays < 1) r.fail("bound.max_relays", "must be >= 1");
  if (c.orchestrate.destinations < 1) r.fail("orchestrate.destinations", "must be >= 1");

  for (double d : c.d_values) {
    PopulationSpec spec = p;
    spec.d = d;
    try {
      spec.validate();
    } catch (const Error& e) {
      r.fail("population", e.what());
    }
  }
}

}  // namespace

std::string sha256_hex(std::string_view bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 digest failed");
  }
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[md[i] >> 4]);
    out.push_back(hex[md[i] & 0xf]);
  }
  return out;
}

ExperimentConfig parse_config(std::string_view text, const std::string& source_name) {
  pt::ptree tree;
  std::istringstream in{std::string(text)};
  try {
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw Error(ErrorCode::InvalidConfig,
                source_name + ":" + std::to_string(e.line()) + ": " + e.message());
  }
  const Reader r(tree, key_lines(text), source_name);
  check_schema(tree, r);

  if (const auto* v = r.raw("version")) {
    if (r.integer("version", trim(*v)) != kConfigFormatVersion) {
      r.fail("version", "unsupported format version (expected " +
                            std::to_string(kConfigFormatVersion) + ")");
    }
  }

  ExperimentConfig c;
  c.source_path = source_name;
  c.digest = sha256_hex(text);
  if (const auto* name = r.raw("scenario.name")) c.name = trim(*name);

  c.source_powers = {c.scenario.source_power};
  r.get_list("scenario.source_power", c.source_powers);
  if (!c.source_powers.empty()) c.scenario.source_power = c.source_powers.front();
  r.get("scenario.y_sq", c.scenario.y_sq);
  r.get("scenario.dest_noise_var", c.scenario.dest_noise_var);
  r.get("scenario.bandwidth_kbps", c.scenario.bandwidth_kbps);
  if (r.raw("scenario.per_relay_power")) {
    double v = 0.0;
    r.get("scenario.per_relay_power", v);
    c.scenario.per_relay_power = v;
  }

  auto& p = c.population;
  r.get("population.n_total", p.n_total);
  c.d_values = {p.d};
  r.get_list("population.d", c.d_values);
  if (!c.d_values.empty()) p.d = c.d_values.front();
  r.get("population.motion_split", p.motion_split);
  // h_src / h_dst set both directions; the direction-specific keys refine them.
  Interval h_src = p.toward_source.h_src;
  if (r.raw("population.h_src")) {
    r.get_interval("population.h_src", h_src);
    p.toward_source.h_src = p.toward_destination.h_src = h_src;
  }
  Interval h_dst = p.toward_source.h_dst;
  if (r.raw("population.h_dst")) {
    r.get_interval("population.h_dst", h_dst);
    p.toward_source.h_dst = p.toward_destination.h_dst = h_dst;
  }
  r.get_interval("population.toward_source_h_src", p.toward_source.h_src);
  r.get_interval("population.toward_source_h_dst", p.toward_source.h_dst);
  r.get_interval("population.toward_destination_h_src", p.toward_destination.h_src);
  r.get_interval("population.toward_destination_h_dst", p.toward_destination.h_dst);
  if (r.raw("population.relay_power")) {
    std::vector<double> v;
    r.get_list("population.relay_power", v);
    if (v.size() == 1) {
      p.relay_power = {v[0], v[0]};
    } else if (v.size() == 2 && v[0] <= v[1]) {
      p.relay_power = {v[0], v[1]};
    } else {
      r.fail("population.relay_power", "expected a constant or an interval 'lo, hi'");
    }
  }
  read_noise(r, p.noise);
  r.get("population.min_power", p.min_power);
  read_kind(r, p.kind);

  r.get("sweep.l_min", c.sweep.range.l_min);
  r.get("sweep.l_max", c.sweep.range.l_max);
  r.get("sweep.trials", c.sweep.trials);
  read_algorithms(r, c.sweep.algorithms);

  if (r.raw("allocation.quantum")) {
    double q = 0.0;
    r.get("allocation.quantum", q);
    c.allocation.quantum = q;
  }
  r.get("allocation.max_iters", c.allocation.max_iters);

  r.get("chain.populations", c.chain.populations);
  r.get("chain.b1_draws", c.chain.b1_draws);
  r.get_list("chain.counts", c.chain.counts);

  r.get("bound.instances", c.bound.instances);
  r.get("bound.max_relays", c.bound.max_relays);

  r.get("orchestrate.destinations", c.orchestrate.destinations);
  r.get("orchestrate.l_min", c.orchestrate.range.l_min);
  r.get("orchestrate.l_max", c.orchestrate.range.l_max);

  validate(c, r);
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::InvalidConfig, path.string() + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path.string());
}

nlohmann::json ExperimentConfig::to_json() const {
  using nlohmann::json;
  const auto interval = [](const Interval& iv) { return json::array({iv.lo, iv.hi}); };
  std::vector<std::string> algos;
  for (Algorithm a : sweep.algorithms) algos.emplace_back(label(a));
  const auto& p = population;
  json noise = {{"kind", p.noise.kind == NoisePatternKind::mod3 ? "mod3" : "constant"},
                {"base", p.noise.base}};
  if (p.noise.kind == NoisePatternKind::mod3) noise["every_third"] = p.noise.every_third;
  return json{
      {"format_version", kConfigFormatVersion},
      {"scenario",
       {{"name", name},
        {"source_power", source_powers},
        {"y_sq", scenario.y_sq},
        {"dest_noise_var", scenario.dest_noise_var},
        {"bandwidth_kbps", scenario.bandwidth_kbps},
        {"per_relay_power", scenario.per_relay_power.value_or(p.mean_relay_power())},
        {"total_power_rule", "L * per_relay_power"}}},
      {"population",
       {{"n_total", p.n_total},
        {"d", d_values},
        {"motion_split", p.motion_split},
        {"toward_source_h_src", interval(p.toward_source.h_src)},
        {"toward_source_h_dst", interval(p.toward_source.h_dst)},
        {"toward_destination_h_src", interval(p.toward_destination.h_src)},
        {"toward_destination_h_dst", interval(p.toward_destination.h_dst)},
        {"relay_power", interval(p.relay_power)},
        {"noise", noise},
        {"min_power", p.min_power},
        {"kind", std::string(to_string(p.kind))}}},
      {"sweep",
       {{"l_min", sweep.range.l_min},
        {"l_max", sweep.range.l_max},
        {"trials", sweep.trials},
        {"algorithms", algos}}},
      {"allocation",
       {{"quantum", allocation.quantum ? json(*allocation.quantum) : json("total_power/1000")},
        {"max_iters", allocation.max_iters}}},
      {"chain",
       {{"populations", chain.populations},
        {"b1_draws", chain.b1_draws},
        {"counts", chain.counts}}},
      {"bound", {{"instances", bound.instances}, {"max_relays", bound.max_relays}}},
      {"orchestrate",
       {{"destinations", orchestrate.destinations},
        {"l_min", orchestrate.range.l_min},
        {"l_max", orchestrate.range.l_max}}},
  };
}

}  // namespace v2x::harness
