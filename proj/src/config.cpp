#include "daaca/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <sstream>

namespace daaca {

const std::vector<FieldSize>& standard_sizes() {
  static const std::vector<FieldSize> sizes = {
      {40, 50, 200},    {60, 60, 400},    {70, 80, 600},    {80, 90, 800},    {100, 100, 1000},
      {100, 120, 1200}, {100, 140, 1400}, {120, 130, 1600}, {130, 120, 1800}, {140, 140, 2000}};
  return sizes;
}

const std::vector<std::uint64_t>& standard_packet_budgets() {
  static const std::vector<std::uint64_t> budgets = {1000, 2000, 3000, 4000, 5000,
                                                     6000, 7000, 8000, 9000, 100000};
  return budgets;
}

std::vector<std::uint64_t> default_seeds(std::size_t count) {
  std::vector<std::uint64_t> s(count);
  for (std::size_t i = 0; i < count; ++i) s[i] = 1 + i;
  return s;
}

void ExperimentConfig::validate() const {
  if (algorithms.empty()) throw ConfigError("algorithms must not be empty");
  if (sizes.empty()) throw ConfigError("sizes must not be empty");
  if (packets.empty()) throw ConfigError("packets must not be empty");
  if (seeds.empty()) throw ConfigError("seeds must not be empty");
  if (jobs == 0) throw ConfigError("jobs must be >= 1");
  if (series_stride == 0) throw ConfigError("series_stride must be >= 1");
  if (lifetime.enabled) {
    if (!(lifetime.e_init > 0.0)) throw ConfigError("lifetime e_init must be > 0");
    if (lifetime.packets == 0) throw ConfigError("lifetime packets must be >= 1");
  }
  for (auto a : algorithms) {
    for (const auto& s : sizes) {
      for (auto p : packets) cell(a, s, p).validate();
      if (lifetime.enabled) lifetime_cell(a, s).validate();
    }
  }
}

SimulationConfig ExperimentConfig::cell(Algorithm a, const FieldSize& size,
                                        std::uint64_t budget) const {
  SimulationConfig c = base;
  c.algorithm = a;
  c.width = size.width;
  c.length = size.length;
  c.n = size.n;
  c.packet_budget = budget;
  c.lifetime_mode = false;
  return c;
}

SimulationConfig ExperimentConfig::lifetime_cell(Algorithm a, const FieldSize& size) const {
  SimulationConfig c = cell(a, size, lifetime.packets);
  c.energy.e_init = lifetime.e_init;
  c.lifetime_mode = true;
  return c;
}

std::size_t edit_distance(std::string_view a, std::string_view b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

namespace {

struct Value {
  enum class Kind { Bool, Number, String, Array } kind = Kind::Number;
  bool boolean = false;
  double number = 0.0;
  bool integral = false;
  std::string text;
  std::vector<Value> items;
};

class Parser {
 public:
  Parser(std::string_view src, int line) : src_(src), line_(line) {}

  Value parse_value() {
    skip_space();
    if (pos_ >= src_.size()) fail("missing value");
    const char c = src_[pos_];
    if (c == '[') return parse_array();
    if (c == '"' || c == '\'') return parse_string();
    return parse_scalar();
  }

  void expect_end() {
    skip_space();
    if (pos_ < src_.size()) fail("unexpected text after value: '" + std::string(src_.substr(pos_)) + "'");
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ConfigError("line " + std::to_string(line_) + ": " + msg);
  }

 private:
  void skip_space() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  Value parse_array() {
    Value v;
    v.kind = Value::Kind::Array;
    ++pos_;
    skip_space();
    if (pos_ < src_.size() && src_[pos_] == ']') {
      ++pos_;
      return v;
    }
    while (true) {
      v.items.push_back(parse_value());
      skip_space();
      if (pos_ >= src_.size()) fail("unterminated array");
      if (src_[pos_] == ',') {
        ++pos_;
        skip_space();
        if (pos_ < src_.size() && src_[pos_] == ']') {
          ++pos_;
          return v;
        }
        continue;
      }
      if (src_[pos_] == ']') {
        ++pos_;
        return v;
      }
      fail("expected ',' or ']' in array");
    }
  }

  Value parse_string() {
    const char quote = src_[pos_++];
    Value v;
    v.kind = Value::Kind::String;
    while (pos_ < src_.size() && src_[pos_] != quote) {
      if (src_[pos_] == '\\' && quote == '"' && pos_ + 1 < src_.size()) {
        const char e = src_[++pos_];
        switch (e) {
          case 'n': v.text += '\n'; break;
          case 't': v.text += '\t'; break;
          default: v.text += e; break;
        }
        ++pos_;
        continue;
      }
      v.text += src_[pos_++];
    }
    if (pos_ >= src_.size()) fail("unterminated string");
    ++pos_;
    return v;
  }

  Value parse_scalar() {
    const auto start = pos_;
    while (pos_ < src_.size() && src_[pos_] != ',' && src_[pos_] != ']' &&
           !std::isspace(static_cast<unsigned char>(src_[pos_]))) {
      ++pos_;
    }
    std::string tok(src_.substr(start, pos_ - start));
    Value v;
    if (tok == "true" || tok == "false") {
      v.kind = Value::Kind::Bool;
      v.boolean = tok == "true";
      return v;
    }
    std::string digits;
    for (char c : tok) {
      if (c != '_') digits += c;
    }
    double d = 0.0;
    const char* b = digits.data();
    const char* e = b + digits.size();
    if (!digits.empty() && *b == '+') ++b;
    auto [ptr, ec] = std::from_chars(b, e, d);
    if (ec != std::errc() || ptr != e || digits.empty()) fail("cannot parse value '" + tok + "'");
    v.kind = Value::Kind::Number;
    v.number = d;
    v.integral = digits.find_first_of(".eE") == std::string::npos || (std::floor(d) == d && std::isfinite(d));
    return v;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_;
};

struct Field {
  const char* section;
  const char* key;
  std::function<void(const Value&, ExperimentConfig&, const std::string&)> set;
};

[[noreturn]] void type_error(const std::string& where, const std::string& expected) {
  throw ConfigError(where + " must be " + expected);
}

double as_number(const Value& v, const std::string& where) {
  if (v.kind != Value::Kind::Number) type_error(where, "a number");
  return v.number;
}

std::uint64_t as_count(const Value& v, const std::string& where) {
  if (v.kind != Value::Kind::Number || !v.integral || v.number < 0 ||
      v.number > static_cast<double>(std::numeric_limits<std::uint32_t>::max()) * 1e6) {
    type_error(where, "a non-negative integer");
  }
  return static_cast<std::uint64_t>(v.number);
}

std::uint32_t as_u32(const Value& v, const std::string& where) {
  const auto x = as_count(v, where);
  if (x > std::numeric_limits<std::uint32_t>::max()) type_error(where, "a 32-bit integer");
  return static_cast<std::uint32_t>(x);
}

bool as_bool(const Value& v, const std::string& where) {
  if (v.kind != Value::Kind::Bool) type_error(where, "true or false");
  return v.boolean;
}

const std::string& as_string(const Value& v, const std::string& where) {
  if (v.kind != Value::Kind::String) type_error(where, "a string");
  return v.text;
}

const std::vector<Value>& as_array(const Value& v, const std::string& where) {
  if (v.kind != Value::Kind::Array) type_error(where, "an array");
  return v.items;
}

#define NUM(sec, name, target) \
  Field{sec, #name, [](const Value& v, ExperimentConfig& c, const std::string& w) { target = as_number(v, w); }}
#define U32(sec, name, target) \
  Field{sec, #name, [](const Value& v, ExperimentConfig& c, const std::string& w) { target = as_u32(v, w); }}
#define BOOL(sec, name, target) \
  Field{sec, #name, [](const Value& v, ExperimentConfig& c, const std::string& w) { target = as_bool(v, w); }}

const std::vector<Field>& fields() {
  static const std::vector<Field> all = {
      Field{"experiment", "algorithms",
            [](const Value& v, ExperimentConfig& c, const std::string& w) {
              c.algorithms.clear();
              for (const auto& item : as_array(v, w)) {
                const auto& name = as_string(item, w);
                auto a = parse_algorithm(name);
                if (!a) throw ConfigError(w + ": unknown algorithm '" + name + "'");
                c.algorithms.push_back(*a);
              }
            }},
      Field{"experiment", "sizes",
            [](const Value& v, ExperimentConfig& c, const std::string& w) {
              c.sizes.clear();
              for (const auto& item : as_array(v, w)) {
                const auto& triple = as_array(item, w);
                if (triple.size() != 3) throw ConfigError(w + " entries must be [width, length, n]");
                c.sizes.push_back({as_number(triple[0], w), as_number(triple[1], w),
                                   static_cast<std::size_t>(as_count(triple[2], w))});
              }
            }},
      Field{"experiment", "packets",
            [](const Value& v, ExperimentConfig& c, const std::string& w) {
              c.packets.clear();
              for (const auto& item : as_array(v, w)) c.packets.push_back(as_count(item, w));
            }},
      Field{"experiment", "seeds",
            [](const Value& v, ExperimentConfig& c, const std::string& w) {
              if (v.kind == Value::Kind::String) {
                c.seeds = parse_seed_list(v.text);
                return;
              }
              c.seeds.clear();
              for (const auto& item : as_array(v, w)) c.seeds.push_back(as_count(item, w));
            }},
      Field{"experiment", "out",
            [](const Value& v, ExperimentConfig& c, const std::string& w) { c.out = as_string(v, w); }},
      U32("experiment", jobs, c.jobs),
      Field{"experiment", "series_stride",
            [](const Value& v, ExperimentConfig& c, const std::string& w) { c.series_stride = as_count(v, w); }},

      U32("network", sources, c.base.sources),
      NUM("network", range, c.base.range),
      Field{"network", "sink",
            [](const Value& v, ExperimentConfig& c, const std::string& w) {
              const auto& s = as_string(v, w);
              if (s == "center") {
                c.base.sink = SinkPlacement::Center;
              } else if (s == "corner") {
                c.base.sink = SinkPlacement::Corner;
              } else {
                throw ConfigError(w + " must be \"center\" or \"corner\"");
              }
            }},
      U32("network", topology_bits_per_node, c.base.topology_bits_per_node),
      Field{"network", "l_pedap_structure",
            [](const Value& v, ExperimentConfig& c, const std::string& w) {
              const auto& s = as_string(v, w);
              if (s == "lmst") {
                c.base.l_pedap_structure = LPedapStructure::Lmst;
              } else if (s == "rng") {
                c.base.l_pedap_structure = LPedapStructure::Rng;
              } else {
                throw ConfigError(w + " must be \"lmst\" or \"rng\"");
              }
            }},

      NUM("energy", e_init, c.base.energy.e_init),
      NUM("energy", e_tx_elec, c.base.energy.e_tx_elec),
      NUM("energy", e_rx_elec, c.base.energy.e_rx_elec),
      NUM("energy", eps_amp, c.base.energy.eps_amp),
      Field{"energy", "literal_eps_amp",
            [](const Value& v, ExperimentConfig& c, const std::string& w) {
              if (as_bool(v, w)) c.base.energy.eps_amp = EnergyModelParams::kLiteralEpsAmp;
            }},
      U32("energy", packet_bits, c.base.energy.packet_bits),

      NUM("daaca", alpha, c.base.daaca.alpha),
      NUM("daaca", beta, c.base.daaca.beta),
      NUM("daaca", rho, c.base.daaca.rho),
      NUM("daaca", zeta, c.base.daaca.zeta),
      NUM("daaca", q0, c.base.daaca.q0),
      NUM("daaca", eta_min, c.base.daaca.eta_min),
      NUM("daaca", eta_max, c.base.daaca.eta_max),
      NUM("daaca", eta_init, c.base.daaca.eta_init),
      U32("daaca", round_to_update, c.base.daaca.round_to_update),
      NUM("daaca", deposit_scale, c.base.daaca.deposit_scale),
      U32("daaca", control_bits, c.base.daaca.control_bits),
      BOOL("daaca", reset_times_on_sync, c.base.daaca.reset_times_on_sync),
      BOOL("daaca", acs_clamp, c.base.daaca.acs_clamp),
      Field{"daaca", "best_scope",
            [](const Value& v, ExperimentConfig& c, const std::string& w) {
              const auto& s = as_string(v, w);
              if (s == "window") {
                c.base.daaca.best_scope = BestPathScope::Window;
              } else if (s == "all-time") {
                c.base.daaca.best_scope = BestPathScope::AllTime;
              } else {
                throw ConfigError(w + " must be \"window\" or \"all-time\"");
              }
            }},

      NUM("aca", beta, c.base.aca.beta),
      NUM("aca", rho, c.base.aca.rho),
      NUM("aca", deposit, c.base.aca.deposit),
      NUM("aca", tau_init, c.base.aca.tau_init),
      U32("aca", ehc_slack, c.base.aca.ehc_slack),
      U32("aca", idle_threshold, c.base.aca.idle_threshold),
      U32("aca", ttl, c.base.aca.ttl),

      BOOL("lifetime", enabled, c.lifetime.enabled),
      NUM("lifetime", e_init, c.lifetime.e_init),
      Field{"lifetime", "packets",
            [](const Value& v, ExperimentConfig& c, const std::string& w) { c.lifetime.packets = as_count(v, w); }},
  };
  return all;
}

#undef NUM
#undef U32
#undef BOOL

const std::vector<std::string>& sections() {
  static const std::vector<std::string> s = {"experiment", "network", "energy", "daaca", "aca", "lifetime"};
  return s;
}

// Keys outside any section resolve in this order, so "rho = 0.3" at the top
// means the DAACA evaporation rate.
const Field* find_field(const std::string& section, const std::string& key) {
  static const std::vector<std::string> top = {"experiment", "daaca", "network", "energy"};
  if (section.empty()) {
    for (const auto& s : top) {
      if (auto* f = find_field(s, key)) return f;
    }
    return nullptr;
  }
  for (const auto& f : fields()) {
    if (section == f.section && key == f.key) return &f;
  }
  return nullptr;
}

std::string suggest(const std::string& word, const std::vector<std::string>& candidates) {
  std::string best;
  std::size_t best_d = std::numeric_limits<std::size_t>::max();
  for (const auto& c : candidates) {
    const auto d = edit_distance(word, c);
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  if (best_d <= std::max<std::size_t>(2, word.size() / 3)) return best;
  return {};
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

// Drops a trailing comment, leaving '#' inside strings alone.
std::string strip_comment(const std::string& line) {
  char quote = 0;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quote) {
      if (c == quote) quote = 0;
    } else if (c == '"' || c == '\'') {
      quote = c;
    } else if (c == '#') {
      return line.substr(0, i);
    }
  }
  return line;
}

int bracket_balance(const std::string& s) {
  int depth = 0;
  char quote = 0;
  for (char c : s) {
    if (quote) {
      if (c == quote) quote = 0;
    } else if (c == '"' || c == '\'') {
      quote = c;
    } else if (c == '[') {
      ++depth;
    } else if (c == ']') {
      --depth;
    }
  }
  return depth;
}

}  // namespace

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig cfg;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::string section;
  std::map<std::string, int> seen;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const int start_line = line_no;
    std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;
    if (line.front() == '[' && line.find('=') == std::string::npos) {
      if (line.back() != ']') throw ConfigError("line " + std::to_string(line_no) + ": malformed section header");
      section = trim(std::string_view(line).substr(1, line.size() - 2));
      if (std::find(sections().begin(), sections().end(), section) == sections().end()) {
        std::string msg = "line " + std::to_string(line_no) + ": unknown section [" + section + "]";
        if (auto s = suggest(section, sections()); !s.empty()) msg += "; did you mean [" + s + "]?";
        throw ConfigError(msg);
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    }
    std::string key = trim(std::string_view(line).substr(0, eq));
    std::string value_text = trim(std::string_view(line).substr(eq + 1));
    // Arrays may continue over several lines.
    while (bracket_balance(value_text) > 0 && std::getline(in, raw)) {
      ++line_no;
      value_text += " " + trim(strip_comment(raw));
    }
    if (key.empty()) throw ConfigError("line " + std::to_string(start_line) + ": missing key");
    const std::string where = section.empty() ? key : section + "." + key;
    const Field* field = find_field(section, key);
    if (!field) {
      std::vector<std::string> known;
      for (const auto& f : fields()) {
        if (section.empty() || section == f.section) known.emplace_back(f.key);
      }
      std::string msg = "line " + std::to_string(start_line) + ": unknown key \"" + key + "\"";
      if (!section.empty()) msg += " in [" + section + "]";
      if (auto s = suggest(key, known); !s.empty()) msg += "; did you mean \"" + s + "\"?";
      throw ConfigError(msg);
    }
    const std::string canonical = std::string(field->section) + "." + field->key;
    if (auto it = seen.find(canonical); it != seen.end()) {
      throw ConfigError("line " + std::to_string(start_line) + ": " + where +
                        " already set on line " + std::to_string(it->second));
    }
    seen[canonical] = start_line;
    Parser p(value_text, start_line);
    const Value v = p.parse_value();
    p.expect_end();
    try {
      field->set(v, cfg, where);
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(start_line) + ": " + e.what());
    }
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {"smoke", "table3-small", "paper-small", "paper-full"};
  return names;
}

std::optional<ExperimentConfig> preset(std::string_view name) {
  ExperimentConfig c;
  c.lifetime.enabled = true;
  if (name == "smoke") {
    c.sizes = {{40, 50, 200}, {100, 100, 1000}};
    c.packets = {1000};
    c.seeds = default_seeds(5);
    c.out = "results/smoke";
  } else if (name == "table3-small") {
    c.sizes = {{40, 50, 200}};
    c.packets = {1000, 2000, 3000, 4000, 5000};
    c.seeds = default_seeds(5);
    c.out = "results/table3-small";
  } else if (name == "paper-small") {
    c.sizes = {{40, 50, 200}, {60, 60, 400}, {70, 80, 600}};
    c.packets = {2000, 6000, 10000};
    c.seeds = default_seeds(20);
    c.out = "results/paper-small";
  } else if (name == "paper-full") {
    c.sizes = standard_sizes();
    c.packets = standard_packet_budgets();
    c.seeds = default_seeds(20);
    c.out = "results/paper-full";
  } else {
    return std::nullopt;
  }
  return c;
}

std::vector<std::uint64_t> parse_seed_list(std::string_view text) {
  std::vector<std::uint64_t> out;
  auto parse_u64 = [&](std::string_view s) {
    const auto t = trim(s);
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
      throw ConfigError("invalid seed '" + t + "'");
    }
    return v;
  };
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto comma = text.find(',', pos);
    if (comma == std::string_view::npos) comma = text.size();
    const auto item = text.substr(pos, comma - pos);
    if (!trim(item).empty()) {
      const auto dash = item.find('-');
      if (dash == std::string_view::npos) {
        out.push_back(parse_u64(item));
      } else {
        const auto lo = parse_u64(item.substr(0, dash));
        const auto hi = parse_u64(item.substr(dash + 1));
        if (hi < lo) throw ConfigError("invalid seed range '" + trim(item) + "'");
        for (auto s = lo; s <= hi; ++s) out.push_back(s);
      }
    }
    pos = comma + 1;
  }
  if (out.empty()) throw ConfigError("seed list is empty");
  return out;
}

std::vector<Algorithm> parse_algorithm_list(std::string_view text) {
  std::vector<Algorithm> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto comma = text.find(',', pos);
    if (comma == std::string_view::npos) comma = text.size();
    const auto name = trim(text.substr(pos, comma - pos));
    if (!name.empty()) {
      auto a = parse_algorithm(name);
      if (!a) {
        std::vector<std::string> known;
        for (auto k : all_algorithms()) known.emplace_back(to_string(k));
        std::string msg = "unknown algorithm '" + name + "'";
        if (auto s = suggest(name, known); !s.empty()) msg += "; did you mean '" + s + "'?";
        throw ConfigError(msg);
      }
      out.push_back(*a);
    }
    pos = comma + 1;
  }
  if (out.empty()) throw ConfigError("algorithm list is empty");
  return out;
}

}  // namespace daaca
