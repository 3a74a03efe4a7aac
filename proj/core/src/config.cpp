#include "cfw/config.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace cfw {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

double parse_number(const std::string& s, int line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(line, 0, "not a decimal number: '" + s + "'");
  }
}

std::vector<double> parse_numbers(const std::string& s, int line) {
  std::vector<double> out;
  for (const auto& tok : split_ws(s)) out.push_back(parse_number(tok, line));
  return out;
}

struct RawEntry {
  std::string value;
  int line;
};

}  // namespace

Config Config::hardy_default() { return Config{}; }

QuantumModel Config::build_model() const {
  switch (mode) {
    case ModelMode::PresetOptimal:
      return build_hardy_model(HardyMode::PresetOptimal, null_tolerance);
    case ModelMode::Solve:
      return build_hardy_model(HardyMode::Solve, null_tolerance);
    case ModelMode::Explicit:
      return build_explicit_model(state, left_angles, right_angles);
  }
  throw Error("unreachable");
}

Config parse_config(const std::string& text) {
  // First pass: collect section.key entries with positions.
  std::map<std::string, std::map<std::string, RawEntry>> sections;
  std::vector<std::pair<std::string, RawEntry>> script_lines;  // ordered
  std::string section;
  std::istringstream is(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(is, raw)) {
    ++lineno;
    const std::size_t hash = raw.find('#');
    if (hash != std::string::npos) raw = raw.substr(0, hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError(lineno, 1, "unterminated section header");
      section = line.substr(1, line.size() - 2);
      if (section != "setup" && section != "model" &&
          section != "tolerances" && section != "script")
        throw ConfigError(lineno, 1, "unknown section [" + section + "]");
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(lineno, 1, "expected key = value");
    if (section.empty())
      throw ConfigError(lineno, 1, "entry before any [section]");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (section == "script") {
      if (key.rfind("line.", 0) != 0)
        throw ConfigError(lineno, 1, "script keys must look like line.N");
      script_lines.push_back({key, {value, lineno}});
    } else {
      if (!sections[section].insert({key, {value, lineno}}).second)
        throw ConfigError(lineno, 1, "duplicate key '" + key + "'");
    }
  }

  Config cfg;
  auto take = [&](const std::string& sec,
                  const std::string& key) -> std::optional<RawEntry> {
    auto s = sections.find(sec);
    if (s == sections.end()) return std::nullopt;
    auto k = s->second.find(key);
    if (k == s->second.end()) return std::nullopt;
    RawEntry e = k->second;
    s->second.erase(k);
    return e;
  };

  // [setup]
  std::vector<std::string> region_names = {"L", "R"};
  if (auto e = take("setup", "regions")) {
    region_names = split_ws(e->value);
    if (region_names.empty())
      throw ConfigError(e->line, 0, "regions cannot be empty");
  }
  std::vector<std::string> default_outcomes = {"+", "-"};
  if (auto e = take("setup", "outcomes")) {
    default_outcomes = split_ws(e->value);
    if (default_outcomes.empty())
      throw ConfigError(e->line, 0, "outcomes cannot be empty");
  }
  std::vector<Region> regions;
  for (const auto& name : region_names) {
    std::vector<Measurement> ms;
    if (auto e = take("setup", "measurements." + name)) {
      for (const auto& label : split_ws(e->value))
        ms.push_back({label, default_outcomes});
    } else {
      ms.push_back({name + "1", default_outcomes});
      ms.push_back({name + "2", default_outcomes});
    }
    regions.push_back({name, std::move(ms)});
  }
  try {
    cfg.setup = Setup(regions);
  } catch (const Error& e) {
    throw ConfigError(0, 0, e.what());
  }

  cfg.causal = CausalStructure::all_spacelike(cfg.setup.region_count());
  const bool spacelike_given = sections["setup"].count("spacelike") > 0;
  auto region_of = [&](const std::string& n, int line) {
    auto idx = cfg.setup.region_index(n);
    if (!idx) throw ConfigError(line, 0, "unknown region '" + n + "'");
    return *idx;
  };
  if (auto e = take("setup", "spacelike")) {
    cfg.causal = CausalStructure(cfg.setup.region_count());
    for (const auto& pair : split_ws(e->value)) {
      const std::size_t colon = pair.find(':');
      if (colon == std::string::npos)
        throw ConfigError(e->line, 0, "spacelike pairs look like A:B");
      cfg.causal.set_spacelike(region_of(pair.substr(0, colon), e->line),
                               region_of(pair.substr(colon + 1), e->line));
    }
  }
  if (auto e = take("setup", "forward_cone")) {
    if (spacelike_given == false)
      cfg.causal = CausalStructure(cfg.setup.region_count());
    for (const auto& pair : split_ws(e->value)) {
      const std::size_t gt = pair.find('>');
      if (gt == std::string::npos)
        throw ConfigError(e->line, 0, "cone pairs look like A>B");
      cfg.causal.set_forward_cone(region_of(pair.substr(0, gt), e->line),
                                  region_of(pair.substr(gt + 1), e->line));
    }
  }
  try {
    cfg.causal.validate();
  } catch (const Error& e) {
    throw ConfigError(0, 0, e.what());
  }

  // [tolerances]
  if (auto e = take("tolerances", "null"))
    cfg.null_tolerance = parse_number(e->value, e->line);
  if (auto e = take("tolerances", "numeric"))
    cfg.numeric_tolerance = parse_number(e->value, e->line);

  // [model]
  if (auto e = take("model", "mode")) {
    if (e->value == "preset-optimal")
      cfg.mode = Config::ModelMode::PresetOptimal;
    else if (e->value == "solve")
      cfg.mode = Config::ModelMode::Solve;
    else if (e->value == "explicit")
      cfg.mode = Config::ModelMode::Explicit;
    else
      throw ConfigError(e->line, 0, "unknown model mode '" + e->value + "'");
  }
  if (cfg.mode == Config::ModelMode::Explicit) {
    auto re = take("model", "state.re");
    auto im = take("model", "state.im");
    if (!re) throw ConfigError(0, 0, "explicit mode needs state.re");
    const auto res = parse_numbers(re->value, re->line);
    if (res.size() != 4)
      throw ConfigError(re->line, 0, "state.re needs exactly 4 amplitudes");
    std::vector<double> ims(res.size(), 0.0);
    if (im) {
      ims = parse_numbers(im->value, im->line);
      if (ims.size() != res.size())
        throw ConfigError(im->line, 0, "state.im length differs from state.re");
    }
    for (std::size_t i = 0; i < res.size(); ++i)
      cfg.state.push_back({res[i], ims[i]});
    if (cfg.setup.region_count() != 2 ||
        cfg.setup.region(0).measurements.size() < 2 ||
        cfg.setup.region(1).measurements.size() < 2)
      throw ConfigError(0, 0,
                        "explicit mode needs two regions with two "
                        "measurements each");
    for (std::size_t r = 0; r < 2; ++r)
      for (std::size_t mm = 0; mm < 2; ++mm) {
        const std::string key =
            "angle." + cfg.setup.region(r).name + "." +
            cfg.setup.region(r).measurements.at(mm).label;
        auto e = take("model", key);
        if (!e) throw ConfigError(0, 0, "explicit mode needs " + key);
        (r == 0 ? cfg.left_angles : cfg.right_angles)[mm] =
            parse_number(e->value, e->line);
      }
  }

  // [script]
  if (!script_lines.empty()) {
    std::vector<std::string> lines;
    int expected = 1;
    for (const auto& [key, entry] : script_lines) {
      const int n = std::atoi(key.c_str() + 5);
      if (n != expected)
        throw ConfigError(entry.line, 0,
                          "script lines must be numbered consecutively from 1");
      ++expected;
      lines.push_back(entry.value);
    }
    try {
      cfg.script = parse_script_lines(lines, cfg.setup);
    } catch (const Error& e) {
      throw ConfigError(0, 0, e.what());
    }
  }

  // Anything left over is unknown.
  for (const auto& [sec, entries] : sections)
    for (const auto& [key, entry] : entries)
      throw ConfigError(entry.line, 0,
                        "unknown key '" + key + "' in [" + sec + "]");
  return cfg;
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(0, 0, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

ProofScript parse_script_lines(const std::vector<std::string>& lines,
                               const Setup& setup) {
  std::vector<ProofLine> out;
  for (const auto& text : lines) {
    const std::size_t sep = text.find("::");
    if (sep == std::string::npos)
      throw Error("script line must look like 'TAGS :: formula': " + text);
    const std::string tag = trim(text.substr(0, sep));
    const std::string formula_text = trim(text.substr(sep + 2));
    ProofLine line;
    line.just = Justification::parse_tag(tag);
    line.formula = parse(formula_text, setup);
    line.text = formula_text;
    out.push_back(std::move(line));
  }
  return ProofScript(std::move(out));
}

ProofScript load_script(const std::string& path, const Setup& setup) {
  std::ifstream in(path);
  if (!in) throw ConfigError(0, 0, "cannot open script '" + path + "'");
  std::vector<std::string> lines;
  std::string raw;
  while (std::getline(in, raw)) {
    const std::size_t hash = raw.find('#');
    if (hash != std::string::npos) raw = raw.substr(0, hash);
    const std::string line = trim(raw);
    if (!line.empty()) lines.push_back(line);
  }
  return parse_script_lines(lines, setup);
}

std::string serialize_model(const QuantumModel& model) {
  char buf[64];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  std::string out = "[model]\nmode = explicit\nstate.re =";
  for (const auto& a : model.state.amplitudes) out += " " + num(a.real());
  out += "\nstate.im =";
  for (const auto& a : model.state.amplitudes) out += " " + num(a.imag());
  out += "\n";
  const char* names[2][2] = {{"angle.L.L1", "angle.L.L2"},
                             {"angle.R.R1", "angle.R.R2"}};
  for (std::size_t r = 0; r < 2; ++r)
    for (std::size_t m = 0; m < 2; ++m)
      out += std::string(names[r][m]) + " = " +
             num(model.measurements.angle(r, m)) + "\n";
  return out;
}

}  // namespace cfw
