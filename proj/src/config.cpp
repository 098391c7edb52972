#include "mnls/config.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "mnls/error.hpp"

namespace mnls {

namespace {

struct Value {
  enum class Kind { Number, Bool, String, Array } kind = Kind::Number;
  double number = 0.0;
  bool integral = false;
  long long integer = 0;
  bool flag = false;
  std::string text;
  std::vector<Value> items;
};

class ValueParser {
 public:
  ValueParser(std::string_view src, int line) : s_(src), line_(line) {}

  Value parse() {
    Value v = value();
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected trailing characters");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorKind::ConfigError, "line " + std::to_string(line_) + ": " + msg);
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  Value value() {
    skip_ws();
    if (pos_ >= s_.size()) fail("missing value");
    const char c = s_[pos_];
    if (c == '[') return array();
    if (c == '"') return string();
    if (s_.substr(pos_, 4) == "true") {
      pos_ += 4;
      Value v;
      v.kind = Value::Kind::Bool;
      v.flag = true;
      return v;
    }
    if (s_.substr(pos_, 5) == "false") {
      pos_ += 5;
      Value v;
      v.kind = Value::Kind::Bool;
      return v;
    }
    return number();
  }

  Value array() {
    Value v;
    v.kind = Value::Kind::Array;
    ++pos_;
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == ']') {
      ++pos_;
      return v;
    }
    for (;;) {
      v.items.push_back(value());
      skip_ws();
      if (pos_ >= s_.size()) fail("unterminated array");
      if (s_[pos_] == ',') {
        ++pos_;
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == ']') {
          ++pos_;
          return v;
        }
        continue;
      }
      if (s_[pos_] == ']') {
        ++pos_;
        return v;
      }
      fail("expected ',' or ']' in array");
    }
  }

  Value string() {
    Value v;
    v.kind = Value::Kind::String;
    ++pos_;
    while (pos_ < s_.size() && s_[pos_] != '"') {
      if (s_[pos_] == '\\' && pos_ + 1 < s_.size()) {
        const char e = s_[pos_ + 1];
        v.text += e == 'n' ? '\n' : e == 't' ? '\t' : e;
        pos_ += 2;
        continue;
      }
      v.text += s_[pos_++];
    }
    if (pos_ >= s_.size()) fail("unterminated string");
    ++pos_;
    return v;
  }

  Value number() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.' ||
                                s_[pos_] == '+' || s_[pos_] == '-' || s_[pos_] == '_'))
      ++pos_;
    std::string tok(s_.substr(start, pos_ - start));
    std::erase(tok, '_');
    if (tok.empty()) fail("expected a value");
    Value v;
    v.integral = tok.find_first_of(".eEn") == std::string::npos;
    const char* b = tok.data();
    const char* e = tok.data() + tok.size();
    if (*b == '+') ++b;
    if (v.integral) {
      auto [ptr, ec] = std::from_chars(b, e, v.integer);
      if (ec != std::errc() || ptr != e) fail("malformed integer '" + tok + "'");
      v.number = static_cast<double>(v.integer);
      return v;
    }
    auto [ptr, ec] = std::from_chars(b, e, v.number);
    if (ec != std::errc() || ptr != e) fail("malformed number '" + tok + "'");
    return v;
  }

  std::string_view s_;
  int line_;
  std::size_t pos_ = 0;
};

std::string strip_comment(const std::string& line) {
  bool in_string = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"' && (i == 0 || line[i - 1] != '\\')) in_string = !in_string;
    if (line[i] == '#' && !in_string) return line.substr(0, i);
  }
  return line;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

int bracket_balance(const std::string& s) {
  int depth = 0;
  bool in_string = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '"' && (i == 0 || s[i - 1] != '\\')) in_string = !in_string;
    if (in_string) continue;
    if (s[i] == '[') ++depth;
    if (s[i] == ']') --depth;
  }
  return depth;
}

struct Entry {
  Value value;
  int line = 0;
};

using Table = std::map<std::string, Entry>;  // "section.key"

[[noreturn]] void bad(const Entry& e, const std::string& key, const std::string& what) {
  throw Error(ErrorKind::ConfigError, "line " + std::to_string(e.line) + ": '" + key + "' " + what);
}

double as_number(const Entry& e, const std::string& key) {
  if (e.value.kind != Value::Kind::Number) bad(e, key, "must be a number");
  return e.value.number;
}

long long as_integer(const Entry& e, const std::string& key) {
  if (e.value.kind != Value::Kind::Number || !e.value.integral) bad(e, key, "must be an integer");
  return e.value.integer;
}

std::string as_string(const Entry& e, const std::string& key) {
  if (e.value.kind != Value::Kind::String) bad(e, key, "must be a string");
  return e.value.text;
}

std::vector<double> as_vector(const Entry& e, const std::string& key) {
  if (e.value.kind != Value::Kind::Array) bad(e, key, "must be an array");
  std::vector<double> out;
  for (const auto& item : e.value.items) {
    if (item.kind != Value::Kind::Number) bad(e, key, "must contain numbers");
    out.push_back(item.number);
  }
  return out;
}

std::vector<std::vector<double>> as_matrix(const Entry& e, const std::string& key) {
  if (e.value.kind != Value::Kind::Array || e.value.items.empty()) bad(e, key, "must be a nonempty array of rows");
  std::vector<std::vector<double>> out;
  for (const auto& row : e.value.items) {
    if (row.kind != Value::Kind::Array) bad(e, key, "rows must be arrays");
    std::vector<double> r;
    for (const auto& item : row.items) {
      if (item.kind != Value::Kind::Number) bad(e, key, "must contain numbers");
      r.push_back(item.number);
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  std::string s(buf);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

std::string vec(const std::vector<double>& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + fmt(v[i]);
  return out + "]";
}

}  // namespace

ProfileConfig Config::profile_config() const {
  ProfileConfig pc = profile;
  pc.dim = dim;
  pc.p = p;
  return pc;
}

Config parse_config(const std::string& text) {
  Table table;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;
    if (line.front() == '[' && line.find('=') == std::string::npos) {
      if (line.back() != ']') throw Error(ErrorKind::ConfigError, "line " + std::to_string(line_no) + ": bad section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section != "problem" && section != "profile" && section != "evolution")
        throw Error(ErrorKind::ConfigError, "line " + std::to_string(line_no) + ": unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw Error(ErrorKind::ConfigError, "line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    std::string rhs = trim(line.substr(eq + 1));
    const int start_line = line_no;
    while (bracket_balance(rhs) > 0 && std::getline(in, raw)) {
      ++line_no;
      rhs += " " + trim(strip_comment(raw));
    }
    const std::string full = section.empty() ? key : section + "." + key;
    if (table.count(full)) throw Error(ErrorKind::ConfigError, "line " + std::to_string(start_line) + ": duplicate key '" + full + "'");
    table[full] = Entry{ValueParser(rhs, start_line).parse(), start_line};
  }

  Config cfg;
  bool any_evolution = false;
  EvolutionSettings evo;
  for (const auto& [key, e] : table) {
    if (key == "seed") {
      const long long s = as_integer(e, key);
      if (s < 0) bad(e, key, "must be nonnegative");
      cfg.seed = static_cast<std::uint64_t>(s);
    } else if (key == "problem.dim") {
      cfg.dim = static_cast<int>(as_integer(e, key));
    } else if (key == "problem.p") {
      cfg.p = as_number(e, key);
    } else if (key == "problem.coupling") {
      cfg.coupling = as_matrix(e, key);
      for (const auto& row : cfg.coupling)
        if (row.size() != cfg.coupling.size()) bad(e, key, "must be a square matrix");
    } else if (key == "problem.output_dir") {
      cfg.output_dir = as_string(e, key);
    } else if (key == "problem.gn_samples") {
      cfg.gn_samples = static_cast<int>(as_integer(e, key));
    } else if (key == "profile.r_max") {
      cfg.profile.r_max = as_number(e, key);
    } else if (key == "profile.n_grid") {
      cfg.profile.n_grid = static_cast<int>(as_integer(e, key));
    } else if (key == "profile.shoot_tol") {
      cfg.profile.shoot_tol = as_number(e, key);
    } else if (key == "profile.quad_tol") {
      cfg.profile.quad_tol = as_number(e, key);
    } else if (key == "profile.bracket_lo") {
      cfg.profile.bracket_lo = as_number(e, key);
    } else if (key == "profile.bracket_hi") {
      cfg.profile.bracket_hi = as_number(e, key);
    } else if (key.rfind("evolution.", 0) == 0) {
      any_evolution = true;
      const std::string k = key.substr(10);
      if (k == "length") evo.grid.length = as_number(e, key);
      else if (k == "n") evo.grid.n = static_cast<std::size_t>(as_integer(e, key));
      else if (k == "dt") evo.run.dt = as_number(e, key);
      else if (k == "t_end") evo.run.t_end = as_number(e, key);
      else if (k == "blowup_factor") evo.run.blowup_factor = as_number(e, key);
      else if (k == "record_every") evo.run.record_every = static_cast<int>(as_integer(e, key));
      else if (k == "window_radius") evo.run.window_radius = as_number(e, key);
      else if (k == "max_frames") evo.run.max_frames = static_cast<std::size_t>(as_integer(e, key));
      else if (k == "initial") evo.initial = as_string(e, key);
      else if (k == "scale") evo.scale = as_number(e, key);
      else if (k == "chirp") evo.chirp = as_number(e, key);
      else if (k == "amplitudes") evo.amplitudes = as_vector(e, key);
      else if (k == "width") evo.width = as_number(e, key);
      else if (k == "snapshot_in") evo.snapshot_in = as_string(e, key);
      else if (k == "snapshot_out") evo.snapshot_out = as_string(e, key);
      else bad(e, key, "is not a known key");
    } else {
      bad(e, key, "is not a known key");
    }
  }
  if (any_evolution) {
    evo.grid.dim = cfg.dim;
    const auto& init = evo.initial;
    if (init != "ground_state" && init != "gaussian" && init != "zero" && init != "snapshot")
      throw Error(ErrorKind::ConfigError, "evolution.initial must be ground_state, gaussian, zero or snapshot");
    cfg.evolution = evo;
  }
  return cfg;
}

Config load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorKind::ConfigError, "cannot read config file " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  Config cfg = parse_config(ss.str());
  apply_environment(cfg);
  return cfg;
}

void apply_environment(Config& cfg) {
  const char* env = std::getenv("MNLS_SEED");
  if (!env || !*env) return;
  std::uint64_t seed = 0;
  const char* end = env + std::char_traits<char>::length(env);
  auto [ptr, ec] = std::from_chars(env, end, seed);
  if (ec != std::errc() || ptr != end) throw Error(ErrorKind::ConfigError, "MNLS_SEED must be a nonnegative integer");
  cfg.seed = seed;
}

std::string serialize_config(const Config& cfg) {
  std::ostringstream os;
  os << "seed = " << cfg.seed << "\n\n[problem]\n";
  os << "dim = " << cfg.dim << "\n";
  os << "p = " << fmt(cfg.p) << "\n";
  os << "coupling = [";
  for (std::size_t i = 0; i < cfg.coupling.size(); ++i) os << (i ? ", " : "") << vec(cfg.coupling[i]);
  os << "]\n";
  os << "output_dir = " << quote(cfg.output_dir) << "\n";
  os << "gn_samples = " << cfg.gn_samples << "\n\n[profile]\n";
  os << "r_max = " << fmt(cfg.profile.r_max) << "\n";
  os << "n_grid = " << cfg.profile.n_grid << "\n";
  os << "shoot_tol = " << fmt(cfg.profile.shoot_tol) << "\n";
  os << "quad_tol = " << fmt(cfg.profile.quad_tol) << "\n";
  os << "bracket_lo = " << fmt(cfg.profile.bracket_lo) << "\n";
  os << "bracket_hi = " << fmt(cfg.profile.bracket_hi) << "\n";
  if (cfg.evolution) {
    const auto& e = *cfg.evolution;
    os << "\n[evolution]\n";
    os << "length = " << fmt(e.grid.length) << "\n";
    os << "n = " << e.grid.n << "\n";
    os << "dt = " << fmt(e.run.dt) << "\n";
    os << "t_end = " << fmt(e.run.t_end) << "\n";
    os << "blowup_factor = " << fmt(e.run.blowup_factor) << "\n";
    os << "record_every = " << e.run.record_every << "\n";
    os << "window_radius = " << fmt(e.run.window_radius) << "\n";
    os << "max_frames = " << e.run.max_frames << "\n";
    os << "initial = " << quote(e.initial) << "\n";
    os << "scale = " << fmt(e.scale) << "\n";
    os << "chirp = " << fmt(e.chirp) << "\n";
    os << "amplitudes = " << vec(e.amplitudes) << "\n";
    os << "width = " << fmt(e.width) << "\n";
    os << "snapshot_in = " << quote(e.snapshot_in) << "\n";
    os << "snapshot_out = " << quote(e.snapshot_out) << "\n";
  }
  return os.str();
}

}  // namespace mnls
