#include "viab/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <variant>

#include "viab/errors.hpp"
#include "viab/field_io.hpp"
#include "viab/solver_stationary.hpp"

namespace viab {
namespace {

// ---------------------------------------------------------------------------
// TOML subset: [section] headers, key = value, # comments, double-quoted
// strings, numbers, true/false, and (possibly multi-line, nested) arrays.

struct Value;
using Array = std::vector<Value>;

struct Value {
  std::variant<double, bool, std::string, Array> data;
  int line = 0;
};

struct Entry {
  Value value;
  bool used = false;
};

using Section = std::map<std::string, Entry>;

class Parser {
 public:
  Parser(std::string_view text, int line) : text_(text), line_(line) {}

  Value value() {
    skip_space();
    if (at_end()) fail("expected a value");
    const char ch = text_[pos_];
    if (ch == '"') return {string(), line_};
    if (ch == '[') return {array(), line_};
    if (text_.substr(pos_, 4) == "true") {
      pos_ += 4;
      return {true, line_};
    }
    if (text_.substr(pos_, 5) == "false") {
      pos_ += 5;
      return {false, line_};
    }
    return {number(), line_};
  }

  void finish() {
    skip_space();
    if (!at_end()) fail("unexpected trailing text");
  }

 private:
  bool at_end() const { return pos_ >= text_.size(); }

  void skip_space() {
    while (!at_end()) {
      const char ch = text_[pos_];
      if (ch == '#') {
        while (!at_end() && text_[pos_] != '\n') ++pos_;
      } else if (ch == ' ' || ch == '\t' || ch == '\r' || ch == '\n') {
        ++pos_;
      } else {
        break;
      }
    }
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError("line " + std::to_string(line_) + ": " + what);
  }

  std::string string() {
    ++pos_;
    std::string out;
    while (!at_end() && text_[pos_] != '"') {
      char ch = text_[pos_++];
      if (ch == '\\') {
        if (at_end()) break;
        const char esc = text_[pos_++];
        switch (esc) {
          case 'n': ch = '\n'; break;
          case 't': ch = '\t'; break;
          case '"': ch = '"'; break;
          case '\\': ch = '\\'; break;
          default: fail(std::string("unsupported escape \\") + esc);
        }
      }
      out.push_back(ch);
    }
    if (at_end()) fail("unterminated string");
    ++pos_;
    return out;
  }

  Array array() {
    ++pos_;
    Array out;
    for (;;) {
      skip_space();
      if (at_end()) fail("unterminated array");
      if (text_[pos_] == ']') {
        ++pos_;
        return out;
      }
      out.push_back(value());
      skip_space();
      if (at_end()) fail("unterminated array");
      if (text_[pos_] == ',') {
        ++pos_;
      } else if (text_[pos_] != ']') {
        fail("expected ',' or ']' in array");
      }
    }
  }

  double number() {
    std::string digits;
    while (!at_end()) {
      const char ch = text_[pos_];
      if (ch == '_') {
        ++pos_;
        continue;
      }
      if (!(std::isdigit(static_cast<unsigned char>(ch)) || ch == '+' || ch == '-' || ch == '.' || ch == 'e' ||
            ch == 'E'))
        break;
      digits.push_back(ch);
      ++pos_;
    }
    if (!digits.empty() && digits.front() == '+') digits.erase(0, 1);
    double out = 0.0;
    const auto [end, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), out);
    if (digits.empty() || ec != std::errc() || end != digits.data() + digits.size())
      fail("malformed value '" + digits + "'");
    return out;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_;
};

// Bracket depth outside strings and comments, used to join multi-line arrays.
int bracket_balance(std::string_view s) {
  int depth = 0;
  bool in_string = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char ch = s[i];
    if (in_string) {
      if (ch == '\\') ++i;
      else if (ch == '"') in_string = false;
    } else if (ch == '"') {
      in_string = true;
    } else if (ch == '#') {
      break;
    } else if (ch == '[') {
      ++depth;
    } else if (ch == ']') {
      --depth;
    }
  }
  return depth;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::map<std::string, Section> parse_document(std::string_view text) {
  std::map<std::string, Section> doc;
  std::istringstream in{std::string(text)};
  std::string line;
  std::string section;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    if (t.front() == '[') {
      const auto close = t.find(']');
      const std::string rest = close == std::string::npos ? "" : trim(t.substr(close + 1));
      if (close == std::string::npos || (!rest.empty() && rest.front() != '#'))
        throw ConfigError("line " + std::to_string(number) + ": malformed section header");
      section = trim(t.substr(1, close - 1));
      if (section.empty()) throw ConfigError("line " + std::to_string(number) + ": empty section name");
      if (doc.count(section)) throw ConfigError("line " + std::to_string(number) + ": duplicate section [" + section + "]");
      doc[section];
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(number) + ": expected key = value");
    const std::string key = trim(t.substr(0, eq));
    if (key.empty()) throw ConfigError("line " + std::to_string(number) + ": empty key");
    if (section.empty())
      throw ConfigError("line " + std::to_string(number) + ": key '" + key + "' outside any section");
    std::string rhs = t.substr(eq + 1);
    const int first_line = number;
    while (bracket_balance(rhs) > 0 && std::getline(in, line)) {
      ++number;
      rhs += '\n' + line;
    }
    Parser p(rhs, first_line);
    Value v = p.value();
    p.finish();
    auto& sec = doc[section];
    if (sec.count(key))
      throw ConfigError("line " + std::to_string(first_line) + ": duplicate key " + section + "." + key);
    sec[key] = Entry{std::move(v), false};
  }
  return doc;
}

// ---------------------------------------------------------------------------
// Typed accessors

class Reader {
 public:
  explicit Reader(std::map<std::string, Section> doc) : doc_(std::move(doc)) {}

  bool has_section(const std::string& s) const { return doc_.count(s) > 0; }

  const Value* find(const std::string& s, const std::string& k) {
    auto sec = doc_.find(s);
    if (sec == doc_.end()) return nullptr;
    auto it = sec->second.find(k);
    if (it == sec->second.end()) return nullptr;
    it->second.used = true;
    return &it->second.value;
  }

  const Value& require(const std::string& s, const std::string& k) {
    const Value* v = find(s, k);
    if (!v) throw ConfigError("missing required key " + s + "." + k);
    return *v;
  }

  [[noreturn]] static void type_error(const std::string& s, const std::string& k, const char* want) {
    throw ConfigError("key " + s + "." + k + " must be " + want);
  }

  static double as_real(const Value& v, const std::string& s, const std::string& k) {
    if (const double* d = std::get_if<double>(&v.data)) return *d;
    type_error(s, k, "a number");
  }

  static std::size_t as_count(const Value& v, const std::string& s, const std::string& k) {
    const double d = as_real(v, s, k);
    if (!(d >= 0.0) || d != std::floor(d) || d > 1e15) type_error(s, k, "a non-negative integer");
    return static_cast<std::size_t>(d);
  }

  static const Array& as_array(const Value& v, const std::string& s, const std::string& k) {
    if (const Array* a = std::get_if<Array>(&v.data)) return *a;
    type_error(s, k, "an array");
  }

  void real(const std::string& s, const std::string& k, double& out) {
    if (const Value* v = find(s, k)) out = as_real(*v, s, k);
  }
  void count(const std::string& s, const std::string& k, std::size_t& out) {
    if (const Value* v = find(s, k)) out = as_count(*v, s, k);
  }
  void boolean(const std::string& s, const std::string& k, bool& out) {
    if (const Value* v = find(s, k)) {
      const bool* b = std::get_if<bool>(&v->data);
      if (!b) type_error(s, k, "true or false");
      out = *b;
    }
  }
  void text(const std::string& s, const std::string& k, std::string& out) {
    if (const Value* v = find(s, k)) {
      const std::string* str = std::get_if<std::string>(&v->data);
      if (!str) type_error(s, k, "a string");
      out = *str;
    }
  }
  void reals(const std::string& s, const std::string& k, std::vector<double>& out) {
    if (const Value* v = find(s, k)) {
      out.clear();
      for (const Value& e : as_array(*v, s, k)) out.push_back(as_real(e, s, k));
    }
  }
  void counts(const std::string& s, const std::string& k, std::vector<std::size_t>& out) {
    if (const Value* v = find(s, k)) {
      out.clear();
      for (const Value& e : as_array(*v, s, k)) out.push_back(as_count(e, s, k));
    }
  }
  void points(const std::string& s, const std::string& k, std::vector<std::vector<double>>& out) {
    if (const Value* v = find(s, k)) {
      out.clear();
      for (const Value& e : as_array(*v, s, k)) {
        std::vector<double> p;
        for (const Value& c : as_array(e, s, k)) p.push_back(as_real(c, s, k));
        out.push_back(std::move(p));
      }
    }
  }

  template <class E>
  void choice(const std::string& s, const std::string& k, E& out,
              std::initializer_list<std::pair<const char*, E>> options) {
    std::string name;
    text(s, k, name);
    if (name.empty()) return;
    for (const auto& [label, value] : options) {
      if (name == label) {
        out = value;
        return;
      }
    }
    std::string allowed;
    for (const auto& [label, value] : options) allowed += std::string(allowed.empty() ? "" : ", ") + label;
    throw ConfigError("key " + s + "." + k + " = \"" + name + "\" is not one of: " + allowed);
  }

  void reject_unused() const {
    for (const auto& [sname, sec] : doc_)
      for (const auto& [key, entry] : sec)
        if (!entry.used)
          throw ConfigError("line " + std::to_string(entry.value.line) + ": unknown key " + sname + "." + key);
  }

  void reject_unknown_sections(const std::set<std::string>& known) const {
    for (const auto& [sname, sec] : doc_)
      if (!known.count(sname)) throw ConfigError("unknown section [" + sname + "]");
  }

 private:
  std::map<std::string, Section> doc_;
};

// Name tables shared by the reader and the writer.
const std::initializer_list<std::pair<const char*, RunMode>> kModes = {{"short_term", RunMode::short_term},
                                                                      {"long_term", RunMode::long_term}};
const std::initializer_list<std::pair<const char*, LevelSpec::Kind>> kKinds = {
    {"capped_box", LevelSpec::Kind::capped_box}, {"signed_distance", LevelSpec::Kind::signed_distance}};
const std::initializer_list<std::pair<const char*, Norm>> kNorms = {{"infinity", Norm::infinity},
                                                                   {"euclidean", Norm::euclidean}};
const std::initializer_list<std::pair<const char*, Boundary>> kBoundaries = {{"linear", Boundary::linear},
                                                                            {"constant", Boundary::constant}};
const std::initializer_list<std::pair<const char*, ObstacleUpdate>> kObstacles = {{"max", ObstacleUpdate::max},
                                                                                 {"min", ObstacleUpdate::min}};
const std::initializer_list<std::pair<const char*, DissipationKind>> kDissipation = {
    {"global", DissipationKind::global}, {"local", DissipationKind::local}};
const std::initializer_list<std::pair<const char*, Hamiltonian3Form>> kForms = {
    {"exact_max", Hamiltonian3Form::exact_max}, {"fixed_investment", Hamiltonian3Form::fixed_investment}};
const std::initializer_list<std::pair<const char*, Integrator>> kIntegrators = {{"euler", Integrator::euler},
                                                                               {"rk2", Integrator::rk2}};
const std::initializer_list<std::pair<const char*, DemandVariant>> kDemand = {
    {"linear", DemandVariant::linear}, {"quadratic", DemandVariant::quadratic}};

template <class E>
const char* name_of(E value, std::initializer_list<std::pair<const char*, E>> options) {
  for (const auto& [label, v] : options)
    if (v == value) return label;
  return "?";
}

const char* kModelRequired[] = {"rho",   "a",    "b",     "c",     "theta", "delta", "alpha",
                                "beta",  "gamma", "U_max", "p_min", "p_max", "s_max"};

double* model_field(ModelParams& m, std::string_view key) {
  if (key == "rho") return &m.rho;
  if (key == "a") return &m.a;
  if (key == "b") return &m.b;
  if (key == "c") return &m.c;
  if (key == "theta") return &m.theta;
  if (key == "delta") return &m.delta;
  if (key == "alpha") return &m.alpha;
  if (key == "beta") return &m.beta;
  if (key == "gamma") return &m.gamma;
  if (key == "U_max") return &m.U_max;
  if (key == "p_min") return &m.p_min;
  if (key == "p_max") return &m.p_max;
  if (key == "s_max") return &m.s_max;
  if (key == "q_fixed") return &m.q_fixed;
  if (key == "U_fixed") return &m.U_fixed;
  if (key == "r") return &m.r;
  return nullptr;
}

void read_level(Reader& r, const std::string& s, LevelSpec& level) {
  r.choice(s, "kind", level.kind, kKinds);
  r.reals(s, "lower", level.lower);
  r.reals(s, "upper", level.upper);
  r.real(s, "cap", level.cap);
  r.choice(s, "norm", level.norm, kNorms);
}

std::vector<double> evenly_spaced(double lo, double hi, std::size_t n) {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i)
    out[i] = i + 1 == n ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  return out;
}

bool is_nested(std::size_t coarse, std::size_t fine) {
  return coarse >= 2 && fine >= coarse && (fine - 1) % (coarse - 1) == 0;
}

bool is_power_of_two_plus_one(std::size_t n) {
  const std::size_t m = n - 1;
  return n >= 3 && (m & (m - 1)) == 0;
}

// ---------------------------------------------------------------------------
// Writer helpers

std::string real_list(const std::vector<double>& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + format_real(v[i]);
  return out + "]";
}

std::string count_list(const std::vector<std::size_t>& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + std::to_string(v[i]);
  return out + "]";
}

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"' || ch == '\\') out.push_back('\\');
    if (ch == '\n') {
      out += "\\n";
      continue;
    }
    out.push_back(ch);
  }
  return out + "\"";
}

void write_level(std::ostream& out, const char* section, const LevelSpec& level) {
  out << '[' << section << "]\n"
      << "kind = " << quoted(name_of(level.kind, kKinds)) << '\n'
      << "lower = " << real_list(level.lower) << '\n'
      << "upper = " << real_list(level.upper) << '\n'
      << "cap = " << format_real(level.cap) << '\n'
      << "norm = " << quoted(name_of(level.norm, kNorms)) << "\n\n";
}

void check(bool ok, const std::string& key, const std::string& what) {
  if (!ok) throw ConfigError(key + ": " + what);
}

void validate_level(const LevelSpec& level, const std::string& section, std::size_t dim) {
  check(level.lower.size() == dim && level.upper.size() == dim, section + ".lower/upper",
        "need " + std::to_string(dim) + " components each");
  for (std::size_t i = 0; i < dim; ++i)
    check(level.lower[i] < level.upper[i], section + ".lower/upper", "lower must be below upper on every axis");
  check(level.cap > 0.0 && std::isfinite(level.cap), section + ".cap", "must be a positive finite number");
}

}  // namespace

// ---------------------------------------------------------------------------

BoxSet LevelSpec::box() const { return BoxSet::from_bounds(lower, upper); }

ScalarField LevelSpec::sample(const Grid& grid) const {
  const BoxSet b = box();
  if (kind == Kind::capped_box) {
    const double c = cap;
    return sample_field(grid, [&](const Point& x) { return capped_box_level(x, b, c); });
  }
  const Norm n = norm;
  return sample_field(grid, [&](const Point& x) { return signed_distance_box(x, b, n); });
}

Grid GridSpec::build() const { return Grid(lower, upper, nodes); }

GridSpec GridSpec::with_nodes(std::size_t n) const {
  GridSpec out = *this;
  std::fill(out.nodes.begin(), out.nodes.end(), n);
  return out;
}

std::string to_string(RunMode mode) { return name_of(mode, kModes); }

std::pair<double, double> sweep_range(const std::string& parameter) {
  if (parameter == "a") return {15.0, 25.0};
  if (parameter == "b") return {0.15, 0.25};
  if (parameter == "c") return {0.2, 0.4};
  if (parameter == "rho") return {0.15, 0.25};
  throw ConfigError("sweep.parameter: \"" + parameter + "\" is not one of: a, b, c, rho");
}

ModelParams with_parameter(const ModelParams& params, const std::string& parameter, double value) {
  ModelParams out = params;
  sweep_range(parameter);
  *model_field(out, parameter) = value;
  return out;
}

RunConfig default_config(RunMode mode) {
  RunConfig c;
  c.mode = mode;
  if (mode == RunMode::short_term) {
    c.grid = {{1.0, 1.0}, {4.0, 4.0}, {257, 257}};
    c.constraint = {LevelSpec::Kind::capped_box, {1.0, 1.0}, {4.0, 4.0}, 2.5, Norm::infinity};
    c.target = {LevelSpec::Kind::capped_box, {3.0, 3.0}, {4.0, 4.0}, 0.5, Norm::infinity};
    c.output_dir = "out/short_term";
  } else {
    c.grid = {{1.0, 20.0, 1.0}, {4.0, 50.0, 4.0}, {65, 65, 65}};
    c.constraint = {LevelSpec::Kind::capped_box, {1.0, 20.0, 1.0}, {4.0, 50.0, 4.0}, 1.5, Norm::infinity};
    c.target = {LevelSpec::Kind::capped_box, {1.0, 25.0, 3.0}, {2.0, 45.0, 4.0}, 0.5, Norm::infinity};
    c.output_dir = "out/long_term";
  }
  c.solver.lambda = default_lambda(c.model);
  c.sweep.values = evenly_spaced(sweep_range(c.sweep.parameter).first, sweep_range(c.sweep.parameter).second, 5);
  return c;
}

RunConfig parse_config(std::string_view text, std::optional<RunMode> expected) {
  Reader r(parse_document(text));
  r.reject_unknown_sections({"run", "model", "grid", "constraint", "target", "solver", "trajectory", "convergence",
                             "sweep"});

  RunMode mode = expected.value_or(RunMode::short_term);
  r.choice("run", "mode", mode, kModes);
  if (expected && mode != *expected)
    throw ConfigError("run.mode = \"" + to_string(mode) + "\" does not match this command (expects \"" +
                      to_string(*expected) + "\")");
  RunConfig c = default_config(mode);

  r.text("run", "output_dir", c.output_dir);
  r.reals("run", "cross_sections", c.cross_sections);

  for (const char* key : kModelRequired) *model_field(c.model, key) = Reader::as_real(r.require("model", key), "model", key);
  for (const char* key : {"q_fixed", "U_fixed", "r"}) r.real("model", key, *model_field(c.model, key));
  r.choice("model", "demand", c.model.demand_variant, kDemand);

  r.reals("grid", "lower", c.grid.lower);
  r.reals("grid", "upper", c.grid.upper);
  r.counts("grid", "nodes", c.grid.nodes);

  read_level(r, "constraint", c.constraint);
  read_level(r, "target", c.target);

  SolverSpec& s = c.solver;
  r.real("solver", "horizon", s.horizon);
  r.real("solver", "cfl", s.cfl);
  r.choice("solver", "boundary", s.boundary, kBoundaries);
  r.choice("solver", "obstacle", s.obstacle, kObstacles);
  r.choice("solver", "dissipation", s.dissipation, kDissipation);
  r.choice("solver", "kernel_dissipation", s.kernel_dissipation, kDissipation);
  r.real("solver", "tol", s.tol);
  r.count("solver", "max_iter", s.max_iter);
  s.lambda = default_lambda(c.model);
  r.real("solver", "lambda", s.lambda);
  r.choice("solver", "hamiltonian3_form", s.hamiltonian3_form, kForms);
  r.real("solver", "kernel_cap", s.kernel_cap);

  TrajectorySpec& t = c.trajectory;
  r.points("trajectory", "starts", t.starts);
  r.count("trajectory", "samples", t.samples);
  r.count("trajectory", "stride", t.stride);
  r.real("trajectory", "admission_tol", t.admission_tol);
  r.choice("trajectory", "integrator", t.integrator, kIntegrators);
  r.boolean("trajectory", "extreme_velocities_only", t.extreme_velocities_only);

  r.counts("convergence", "resolutions", c.convergence.resolutions);
  r.count("convergence", "reference", c.convergence.reference);

  r.text("sweep", "parameter", c.sweep.parameter);
  const auto [lo, hi] = sweep_range(c.sweep.parameter);
  c.sweep.values = evenly_spaced(lo, hi, 5);
  r.reals("sweep", "values", c.sweep.values);
  r.count("sweep", "nodes", c.sweep.nodes);

  r.reject_unused();
  validate(c);
  return c;
}

RunConfig load_config(const std::filesystem::path& path, std::optional<RunMode> expected) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), expected);
}

std::string to_toml(const RunConfig& c) {
  std::ostringstream out;
  out << "[run]\n"
      << "mode = " << quoted(to_string(c.mode)) << '\n'
      << "output_dir = " << quoted(c.output_dir) << '\n'
      << "cross_sections = " << real_list(c.cross_sections) << "\n\n";

  ModelParams m = c.model;
  out << "[model]\n";
  for (const char* key : kModelRequired) out << key << " = " << format_real(*model_field(m, key)) << '\n';
  for (const char* key : {"q_fixed", "U_fixed", "r"}) out << key << " = " << format_real(*model_field(m, key)) << '\n';
  out << "demand = " << quoted(name_of(m.demand_variant, kDemand)) << "\n\n";

  out << "[grid]\n"
      << "lower = " << real_list(c.grid.lower) << '\n'
      << "upper = " << real_list(c.grid.upper) << '\n'
      << "nodes = " << count_list(c.grid.nodes) << "\n\n";

  write_level(out, "constraint", c.constraint);
  write_level(out, "target", c.target);

  const SolverSpec& s = c.solver;
  out << "[solver]\n"
      << "horizon = " << format_real(s.horizon) << '\n'
      << "cfl = " << format_real(s.cfl) << '\n'
      << "boundary = " << quoted(name_of(s.boundary, kBoundaries)) << '\n'
      << "obstacle = " << quoted(name_of(s.obstacle, kObstacles)) << '\n'
      << "dissipation = " << quoted(name_of(s.dissipation, kDissipation)) << '\n'
      << "kernel_dissipation = " << quoted(name_of(s.kernel_dissipation, kDissipation)) << '\n'
      << "tol = " << format_real(s.tol) << '\n'
      << "max_iter = " << s.max_iter << '\n'
      << "lambda = " << format_real(s.lambda) << '\n'
      << "hamiltonian3_form = " << quoted(name_of(s.hamiltonian3_form, kForms)) << '\n'
      << "kernel_cap = " << format_real(s.kernel_cap) << "\n\n";

  const TrajectorySpec& t = c.trajectory;
  out << "[trajectory]\nstarts = [";
  for (std::size_t i = 0; i < t.starts.size(); ++i) out << (i ? ", " : "") << real_list(t.starts[i]);
  out << "]\n"
      << "samples = " << t.samples << '\n'
      << "stride = " << t.stride << '\n'
      << "admission_tol = " << format_real(t.admission_tol) << '\n'
      << "integrator = " << quoted(name_of(t.integrator, kIntegrators)) << '\n'
      << "extreme_velocities_only = " << (t.extreme_velocities_only ? "true" : "false") << "\n\n";

  out << "[convergence]\n"
      << "resolutions = " << count_list(c.convergence.resolutions) << '\n'
      << "reference = " << c.convergence.reference << "\n\n";

  out << "[sweep]\n"
      << "parameter = " << quoted(c.sweep.parameter) << '\n'
      << "values = " << real_list(c.sweep.values) << '\n'
      << "nodes = " << c.sweep.nodes << '\n';
  return out.str();
}

void validate(const RunConfig& c) {
  c.model.validate();
  const std::size_t dim = c.mode == RunMode::short_term ? 2 : 3;

  check(c.grid.lower.size() == dim && c.grid.upper.size() == dim && c.grid.nodes.size() == dim, "grid",
        "lower, upper and nodes need " + std::to_string(dim) + " components for mode " + to_string(c.mode));
  for (std::size_t i = 0; i < dim; ++i) {
    check(c.grid.lower[i] < c.grid.upper[i], "grid.lower/upper", "lower must be below upper on every axis");
    check(c.grid.nodes[i] >= 3, "grid.nodes", "need at least 3 nodes per axis");
  }
  validate_level(c.constraint, "constraint", dim);
  validate_level(c.target, "target", dim);
  check(!c.output_dir.empty(), "run.output_dir", "must not be empty");
  check(c.cross_sections.size() == 2, "run.cross_sections", "need exactly two values (q, I)");

  const SolverSpec& s = c.solver;
  check(s.horizon >= 0.0 && std::isfinite(s.horizon), "solver.horizon", "must be a finite number >= 0");
  check(s.cfl > 0.0 && s.cfl <= 1.0, "solver.cfl", "must lie in (0, 1]");
  check(s.tol > 0.0, "solver.tol", "must be > 0");
  check(s.max_iter >= 1, "solver.max_iter", "must be >= 1");
  check(s.lambda > 0.0 && std::isfinite(s.lambda), "solver.lambda", "must be > 0");
  check(s.kernel_cap > 0.0, "solver.kernel_cap", "must be > 0");

  const TrajectorySpec& t = c.trajectory;
  check(t.samples >= 2, "trajectory.samples", "must be >= 2 (vertices)");
  check(t.stride >= 1, "trajectory.stride", "must be >= 1");
  check(t.admission_tol >= 0.0, "trajectory.admission_tol", "must be >= 0");
  for (const auto& p : t.starts) {
    check(p.size() == dim, "trajectory.starts", "every start needs " + std::to_string(dim) + " components");
    for (std::size_t i = 0; i < dim; ++i)
      check(p[i] >= c.grid.lower[i] && p[i] <= c.grid.upper[i], "trajectory.starts", "start outside the grid box");
  }

  const ConvergenceSpec& cv = c.convergence;
  check(!cv.resolutions.empty(), "convergence.resolutions", "must not be empty");
  check(is_power_of_two_plus_one(cv.reference), "convergence.reference", "must be of the form 2^k + 1");
  for (std::size_t m : cv.resolutions) {
    check(is_power_of_two_plus_one(m), "convergence.resolutions", std::to_string(m) + " is not of the form 2^k + 1");
    check(is_nested(m, cv.reference), "convergence.resolutions",
          std::to_string(m) + " does not nest in the reference " + std::to_string(cv.reference));
  }

  const auto [lo, hi] = sweep_range(c.sweep.parameter);
  check(!c.sweep.values.empty(), "sweep.values", "need at least one value");
  for (std::size_t i = 0; i < c.sweep.values.size(); ++i) {
    const double v = c.sweep.values[i];
    check(v > 0.0, "sweep.values", "values must be positive");
    check(v >= lo - 1e-12 && v <= hi + 1e-12, "sweep.values",
          format_real(v) + " is outside [" + format_real(lo) + ", " + format_real(hi) + "]");
    if (i > 0) check(v > c.sweep.values[i - 1], "sweep.values", "values must be strictly increasing");
  }
  check(c.sweep.nodes >= 3, "sweep.nodes", "must be >= 3");
  with_parameter(c.model, c.sweep.parameter, c.sweep.values.front()).validate();
  with_parameter(c.model, c.sweep.parameter, c.sweep.values.back()).validate();
}

}  // namespace viab
