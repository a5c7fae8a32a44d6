#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "hypwave/cli.hpp"
#include "hypwave/errors.hpp"

namespace hypwave::cli {

namespace {

struct Where {
  int line = 0;
  int column = 0;  // of the value
};

std::string_view trim(std::string_view s, std::size_t& offset) {
  std::size_t b = 0;
  while (b < s.size() && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
  std::size_t e = s.size();
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
  offset = b;
  return s.substr(b, e - b);
}

double to_real(std::string_view v, const Where& w) {
  double x = 0.0;
  const auto* end = v.data() + v.size();
  auto [p, ec] = std::from_chars(v.data(), end, x);
  if (ec != std::errc() || p != end) throw ConfigError("expected a real number", w.line, w.column);
  return x;
}

long long to_integer(std::string_view v, const Where& w) {
  long long x = 0;
  const auto* end = v.data() + v.size();
  auto [p, ec] = std::from_chars(v.data(), end, x);
  if (ec != std::errc() || p != end) throw ConfigError("expected an integer", w.line, w.column);
  return x;
}

bool to_bool(std::string_view v, const Where& w) {
  if (v == "true") return true;
  if (v == "false") return false;
  throw ConfigError("expected true or false", w.line, w.column);
}

template <class E>
E to_enum(std::string_view v, const Where& w, std::initializer_list<std::pair<const char*, E>> names) {
  for (const auto& [name, e] : names) {
    if (v == name) return e;
  }
  std::string msg = "expected one of:";
  for (const auto& [name, e] : names) msg += std::string(" ") + name;
  throw ConfigError(msg, w.line, w.column);
}

const char* family_name(Family f) {
  switch (f) {
    case Family::zero:
      return "zero";
    case Family::bump:
      return "bump";
    case Family::static_map:
      return "static";
    case Family::kinetic:
      return "kinetic";
  }
  return "?";
}

const char* velocity_name(Velocity v) {
  switch (v) {
    case Velocity::zero:
      return "zero";
    case Velocity::incoming:
      return "incoming";
    case Velocity::outgoing:
      return "outgoing";
  }
  return "?";
}

}  // namespace

RunConfig parse_config(std::string_view text) {
  RunConfig c;
  std::map<std::string, Where> seen;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    std::size_t lead = 0;
    if (trim(line, lead).empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("expected `key = value`", line_no, static_cast<int>(line.size()) + 1);
    }
    std::size_t koff = 0, voff = 0;
    const std::string key(trim(line.substr(0, eq), koff));
    const std::string_view value = trim(line.substr(eq + 1), voff);
    const Where kw{line_no, static_cast<int>(koff) + 1};
    const Where w{line_no, static_cast<int>(eq + 1 + voff) + 1};
    if (key.empty()) throw ConfigError("missing key", kw.line, kw.column);
    if (value.empty()) throw ConfigError("missing value for " + key, w.line, w.column);
    if (seen.count(key)) throw ConfigError("duplicate key " + key, kw.line, kw.column);
    seen[key] = w;

    if (key == "equation") {
      try {
        c.equation = parse_equation(std::string(value));
      } catch (const InvalidArgument&) {
        throw ConfigError("unknown equation " + std::string(value), w.line, w.column);
      }
    } else if (key == "target") {
      c.target = to_enum<TargetKind>(value, w, {{"hyperbolic", TargetKind::hyperbolic}, {"sphere", TargetKind::sphere}});
    } else if (key == "lambda") {
      c.lambda = to_real(value, w);
    } else if (key == "grid.r_max") {
      c.r_max = to_real(value, w);
    } else if (key == "grid.n") {
      c.n = static_cast<int>(to_integer(value, w));
    } else if (key == "control.cfl") {
      c.cfl = to_real(value, w);
    } else if (key == "control.t_end") {
      c.t_end = to_real(value, w);
    } else if (key == "control.output_stride") {
      c.output_stride = static_cast<int>(to_integer(value, w));
    } else if (key == "control.checkpoint_interval") {
      c.checkpoint_interval = to_real(value, w);
    } else if (key == "control.waive_causality") {
      c.waive_causality = to_bool(value, w);
    } else if (key == "initial_data.family") {
      c.initial.family = to_enum<Family>(value, w, {{"zero", Family::zero}, {"bump", Family::bump},
                                                    {"static", Family::static_map}, {"kinetic", Family::kinetic}});
    } else if (key == "initial_data.amplitude") {
      c.initial.amplitude = to_real(value, w);
    } else if (key == "initial_data.sigma") {
      c.initial.sigma = to_real(value, w);
    } else if (key == "initial_data.center") {
      c.initial.center = to_real(value, w);
    } else if (key == "initial_data.velocity") {
      c.initial.velocity = to_enum<Velocity>(
          value, w, {{"zero", Velocity::zero}, {"incoming", Velocity::incoming}, {"outgoing", Velocity::outgoing}});
    } else if (key == "output_dir") {
      c.output_dir = std::string(value);
    } else if (key == "seed") {
      const long long s = to_integer(value, w);
      if (s < 0) throw ConfigError("seed must be nonnegative", w.line, w.column);
      c.seed = static_cast<std::uint64_t>(s);
    } else {
      throw ConfigError("unknown key " + key, kw.line, kw.column);
    }
  }

  auto check = [&](bool ok, const char* key, const std::string& msg) {
    if (ok) return;
    const auto it = seen.find(key);
    const Where w = it == seen.end() ? Where{0, 0} : it->second;
    throw ConfigError(msg, w.line, w.column);
  };
  check(c.lambda >= 0.0 && c.lambda < 1.0, "lambda", "lambda must lie in [0, 1)");
  check(c.target == TargetKind::hyperbolic || c.lambda == 0.0, "lambda",
        "the sphere target has no harmonic background; lambda must be 0");
  check(c.r_max > 0.0, "grid.r_max", "grid.r_max must be positive");
  check(c.n >= 16, "grid.n", "grid.n must be at least 16");
  check(c.cfl > 0.0 && c.cfl <= 1.0, "control.cfl", "control.cfl must lie in (0, 1]");
  check(c.t_end >= 0.0, "control.t_end", "control.t_end must be nonnegative");
  check(c.output_stride >= 1, "control.output_stride", "control.output_stride must be positive");
  check(c.checkpoint_interval >= 0.0, "control.checkpoint_interval",
        "control.checkpoint_interval must be nonnegative");
  check(c.initial.sigma > 0.0, "initial_data.sigma", "initial_data.sigma must be positive");
  check(c.initial.center > 0.0, "initial_data.center", "initial_data.center must be positive");
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path.string(), 0, 0);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string format_config(const RunConfig& c) {
  std::ostringstream os;
  char buf[128];
  auto real = [&](const char* key, double v) {
    std::snprintf(buf, sizeof buf, "%s = %.17g\n", key, v);
    os << buf;
  };
  os << "equation = " << to_string(c.equation) << "\n";
  os << "target = " << (c.target == TargetKind::hyperbolic ? "hyperbolic" : "sphere") << "\n";
  real("lambda", c.lambda);
  real("grid.r_max", c.r_max);
  os << "grid.n = " << c.n << "\n";
  real("control.cfl", c.cfl);
  real("control.t_end", c.t_end);
  os << "control.output_stride = " << c.output_stride << "\n";
  real("control.checkpoint_interval", c.checkpoint_interval);
  os << "control.waive_causality = " << (c.waive_causality ? "true" : "false") << "\n";
  os << "initial_data.family = " << family_name(c.initial.family) << "\n";
  real("initial_data.amplitude", c.initial.amplitude);
  real("initial_data.sigma", c.initial.sigma);
  real("initial_data.center", c.initial.center);
  os << "initial_data.velocity = " << velocity_name(c.initial.velocity) << "\n";
  os << "output_dir = " << c.output_dir << "\n";
  os << "seed = " << c.seed << "\n";
  return os.str();
}

}  // namespace hypwave::cli
