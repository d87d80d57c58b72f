#include "nlgeom/scenario.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

namespace nlgeom::cli {

namespace {

struct Entry {
  std::vector<std::string> values;
  int line = 0;
};

struct Node {
  std::string name;
  int line = 0;
  std::map<std::string, Entry> keys;
  std::vector<Node> children;
};

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string tok; in >> tok;) out.push_back(tok);
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

Node parse_tree(std::istream& in, const std::string& source) {
  Node root;
  root.name = "<root>";
  std::vector<Node*> stack{&root};
  std::string raw;
  int line_no = 0;
  bool header_seen = false;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw.substr(0, raw.find('#'));
    line = trim(line);
    if (line.empty()) continue;
    if (!header_seen) {
      if (line != kScenarioHeader)
        throw ParseError(source, line_no, std::string("expected header line '") + kScenarioHeader + "'");
      header_seen = true;
      continue;
    }
    if (line == "}") {
      if (stack.size() == 1) throw ParseError(source, line_no, "unmatched '}'");
      stack.pop_back();
      continue;
    }
    if (line.back() == '{') {
      const std::string name = trim(line.substr(0, line.size() - 1));
      if (name.empty() || name.find_first_of(" \t=") != std::string::npos)
        throw ParseError(source, line_no, "malformed block opener '" + line + "'");
      Node child;
      child.name = name;
      child.line = line_no;
      stack.back()->children.push_back(std::move(child));
      stack.push_back(&stack.back()->children.back());
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(source, line_no, "expected 'key = value', got '" + line + "'");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty() || key.find_first_of(" \t") != std::string::npos)
      throw ParseError(source, line_no, "malformed key '" + key + "'");
    Entry e{split_ws(line.substr(eq + 1)), line_no};
    if (e.values.empty()) throw ParseError(source, line_no, "key '" + key + "' has no value");
    if (!stack.back()->keys.emplace(key, std::move(e)).second)
      throw ParseError(source, line_no, "duplicate key '" + key + "'");
  }
  if (!header_seen) throw ParseError(source, line_no, "empty scenario file");
  if (stack.size() != 1) throw ParseError(source, stack.back()->line, "block '" + stack.back()->name + "' is not closed");
  return root;
}

class Reader {
 public:
  Reader(const Node& node, const std::string& source) : node_(node), source_(source) {}

  void allow(std::initializer_list<const char*> keys, std::initializer_list<const char*> blocks = {}) const {
    const std::set<std::string> k(keys.begin(), keys.end()), b(blocks.begin(), blocks.end());
    for (const auto& [key, e] : node_.keys)
      if (!k.count(key)) throw ParseError(source_, e.line, "unknown key '" + key + "' in " + node_.name);
    for (const auto& c : node_.children)
      if (!b.count(c.name)) throw ParseError(source_, c.line, "unknown block '" + c.name + "' in " + node_.name);
  }

  bool has(const std::string& key) const { return node_.keys.count(key) != 0; }

  std::vector<double> numbers(const std::string& key) const {
    const Entry& e = entry(key);
    std::vector<double> out;
    for (const auto& tok : e.values) {
      char* end = nullptr;
      const double v = std::strtod(tok.c_str(), &end);
      if (end == tok.c_str() || *end != '\0' || !std::isfinite(v))
        throw ParseError(source_, e.line, "field '" + key + "': '" + tok + "' is not a finite number");
      out.push_back(v);
    }
    return out;
  }

  double number(const std::string& key) const {
    const auto v = numbers(key);
    if (v.size() != 1) throw ParseError(source_, line(key), "field '" + key + "' expects one number");
    return v.front();
  }

  double number(const std::string& key, double fallback) const { return has(key) ? number(key) : fallback; }

  Vector vector(const std::string& key, std::size_t dim) const {
    const auto v = numbers(key);
    if (v.size() != dim)
      throw ParseError(source_, line(key),
                       "field '" + key + "' expects " + std::to_string(dim) + " numbers, got " + std::to_string(v.size()));
    return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
  }

  std::string word(const std::string& key) const {
    const Entry& e = entry(key);
    if (e.values.size() != 1) throw ParseError(source_, e.line, "field '" + key + "' expects one word");
    return e.values.front();
  }

  bool flag(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const std::string w = word(key);
    if (w == "true" || w == "1") return true;
    if (w == "false" || w == "0") return false;
    throw ParseError(source_, line(key), "field '" + key + "' expects true or false");
  }

  int line(const std::string& key) const { return entry(key).line; }
  int line() const { return node_.line; }

  const Entry& entry(const std::string& key) const {
    auto it = node_.keys.find(key);
    if (it == node_.keys.end()) throw ParseError(source_, node_.line, "missing field '" + key + "' in " + node_.name);
    return it->second;
  }

 private:
  const Node& node_;
  const std::string& source_;
};

ComponentSpec read_component(const Node& node, const std::string& source, std::size_t dim) {
  Reader r(node, source);
  ComponentSpec spec;
  spec.line = node.line;
  spec.builder = r.word("builder");
  auto need = [&](const std::string& key, std::size_t count) {
    const auto v = r.numbers(key);
    if (v.size() != count)
      throw ParseError(source, r.line(key),
                       "field '" + key + "' expects " + std::to_string(count) + " numbers, got " + std::to_string(v.size()));
    spec.params[key] = v;
  };
  auto optional_number = [&](const std::string& key) {
    if (r.has(key)) need(key, 1);
  };
  const std::string& b = spec.builder;
  if (b == "euclidean") {
    r.allow({"builder"});
  } else if (b == "circle_barrier" || b == "obstacle_barrier") {
    r.allow({"builder", "center", "radius", "lambda", "k"});
    need("center", dim);
    need("radius", 1);
    need("lambda", 1);
    need("k", 1);
  } else if (b == "wall_barrier") {
    r.allow({"builder", "lower", "upper", "lambda", "k"});
    need("lower", dim);
    need("upper", dim);
    need("lambda", 1);
    need("k", 1);
  } else if (b == "vortex") {
    if (dim != 2) throw ParseError(source, node.line, "vortex requires dimension 2");
    r.allow({"builder", "strength", "region_lower", "region_upper", "bumps", "seed"});
    need("strength", 1);
    need("region_lower", 2);
    need("region_upper", 2);
    optional_number("bumps");
    optional_number("seed");
  } else if (b == "attractor") {
    r.allow({"builder", "target", "gain", "smoothing"});
    need("target", dim);
    need("gain", 1);
    optional_number("smoothing");
  } else {
    throw ParseError(source, r.line("builder"), "unknown builder '" + b + "'");
  }
  return spec;
}

}  // namespace

Scenario parse_scenario(std::istream& in, const std::string& source) {
  const Node root = parse_tree(in, source);
  Reader top(root, source);
  top.allow({"name", "dimension", "seed", "speeds"},
            {"geometry", "fabric", "particle", "integrator", "forcing", "output", "checks"});

  Scenario sc;
  sc.source = source;
  sc.name = top.word("name");
  const double dim = top.number("dimension");
  if (!(dim >= 1.0 && dim <= 10.0) || std::trunc(dim) != dim)
    throw ParseError(source, top.line("dimension"), "dimension must be an integer in [1, 10]");
  sc.dimension = static_cast<std::size_t>(dim);
  if (top.has("seed")) {
    const double seed = top.number("seed");
    if (seed < 0.0 || std::trunc(seed) != seed) throw ParseError(source, top.line("seed"), "seed must be a non-negative integer");
    sc.seed = static_cast<std::uint64_t>(seed);
  }
  sc.speeds = top.numbers("speeds");
  for (double v : sc.speeds)
    if (!(v > 0.0)) throw ParseError(source, top.line("speeds"), "speeds must be positive");

  bool have_integrator = false;
  for (const Node& child : root.children) {
    Reader r(child, source);
    if (child.name == "geometry") {
      if (!sc.components.empty()) throw ParseError(source, child.line, "only one geometry or fabric block allowed");
      sc.components.push_back(read_component(child, source, sc.dimension));
    } else if (child.name == "fabric") {
      if (!sc.components.empty()) throw ParseError(source, child.line, "only one geometry or fabric block allowed");
      r.allow({}, {"component"});
      sc.fabric = true;
      for (const Node& c : child.children) sc.components.push_back(read_component(c, source, sc.dimension));
      if (sc.components.empty()) throw ParseError(source, child.line, "fabric has no components");
    } else if (child.name == "particle") {
      r.allow({"position", "direction"});
      ParticleStart p;
      p.position = r.vector("position", sc.dimension);
      p.direction = r.vector("direction", sc.dimension);
      const double len = p.direction.norm();
      if (!(len > 0.0)) throw ParseError(source, r.line("direction"), "direction must be nonzero");
      if (std::abs(len - 1.0) > 1e-6)
        sc.warnings.push_back(source + ":" + std::to_string(r.line("direction")) + ": direction renormalized (length " +
                              std::to_string(len) + ")");
      p.direction /= len;
      sc.particles.push_back(std::move(p));
    } else if (child.name == "integrator") {
      r.allow({"method", "step", "horizon", "scale_horizon_by_speed", "target_radius", "target", "max_speed",
               "barrier_margin"});
      have_integrator = true;
      if (r.has("method") && r.word("method") != "rk4")
        throw ParseError(source, r.line("method"), "only method rk4 is supported");
      sc.integrator.step = r.number("step");
      sc.integrator.horizon = r.number("horizon");
      sc.scale_horizon_by_speed = r.flag("scale_horizon_by_speed", false);
      if (r.has("target_radius")) sc.integrator.target_ball = TargetBall{r.vector("target", sc.dimension), r.number("target_radius")};
      if (r.has("max_speed")) sc.integrator.max_speed = r.number("max_speed");
      if (r.has("barrier_margin")) sc.integrator.barrier_margin = BarrierMargin{"min_phi", r.number("barrier_margin")};
      try {
        sc.integrator.validate();
      } catch (const ValidationError& e) {
        throw ParseError(source, child.line, e.what());
      }
    } else if (child.name == "forcing") {
      r.allow({"target", "gain", "damping", "horizon"});
      ForcingSpec f;
      f.target = r.vector("target", sc.dimension);
      f.gain = r.number("gain");
      f.damping = r.number("damping", 0.0);
      if (r.has("horizon")) {
        f.horizon = r.number("horizon");
        if (!(*f.horizon > 0.0)) throw ParseError(source, r.line("horizon"), "horizon must be positive");
      }
      if (!(f.gain > 0.0) || f.damping < 0.0) throw ParseError(source, child.line, "forcing needs gain > 0 and damping >= 0");
      sc.forcing = std::move(f);
    } else if (child.name == "output") {
      r.allow({"csv", "svg", "bounds"});
      sc.output.csv = r.flag("csv", true);
      sc.output.svg = r.flag("svg", true);
      if (r.has("bounds")) {
        const Vector b = r.vector("bounds", 4);
        if (!(b[2] > b[0]) || !(b[3] > b[1])) throw ParseError(source, r.line("bounds"), "bounds must be xmin ymin xmax ymax");
        sc.output.bounds = std::array<double, 4>{b[0], b[1], b[2], b[3]};
      }
    } else if (child.name == "checks") {
      r.allow({"max_path_distance", "target_radius", "require_clearance"});
      if (r.has("max_path_distance")) sc.checks.max_path_distance = r.number("max_path_distance");
      if (r.has("target_radius")) sc.checks.target_radius = r.number("target_radius");
      sc.checks.require_clearance = r.flag("require_clearance", false);
    }
  }
  if (sc.components.empty()) throw ParseError(source, root.line, "scenario needs a geometry or fabric block");
  if (!have_integrator) throw ParseError(source, root.line, "scenario needs an integrator block");
  if (sc.particles.empty()) throw ParseError(source, root.line, "scenario has no particles");
  return sc;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open scenario file " + path.string());
  return parse_scenario(in, path.string());
}

}  // namespace nlgeom::cli
