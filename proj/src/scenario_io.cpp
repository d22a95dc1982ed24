#include "cbpa/scenario.hpp"

#include <json.hpp>

#include <fstream>
#include <set>
#include <sstream>

namespace cbpa {

using nlohmann::json;

namespace {

constexpr int kSchemaVersion = 1;

[[noreturn]] void fail(const std::string& locus, const std::string& what)
{
  throw ScenarioError("scenario " + locus + ": " + what);
}

void reject_unknown(const json& obj, const std::string& locus, std::initializer_list<const char*> allowed)
{
  if (!obj.is_object()) fail(locus, "expected an object");
  const std::set<std::string> known(allowed.begin(), allowed.end());
  for (const auto& item : obj.items())
    if (!known.count(item.key())) fail(locus + "." + item.key(), "unknown field");
}

Scalar number(const json& obj, const std::string& locus, const char* key, std::optional<Scalar> fallback = {})
{
  if (!obj.contains(key)) {
    if (fallback) return *fallback;
    fail(locus + "." + key, "missing required field");
  }
  const json& v = obj.at(key);
  if (!v.is_number()) fail(locus + "." + key, "expected a number");
  return v.get<Scalar>();
}

int integer(const json& obj, const std::string& locus, const char* key, std::optional<int> fallback = {})
{
  if (!obj.contains(key)) {
    if (fallback) return *fallback;
    fail(locus + "." + key, "missing required field");
  }
  const json& v = obj.at(key);
  if (!v.is_number_integer()) fail(locus + "." + key, "expected an integer");
  return v.get<int>();
}

Point point(const json& obj, const std::string& locus)
{
  if (!obj.contains("position")) fail(locus + ".position", "missing required field");
  const json& v = obj.at("position");
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    fail(locus + ".position", "expected [x, y]");
  return Point(v[0].get<Scalar>(), v[1].get<Scalar>());
}

Topology parse_topology(const json& v, int n)
{
  if (v.is_string()) {
    const auto kind = parse_topology_kind(v.get<std::string>());
    if (!kind || *kind == TopologyKind::RandomConnected)
      fail("topology", "expected complete, line, ring or {\"adjacency\": [...]}");
    return make_topology(*kind, std::max(n, 1));
  }
  reject_unknown(v, "topology", {"adjacency"});
  if (!v.contains("adjacency") || !v.at("adjacency").is_array())
    fail("topology.adjacency", "expected a list of neighbour lists");
  const json& lists = v.at("adjacency");
  if (static_cast<int>(lists.size()) != n)
    fail("topology.adjacency", "expected one neighbour list per robot");
  BoolMatrix adj = BoolMatrix::Constant(n, n, false);
  for (int a = 0; a < n; ++a) {
    const std::string locus = "topology.adjacency[" + std::to_string(a) + "]";
    if (!lists[static_cast<std::size_t>(a)].is_array()) fail(locus, "expected a list of robot ids");
    for (const json& b : lists[static_cast<std::size_t>(a)]) {
      if (!b.is_number_integer() || b.get<int>() < 0 || b.get<int>() >= n) fail(locus, "robot id out of range");
      adj(a, b.get<int>()) = true;
    }
  }
  return Topology{adj};
}

json topology_json(const Topology& t)
{
  if (t.size() > 0) {
    if (auto kind = classify(t)) return std::string(to_string(*kind));
  }
  json lists = json::array();
  for (Index a = 0; a < t.size(); ++a) {
    json row = json::array();
    for (Index b = 0; b < t.size(); ++b)
      if (t.adjacency(a, b)) row.push_back(b);
    lists.push_back(row);
  }
  return json{{"adjacency", lists}};
}

std::string line_locus(std::string_view text, std::size_t byte)
{
  std::size_t line = 1, column = 1;
  for (std::size_t k = 0; k < byte && k < text.size(); ++k) {
    if (text[k] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

} // namespace

Scenario load_scenario(std::string_view text)
{
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ScenarioError("scenario parse error at " + line_locus(text, e.byte) + ": " + e.what());
  }

  reject_unknown(doc, "document", {"schema", "seed", "robots", "tasks", "topology", "constants"});
  if (integer(doc, "document", "schema") != kSchemaVersion)
    fail("document.schema", "unsupported schema version (expected 1)");

  Scenario s;
  if (doc.contains("seed")) {
    if (!doc.at("seed").is_number_unsigned()) fail("document.seed", "expected a non-negative integer");
    s.seed = doc.at("seed").get<std::uint64_t>();
  }

  if (!doc.contains("robots") || !doc.at("robots").is_array()) fail("robots", "expected a list");
  for (std::size_t k = 0; k < doc.at("robots").size(); ++k) {
    const json& r = doc.at("robots")[k];
    const std::string locus = "robots[" + std::to_string(k) + "]";
    reject_unknown(r, locus, {"id", "position", "velocity", "payload_a", "payload_b"});
    Robot robot;
    robot.id = integer(r, locus, "id");
    robot.position = point(r, locus);
    robot.velocity = number(r, locus, "velocity", 5.0);
    robot.payload_a = number(r, locus, "payload_a");
    robot.payload_b = number(r, locus, "payload_b");
    s.robots.push_back(robot);
  }

  if (!doc.contains("tasks") || !doc.at("tasks").is_array()) fail("tasks", "expected a list");
  for (std::size_t j = 0; j < doc.at("tasks").size(); ++j) {
    const json& t = doc.at("tasks")[j];
    const std::string locus = "tasks[" + std::to_string(j) + "]";
    reject_unknown(t, locus, {"id", "position", "duration", "demand_a", "demand_b", "announce_time"});
    Task task;
    task.id = integer(t, locus, "id");
    task.position = point(t, locus);
    task.duration = number(t, locus, "duration", 10.0);
    task.demand_a = number(t, locus, "demand_a");
    task.demand_b = number(t, locus, "demand_b");
    task.announce_time = number(t, locus, "announce_time", 0.0);
    s.tasks.push_back(task);
  }

  const int n = static_cast<int>(s.robots.size());
  s.topology = doc.contains("topology") ? parse_topology(doc.at("topology"), n)
                                        : make_topology(TopologyKind::Complete, std::max(n, 1));

  if (doc.contains("constants")) {
    const json& c = doc.at("constants");
    reject_unknown(c, "constants", {"alpha", "beta", "big_n", "big_c", "lambda", "static_gain", "max_rounds"});
    const AlgoConstants d;
    s.constants.alpha = number(c, "constants", "alpha", d.alpha);
    s.constants.beta = number(c, "constants", "beta", d.beta);
    s.constants.big_n = number(c, "constants", "big_n", d.big_n);
    s.constants.big_c = number(c, "constants", "big_c", d.big_c);
    s.constants.lambda = number(c, "constants", "lambda", d.lambda);
    s.constants.static_gain = number(c, "constants", "static_gain", d.static_gain);
    s.constants.max_rounds = integer(c, "constants", "max_rounds", d.max_rounds);
  }

  require_valid(s);
  return s;
}

std::string save_scenario(const Scenario& s)
{
  json doc;
  doc["schema"] = kSchemaVersion;
  doc["seed"] = s.seed;
  json robots = json::array();
  for (const auto& r : s.robots) {
    robots.push_back({{"id", r.id},
                      {"position", {r.position.x(), r.position.y()}},
                      {"velocity", r.velocity},
                      {"payload_a", r.payload_a},
                      {"payload_b", r.payload_b}});
  }
  doc["robots"] = robots;
  json tasks = json::array();
  for (const auto& t : s.tasks) {
    tasks.push_back({{"id", t.id},
                     {"position", {t.position.x(), t.position.y()}},
                     {"duration", t.duration},
                     {"demand_a", t.demand_a},
                     {"demand_b", t.demand_b},
                     {"announce_time", t.announce_time}});
  }
  doc["tasks"] = tasks;
  doc["topology"] = topology_json(s.topology);
  const AlgoConstants& c = s.constants;
  doc["constants"] = {{"alpha", c.alpha},   {"beta", c.beta},     {"big_n", c.big_n},
                      {"big_c", c.big_c},   {"lambda", c.lambda}, {"static_gain", c.static_gain},
                      {"max_rounds", c.max_rounds}};
  return doc.dump(2) + "\n";
}

Scenario load_scenario_file(const std::string& path)
{
  std::ifstream in(path);
  if (!in) throw ScenarioError("cannot open scenario file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return load_scenario(buffer.str());
}

} // namespace cbpa
