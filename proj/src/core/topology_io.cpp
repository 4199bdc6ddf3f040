#include "core/topology_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace ccecr {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace {

constexpr int kSchemaVersion = 1;

void require_schema(const json& j, const char* what) {
  if (!j.is_object()) throw Error(std::string(what) + ": root must be an object");
  if (!j.contains("schema_version") || !j["schema_version"].is_number_integer())
    throw Error(std::string(what) + ": missing schema_version");
  int v = j["schema_version"].get<int>();
  if (v != kSchemaVersion)
    throw Error(std::string(what) + ": unsupported schema_version " + std::to_string(v));
}

template <typename T>
T get_or_throw(const json& j, const char* key, const char* ctx) {
  if (!j.contains(key)) throw Error(std::string(ctx) + ": missing key '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(std::string(ctx) + ": bad value for '" + key + "': " + e.what());
  }
}

template <typename T>
T get_or_default(const json& j, const char* key, T def) {
  if (!j.contains(key) || j.at(key).is_null()) return def;
  return j.at(key).get<T>();
}

}  // namespace

Topology topology_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(std::string("topology: invalid JSON: ") + e.what());
  }
  require_schema(j, "topology");

  Topology t;
  t.horizon = get_or_throw<std::int64_t>(j, "horizon", "topology");
  t.empty_return_delay = get_or_default<std::int64_t>(j, "empty_return_delay", 2);

  for (const auto& pj : get_or_throw<json>(j, "ports", "topology")) {
    Port p;
    p.id = get_or_throw<std::string>(pj, "id", "port");
    p.capacity = get_or_throw<std::int64_t>(pj, "capacity", "port");
    p.initial_stock = get_or_throw<std::int64_t>(pj, "initial_stock", "port");
    if (pj.contains("handling_cap") && !pj["handling_cap"].is_null())
      p.handling_cap = pj["handling_cap"].get<std::int64_t>();
    t.ports.push_back(std::move(p));
  }

  for (const auto& rj : get_or_throw<json>(j, "routes", "topology")) {
    Route r;
    r.id = get_or_throw<std::string>(rj, "id", "route");
    r.stops = get_or_throw<std::vector<std::string>>(rj, "stops", "route");
    r.leg_distances = get_or_throw<std::vector<double>>(rj, "leg_distances", "route");
    t.routes.push_back(std::move(r));
  }

  for (const auto& vj : get_or_throw<json>(j, "vessels", "topology")) {
    VesselSpec v;
    v.id = get_or_throw<std::string>(vj, "id", "vessel");
    v.capacity = get_or_throw<std::int64_t>(vj, "capacity", "vessel");
    v.speed_noise.sigma = get_or_default<double>(vj, "speed_noise_sigma", 0.0);
    t.vessels.push_back(std::move(v));
  }

  const json& om = get_or_throw<json>(j, "order_model", "topology");
  for (const auto& oj : get_or_throw<json>(om, "pairs", "order_model")) {
    OrderPair od;
    od.origin = get_or_throw<std::string>(oj, "origin", "order pair");
    od.destination = get_or_throw<std::string>(oj, "destination", "order pair");
    od.base_volume = get_or_throw<double>(oj, "base_volume", "order pair");
    od.noise_cv = get_or_default<double>(oj, "noise_cv", 0.0);
    if (oj.contains("periods")) {
      for (const auto& sj : oj["periods"]) {
        DemandPeriod per;
        per.amplitude = get_or_throw<double>(sj, "amplitude", "demand period");
        per.period_days = get_or_throw<double>(sj, "period_days", "demand period");
        per.phase = get_or_default<double>(sj, "phase", 0.0);
        od.periods.push_back(per);
      }
    }
    t.order_model.pairs.push_back(std::move(od));
  }
  if (om.contains("sail_days")) {
    for (const auto& ej : om["sail_days"]) {
      SailDaysEntry e;
      e.origin = get_or_throw<std::string>(ej, "origin", "sail_days");
      e.destination = get_or_throw<std::string>(ej, "destination", "sail_days");
      e.days = get_or_throw<std::int64_t>(ej, "days", "sail_days");
      t.order_model.sail_days.push_back(std::move(e));
    }
  }
  return t;
}

std::string topology_to_json(const Topology& t) {
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["horizon"] = t.horizon;
  j["empty_return_delay"] = t.empty_return_delay;

  j["ports"] = ordered_json::array();
  for (const auto& p : t.ports) {
    ordered_json pj;
    pj["id"] = p.id;
    pj["capacity"] = p.capacity;
    pj["initial_stock"] = p.initial_stock;
    if (p.handling_cap) pj["handling_cap"] = *p.handling_cap;
    j["ports"].push_back(std::move(pj));
  }

  j["routes"] = ordered_json::array();
  for (const auto& r : t.routes) {
    ordered_json rj;
    rj["id"] = r.id;
    rj["stops"] = r.stops;
    rj["leg_distances"] = r.leg_distances;
    j["routes"].push_back(std::move(rj));
  }

  j["vessels"] = ordered_json::array();
  for (const auto& v : t.vessels) {
    ordered_json vj;
    vj["id"] = v.id;
    vj["capacity"] = v.capacity;
    vj["speed_noise_sigma"] = v.speed_noise.sigma;
    j["vessels"].push_back(std::move(vj));
  }

  ordered_json om;
  om["pairs"] = ordered_json::array();
  for (const auto& od : t.order_model.pairs) {
    ordered_json oj;
    oj["origin"] = od.origin;
    oj["destination"] = od.destination;
    oj["base_volume"] = od.base_volume;
    oj["noise_cv"] = od.noise_cv;
    oj["periods"] = ordered_json::array();
    for (const auto& per : od.periods) {
      ordered_json sj;
      sj["amplitude"] = per.amplitude;
      sj["period_days"] = per.period_days;
      sj["phase"] = per.phase;
      oj["periods"].push_back(std::move(sj));
    }
    om["pairs"].push_back(std::move(oj));
  }
  om["sail_days"] = ordered_json::array();
  for (const auto& e : t.order_model.sail_days) {
    ordered_json ej;
    ej["origin"] = e.origin;
    ej["destination"] = e.destination;
    ej["days"] = e.days;
    om["sail_days"].push_back(std::move(ej));
  }
  j["order_model"] = std::move(om);
  return j.dump(2) + "\n";
}

FleetConfiguration configuration_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(std::string("configuration: invalid JSON: ") + e.what());
  }
  require_schema(j, "configuration");
  FleetConfiguration p;
  for (const auto& aj : get_or_throw<json>(j, "assignments", "configuration")) {
    Assignment a;
    a.vessel = get_or_throw<std::string>(aj, "vessel", "assignment");
    a.route = get_or_throw<std::string>(aj, "route", "assignment");
    a.start_port = get_or_throw<std::string>(aj, "start_port", "assignment");
    p.assignments.push_back(std::move(a));
  }
  return p;
}

std::string configuration_to_json(const FleetConfiguration& p) {
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["assignments"] = ordered_json::array();
  for (const auto& a : p.assignments) {
    ordered_json aj;
    aj["vessel"] = a.vessel;
    aj["route"] = a.route;
    aj["start_port"] = a.start_port;
    j["assignments"].push_back(std::move(aj));
  }
  return j.dump(2) + "\n";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open file: " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write file: " + path);
  out << content;
  if (!out) throw Error("write failed: " + path);
}

Topology load_topology(const std::string& path) { return topology_from_json(read_file(path)); }
void save_topology(const Topology& t, const std::string& path) {
  write_file(path, topology_to_json(t));
}

FleetConfiguration load_configuration(const std::string& path) {
  return configuration_from_json(read_file(path));
}
void save_configuration(const FleetConfiguration& p, const std::string& path) {
  write_file(path, configuration_to_json(p));
}

std::uint64_t topology_fingerprint(const Topology& t) {
  // FNV-1a over the canonical serialization.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : topology_to_json(t)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace ccecr
