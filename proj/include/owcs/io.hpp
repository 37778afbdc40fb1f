#pragma once

#include <fstream>
#include <string>

#include <json.hpp>

#include "owcs/checker.hpp"
#include "owcs/design.hpp"
#include "owcs/model.hpp"

namespace owcs {

// Instance document: substations/turbines as [x, y] meter pairs, cables as
// {capacity, cost_per_km}, optional neighbor_truncation (default 15).
inline Instance instance_from_json(const nlohmann::json& j) {
  Instance inst;
  for (const auto& p : j.at("substations")) {
    inst.substations.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
  }
  for (const auto& p : j.at("turbines")) {
    inst.turbines.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
  }
  std::vector<CableType> cables;
  for (const auto& c : j.at("cables")) {
    cables.push_back({c.at("capacity").get<int>(), c.at("cost_per_km").get<double>()});
  }
  inst.catalog = CableCatalog::normalize(cables);
  inst.neighbor_truncation = j.value("neighbor_truncation", 15);
  inst.validate();
  return inst;
}

inline nlohmann::json instance_to_json(const Instance& inst) {
  nlohmann::json j;
  j["substations"] = nlohmann::json::array();
  for (const Point& p : inst.substations) j["substations"].push_back({p.x, p.y});
  j["turbines"] = nlohmann::json::array();
  for (const Point& p : inst.turbines) j["turbines"].push_back({p.x, p.y});
  j["cables"] = nlohmann::json::array();
  for (const CableType& c : inst.catalog.cables()) {
    j["cables"].push_back({{"capacity", c.capacity}, {"cost_per_km", c.cost_per_km}});
  }
  j["neighbor_truncation"] = inst.neighbor_truncation;
  return j;
}

inline Instance load_instance(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open instance file: " + path);
  nlohmann::json j;
  f >> j;
  return instance_from_json(j);
}

inline nlohmann::json design_to_json(const EdgeMatrix& tree, double cost) {
  nlohmann::json j;
  j["cost"] = cost;
  j["edges"] = nlohmann::json::array();
  for (const EdgeRow& r : tree) {
    j["edges"].push_back({{"from", r.a},
                          {"to", r.b},
                          {"length_km", r.length_km},
                          {"downstream", r.downstream_count},
                          {"cable", r.cable}});
  }
  return j;
}

inline nlohmann::json report_to_json(const DesignReport& rep) {
  nlohmann::json j;
  j["c1"] = rep.c1;
  j["c2"] = rep.c2;
  j["c3"] = rep.c3;
  j["feasible"] = rep.feasible();
  j["total_cost"] = rep.total_cost;
  j["crossing_count"] = rep.crossing_count;
  j["feeder_counts"] = rep.feeder_counts;
  if (rep.feeder_limit_ok) j["feeder_limit_ok"] = *rep.feeder_limit_ok;
  return j;
}

}  // namespace owcs
