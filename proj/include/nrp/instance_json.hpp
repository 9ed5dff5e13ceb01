#ifndef NRP_INSTANCE_JSON_HPP
#define NRP_INSTANCE_JSON_HPP

// Canonical JSON instance document:
//   {"name": ..., "costs": [...], "weights": [...],
//    "precedence": [[i, j], ...], "requests": [[k, [ids...]], ...]}
// All ids are 1-based.

#include "model.hpp"

#include <nlohmann/json.hpp>

#include <string>

namespace nrp {

inline auto to_json(const Instance& inst) -> nlohmann::json {
  nlohmann::json doc;
  doc["name"] = inst.name;
  doc["costs"] = inst.costs;
  auto weights = nlohmann::json::array();
  auto requests = nlohmann::json::array();
  for (std::size_t k = 0; k < inst.stakeholders.size(); ++k) {
    weights.push_back(inst.stakeholders[k].weight);
    requests.push_back({static_cast<int>(k + 1), inst.stakeholders[k].requests});
  }
  doc["weights"] = weights;
  auto precedence = nlohmann::json::array();
  for (const auto& [i, j] : inst.precedence) {
    precedence.push_back({i, j});
  }
  doc["precedence"] = precedence;
  doc["requests"] = requests;
  return doc;
}

inline auto instance_from_json(const nlohmann::json& doc) -> Instance {
  auto fail = [](const std::string& msg) -> Instance { throw Error(ErrorKind::malformed_format, msg); };
  if (!doc.is_object()) {
    return fail("instance document must be a JSON object");
  }
  try {
    Instance inst;
    inst.name = doc.value("name", std::string{});
    inst.costs = doc.at("costs").get<std::vector<std::int64_t>>();
    auto weights = doc.at("weights").get<std::vector<std::int64_t>>();
    inst.stakeholders.resize(weights.size());
    for (std::size_t k = 0; k < weights.size(); ++k) {
      inst.stakeholders[k].weight = weights[k];
    }
    for (const auto& pair : doc.value("precedence", nlohmann::json::array())) {
      if (!pair.is_array() || pair.size() != 2) {
        return fail("precedence entries must be [i, j] pairs");
      }
      inst.precedence.emplace_back(pair[0].get<int>(), pair[1].get<int>());
    }
    for (const auto& entry : doc.at("requests")) {
      if (!entry.is_array() || entry.size() != 2) {
        return fail("request entries must be [k, [ids]] pairs");
      }
      auto k = entry[0].get<int>();
      if (k < 1 || static_cast<std::size_t>(k) > inst.stakeholders.size()) {
        throw Error(ErrorKind::invalid_instance, "requests reference unknown stakeholder " + std::to_string(k));
      }
      auto& target = inst.stakeholders[static_cast<std::size_t>(k - 1)].requests;
      for (int id : entry[1].get<std::vector<int>>()) {
        target.push_back(id);
      }
    }
    validate(inst);
    return inst;
  } catch (const nlohmann::json::exception& e) {
    return fail(std::string("bad instance document: ") + e.what());
  }
}

inline auto instance_from_json_text(const std::string& text) -> Instance {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::malformed_format, e.what());
  }
  return instance_from_json(doc);
}

}  // namespace nrp

#endif  // NRP_INSTANCE_JSON_HPP
