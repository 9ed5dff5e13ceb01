#ifndef NRP_HTTP_SERVICE_HPP
#define NRP_HTTP_SERVICE_HPP

// HTTP/JSON front end for RunService. Event streams use server-sent events.

#include "anytime.hpp"
#include "core.hpp"
#include "formats.hpp"
#include "instance_json.hpp"
#include "service.hpp"

#include <httplib.h>
#include <nlohmann/json.hpp>

#include <string>

namespace nrp {

namespace http_detail {

using nlohmann::json;

inline auto status_code(ErrorKind kind) -> int {
  switch (kind) {
    case ErrorKind::unknown_instance:
    case ErrorKind::unknown_run:
      return 404;
    default:
      return 400;
  }
}

inline void send_json(httplib::Response& res, const json& body, int status = 200) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

inline void send_error(httplib::Response& res, ErrorKind kind, const std::string& message) {
  send_json(res, {{"error", std::string(to_string(kind))}, {"message", message}}, status_code(kind));
}

template <typename Fn>
void guarded(httplib::Response& res, Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    send_error(res, e.kind(), e.what());
  } catch (const json::exception& e) {
    send_error(res, ErrorKind::malformed_format, e.what());
  }
}

inline auto parse_body(const httplib::Request& req) -> json {
  if (req.body.empty()) {
    return json::object();
  }
  auto doc = json::parse(req.body, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw Error(ErrorKind::malformed_format, "request body must be a JSON object");
  }
  return doc;
}

/// Reads algorithm, deadline (seconds), lambda ("P/Q"), budgets. Missing keys keep `base`.
inline auto config_from_json(const json& doc, RunConfig base = {}) -> RunConfig {
  try {
    if (doc.contains("algorithm")) {
      auto choice = parse_algorithm(doc.at("algorithm").get<std::string>());
      base.algorithm = choice.algorithm;
      base.objective = choice.objective;
    }
    if (doc.contains("objective")) {
      base.objective = doc.at("objective").get<int>();
    }
    if (doc.contains("deadline")) {
      auto secs = doc.at("deadline").get<double>();
      if (!(secs >= 0)) {
        throw Error(ErrorKind::invalid_config, "deadline must be non-negative");
      }
      base.deadline = std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::duration<double>(secs));
    }
    if (doc.contains("lambda")) {
      base.lambda = parse_rational(doc.at("lambda").get<std::string>());
    }
    if (doc.contains("answer_budget")) {
      base.answer_budget = doc.at("answer_budget").get<std::uint64_t>();
    }
    if (doc.contains("node_budget")) {
      base.node_budget = doc.at("node_budget").get<std::uint64_t>();
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::invalid_config, e.what());
  } catch (const Error& e) {
    throw Error(ErrorKind::invalid_config, e.what());
  }
  validate(base);
  return base;
}

inline auto edit_from_json(const json& doc) -> WhatIfEdit {
  WhatIfEdit edit;
  auto read = [](const json& obj, std::map<int, std::int64_t>& out) {
    if (!obj.is_object()) {
      throw Error(ErrorKind::invalid_edit, "overrides must map ids to integers");
    }
    for (const auto& [key, value] : obj.items()) {
      int id = 0;
      try {
        std::size_t used = 0;
        id = std::stoi(key, &used);
        if (used != key.size()) throw std::invalid_argument(key);
      } catch (const std::exception&) {
        throw Error(ErrorKind::invalid_edit, "override key '" + key + "' is not an id");
      }
      if (!value.is_number_integer()) {
        throw Error(ErrorKind::invalid_edit, "override for " + key + " must be an integer");
      }
      out[id] = value.get<std::int64_t>();
    }
  };
  if (doc.contains("costs")) read(doc.at("costs"), edit.costs);
  if (doc.contains("weights")) read(doc.at("weights"), edit.weights);
  return edit;
}

inline auto info_to_json(const RunInfo& info) -> json {
  json j;
  j["id"] = info.id;
  j["instance"] = info.instance_id;
  j["status"] = std::string(to_string(info.status));
  j["algorithm"] = to_string(info.config.algorithm, info.config.objective);
  if (info.config.deadline) {
    j["deadline"] = std::chrono::duration<double>(*info.config.deadline).count();
  }
  j["parent"] = info.parent ? json(*info.parent) : json(nullptr);
  j["children"] = info.children;
  j["events"] = info.events;
  j["termination"] = info.termination ? json(std::string(to_string(*info.termination))) : json(nullptr);
  j["total_hypervolume"] = info.total_hypervolume ? json(*info.total_hypervolume) : json(nullptr);
  if (info.stats) {
    j["oracle_calls"] = info.stats->oracle_calls;
  }
  if (!info.error.empty()) {
    j["error"] = info.error;
  }
  return j;
}

inline auto archive_to_json(const ParetoArchive& archive) -> json {
  json points = json::array();
  for (const auto& [p, sol] : archive.entries()) {
    json entry{{"f1", p.f1}, {"f2", p.f2}};
    std::vector<int> r;
    std::vector<int> s;
    for (std::size_t i = 0; i < sol.r.size(); ++i) {
      if (sol.r[i] != 0) r.push_back(static_cast<int>(i + 1));
    }
    for (std::size_t i = 0; i < sol.s.size(); ++i) {
      if (sol.s[i] != 0) s.push_back(static_cast<int>(i + 1));
    }
    entry["requirements"] = r;
    entry["stakeholders"] = s;
    points.push_back(entry);
  }
  return points;
}

inline auto sse_frame(const std::string& event, const std::string& data, std::optional<std::size_t> id = {})
    -> std::string {
  std::string out;
  if (id) out += "id: " + std::to_string(*id) + "\n";
  out += "event: " + event + "\ndata: " + data + "\n\n";
  return out;
}

}  // namespace http_detail

/// Registers the run-service endpoints on `server`.
inline void mount_service(httplib::Server& server, RunService& service) {
  using http_detail::guarded;
  using http_detail::json;
  using http_detail::send_json;

  server.Post("/instances", [&service](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      auto doc = http_detail::parse_body(req);
      Instance inst;
      if (doc.contains("text")) {
        auto format = doc.value("format", std::string("classic"));
        auto name = doc.value("name", std::string("uploaded"));
        if (format == "classic") {
          inst = parse_classic(doc.at("text").get<std::string>(), name);
        } else if (format == "realistic") {
          inst = parse_realistic(doc.at("text").get<std::string>(), name);
        } else {
          throw Error(ErrorKind::malformed_format, "unknown format '" + format + "'");
        }
      } else {
        inst = instance_from_json(doc);
      }
      auto id = service.add_instance(inst);
      send_json(res, {{"id", id}, {"name", inst.name}}, 201);
    });
  });

  server.Get("/instances", [&service](const httplib::Request&, httplib::Response& res) {
    json out = json::array();
    for (const auto& [id, inst] : service.instances()) {
      out.push_back({{"id", id}, {"name", inst.name}, {"requirements", inst.num_requirements()},
                     {"stakeholders", inst.num_stakeholders()}});
    }
    send_json(res, out);
  });

  server.Get(R"(/instances/([^/]+))", [&service](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] { send_json(res, to_json(service.instance(req.matches[1]))); });
  });

  server.Post("/runs", [&service](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      auto doc = http_detail::parse_body(req);
      if (!doc.contains("instance") || !doc.at("instance").is_string()) {
        throw Error(ErrorKind::invalid_config, "missing instance id");
      }
      auto config = http_detail::config_from_json(doc);
      auto id = service.create_run(doc.at("instance").get<std::string>(), config);
      send_json(res, http_detail::info_to_json(service.info(id)), 201);
    });
  });

  server.Get("/runs", [&service](const httplib::Request&, httplib::Response& res) {
    json out = json::array();
    for (const auto& id : service.run_ids()) {
      out.push_back(http_detail::info_to_json(service.info(id)));
    }
    send_json(res, out);
  });

  server.Get(R"(/runs/([^/]+))", [&service](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] { send_json(res, http_detail::info_to_json(service.info(req.matches[1]))); });
  });

  server.Get(R"(/runs/([^/]+)/events)", [&service](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      std::string id = req.matches[1];
      (void)service.info(id);  // unknown-run before any streaming starts
      std::size_t from = 0;
      if (req.has_header("Last-Event-ID")) {
        from = std::stoul(req.get_header_value("Last-Event-ID")) + 1;
      } else if (req.has_param("from")) {
        from = std::stoul(req.get_param_value("from"));
      }
      res.set_header("Cache-Control", "no-cache");
      res.set_chunked_content_provider("text/event-stream", [&service, id, from](std::size_t, httplib::DataSink& sink) {
        auto total = service.info(id).total_hypervolume;
        service.stream_events(
            id,
            [&](const RunEvent& e, std::size_t index) {
              auto frame = http_detail::sse_frame("point", event_to_json(e, index, total).dump(), index);
              return sink.is_writable() && sink.write(frame.data(), frame.size());
            },
            from);
        auto info = service.info(id);
        json end{{"status", std::string(to_string(info.status))}, {"events", info.events}};
        if (is_terminal(info.status)) {
          auto frame = http_detail::sse_frame("end", end.dump());
          sink.write(frame.data(), frame.size());
        }
        sink.done();
        return true;
      });
    });
  });

  server.Post(R"(/runs/([^/]+)/control)", [&service](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      auto doc = http_detail::parse_body(req);
      auto action = parse_control_action(doc.value("action", std::string()));
      auto status = service.control(req.matches[1], action);
      send_json(res, {{"id", std::string(req.matches[1])}, {"status", std::string(to_string(status))}});
    });
  });

  server.Post(R"(/runs/([^/]+)/whatif)", [&service](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      std::string id = req.matches[1];
      auto doc = http_detail::parse_body(req);
      auto edit = http_detail::edit_from_json(doc);
      std::optional<RunConfig> config;
      if (doc.contains("config")) {
        config = http_detail::config_from_json(doc.at("config"), service.info(id).config);
      }
      auto child = service.whatif_fork(id, edit, config);
      send_json(res, http_detail::info_to_json(service.info(child)), 201);
    });
  });

  server.Get(R"(/runs/([^/]+)/archive)", [&service](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      std::string id = req.matches[1];
      auto info = service.info(id);
      send_json(res, {{"id", id},
                      {"status", std::string(to_string(info.status))},
                      {"points", http_detail::archive_to_json(service.archive(id))}});
    });
  });
}

}  // namespace nrp

#endif  // NRP_HTTP_SERVICE_HPP
