#include "dcr/pull_service.hpp"

#include <httplib.h>

#include <istream>
#include <nlohmann/json.hpp>

#include "dcr/errors.hpp"

namespace dcr {

using ordered_json = nlohmann::ordered_json;

ServiceConfig load_service_config(std::istream& in) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(in);
    ServiceConfig config;
    config.operator_token = doc.value("operator_token", "");
    for (const auto& j : doc.at("tokens")) {
      Role role;
      role.role_id = j.at("role_id").get<std::string>();
      role.kind = role_kind_from_string(j.at("kind").get<std::string>());
      if (j.contains("jurisdiction") && !j["jurisdiction"].is_null())
        role.jurisdiction = j["jurisdiction"].get<std::string>();
      if (j.contains("lei") && !j["lei"].is_null()) role.lei = j["lei"].get<std::string>();
      role.clearance = default_clearance(role.kind);
      config.tokens.emplace(j.at("token").get<std::string>(), std::move(role));
    }
    return config;
  } catch (const ordered_json::exception& e) {
    throw error(errc::file_format, std::string("tokens: ") + e.what());
  }
}

struct PullService::Impl {
  httplib::Server server;
};

PullService::PullService(const Warehouse& warehouse,
                         std::map<std::string, mrer::ReportTemplate> templates,
                         ServiceConfig config)
    : warehouse_(warehouse),
      templates_(std::move(templates)),
      config_(std::move(config)),
      impl_(std::make_unique<Impl>()) {}

PullService::~PullService() = default;

namespace {

std::string bearer_token(const httplib::Request& req) {
  std::string header = req.get_header_value("Authorization");
  constexpr std::string_view prefix = "Bearer ";
  if (header.rfind(prefix, 0) == 0) return header.substr(prefix.size());
  return {};
}

void respond_error(httplib::Response& res, int status, const std::string& code,
                   const std::string& detail) {
  ordered_json body;
  body["error"] = code;
  body["detail"] = detail;
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

int status_for(errc code) {
  switch (code) {
    case errc::unknown_token: return 401;
    case errc::unauthorized_scope: return 403;
    case errc::unknown_template: return 404;
    case errc::height_beyond_head: return 422;
    default: return 400;
  }
}

std::string query_summary(const httplib::Request& req) {
  std::string out = req.method + " " + req.path;
  bool first = true;
  for (const auto& [key, value] : req.params) {
    out += first ? '?' : '&';
    out += key + "=" + value;
    first = false;
  }
  return out;
}

}  // namespace

void PullService::attach(httplib::Server& server) {
  auto authenticate = [this](const httplib::Request& req) -> Role {
    std::string token = bearer_token(req);
    auto it = config_.tokens.find(token);
    if (token.empty() || it == config_.tokens.end())
      throw error(errc::unknown_token, "unrecognized bearer token");
    return it->second;
  };

  // Runs a handler under uniform auth, audit and error mapping. The audit
  // entry is appended before the response body is released.
  auto guarded = [this, authenticate](const httplib::Request& req, httplib::Response& res,
                                      auto&& handler) {
    std::string role_id;
    try {
      Role role = authenticate(req);
      role_id = role.role_id;
      std::string body = handler(role);
      audit_.append(role_id, query_summary(req), "OK");
      res.status = 200;
      res.set_content(body, "application/json");
    } catch (const error& e) {
      int status = status_for(e.code());
      audit_.append(role_id, query_summary(req),
                    status == 401 || status == 403 ? "DENIED" : "ERROR");
      respond_error(res, status, errc_name(e.code()), e.what());
    } catch (const std::exception& e) {
      audit_.append(role_id, query_summary(req), "ERROR");
      respond_error(res, 400, "BAD_REQUEST", e.what());
    }
  };

  auto parse_scope = [](const httplib::Request& req) -> Scope {
    Scope scope;
    scope.level = scope_level_from_string(req.get_param_value("scope_level"));
    scope.key = req.get_param_value("scope_key");
    if ((scope.level == Scope::Level::supranational) != scope.key.empty())
      throw error(errc::file_format, "scope_key presence must match scope_level");
    return scope;
  };

  // LATEST resolves at request arrival and is echoed back numerically so the
  // exchange is replayable.
  auto parse_as_of = [this](const httplib::Request& req) -> std::int64_t {
    std::string raw = req.get_param_value("as_of");
    if (raw.empty() || raw == "LATEST") return warehouse_.head_height();
    try {
      return std::stoll(raw);
    } catch (const std::exception&) {
      throw error(errc::file_format, "as_of must be an integer or LATEST");
    }
  };

  server.Get("/head", [this, guarded](const httplib::Request& req, httplib::Response& res) {
    guarded(req, res, [this](const Role&) {
      ordered_json body;
      body["head"] = warehouse_.head_height();
      return body.dump();
    });
  });

  server.Get("/reports/([A-Za-z0-9_.-]+)",
             [this, guarded, parse_scope, parse_as_of](const httplib::Request& req,
                                                       httplib::Response& res) {
               guarded(req, res, [&](const Role& role) {
                 const std::string template_id = req.matches[1];
                 auto it = templates_.find(template_id);
                 if (it == templates_.end()) throw error(errc::unknown_template, template_id);
                 Scope scope = parse_scope(req);
                 if (!warehouse_.policy().allows(role, Endpoint::reports, scope,
                                                 warehouse_.registry()))
                   throw error(errc::unauthorized_scope,
                               role.role_id + " may not pull reports at " + to_string(scope));
                 std::int64_t as_of = parse_as_of(req);
                 auto instance = warehouse_.aggregate_report(it->second, scope, as_of);
                 return mrer::serialize_instance(instance);
               });
             });

  server.Get("/records", [this, guarded, parse_scope, parse_as_of](const httplib::Request& req,
                                                                   httplib::Response& res) {
    guarded(req, res, [&](const Role& role) {
      Scope scope = parse_scope(req);
      std::int64_t as_of = parse_as_of(req);
      auto records = warehouse_.query_records(scope, as_of, role);
      ordered_json body;
      body["scope_level"] = to_string(scope.level);
      body["scope_key"] = scope.key;
      body["as_of_height"] = as_of;
      body["records"] = ordered_json::array();
      for (const auto& record : records)
        body["records"].push_back(ordered_json::parse(record.to_json_line()));
      return body.dump();
    });
  });

  server.Get("/audit", [this](const httplib::Request& req, httplib::Response& res) {
    std::string token = bearer_token(req);
    if (config_.operator_token.empty() || token != config_.operator_token) {
      audit_.append("", query_summary(req), "DENIED");
      respond_error(res, 401, "UNKNOWN_TOKEN", "operator token required");
      return;
    }
    ordered_json body = ordered_json::array();
    for (const auto& entry : audit_.snapshot()) {
      body.push_back({{"sequence", entry.sequence},
                      {"wall_time", entry.wall_time},
                      {"role_id", entry.role_id},
                      {"query", entry.query},
                      {"outcome", entry.outcome}});
    }
    audit_.append("operator", query_summary(req), "OK");
    res.status = 200;
    res.set_content(body.dump(), "application/json");
  });
}

bool PullService::listen(const std::string& host, int port) {
  attach(impl_->server);
  return impl_->server.listen(host, port);
}

void PullService::stop() { impl_->server.stop(); }

}  // namespace dcr
