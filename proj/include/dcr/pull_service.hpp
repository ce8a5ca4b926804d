#pragma once

#include <iosfwd>
#include <map>
#include <memory>
#include <string>

#include "dcr/audit.hpp"
#include "dcr/mrer/template.hpp"
#include "dcr/roles.hpp"
#include "dcr/warehouse.hpp"

namespace httplib {
class Server;
}

namespace dcr {

struct ServiceConfig {
  std::map<std::string, Role> tokens;  // bearer token -> role
  std::string operator_token;          // grants /audit only
};

// Parses the tokens file: {"operator_token": "...", "tokens": [{token, role_id,
// kind, jurisdiction?, lei?}, ...]}. Clearance follows from the kind.
ServiceConfig load_service_config(std::istream& in);

// Regulator-facing read-only HTTP surface over the warehouse:
//   GET /head
//   GET /reports/{template_id}?scope_level=&scope_key=&as_of=
//   GET /records?scope_level=&scope_key=&as_of=
//   GET /audit            (operator token only)
// Every request appends exactly one audit entry before the response is sent.
class PullService {
 public:
  PullService(const Warehouse& warehouse, std::map<std::string, mrer::ReportTemplate> templates,
              ServiceConfig config);
  ~PullService();

  // Registers all routes on the given server.
  void attach(httplib::Server& server);

  // Convenience: serve on host:port (blocking). Returns false if binding fails.
  bool listen(const std::string& host, int port);
  void stop();

  const AuditLog& audit() const { return audit_; }

 private:
  struct Impl;

  const Warehouse& warehouse_;
  std::map<std::string, mrer::ReportTemplate> templates_;
  ServiceConfig config_;
  AuditLog audit_;
  std::unique_ptr<Impl> impl_;
};

}  // namespace dcr
