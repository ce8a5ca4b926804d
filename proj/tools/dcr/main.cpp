// dcr: command-line front end for the distributed compliance reporting stack.
//
// Exit codes: 0 success, 1 operational failure (bad input data, comparison
// mismatch, HTTP error), 2 usage error.

#include <CLI11.hpp>
#include <fstream>
#include <httplib.h>
#include <iostream>
#include <sstream>

#include "dcr/composer.hpp"
#include "dcr/errors.hpp"
#include "dcr/harness/compare.hpp"
#include "dcr/harness/latency.hpp"
#include "dcr/harness/push_oracle.hpp"
#include "dcr/harness/scenario.hpp"
#include "dcr/ledger.hpp"
#include "dcr/pull_service.hpp"
#include "dcr/registry.hpp"
#include "dcr/warehouse.hpp"

namespace {

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw dcr::error(dcr::errc::file_format, "cannot open " + path);
  return in;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw dcr::error(dcr::errc::file_format, "cannot write " + path);
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in = open_input(path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::vector<dcr::mrer::ReportTemplate> load_templates(const std::vector<std::string>& paths) {
  std::vector<dcr::mrer::ReportTemplate> templates;
  for (const auto& path : paths) templates.push_back(dcr::mrer::parse_template(read_file(path)));
  return templates;
}

dcr::Scope make_scope(const std::string& level, const std::string& key) {
  dcr::Scope scope;
  scope.level = dcr::scope_level_from_string(level);
  scope.key = key;
  if ((scope.level == dcr::Scope::Level::supranational) != key.empty())
    throw dcr::error(dcr::errc::file_format,
                     "scope key must be present exactly for LOCAL and NATIONAL scopes");
  return scope;
}

struct ScenarioFlags {
  dcr::harness::ScenarioParams params;

  void attach(CLI::App& cmd) {
    cmd.add_option("--seed", params.seed, "deterministic scenario seed");
    cmd.add_option("--banks", params.n_banks, "number of institutions");
    cmd.add_option("--jurisdictions", params.n_jurisdictions, "number of jurisdictions");
    cmd.add_option("--assets", params.n_assets, "number of asset classes");
    cmd.add_option("--blocks", params.n_blocks, "chain length in blocks");
    cmd.add_option("--txs-per-block", params.txs_per_block, "transactions per block");
    cmd.add_option("--period", params.reporting_period_blocks, "reporting period in blocks");
  }
};

int cmd_generate(const ScenarioFlags& flags, const std::string& events_out,
                 const std::string& registry_out) {
  dcr::harness::Scenario scenario = dcr::harness::generate_scenario(flags.params);
  auto events = open_output(events_out);
  scenario.chain.export_events(events);
  auto registry = open_output(registry_out);
  scenario.registry.save(registry);
  std::cout << "wrote " << scenario.chain.events().size() << " events ("
            << scenario.chain.head_height() + 1 << " blocks) to " << events_out << "\n"
            << "wrote registry to " << registry_out << "\n";
  return 0;
}

int cmd_run_composer(const std::string& events_path, const std::string& registry_path,
                     const std::string& warehouse_out, bool strict, std::size_t batch_size) {
  auto events = open_input(events_path);
  dcr::ledger::Ledger chain = dcr::ledger::replay_event_log(events);
  auto registry_in = open_input(registry_path);
  dcr::registry::Registry registry = dcr::registry::Registry::load(registry_in);

  dcr::Warehouse warehouse(registry, dcr::Policy::defaults(), dcr::MaskingPolicy{});
  dcr::Composer::Options options;
  options.strict_unclassified = strict;
  dcr::Composer composer(chain, registry, warehouse, options);
  std::size_t appended = composer.run_to_head(batch_size);

  auto out = open_output(warehouse_out);
  warehouse.save(out);
  std::cout << "enriched " << appended << " records up to height " << warehouse.head_height()
            << ", saved to " << warehouse_out << "\n";
  return 0;
}

int cmd_serve(const std::string& events_path, const std::string& registry_path,
              const std::vector<std::string>& template_paths, const std::string& tokens_path,
              const std::string& policy_path, const std::string& host, int port) {
  auto events = open_input(events_path);
  dcr::ledger::Ledger chain = dcr::ledger::replay_event_log(events);
  auto registry_in = open_input(registry_path);
  dcr::registry::Registry registry = dcr::registry::Registry::load(registry_in);

  dcr::Policy policy = dcr::Policy::defaults();
  if (!policy_path.empty()) {
    auto policy_in = open_input(policy_path);
    policy = dcr::Policy::load(policy_in);
  }
  auto tokens_in = open_input(tokens_path);
  dcr::ServiceConfig config = dcr::load_service_config(tokens_in);

  dcr::Warehouse warehouse(registry, std::move(policy), dcr::MaskingPolicy{});
  dcr::Composer composer(chain, registry, warehouse);
  composer.run_to_head();

  std::map<std::string, dcr::mrer::ReportTemplate> templates;
  for (auto& tmpl : load_templates(template_paths)) {
    std::string id = tmpl.template_id;
    templates.emplace(std::move(id), std::move(tmpl));
  }

  dcr::PullService service(warehouse, std::move(templates), std::move(config));
  std::cout << "serving " << warehouse.record_count() << " records at head "
            << warehouse.head_height() << " on " << host << ":" << port << "\n";
  if (!service.listen(host, port)) {
    std::cerr << "failed to bind " << host << ":" << port << "\n";
    return 1;
  }
  return 0;
}

int cmd_pull(const std::string& host, int port, const std::string& token, const std::string& path) {
  httplib::Client client(host, port);
  httplib::Headers headers{{"Authorization", "Bearer " + token}};
  auto result = client.Get(path, headers);
  if (!result) {
    std::cerr << "request failed: " << httplib::to_string(result.error()) << "\n";
    return 1;
  }
  std::cout << result->body << "\n";
  return result->status == 200 ? 0 : 1;
}

int cmd_oracle(const std::string& events_path, const std::string& registry_path,
               const std::string& template_path, const std::string& level, const std::string& key,
               std::int64_t period_end) {
  auto events = open_input(events_path);
  auto registry_in = open_input(registry_path);
  dcr::harness::PushOracle oracle(events, registry_in);
  dcr::mrer::ReportTemplate tmpl = dcr::mrer::parse_template(read_file(template_path));
  dcr::Scope scope = make_scope(level, key);
  auto instance = oracle.report(tmpl, scope, period_end);
  std::cout << dcr::mrer::serialize_instance(instance) << "\n";
  return 0;
}

int cmd_compare(const ScenarioFlags& flags, const std::vector<std::string>& template_paths,
                int inject_drop_every) {
  dcr::Composer::Options options;
  options.drop_every_nth = inject_drop_every;
  auto report =
      dcr::harness::run_equivalence(flags.params, load_templates(template_paths), options);
  std::cout << dcr::harness::to_json(report) << "\n";
  return report.equivalent() ? 0 : 1;
}

int cmd_latency(const ScenarioFlags& flags) {
  auto report = dcr::harness::run_latency(flags.params);
  std::cout << dcr::harness::to_json(report) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"distributed compliance reporting toolkit"};
  app.require_subcommand(1);

  // generate
  auto* generate = app.add_subcommand("generate", "emit a deterministic synthetic scenario");
  ScenarioFlags generate_flags;
  generate_flags.attach(*generate);
  std::string events_out = "events.ndjson";
  std::string registry_out = "registry.json";
  generate->add_option("--events-out", events_out, "event-log output path");
  generate->add_option("--registry-out", registry_out, "registry output path");

  // run-composer
  auto* run_composer =
      app.add_subcommand("run-composer", "enrich an event log into a warehouse snapshot");
  std::string events_path, registry_path, warehouse_out = "warehouse.dat";
  bool strict = false;
  std::size_t batch_size = SIZE_MAX;
  run_composer->add_option("--events", events_path, "event-log path")->required();
  run_composer->add_option("--registry", registry_path, "registry path")->required();
  run_composer->add_option("--warehouse-out", warehouse_out, "warehouse snapshot output path");
  run_composer->add_flag("--strict", strict, "fail on unclassified assets");
  run_composer->add_option("--batch-size", batch_size, "events per atomic batch");

  // serve
  auto* serve = app.add_subcommand("serve", "expose the pull API over HTTP");
  std::string serve_events, serve_registry, tokens_path, policy_path;
  std::vector<std::string> serve_templates;
  std::string host = "127.0.0.1";
  int port = 8080;
  serve->add_option("--events", serve_events, "event-log path")->required();
  serve->add_option("--registry", serve_registry, "registry path")->required();
  serve->add_option("--template", serve_templates, "template file (repeatable)")->required();
  serve->add_option("--tokens", tokens_path, "tokens config path")->required();
  serve->add_option("--policy", policy_path, "policy file (defaults built in)");
  serve->add_option("--host", host, "bind host");
  serve->add_option("--port", port, "bind port");

  // pull
  auto* pull = app.add_subcommand("pull", "issue one authenticated GET against a running service");
  std::string pull_host = "127.0.0.1", pull_token, pull_path;
  int pull_port = 8080;
  pull->add_option("--host", pull_host, "service host");
  pull->add_option("--port", pull_port, "service port");
  pull->add_option("--token", pull_token, "bearer token")->required();
  pull->add_option("--path", pull_path, "request path with query string")->required();

  // oracle
  auto* oracle = app.add_subcommand("oracle", "run the batch-submission oracle over exports");
  std::string oracle_events, oracle_registry, oracle_template, oracle_level = "SUPRANATIONAL",
                                                               oracle_key;
  std::int64_t period_end = 0;
  oracle->add_option("--events", oracle_events, "event-log path")->required();
  oracle->add_option("--registry", oracle_registry, "registry path")->required();
  oracle->add_option("--template", oracle_template, "template file")->required();
  oracle->add_option("--scope-level", oracle_level, "LOCAL | NATIONAL | SUPRANATIONAL");
  oracle->add_option("--scope-key", oracle_key, "lei or jurisdiction");
  oracle->add_option("--period-end", period_end, "period-end height")->required();

  // compare
  auto* compare = app.add_subcommand(
      "compare", "check pull-model reports against the batch oracle for one seed");
  ScenarioFlags compare_flags;
  compare_flags.attach(*compare);
  std::vector<std::string> compare_templates;
  int inject_drop_every = 0;
  compare->add_option("--template", compare_templates, "template file (repeatable)")->required();
  compare->add_option("--inject-drop-every", inject_drop_every,
                      "test fault: drop every Nth enriched record");

  // latency
  auto* latency = app.add_subcommand("latency", "measure reporting lag under both models");
  ScenarioFlags latency_flags;
  latency_flags.attach(*latency);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (generate->parsed()) return cmd_generate(generate_flags, events_out, registry_out);
    if (run_composer->parsed())
      return cmd_run_composer(events_path, registry_path, warehouse_out, strict, batch_size);
    if (serve->parsed())
      return cmd_serve(serve_events, serve_registry, serve_templates, tokens_path, policy_path,
                       host, port);
    if (pull->parsed()) return cmd_pull(pull_host, pull_port, pull_token, pull_path);
    if (oracle->parsed())
      return cmd_oracle(oracle_events, oracle_registry, oracle_template, oracle_level, oracle_key,
                        period_end);
    if (compare->parsed())
      return cmd_compare(compare_flags, compare_templates, inject_drop_every);
    if (latency->parsed()) return cmd_latency(latency_flags);
  } catch (const dcr::error& e) {
    std::cerr << "error [" << dcr::errc_name(e.code()) << "]: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
