#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <sstream>

#include "dcr/errors.hpp"
#include "dcr/roles.hpp"

using namespace dcr;

namespace {

const std::string kDkLei = "5299DKBANKA000000001";
const std::string kDeLei = "5299DEBANKB000000002";

registry::Registry two_jurisdictions() {
  registry::Registry reg;
  for (auto [lei, jurisdiction] : {std::pair{kDkLei, "DK"}, std::pair{kDeLei, "DE"}}) {
    registry::InstitutionRecord record;
    record.lei = lei;
    record.name = "Bank";
    record.jurisdiction = jurisdiction;
    record.authority_id = std::string("NCA-") + jurisdiction;
    record.capital_figures.push_back(registry::CapitalFigures{1, 1, 1, 0});
    reg.register_institution(std::move(record));
  }
  return reg;
}

Role make_role(RoleKind kind, const std::string& jurisdiction) {
  Role role;
  role.role_id = to_string(kind) + "-" + jurisdiction;
  role.kind = kind;
  role.jurisdiction = jurisdiction;
  if (kind == RoleKind::bank) role.lei = jurisdiction == "DK" ? kDkLei : kDeLei;
  role.clearance = default_clearance(kind);
  return role;
}

}  // namespace

TEST_CASE("default clearance follows the role kind") {
  CHECK(default_clearance(RoleKind::bank) == Clearance::granular_own);
  CHECK(default_clearance(RoleKind::nca) == Clearance::granular_jurisdiction);
  CHECK(default_clearance(RoleKind::ncb) == Clearance::granular_jurisdiction);
  CHECK(default_clearance(RoleKind::nra) == Clearance::granular_jurisdiction);
  CHECK(default_clearance(RoleKind::eba) == Clearance::aggregate_all);
  CHECK(default_clearance(RoleKind::ecb) == Clearance::aggregate_all);
  CHECK(default_clearance(RoleKind::srb) == Clearance::aggregate_all);
}

TEST_CASE("full role-kind x endpoint x scope-level x jurisdiction matrix") {
  auto reg = two_jurisdictions();
  Policy policy = Policy::defaults();

  // Hand-written policy table, row by row. "same" means the scope belongs to
  // the role's own jurisdiction (or for LOCAL, to the bank itself where noted).
  struct Expectation {
    RoleKind kind;
    Endpoint endpoint;
    Scope::Level level;
    bool same;      // scope in own jurisdiction / own lei
    bool allowed;
  };
  const Expectation table[] = {
      // head is open to everyone everywhere
      {RoleKind::bank, Endpoint::head, Scope::Level::local, true, true},
      {RoleKind::bank, Endpoint::head, Scope::Level::local, false, true},
      {RoleKind::bank, Endpoint::head, Scope::Level::national, true, true},
      {RoleKind::bank, Endpoint::head, Scope::Level::national, false, true},
      {RoleKind::bank, Endpoint::head, Scope::Level::supranational, true, true},
      {RoleKind::nca, Endpoint::head, Scope::Level::supranational, true, true},
      {RoleKind::eba, Endpoint::head, Scope::Level::local, false, true},

      // banks: own LOCAL reports/records only
      {RoleKind::bank, Endpoint::reports, Scope::Level::local, true, true},
      {RoleKind::bank, Endpoint::reports, Scope::Level::local, false, false},
      {RoleKind::bank, Endpoint::reports, Scope::Level::national, true, false},
      {RoleKind::bank, Endpoint::reports, Scope::Level::supranational, true, false},
      {RoleKind::bank, Endpoint::records, Scope::Level::local, true, true},
      {RoleKind::bank, Endpoint::records, Scope::Level::local, false, false},
      {RoleKind::bank, Endpoint::records, Scope::Level::national, true, false},

      // national authorities: LOCAL + NATIONAL in their jurisdiction
      {RoleKind::nca, Endpoint::reports, Scope::Level::local, true, true},
      {RoleKind::nca, Endpoint::reports, Scope::Level::local, false, false},
      {RoleKind::nca, Endpoint::reports, Scope::Level::national, true, true},
      {RoleKind::nca, Endpoint::reports, Scope::Level::national, false, false},
      {RoleKind::nca, Endpoint::reports, Scope::Level::supranational, true, false},
      {RoleKind::nca, Endpoint::records, Scope::Level::local, true, true},
      {RoleKind::nca, Endpoint::records, Scope::Level::local, false, false},
      {RoleKind::nca, Endpoint::records, Scope::Level::national, true, true},
      {RoleKind::nca, Endpoint::records, Scope::Level::national, false, false},
      {RoleKind::nca, Endpoint::records, Scope::Level::supranational, true, false},

      // supranational authorities: aggregate reports only, never records
      {RoleKind::eba, Endpoint::reports, Scope::Level::local, true, false},
      {RoleKind::eba, Endpoint::reports, Scope::Level::local, false, false},
      {RoleKind::eba, Endpoint::reports, Scope::Level::national, true, true},
      {RoleKind::eba, Endpoint::reports, Scope::Level::national, false, true},
      {RoleKind::eba, Endpoint::reports, Scope::Level::supranational, true, true},
      {RoleKind::eba, Endpoint::records, Scope::Level::local, true, false},
      {RoleKind::eba, Endpoint::records, Scope::Level::national, true, false},
      {RoleKind::eba, Endpoint::records, Scope::Level::supranational, true, false},

      // audit endpoint is out of band for every role
      {RoleKind::bank, Endpoint::audit, Scope::Level::supranational, true, false},
      {RoleKind::nca, Endpoint::audit, Scope::Level::supranational, true, false},
      {RoleKind::eba, Endpoint::audit, Scope::Level::supranational, true, false},
  };

  // NCB and NRA share NCA's rows; ECB and SRB share EBA's rows. Expand the
  // table across the equivalent kinds so all 7 kinds are exercised.
  auto equivalents = [](RoleKind kind) -> std::vector<RoleKind> {
    switch (kind) {
      case RoleKind::nca: return {RoleKind::nca, RoleKind::ncb, RoleKind::nra};
      case RoleKind::eba: return {RoleKind::eba, RoleKind::ecb, RoleKind::srb};
      default: return {kind};
    }
  };

  int cases = 0;
  for (const auto& expectation : table) {
    for (RoleKind kind : equivalents(expectation.kind)) {
      Role role = make_role(kind, "DK");
      Scope scope;
      switch (expectation.level) {
        case Scope::Level::local:
          scope = Scope::local(expectation.same ? kDkLei : kDeLei);
          break;
        case Scope::Level::national:
          scope = Scope::national(expectation.same ? "DK" : "DE");
          break;
        case Scope::Level::supranational:
          scope = Scope::supranational();
          break;
      }
      CHECK_MESSAGE(policy.allows(role, expectation.endpoint, scope, reg) == expectation.allowed,
                    to_string(kind), " ", to_string(expectation.endpoint), " ",
                    to_string(scope), expectation.same ? " same" : " other");
      ++cases;
    }
  }
  CHECK(cases >= 7 * 3 * 3 * 2 / 2);  // well past the enumerated minimum rows
}

TEST_CASE("lei_in_clearance") {
  auto reg = two_jurisdictions();
  Role bank = make_role(RoleKind::bank, "DK");
  CHECK(bank.lei_in_clearance(kDkLei, reg));
  CHECK_FALSE(bank.lei_in_clearance(kDeLei, reg));
  Role nca = make_role(RoleKind::nca, "DK");
  CHECK(nca.lei_in_clearance(kDkLei, reg));
  CHECK_FALSE(nca.lei_in_clearance(kDeLei, reg));
  Role eba = make_role(RoleKind::eba, "DK");
  CHECK_FALSE(eba.lei_in_clearance(kDkLei, reg));  // aggregate-only clearance
}

TEST_CASE("policy save/load round trip preserves every decision") {
  auto reg = two_jurisdictions();
  Policy policy = Policy::defaults();
  std::stringstream buffer;
  policy.save(buffer);
  Policy loaded = Policy::load(buffer);
  for (RoleKind kind : {RoleKind::bank, RoleKind::nca, RoleKind::ncb, RoleKind::nra, RoleKind::eba,
                        RoleKind::ecb, RoleKind::srb})
    for (Endpoint endpoint : {Endpoint::head, Endpoint::reports, Endpoint::records, Endpoint::audit})
      for (const Scope& scope : {Scope::local(kDkLei), Scope::local(kDeLei), Scope::national("DK"),
                                 Scope::national("DE"), Scope::supranational()}) {
        Role role = make_role(kind, "DK");
        CHECK(policy.allows(role, endpoint, scope, reg) ==
              loaded.allows(role, endpoint, scope, reg));
      }
}

TEST_CASE("shipped policy file equals the built-in defaults") {
  auto reg = two_jurisdictions();
  std::ifstream in(std::string(CONFIG_DIR) + "/policy.json");
  REQUIRE(in.good());
  Policy shipped = Policy::load(in);
  Policy defaults = Policy::defaults();
  for (RoleKind kind : {RoleKind::bank, RoleKind::nca, RoleKind::ncb, RoleKind::nra, RoleKind::eba,
                        RoleKind::ecb, RoleKind::srb})
    for (Endpoint endpoint : {Endpoint::head, Endpoint::reports, Endpoint::records, Endpoint::audit})
      for (const Scope& scope : {Scope::local(kDkLei), Scope::local(kDeLei), Scope::national("DK"),
                                 Scope::national("DE"), Scope::supranational()}) {
        Role role = make_role(kind, "DK");
        CHECK(shipped.allows(role, endpoint, scope, reg) ==
              defaults.allows(role, endpoint, scope, reg));
      }
}
