#include <gtest/gtest.h>

#include <algorithm>

#include <json.hpp>

#include "catdel/error.hpp"
#include "catdel/generators.hpp"
#include "catdel/io.hpp"
#include "catdel/syntax.hpp"
#include "test_support.hpp"

using namespace catdel;
using nlohmann::json;
using testing_support::fixture;

namespace {

ErrorKind load_error(const std::string& text, std::string* message = nullptr) {
  try {
    load_document(text);
  } catch (const Error& e) {
    if (message) *message = e.what();
    return e.kind();
  }
  ADD_FAILURE() << "document loaded: " << text;
  return ErrorKind::NotReducible;
}

// Pair lists are sets; their order is not part of the content.
json normalized(json j) {
  if (j.is_object()) {
    for (auto& [k, v] : j.items()) v = normalized(v);
  } else if (j.is_array()) {
    bool pairs = !j.empty();
    for (auto& v : j) {
      v = normalized(v);
      pairs = pairs && v.is_array();
    }
    if (pairs) std::sort(j.begin(), j.end());
  }
  return j;
}

const char* kOneWorld = R"({"format_version": 1, "kind": "kripke-model", "worlds": ["w"],
  "agents": ["a"], "relations": {"a": [["w", "w"]]}, "valuation": {"p": ["w"]}})";

}  // namespace

TEST(Io, MinimalModelLoads) {
  const KripkeModel m = std::get<KripkeModel>(load_document(kOneWorld));
  EXPECT_EQ(m.carrier().elements(), (std::vector<std::string>{"w"}));
  EXPECT_TRUE(m.frame().rel("a").contains(0, 0));
  EXPECT_TRUE(m.atom("p").contains("w"));
}

TEST(Io, ValuationOutsideCarrier) {
  json doc = json::parse(kOneWorld);
  doc["valuation"]["p"] = {"w", "nowhere"};
  std::string msg;
  EXPECT_EQ(load_error(doc.dump(), &msg), ErrorKind::InvariantViolation);
  EXPECT_NE(msg.find("nowhere"), std::string::npos) << msg;
}

TEST(Io, SchemaErrors) {
  EXPECT_EQ(load_error("not json"), ErrorKind::SchemaError);
  EXPECT_EQ(load_error("[]"), ErrorKind::SchemaError);
  json doc = json::parse(kOneWorld);
  doc["format_version"] = 2;
  EXPECT_EQ(load_error(doc.dump()), ErrorKind::SchemaError);
  doc = json::parse(kOneWorld);
  doc["kind"] = "teapot";
  EXPECT_EQ(load_error(doc.dump()), ErrorKind::SchemaError);
  doc = json::parse(kOneWorld);
  doc.erase("worlds");
  EXPECT_EQ(load_error(doc.dump()), ErrorKind::SchemaError);
  doc = json::parse(kOneWorld);
  doc["relations"]["a"] = {{"w"}};
  EXPECT_EQ(load_error(doc.dump()), ErrorKind::SchemaError);
  doc = json::parse(kOneWorld);
  doc["worlds"] = {"w", "w"};
  EXPECT_NE(load_error(doc.dump()), ErrorKind::NotReducible);
  try {
    load_file(fixture("does_not_exist.json"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SchemaError);
  }
}

TEST(Io, RelationForUnknownAgent) {
  json doc = json::parse(kOneWorld);
  doc["relations"]["zz"] = json::array();
  std::string msg;
  load_error(doc.dump(), &msg);
  EXPECT_NE(msg.find("zz"), std::string::npos) << msg;
}

TEST(Io, BadPrecondition) {
  json doc = json::parse(read_file(fixture("private_announcement.json")));
  doc["preconditions"]["ep"] = "p &";
  EXPECT_EQ(load_error(doc.dump()), ErrorKind::ParseError);
  doc["preconditions"].erase("ep");
  EXPECT_NE(load_error(doc.dump()), ErrorKind::NotReducible);
}

TEST(Io, NotASheafIsRejectedWithWitness) {
  std::string msg;
  EXPECT_EQ(load_error(read_file(fixture("not_a_sheaf.json")), &msg), ErrorKind::InvariantViolation);
  EXPECT_NE(msg.find("sheaf condition"), std::string::npos) << msg;
  EXPECT_NE(msg.find("d1"), std::string::npos) << msg;
}

TEST(Io, ConstantDomainLoadsAsSheaf) {
  const SheafModel m = testing_support::sheaf_fixture("constant_domain.json");
  EXPECT_TRUE(is_kripke_sheaf(m.sheaf().proj()).ok());
  EXPECT_EQ(m.signature().functions.at("c"), 0u);
  EXPECT_EQ(m.signature().relations.at("G"), 2u);
}

TEST(Io, FixturesRoundTrip) {
  for (const char* name : {"two_worlds.json", "muddy_children.json", "private_announcement.json",
                           "trivial_event.json", "announce_p.json", "constant_domain.json"}) {
    const Document d = load_file(fixture(name));
    const std::string once = std::visit(
        [](const auto& x) -> std::string {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, KripkeModel>) return dump_model(x);
          else if constexpr (std::is_same_v<T, EventModel>) return dump_event_model(x);
          else return dump_sheaf_model(x);
        },
        d);
    const Document again = load_document(once);
    const std::string twice = std::visit(
        [](const auto& x) -> std::string {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, KripkeModel>) return dump_model(x);
          else if constexpr (std::is_same_v<T, EventModel>) return dump_event_model(x);
          else return dump_sheaf_model(x);
        },
        again);
    EXPECT_EQ(json::parse(once), json::parse(twice)) << name;
    // Dumped fixtures carry the same content as the hand-written files, up to key order,
    // pair order and the optional name.
    const json src = normalized(json::parse(read_file(fixture(name))));
    const json out = normalized(json::parse(once));
    for (auto& [k, v] : src.items()) EXPECT_EQ(out.at(k), v) << name << " key " << k;
  }
}

TEST(Io, RandomModelsRoundTrip) {
  Rng rng(111);
  for (int i = 0; i < 100; ++i) {
    const KripkeModel m = random_model(rng, ModelShape{});
    const KripkeModel back = load_kripke_model(dump_model(m));
    ASSERT_EQ(back.frame(), m.frame());
    ASSERT_EQ(back.valuation().size(), m.valuation().size());
    for (const auto& [p, s] : m.valuation()) ASSERT_EQ(back.atom(p), s);

    const EventModel em = random_event_model(rng, "E", m.agents(), 3, {"p", "q"}, 2);
    const EventModel eb = load_event_model(dump_event_model(em));
    ASSERT_EQ(eb.frame(), em.frame());
    for (std::size_t e = 0; e < em.events().size(); ++e) ASSERT_EQ(eb.pre(e), em.pre(e));

    const SheafModel sm = random_sheaf_model(rng, SheafShape{});
    const SheafModel sb = load_sheaf_model(dump_sheaf_model(sm));
    ASSERT_EQ(sb.sheaf().proj().fn(), sm.sheaf().proj().fn());
    ASSERT_EQ(sb.sheaf().total(), sm.sheaf().total());
    for (const auto& [f, interp] : sm.functions()) ASSERT_EQ(sb.functions().at(f).table, interp.table);
    for (const auto& [r, s] : sm.relations()) ASSERT_EQ(sb.relations().at(r).bits(), s.bits());
  }
}

TEST(Io, UpdateDumpUsesCompositeLabels) {
  const KripkeModel m = testing_support::kripke_fixture("two_worlds.json");
  const UpdateResult u = product_update(m, testing_support::event_fixture("private_announcement.json"));
  const json plain = json::parse(dump_update(u, std::nullopt));
  EXPECT_EQ(plain["kind"], "kripke-model");
  EXPECT_EQ(plain["worlds"], json({"(w1,ep)", "(w1,et)", "(w2,et)"}));
  const json with_event = json::parse(dump_update(u, std::string("ep")));
  EXPECT_EQ(with_event["kind"], "update-result");
  EXPECT_EQ(with_event["updated"], plain);
  // The updated model inside an update-result reloads.
  EXPECT_NO_THROW(load_kripke_model(with_event["updated"].dump()));
}

TEST(Io, KindMismatch) {
  EXPECT_THROW(load_event_model(kOneWorld), Error);
  EXPECT_THROW(load_sheaf_model(kOneWorld), Error);
}

TEST(Io, Dot) {
  const KripkeModel m = testing_support::kripke_fixture("two_worlds.json");
  const std::string dot = frame_to_dot(m.frame(), m.valuation());
  EXPECT_EQ(dot.rfind("digraph", 0), 0u);
  EXPECT_NE(dot.find("w1"), std::string::npos);
  EXPECT_NE(dot.find("->"), std::string::npos);
}
