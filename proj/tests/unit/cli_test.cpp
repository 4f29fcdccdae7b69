#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "catdel/io.hpp"
#include "test_support.hpp"

using nlohmann::json;
using testing_support::fixture;

namespace {

struct CliRun {
  int code = -1;
  std::string out;
};

std::string quote(const std::string& s) {
  std::string q = "'";
  for (char c : s) q += c == '\'' ? std::string("'\\''") : std::string(1, c);
  return q + "'";
}

// Runs the CLI with stderr folded into stdout.
CliRun cli(const std::vector<std::string>& args) {
  std::string cmd = quote(CATDEL_CLI);
  for (const auto& a : args) cmd += " " + quote(a);
  cmd += " 2>&1";
  CliRun r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf;
  while (std::size_t n = fread(buf.data(), 1, buf.size(), p)) r.out.append(buf.data(), n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string golden(const std::string& name) {
  return catdel::read_file(std::string(CATDEL_GOLDEN) + "/" + name);
}

const std::string kNeitherKnows = "~([a]ma | [a]~ma) & ~([b]mb | [b]~mb)";

}  // namespace

TEST(Cli, EvalTrueIsCarrier) {
  const CliRun r = cli({"eval", fixture("muddy_children.json"), "true"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "{cc, cm, mc, mm}\n");
}

TEST(Cli, EvalMuddyChildren) {
  const CliRun r = cli({"eval", fixture("muddy_children.json"),
                     "<!(ma | mb)><!(" + kNeitherKnows + ")>([a]ma & [b]mb)"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "{mm}\n");
  const CliRun w = cli({"eval", fixture("muddy_children.json"),
                     "[!(ma | mb)][!(" + kNeitherKnows + ")]([a]ma & [b]mb)", "--world", "mm"});
  EXPECT_EQ(w.out, "true\n");
}

TEST(Cli, EvalWithEvents) {
  const CliRun r = cli({"--events", fixture("private_announcement.json"), "eval", fixture("two_worlds.json"),
                     "[E,ep][b]p"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "{w2}\n");
  const CliRun j = cli({"--format", "json", "--events", fixture("private_announcement.json"), "eval",
                     fixture("two_worlds.json"), "<E,ep>[a]p"});
  EXPECT_EQ(j.code, 0);
  EXPECT_EQ(json::parse(j.out)["extension"], json({"w1"}));
}

TEST(Cli, EvalSheaf) {
  const CliRun r = cli({"eval", fixture("constant_domain.json"), "ctx x, y | G(x, y)"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "{(u1,v1), (u2,u2)}\n");
}

TEST(Cli, UnknownAtom) {
  const CliRun r = cli({"eval", fixture("two_worlds.json"), "zz & p"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("zz"), std::string::npos) << r.out;
}

TEST(Cli, UserErrors) {
  EXPECT_EQ(cli({"eval", fixture("two_worlds.json"), "p &"}).code, 2);
  EXPECT_EQ(cli({"eval", fixture("missing.json"), "p"}).code, 2);
  EXPECT_EQ(cli({"eval"}).code, 2);
  EXPECT_EQ(cli({"frobnicate"}).code, 2);
  EXPECT_EQ(cli({"laws", "--suite", "teapot"}).code, 2);
  const CliRun bad = cli({"eval", fixture("two_worlds.json"), "p", "--world", "w9"});
  EXPECT_EQ(bad.code, 2);
  EXPECT_NE(bad.out.find("w9"), std::string::npos);
}

TEST(Cli, UpdateGoldenPrivateAnnouncement) {
  const CliRun r = cli({"update", fixture("two_worlds.json"), fixture("private_announcement.json"), "--event", "ep"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, golden("private_announcement_update.json"));
}

TEST(Cli, UpdateGoldenSheafAnnouncement) {
  const CliRun r = cli({"update", fixture("constant_domain.json"), fixture("announce_p.json"), "--event", "e"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, golden("constant_domain_announce_p.json"));
}

TEST(Cli, UpdateTrivialIsIsomorphic) {
  const CliRun r = cli({"update", fixture("two_worlds.json"), fixture("trivial_event.json")});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, golden("two_worlds_trivial.json"));
  const catdel::KripkeModel before = testing_support::kripke_fixture("two_worlds.json");
  const catdel::KripkeModel after = catdel::load_kripke_model(r.out);
  ASSERT_EQ(after.carrier().size(), before.carrier().size());
  for (std::size_t a = 0; a < before.agents().size(); ++a)
    EXPECT_EQ(after.frame().rel(a).pairs(), before.frame().rel(a).pairs());
}

TEST(Cli, UpdateOutFileAndDot) {
  const auto dir = std::filesystem::temp_directory_path() / "catdel_cli_test";
  std::filesystem::create_directories(dir);
  const auto out = dir / "updated.json", dot = dir / "updated.dot";
  const CliRun r = cli({"update", fixture("two_worlds.json"), fixture("private_announcement.json"), "--out",
                     out.string(), "--dot", dot.string()});
  EXPECT_EQ(r.code, 0);
  EXPECT_NO_THROW(catdel::load_kripke_model(catdel::read_file(out.string())));
  EXPECT_NE(catdel::read_file(dot.string()).find("digraph"), std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST(Cli, UpdateAgentMismatch) {
  const CliRun r = cli({"update", fixture("two_worlds.json"), fixture("announce_p.json")});
  EXPECT_NE(r.code, 0);
  EXPECT_NE(r.out.find("AgentMismatch"), std::string::npos) << r.out;
}

TEST(Cli, Reduce) {
  const CliRun r = cli({"reduce", fixture("two_worlds.json"), "[! p][a] q"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, golden("reduce_pal_box.txt"));
  const CliRun q = cli({"reduce", fixture("two_worlds.json"), "[! p] q"});
  EXPECT_NE(q.out.find("result: p -> q\n"), std::string::npos) << q.out;
  const CliRun s = cli({"reduce", fixture("two_worlds.json"), "[a]p & q"});
  EXPECT_NE(s.out.find("result: [a]p & q\n"), std::string::npos) << s.out;
}

TEST(Cli, ReduceNotReducible) {
  const CliRun r = cli({"reduce", fixture("two_worlds.json"), "[F,e]p"});
  EXPECT_NE(r.code, 0);
  EXPECT_NE(r.out.find("F"), std::string::npos);
}

TEST(Cli, SheafCheck) {
  EXPECT_EQ(cli({"sheaf-check", fixture("constant_domain.json")}).code, 0);
  const CliRun bad = cli({"sheaf-check", fixture("not_a_sheaf.json")});
  EXPECT_EQ(bad.code, 1);
  EXPECT_EQ(bad.out, golden("not_a_sheaf.txt"));
}

TEST(Cli, Laws) {
  const CliRun r = cli({"laws", "--suite", "duality", "--cases", "50"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("PASS duality: 50 cases, 0 failures", 0), 0u) << r.out;
  const CliRun j = cli({"--format", "json", "laws", "--suite", "rel-laws", "--suite", "sheaf", "--cases", "10",
                     "--seed", "9"});
  EXPECT_EQ(j.code, 0);
  const json rep = json::parse(j.out);
  ASSERT_EQ(rep.size(), 2u);
  EXPECT_EQ(rep[0]["suite"], "rel-laws");
  EXPECT_EQ(rep[1]["suite"], "sheaf");
  EXPECT_TRUE(rep[1]["pass"].get<bool>());
}

TEST(Cli, SelfTestFails) {
  const CliRun r = cli({"laws", "--self-test", "--cases", "5"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("failure:"), std::string::npos);
}
