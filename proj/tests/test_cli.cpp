#include "nullcalc/cli.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <array>
#include <cstdio>
#include <string>
#include <sys/wait.h>

using nlohmann::json;

namespace {

struct Proc {
  int code;
  std::string out;
};

// stdout only; stderr merged when asked.
Proc run(const std::string& args, bool merge_err = false, const std::string& env = "") {
  std::string cmd = env + " " + NULLCALC_BIN + " " + args + (merge_err ? " 2>&1" : " 2>/dev/null");
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return {-1, ""};
  std::string out;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) out.append(buf.data(), n);
  int st = pclose(p);
  return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, out};
}

bool contains(const std::string& s, const std::string& x) { return s.find(x) != std::string::npos; }

}  // namespace

TEST(CheckIdentities, DefaultPasses) {
  Proc r = run("--json check-identities");
  ASSERT_EQ(r.code, 0) << r.out;
  json j = json::parse(r.out);
  EXPECT_EQ(j["schema"], "nullcalc/1");
  EXPECT_EQ(j["families"].size(), 14u);
  std::string prev;
  for (const auto& f : j["families"]) {
    EXPECT_TRUE(f["pass"].get<bool>()) << f["name"];
    EXPECT_LT(prev, f["name"].get<std::string>());
    prev = f["name"];
  }
}

TEST(CheckIdentities, ImpossibleToleranceFails) {
  Proc r = run("check-identities --tol 1e-30", true);
  EXPECT_EQ(r.code, 1);
  EXPECT_TRUE(contains(r.out, "first failing identity"));
  EXPECT_TRUE(contains(r.out, "seed 42"));
}

TEST(CheckIdentities, SingleDrawDeterministic) {
  Proc a = run("--json check-identities --trials 1 --seed 7");
  Proc b = run("--json check-identities --trials 1 --seed 7");
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(json::parse(a.out)["trials"], 1);
  Proc env = run("--json check-identities --trials 1", false, "NULLCALC_SEED=7");
  EXPECT_EQ(env.out, a.out);
  Proc other = run("--json check-identities --trials 1 --seed 8");
  EXPECT_NE(other.out, a.out);
}

TEST(CheckIdentities, InvalidConfig) {
  EXPECT_EQ(run("check-identities --trials 0").code, 2);
  EXPECT_EQ(run("check-identities --tol -1").code, 2);
  EXPECT_THROW(nullcalc::cli::validate({42, 0, 1e-10, false, {}, {}}), std::invalid_argument);
}

TEST(Classify, Examples) {
  Proc a = run("classify \"nab4 alpha\"");
  EXPECT_EQ(a.code, 0);
  EXPECT_TRUE(contains(a.out, "signature  3\n")) << a.out;

  Proc b = run("--json classify alpha --norm \"||.||_{L4sc(S)}\"");
  EXPECT_EQ(b.code, 0);
  json j = json::parse(b.out);
  EXPECT_EQ(j["norm"]["anomaly"], "-1/4");
  EXPECT_EQ(j["norm"]["delta_exponent"], "5/4");

  Proc c = run("classify qqq", true);
  EXPECT_EQ(c.code, 2);
  EXPECT_TRUE(contains(c.out, "unknown component at offset 0")) << c.out;
}

TEST(Classify, UndefinedNormExponent) {
  Proc r = run("--json classify alpha --norm \"||.||_{L4sc(H)}\"");
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(json::parse(r.out)["norm"]["delta_exponent"].is_null());
}

TEST(Equations, ListAndCheck) {
  Proc l = run("--json list-equations");
  EXPECT_EQ(l.code, 0);
  EXPECT_EQ(json::parse(l.out)["equations"].size(), 21u);
  Proc one = run("--json list-equations --equation NBE_L_beta");
  EXPECT_EQ(json::parse(one.out)["equations"].size(), 1u);
  Proc c = run("check-equations");
  EXPECT_EQ(c.code, 0);
  EXPECT_TRUE(contains(c.out, "21/21 consistent"));
  EXPECT_EQ(run("list-equations --equation nope").code, 2);
}

TEST(Replay, OutgoingScripted) {
  Proc r = run("replay outgoing --scripted");
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(contains(r.out, "I0")) << r.out;
  Proc j = run("--json replay outgoing");
  json d = json::parse(j.out);
  bool found = false;
  for (const auto& b : d["campaigns"][0]["reports"])
    if (b["term_label"] == "I0") {
      found = true;
      EXPECT_EQ(b["delta_exponent"], "1/2");
      for (const char* k : {"campaign", "term_label", "integrand", "moves", "delta_exponent", "factor_tag", "status", "paper_anchor"})
        EXPECT_TRUE(b.contains(k)) << k;
    }
  EXPECT_TRUE(found);
}

TEST(Replay, IncomingCancels) {
  Proc r = run("--json replay --campaign incoming");
  EXPECT_EQ(r.code, 0);
  json d = json::parse(r.out);
  bool cancels = false;
  for (const auto& b : d["campaigns"][0]["reports"])
    if (b["term_label"] == "J222") cancels = b["status"] == "cancels";
  EXPECT_TRUE(cancels);
}

TEST(Replay, AllAndAuto) {
  EXPECT_EQ(run("replay").code, 0);
  EXPECT_EQ(run("replay --auto nab4_alpha").code, 0);
  EXPECT_EQ(run("replay --auto --scripted nab4_alpha").code, 2);
}

TEST(Replay, BogusCampaign) {
  Proc r = run("replay bogus", true);
  EXPECT_EQ(r.code, 2);
  EXPECT_TRUE(contains(r.out, "usage"));
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("frobnicate").code, 2);
  EXPECT_EQ(run("check-identities --seed notanumber").code, 2);
}

TEST(VerifyCancellation, Passes) {
  Proc r = run("--json verify-cancellation --trials 50");
  EXPECT_EQ(r.code, 0);
  json j = json::parse(r.out);
  EXPECT_EQ(j["exact_zero"], 50);
  EXPECT_EQ(j["certificate"]["status"], "cancels");
}

TEST(Json, ByteIdentical) {
  for (const char* cmd : {"--json check-identities --trials 20", "--json replay", "--json check-equations",
                          "--json verify-cancellation --trials 20"}) {
    Proc a = run(cmd), b = run(cmd);
    EXPECT_EQ(a.out, b.out) << cmd;
    EXPECT_EQ(json::parse(a.out)["schema"], "nullcalc/1");
  }
}

TEST(InProcess, MatchesBinary) {
  nullcalc::cli::CliConfig cfg;
  cfg.json = true;
  cfg.trials = 5;
  auto r = nullcalc::cli::cmd_check_identities(cfg);
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_EQ(r.out, run("--json check-identities --trials 5").out);
}
