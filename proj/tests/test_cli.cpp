#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <sys/wait.h>

#include <json.hpp>

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string("cd ") + FK_DATA_DIR + " && " + FK_CLI_PATH + " " + args + " 2>/dev/null";
  Run r;
  FILE* f = popen(cmd.c_str(), "r");
  if (!f) return r;
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), f)) > 0) r.out.append(buf.data(), n);
  int status = pclose(f);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

nlohmann::json parse(const Run& r) { return nlohmann::json::parse(r.out); }

}  // namespace

TEST(Cli, CohomologyOfC2) {
  auto r = run("cohomology --group c2.json --p 2 --module f2.json --max-degree 3");
  ASSERT_EQ(r.code, 0);
  auto j = parse(r);
  std::vector<int> dims;
  for (const auto& d : j["degrees"]) dims.push_back(d["dim"]);
  EXPECT_EQ(dims, (std::vector<int>{1, 1, 1, 1}));
}

TEST(Cli, CentricsOfA4) {
  auto r = run("centrics --group a4.json --p 2");
  ASSERT_EQ(r.code, 0);
  auto c = parse(r)["centrics"];
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c[0]["order"], 4);
}

TEST(Cli, VerifyTrivialS4) {
  auto r = run("verify-trivial --group s4.json --p 2 --max-degree 2");
  ASSERT_EQ(r.code, 0);
  auto j = parse(r);
  EXPECT_TRUE(j["pass"].get<bool>());
  for (const auto& d : j["degrees"]) EXPECT_EQ(d["nerve"], d["stable"]);
  EXPECT_EQ(j["h1_oracle"]["dim"], 1);
}

TEST(Cli, LinkingAndBiset) {
  auto l = run("linking-build --group s4.json --p 2");
  ASSERT_EQ(l.code, 0);
  EXPECT_EQ(parse(l)["morphisms"].size(), 88u);
  auto b = run("biset-characteristic --group s4.json --p 2");
  ASSERT_EQ(b.code, 0);
  EXPECT_EQ(parse(b)["ratio"], 3);
}

TEST(Cli, TwistedCommands) {
  auto s = run("stable --group d8.json --p 2 --twist unipotent.json --max-degree 1");
  ASSERT_EQ(s.code, 0);
  auto m = run("verify-main --group d8.json --p 2 --twist unipotent.json --max-degree 1");
  EXPECT_EQ(m.code, 0);
  EXPECT_TRUE(parse(m)["pass"].get<bool>());
  auto d = run("verify-delta --group d8.json --p 2 --ses bockstein.json --max-degree 1");
  EXPECT_EQ(d.code, 0);
  auto i = run("idempotent --group s4.json --p 2 --module z4.json --max-degree 1");
  ASSERT_EQ(i.code, 0);
  auto ji = parse(i);
  for (const auto& deg : ji["degrees"]) EXPECT_TRUE(deg["image_equals_stable"].get<bool>());
  EXPECT_EQ(run("explore-conjecture --group d8.json --p 2 --module z4_sign_d8.json --max-degree 1").code, 0);
  EXPECT_EQ(run("nerve --group a4.json --p 2 --module f4_a4.json --max-degree 1").code, 0);
}

TEST(Cli, InputErrorsExitTwo) {
  EXPECT_EQ(run("centrics --group missing.json --p 2").code, 2);
  EXPECT_EQ(run("centrics --group d8.json --p 3").code, 2);
  EXPECT_EQ(run("centrics --group d8.json --p 4").code, 2);
  EXPECT_EQ(run("cohomology --group d8.json --p 2 --module f4_a4.json").code, 2);
  EXPECT_EQ(run("verify-main --group a4.json --p 2 --module f4_a4.json --max-degree 1").code, 2);
  EXPECT_EQ(run("verify-delta --group d8.json --p 2").code, 2);
  EXPECT_EQ(run("no-such-command --group d8.json").code, 2);
  EXPECT_EQ(run("nerve --group s4.json --p 2 --max-degree 3").code, 2);
}

TEST(Cli, OutputIsDeterministic) {
  for (const std::string args : {"fusion-info --group s4.json --p 2", "idempotent --group s4.json --p 2 --max-degree 1",
                                 "stable --group s4.json --p 2 --twist unipotent.json --max-degree 1"}) {
    auto a = run(args), b = run(args + " --threads 4");
    EXPECT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out) << args;
  }
}
