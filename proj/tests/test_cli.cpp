#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace {

struct Output {
  int status = -1;
  std::string out;
};

Output run(const std::string& args) {
  const std::string cmd = std::string(KGL_CLI_PATH) + " " + args + " 2>/dev/null";
  Output r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int st = pclose(pipe);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

std::filesystem::path write_temp(const std::string& name, const std::string& text) {
  const auto p = std::filesystem::temp_directory_path() / ("kgl_cli_" + name);
  std::ofstream(p) << text;
  return p;
}

}  // namespace

TEST(Cli, ExamplesListsCatalog) {
  const Output r = run("examples");
  ASSERT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("O_2"), std::string::npos);
  EXPECT_NE(r.out.find("T_2"), std::string::npos);
}

TEST(Cli, KTheoryOfTorus) {
  const Output r = run("ktheory --example T_2");
  ASSERT_EQ(r.status, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["K0"]["rank"], 2);
  EXPECT_EQ(j["K1"]["rank"], 2);
}

TEST(Cli, KTheoryWithTorusTwist) {
  const auto chi = write_temp("chi.json", R"({"type":"torus","turns":["1/3"]})");
  const Output r = run("ktheory --example T_2 --twist torus --character " + chi.string());
  ASSERT_EQ(r.status, 0) << r.out;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["K0"]["rank"], 2);
  bool exp = false;
  for (const auto& s : j["certificate"])
    if (s["step"] == "EXP-REDUCTION") exp = s["checked"].template get<bool>();
  EXPECT_TRUE(exp);
}

TEST(Cli, ExponentNeedsRealCocycle) {
  const Output r = run("ktheory --example T_2 --twist torus --t 1/3");
  EXPECT_EQ(r.status, 1);
  EXPECT_EQ(nlohmann::json::parse(r.out)["error"], "WrongValueGroup");
}

TEST(Cli, ValidateReportsBrokenSquares) {
  const auto file = write_temp("bad.json", R"({"k":2,"vertices":["v"],"edges":[
      {"id":"a","color":1,"range":"v","source":"v"},{"id":"b","color":2,"range":"v","source":"v"}],"squares":[]})");
  const Output r = run("validate " + file.string());
  EXPECT_EQ(r.status, 1);
  EXPECT_EQ(nlohmann::json::parse(r.out)["error"], "SquareNotBijective");
}

TEST(Cli, ValidateAcceptsWellFormedFile) {
  const Output shown = run("validate --example flip");
  ASSERT_EQ(shown.status, 0);
  const auto file = write_temp("flip.json", nlohmann::json::parse(shown.out)["skeleton"].dump());
  const Output r = run("validate " + file.string());
  EXPECT_EQ(r.status, 0);
  EXPECT_TRUE(nlohmann::json::parse(r.out)["valid"].get<bool>());
}

TEST(Cli, UsageErrorsExitWithTwo) {
  EXPECT_EQ(run("ktheory --no-such-flag").status, 2);
  EXPECT_EQ(run("skew --example O_2").status, 2);  // --window is required
}

TEST(Cli, UnknownExampleIsAnError) {
  const Output r = run("ktheory --example NOPE");
  EXPECT_EQ(r.status, 1);
  EXPECT_TRUE(nlohmann::json::parse(r.out).contains("error"));
}

TEST(Cli, AnalyzeCuntz) {
  const Output r = run("analyze --example O_2");
  ASSERT_EQ(r.status, 0);
  EXPECT_TRUE(nlohmann::json::parse(r.out)["eligible"].get<bool>());
}

TEST(Cli, FieldProbeCsv) {
  const Output r = run("field-probe --example T_2 --steps 6 --seed 1");
  ASSERT_EQ(r.status, 0);
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "n,parameter,diff_norm,lsc_ok");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 6);
}

TEST(Cli, SkewWindowHasDegreeCoboundary) {
  const Output r = run("skew --example O_2 --window 0:3");
  ASSERT_EQ(r.status, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_FALSE(j["degree_coboundary"].is_null());
}

TEST(Cli, AlgebraEvalStar) {
  // s_a^* s_a = p_v
  const auto x = write_temp("x.json", R"({"terms":[{"left":{"vertex":"v"},"right":["a"],"re":1}]})");
  const auto y = write_temp("y.json", R"({"terms":[{"left":["a"],"right":{"vertex":"v"},"re":1}]})");
  const Output r = run("algebra-eval --example O_2 --x " + x.string() + " --y " + y.string() + " --op star");
  ASSERT_EQ(r.status, 0) << r.out;
  const auto terms = nlohmann::json::parse(r.out)["terms"];
  ASSERT_EQ(terms.size(), 1u);
  EXPECT_EQ(terms[0]["left"]["vertex"], "v");
  EXPECT_EQ(terms[0]["right"]["vertex"], "v");
}
