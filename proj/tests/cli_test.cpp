#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "json.hpp"
#include "qset/cli.hpp"

namespace qset::cli {
namespace {

namespace fs = std::filesystem;

const fs::path kSource = QSET_SOURCE_DIR;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run_with(RunConfig config, const std::string& input = {}) {
  std::istringstream in(input);
  std::ostringstream out;
  std::ostringstream err;
  int code = run(config, in, out, err);
  return {code, out.str(), err.str()};
}

RunConfig eval_of(const fs::path& path, Format format = Format::text) {
  RunConfig c;
  c.mode = Mode::eval;
  c.input_path = path.string();
  c.format = format;
  return c;
}

TEST(CliEval, PowersetScriptPasses) {
  Outcome o = run_with(eval_of(kSource / "scripts" / "powerset.qst"));
  EXPECT_EQ(o.code, kOk) << o.err;
  EXPECT_NE(o.out.find("checks: 2 passed, 0 failed"), std::string::npos);
  EXPECT_TRUE(o.err.empty());
}

TEST(CliEval, MissingFile) {
  Outcome o = run_with(eval_of("missing.qst"));
  EXPECT_EQ(o.code, kError);
  EXPECT_TRUE(o.out.empty());
  EXPECT_NE(o.err.find("missing.qst"), std::string::npos);
}

TEST(CliEval, FailedChecksExitOne) {
  Outcome o = run_with(eval_of(kSource / "tests" / "fixtures" / "failing_check.qst"));
  EXPECT_EQ(o.code, kChecksFailed);
  EXPECT_NE(o.out.find("FAIL check at line 2"), std::string::npos);
  EXPECT_NE(o.out.find("PASS check at line 3"), std::string::npos);
}

TEST(CliEval, RuntimeErrorHasSpan) {
  fs::path p = kSource / "tests" / "fixtures" / "runtime_error.qst";
  Outcome o = run_with(eval_of(p));
  EXPECT_EQ(o.code, kError);
  EXPECT_NE(o.err.find(p.string() + ":5:1: runtime error: NotInUniverse"), std::string::npos) << o.err;
  EXPECT_NE(o.err.find("^~~~"), std::string::npos);
}

TEST(CliEval, JsonKeepsDiagnosticsOffStdout) {
  Outcome bad = run_with(eval_of(kSource / "tests" / "fixtures" / "errors" / "unterminated_literal.qst", Format::json));
  EXPECT_EQ(bad.code, kError);
  EXPECT_TRUE(bad.out.empty());
  EXPECT_FALSE(bad.err.empty());

  Outcome good = run_with(eval_of(kSource / "scripts" / "powerset.qst", Format::json));
  ASSERT_EQ(good.code, kOk);
  auto doc = nlohmann::json::parse(good.out);
  EXPECT_EQ(doc["schema"], "qset/1");
  EXPECT_EQ(doc["mode"], "eval");
  EXPECT_EQ(doc["checks"]["passed"], 2);
}

TEST(CliEval, ReadsStdin) {
  RunConfig c = eval_of("-");
  Outcome o = run_with(c, "kind K\nqc(pow({K^3}))\n");
  EXPECT_EQ(o.code, kOk);
  EXPECT_EQ(o.out, "8\nchecks: 0 passed, 0 failed\n");
  Outcome bad = run_with(c, "qc(\n");
  EXPECT_EQ(bad.code, kError);
  EXPECT_EQ(bad.err.rfind("<stdin>:1:", 0), 0u);
}

TEST(CliEval, EveryErrorFixtureExitsTwoWithASpan) {
  for (const auto& entry : fs::directory_iterator(kSource / "tests" / "fixtures" / "errors")) {
    Outcome o = run_with(eval_of(entry.path()));
    EXPECT_EQ(o.code, kError) << entry.path();
    EXPECT_EQ(o.err.rfind(entry.path().string() + ":", 0), 0u) << o.err;
    EXPECT_NE(o.err.find('^'), std::string::npos) << o.err;
  }
}

TEST(CliEval, CapsBeyondHardLimits) {
  RunConfig c = eval_of(kSource / "scripts" / "powerset.qst");
  c.caps.power_operand = kMaxCapPower + 1;
  EXPECT_EQ(run_with(c).code, kError);
}

TEST(CliEval, CapOverrideApplies) {
  RunConfig c = eval_of("-");
  c.caps.power_operand = 2;
  Outcome o = run_with(c, "kind K\npow({K^3})\n");
  EXPECT_EQ(o.code, kError);
  EXPECT_NE(o.err.find("CapExceeded"), std::string::npos);
}

TEST(CliAudit, ReportsFragments) {
  RunConfig c;
  c.mode = Mode::audit;
  c.input_path = (kSource / "tests" / "fixtures" / "audit.qst").string();
  Outcome text = run_with(c);
  EXPECT_EQ(text.code, kOk) << text.err;
  EXPECT_NE(text.out.find("cond1 power:"), std::string::npos);
  EXPECT_NE(text.out.find("theorem1 unexplained: 0"), std::string::npos);

  c.format = Format::json;
  Outcome json = run_with(c);
  ASSERT_EQ(json.code, kOk);
  auto doc = nlohmann::json::parse(json.out);
  EXPECT_EQ(doc["schema"], "qset/1");
  ASSERT_EQ(doc["fragments"].size(), 1u);
  EXPECT_TRUE(doc["fragments"][0].contains("defects"));
  EXPECT_TRUE(doc["fragments"][0].contains("elements"));
  EXPECT_GT(doc["fragments"][0]["defects"]["cond1"].size(), 0u);
}

TEST(CliAudit, NeedsAFragment) {
  RunConfig c;
  c.mode = Mode::audit;
  c.input_path = "-";
  EXPECT_EQ(run_with(c, "kind K\nqc({K})\n").code, kError);
}

TEST(CliLaws, DefaultRunHasNoViolations) {
  RunConfig c;
  c.mode = Mode::laws;
  Outcome o = run_with(c);
  EXPECT_EQ(o.code, kOk);
  EXPECT_NE(o.out.find("violations: 0"), std::string::npos);
}

TEST(CliLaws, JsonIsReproducible) {
  RunConfig c;
  c.mode = Mode::laws;
  c.samples = 50;
  c.seed = 3;
  c.format = Format::json;
  Outcome a = run_with(c);
  Outcome b = run_with(c);
  EXPECT_EQ(a.out, b.out);
  auto doc = nlohmann::json::parse(a.out);
  EXPECT_EQ(doc["schema"], "qset/1");
  EXPECT_EQ(doc["violations"].size(), 0u);
  c.seed = 4;
  EXPECT_NE(run_with(c).out, a.out);
}

TEST(CliRepl, EvaluatesLineByLine) {
  RunConfig c;
  c.mode = Mode::repl;
  Outcome o = run_with(c, "kind K\nlet x = {K^2}\nqc(pow(x))\ncheck qc(x) = 2\n");
  EXPECT_EQ(o.code, kOk);
  EXPECT_EQ(o.out, "x = {K^2}\n4\nPASS\n");
  Outcome bad = run_with(c, "kind K\nqc(\nqc({K})\n");
  EXPECT_EQ(bad.code, kError);
  EXPECT_EQ(bad.out, "1\n");
  EXPECT_NE(bad.err.find("<repl>:1:"), std::string::npos);
}

}  // namespace
}  // namespace qset::cli
