#include <gtest/gtest.h>
#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "tapekit/casebook.hpp"
#include "tapekit/io.hpp"

namespace tapekit {
namespace {

namespace fs = std::filesystem;
using io::Json;

struct CliResult {
  int status = -1;
  std::string out;
  Json json() const { return Json::parse(out); }
};

CliResult run_cli(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + (env.empty() ? "" : " ") + "'" TAPEKIT_CLI_PATH "' " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) throw std::runtime_error("cannot start " + cmd);
  CliResult r;
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

std::string data(const std::string& name) { return "'" + (fs::path(TAPEKIT_DATA_DIR) / name).string() + "'"; }

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("tapekit_cli_" + std::to_string(::getpid()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& body) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << body;
    return "'" + p.string() + "'";
  }
  std::string write_json(const std::string& name, const Json& j) { return write(name, j.dump(2)); }

  fs::path dir_;
};

TEST_F(Cli, EvalSpecExamples) {
  const CliResult h = run_cli("eval " + data("vn.sexp") + " --tape 01:0");
  EXPECT_EQ(h.status, 0);
  EXPECT_EQ(h.json(), Json::parse(R"({"value":"H"})"));
  const CliResult bottom = run_cli("eval " + data("vn.sexp") + " --tape :0 --fuel 500");
  EXPECT_EQ(bottom.status, 0);
  EXPECT_EQ(bottom.json(), Json::parse(R"({"bottom":"fuel-exhausted"})"));
  EXPECT_EQ(run_cli("eval " + data("k_h_t.sexp") + " --tape :0").json(), Json::parse(R"({"value":"H"})"));
}

TEST_F(Cli, DefaultFuelFromEnvironment) {
  EXPECT_EQ(run_cli("eval " + data("vn.sexp") + " --tape 01:0", "TAPEKIT_DEFAULT_FUEL=5").json(),
            Json::parse(R"({"bottom":"fuel-exhausted"})"));
  EXPECT_EQ(run_cli("eval " + data("vn.sexp") + " --tape 01:0", "TAPEKIT_DEFAULT_FUEL=nope").status, 2);
}

TEST_F(Cli, LawSpecExamples) {
  const CliResult vn = run_cli("law " + data("vn.sexp") + " --fuel " + std::to_string(build_vn(2).fuel));
  EXPECT_EQ(vn.status, 0);
  EXPECT_EQ(vn.out, "{\n  \"H\": \"3/8\",\n  \"T\": \"3/8\",\n  \"bottom\": \"1/4\"\n}\n");
  EXPECT_EQ(run_cli("law " + data("k_h_t.sexp")).json(), Json::parse(R"({"H":"1"})"));
  const std::string read = write("read.sexp", "(read 0 0)");
  EXPECT_EQ(run_cli("law " + read + " --measure " + data("bias_two_thirds.json")).json(),
            Json::parse(R"({"#0":"1/3","#1":"2/3"})"));
}

TEST_F(Cli, TraceRoundTrips) {
  const CliResult r = run_cli("trace " + data("vn.sexp") + " --fuel " + std::to_string(build_vn(2).fuel));
  ASSERT_EQ(r.status, 0);
  EXPECT_EQ(io::tree_from_json(r.json()), build_vn(2).trace());
  const std::string two = write("two.sexp", "(pair (read 0 0) (read 1 2))");
  const CliResult r2 = run_cli("trace " + two + " --arity 2");
  ASSERT_EQ(r2.status, 0);
  EXPECT_EQ(io::tree_from_json(r2.json()), trace(parse_code("(pair (read 0 0) (read 1 2))"), TapeSpace(2), 1024));
}

TEST_F(Cli, EntailExitCodes) {
  const CliResult ok = run_cli("entail " + data("judgments/return_h.json"));
  EXPECT_EQ(ok.status, 0);
  EXPECT_EQ(ok.json()["verdict"], "holds");
  EXPECT_FALSE(ok.json().contains("counterexample"));

  const CliResult bad = run_cli("entail " + data("judgments/vn_terminates.json"));
  EXPECT_EQ(bad.status, 1);
  const Json cx = bad.json()["counterexample"];
  EXPECT_EQ(cx["pattern"], Json::parse(R"([["0,0",0],["0,1",0],["0,2",0],["0,3",0]])"));
  EXPECT_EQ(cx["lhs"], "1");
  EXPECT_EQ(cx["rhs"], "0");

  EXPECT_EQ(run_cli("entail " + data("judgments/beta_prime.json")).status, 1);
  EXPECT_EQ(run_cli("entail " + data("judgments/beta_prime.json") + " --mode as").status, 0);

  EXPECT_EQ(run_cli("entail " + write("broken.json", "{\"phi\": ")).status, 2);
  EXPECT_EQ(run_cli("entail " + write("missing.json", R"({"phi":{"crisp":["H"]},"evidence":"I"})")).status, 2);
  EXPECT_EQ(run_cli("entail " + write("badcode.json",
                                      R"({"phi":{"crisp":[]},"evidence":"(app","psi":{"crisp":[]},"universe":["H"]})"))
                .status,
            2);
  EXPECT_EQ(run_cli("entail " + data("judgments/return_h.json") + " --mode maybe").status, 2);
  EXPECT_EQ(run_cli("entail /nonexistent/spec.json").status, 2);
  EXPECT_EQ(run_cli("frobnicate").status, 2);
  EXPECT_EQ(run_cli("").status, 2);
}

TEST_F(Cli, ExtractReport) {
  const CliResult r = run_cli("extract " + data("judgments/first_bit_half.json"));
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.json()["rows"][0]["lhs"], "3/4");
  EXPECT_EQ(r.json()["rows"][0]["rhs"], "7/8");
  const CliResult neg = run_cli("extract " + data("judgments/vn_terminates.json"));
  EXPECT_EQ(neg.status, 1);
  EXPECT_EQ(neg.json()["judgment"], "fails");
  EXPECT_EQ(neg.json()["rows"][0]["rhs"], "3/4");
}

TEST_F(Cli, TransportSpecExamples) {
  const CliResult same = run_cli("transport " + data("judgments/first_bit_half.json") + " --map identity");
  EXPECT_EQ(same.status, 0);
  EXPECT_EQ(same.json()["verdict"], "holds");

  const VnFixture vn = build_vn(2);
  const auto about_h = check_entailment(Proposition::constant(vn.alpha_h()), vn.wrapper(), Proposition::crisp({Code::con("H")}),
                                        {Code::con("C")}, 1, vn.fuel + 1, Mode::Pointwise);
  const std::string spec = write_json("alpha_h.json", io::to_json(about_h));
  const CliResult flipped = run_cli("transport " + spec + " --map flip");
  ASSERT_EQ(flipped.status, 0);
  EXPECT_EQ(io::proposition_from_json(flipped.json()["phi"]).constant_value(), vn.alpha_t());
  EXPECT_EQ(flipped.json()["fuel"], vn.fuel + 1 + kTranslationFuelOverhead);

  const MajorityFixture maj = build_majority(3, 2, default_base_verifier(), {Code::bit(true)});
  const std::string maj_spec = write_json("majority.json", io::to_json(maj.judgment()));
  const CliResult split = run_cli("transport " + maj_spec + " --map split:3");
  EXPECT_EQ(split.status, 0);
  EXPECT_EQ(split.json()["arity"], 1);
  EXPECT_EQ(run_cli("transport " + maj_spec + " --map flip").status, 2);
  EXPECT_EQ(run_cli("transport " + data("judgments/vn_terminates.json") + " --map flip").status, 1);
  EXPECT_EQ(run_cli("transport " + maj_spec + " --map warp:9").status, 2);
}

TEST_F(Cli, CasebookSpecExamples) {
  const CliResult vn = run_cli("casebook vn --pairs 3");
  EXPECT_EQ(vn.status, 0);
  EXPECT_EQ(vn.json()["law"], Json::parse(R"({"H":"7/16","T":"7/16","bottom":"1/8"})"));
  EXPECT_EQ(vn.json()["ok"], true);
  EXPECT_EQ(run_cli("casebook majority --p 2/3").json()["amplified"], "20/27");
  EXPECT_EQ(run_cli("casebook majority --p 1/2").json()["amplified"], "1/2");
  EXPECT_EQ(run_cli("casebook majority --p 3/2").status, 2);
  EXPECT_EQ(run_cli("casebook vn --pairs 0").status, 2);
  EXPECT_EQ(run_cli("casebook").status, 2);
}

TEST_F(Cli, OutputsAreDeterministicAndRoundTrip) {
  const std::vector<std::string> invocations{"law " + data("vn.sexp") + " --fuel 119", "casebook vn --pairs 2",
                                           "entail " + data("judgments/vn_terminates.json"),
                                           "casebook majority --p 5/8"};
  for (const std::string& args : invocations) {
    const CliResult a = run_cli(args), b = run_cli(args);
    EXPECT_EQ(a.out, b.out) << args;
    EXPECT_FALSE(a.out.empty()) << args;
  }
  const CliResult law = run_cli("law " + data("vn.sexp") + " --fuel 119");
  EXPECT_EQ(io::to_json(io::dist_from_json(law.json())).dump(2) + "\n", law.out);

  const CliResult judged = run_cli("entail " + data("judgments/first_bit_half.json"));
  const std::string echoed = write("echo.json", judged.out);
  EXPECT_EQ(run_cli("entail " + echoed).out, judged.out);

  const std::string out = (dir_ / "law.json").string();
  EXPECT_EQ(run_cli("--out '" + out + "' law " + data("vn.sexp") + " --fuel 119").out, "");
  std::ifstream f(out);
  const std::string written((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  EXPECT_EQ(written, law.out);
}

}  // namespace
}  // namespace tapekit
