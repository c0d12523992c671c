// End-to-end checks of the bistsim binary: spawn it, capture stdout+stderr,
// compare bytes and exit codes.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include <doctest.h>
#include <json.hpp>

namespace {

struct CliResult {
  int code;
  std::string out;
};

CliResult run_cli(const std::string& args) {
  std::string cmd = std::string("\"") + BIST_CLI_PATH + "\" " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, got);
  int status = pclose(pipe);
  REQUIRE(status != -1);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string data_path(const char* file) { return std::string(BIST_DATA_DIR "/") + file; }

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

bool starts_with(const std::string& s, const std::string& prefix) {
  return s.rfind(prefix, 0) == 0;
}

}  // namespace

TEST_CASE("polys lists one degree") {
  CliResult r = run_cli("polys --degree 3 --primitive");
  CHECK(r.code == 0);
  CHECK(r.out == "1+x+x^3  0xb\n1+x^2+x^3  0xd\n");

  r = run_cli("polys --degree 3");
  CHECK(r.code == 0);
  CHECK(lines_of(r.out).size() == 4);  // every degree-3 polynomial with c0 = 1

  r = run_cli("polys --degree 5 --primitive");
  CHECK(r.code == 0);
  CHECK(lines_of(r.out).size() == 6);
}

TEST_CASE("period prints a bare number") {
  CliResult r = run_cli("period --poly 1+x+x^3");
  CHECK(r.code == 0);
  CHECK(r.out == "7\n");

  r = run_cli("period --poly 0x61");  // 1+x^5+x^6
  CHECK(r.code == 0);
  CHECK(r.out == "63\n");
}

TEST_CASE("patterns walks the generator orbit") {
  CliResult r = run_cli("patterns --poly 1+x+x^3 --seed 1 --count 7");
  CHECK(r.code == 0);
  CHECK(r.out == "001\n100\n110\n111\n011\n101\n010\n");

  // auto count = one full period, hex seed accepted
  CliResult r2 = run_cli("patterns --poly 1+x+x^3 --seed 0x1");
  CHECK(r2.code == 0);
  CHECK(r2.out == r.out);
}

TEST_CASE("signature compacts a word stream") {
  CliResult r = run_cli("signature --poly 1+x+x^3 --words 1,0,0");
  CHECK(r.code == 0);
  CHECK(r.out == "100 4\n");
}

TEST_CASE("faults enumerates the stuck-at universe") {
  CliResult r = run_cli("faults --netlist " + data_path("and2.bench"));
  CHECK(r.code == 0);
  CHECK(r.out ==
        "stem a s-a-0\n"
        "stem a s-a-1\n"
        "stem b s-a-0\n"
        "stem b s-a-1\n"
        "stem y s-a-0\n"
        "stem y s-a-1\n"
        "3 lines, 6 faults\n");
}

TEST_CASE("run emits csv by default") {
  CliResult r = run_cli("run --netlist " + data_path("and2.bench"));
  CHECK(r.code == 0);
  std::vector<std::string> lines = lines_of(r.out);
  REQUIRE(lines.size() == 4);  // header + seeds 1..3
  CHECK(lines[0] ==
        "circuit,t_poly,p_poly,seed,length,detected,aliased,untested,rc,s_g_hex,"
        "aliasing_probability");
  CHECK(lines[1] == "and2,1+x+x^2,1+x+x^2,1,3,6,0,0,0,1,0.000000");
  for (std::size_t i = 1; i < lines.size(); ++i)
    CHECK(lines[i].find(",6,0,0,0,") != std::string::npos);
}

TEST_CASE("run output is reproducible byte for byte") {
  std::string args = "run --netlist " + data_path("synth_s3.bench") + " --seeds 1,2,3";
  CliResult a = run_cli(args);
  CliResult b = run_cli(args);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out == run_cli(args + " --jobs 4").out);
}

TEST_CASE("run writes the same bytes to a file") {
  std::string base = "run --netlist " + data_path("and2.bench");
  CliResult direct = run_cli(base);
  std::string path = "cli_out.csv";
  CliResult filed = run_cli(base + " --out " + path);
  CHECK(filed.code == 0);
  CHECK(filed.out.empty());
  std::ifstream in(path, std::ios::binary);
  std::string written((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(written == direct.out);
  std::remove(path.c_str());
}

TEST_CASE("run speaks json and table") {
  CliResult r = run_cli("run --netlist " + data_path("and2.bench") + " --format json");
  CHECK(r.code == 0);
  nlohmann::json doc = nlohmann::json::parse(r.out);
  REQUIRE(doc.is_array());
  CHECK(doc.size() == 3);
  CHECK(doc[0]["circuit"] == "and2");

  r = run_cli("run --netlist " + data_path("and2.bench") + " --format table");
  CHECK(r.code == 0);
  CHECK(r.out.find("circuit: and2") != std::string::npos);
  CHECK(r.out.find("1+x+x^2        0") != std::string::npos);
}

TEST_CASE("meta adds comment lines") {
  CliResult r = run_cli("run --netlist " + data_path("and2.bench") + " --meta");
  CHECK(r.code == 0);
  CHECK(starts_with(r.out, "# tool: bistsim 0.1.0\n"));
  CHECK(r.out.find("# generated: ") != std::string::npos);

  r = run_cli("run --netlist " + data_path("and2.bench") + " --meta --format json");
  CHECK(r.code == 0);
  nlohmann::json doc = nlohmann::json::parse(r.out);
  CHECK(doc["meta"]["tool"] == "bistsim 0.1.0");
  CHECK(doc["rows"].size() == 3);
}

TEST_CASE("verify-invariance reports per pair") {
  CliResult r = run_cli("verify-invariance --netlist " + data_path("synth_s3.bench"));
  CHECK(r.code == 0);
  std::vector<std::string> lines = lines_of(r.out);
  REQUIRE(lines.size() == 5);  // 2x2 polynomial pairs + summary
  bool t_eq_p_1 = false, t_eq_p_2 = false;
  for (std::size_t i = 0; i + 1 < lines.size(); ++i) {
    CHECK((starts_with(lines[i], "INVARIANT ") || starts_with(lines[i], "VARIANT ")));
    if (starts_with(lines[i], "INVARIANT T=1+x+x^3 P=1+x+x^3 ")) t_eq_p_1 = true;
    if (starts_with(lines[i], "INVARIANT T=1+x^2+x^3 P=1+x^2+x^3 ")) t_eq_p_2 = true;
  }
  // matched polynomials make the counts seed-independent
  CHECK(t_eq_p_1);
  CHECK(t_eq_p_2);
  CHECK(lines.back().find("4 pairs checked: ") != std::string::npos);
}

TEST_CASE("exit codes separate usage errors from domain errors") {
  CHECK(run_cli("no-such-command").code == 2);
  CHECK(run_cli("").code == 2);            // a subcommand is required
  CHECK(run_cli("period").code == 2);      // --poly is required
  CHECK(run_cli("run --netlist x --format xml").code == 2);
  CHECK(run_cli("--help").code == 0);

  CliResult r = run_cli("period --poly 1+q");
  CHECK(r.code == 1);
  CHECK(starts_with(r.out, "error: "));

  r = run_cli("faults --netlist no_such_file.bench");
  CHECK(r.code == 1);
  CHECK(starts_with(r.out, "error: "));

  r = run_cli("run --netlist " + data_path("and2.bench") + " --seeds 0");
  CHECK(r.code == 1);
  CHECK(r.out.find("seed") != std::string::npos);
}
