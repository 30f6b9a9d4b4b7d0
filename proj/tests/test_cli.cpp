#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"

namespace fs = std::filesystem;

namespace {

const std::string kTool = MOISTSIM_PATH;
const std::string kConfigs = MOIST_CONFIG_DIR;

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("moistsim_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

int exit_code(const std::string& args, const fs::path& out_file) {
  const std::string cmd = kTool + " " + args + " > " + out_file.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path write_cfg(const fs::path& dir, const std::string& text) {
  const fs::path p = dir / "test.cfg";
  std::ofstream(p) << text;
  return p;
}

const char* kTiny =
    "[grid]\nnx = 6\nny = 2\nnz = 6\n"
    "[velocity]\nkind = convection_cell\ntarget_cfl = 0.25\n"
    "[time]\ndt = 10\nt_end = 30\npicard_max = 60\n"
    "[output]\nsnapshot_every = 1\n"
    "[initial]\nT_spread = 2\nqv_relative = true\nqv_base = 0.2\nqv_spread = 1\nqc_spread = 1e-3\nqr_spread = 5e-4\n";

}  // namespace

TEST_CASE("missing config file exits 2 naming the path") {
  const fs::path d = scratch("missing");
  CHECK(exit_code("run /no/such/dir/x.cfg", d / "log") == 2);
  CHECK(slurp(d / "log").find("/no/such/dir/x.cfg") != std::string::npos);
}

TEST_CASE("unknown key exits 2") {
  const fs::path d = scratch("badkey");
  const fs::path cfg = write_cfg(d, "[grid]\nnxx = 3\n");
  CHECK(exit_code("run " + cfg.string(), d / "log") == 2);
  CHECK(slurp(d / "log").find("line 2") != std::string::npos);
}

TEST_CASE("zero-data config exits 0 with an all-zero series") {
  const fs::path d = scratch("zero");
  CHECK(exit_code("--output-dir " + d.string() + " run " + kConfigs + "/zero.cfg", d / "log") == 0);
  std::ifstream in(d / "series.csv");
  std::string line;
  std::getline(in, line);
  CHECK(line.rfind("# seed=", 0) == 0);
  std::getline(in, line);
  CHECK(line.rfind("time,T_min,T_max,T_L2,qv_min", 0) == 0);
  int rows = 0;
  while (std::getline(in, line)) {
    std::stringstream ss(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    REQUIRE(cells.size() == 17);
    for (std::size_t c = 1; c + 2 < cells.size(); ++c) CHECK(cells[c] == "0");
    CHECK(cells.back() == "0");
    ++rows;
  }
  CHECK(rows == 6);
  CHECK(slurp(d / "log").find("violations: 0") != std::string::npos);
}

TEST_CASE("run writes snapshots and is byte-identical when repeated") {
  const fs::path a = scratch("rep_a"), b = scratch("rep_b");
  const fs::path cfg = write_cfg(a, kTiny);
  CHECK(exit_code("--output-dir " + a.string() + " run " + cfg.string(), a / "log") == 0);
  CHECK(exit_code("--output-dir " + b.string() + " run " + cfg.string(), b / "log") == 0);
  CHECK(slurp(a / "series.csv") == slurp(b / "series.csv"));
  for (const char* f : {"T_0.fld", "qv_3.fld", "qr_2.fld"}) {
    CHECK(fs::exists(a / f));
    CHECK(slurp(a / f) == slurp(b / f));
  }
}

TEST_CASE("seed override is recorded in the series header") {
  const fs::path d = scratch("seed");
  const fs::path cfg = write_cfg(d, kTiny);
  CHECK(exit_code("--seed 42 --output-dir " + d.string() + " run " + cfg.string(), d / "log") == 0);
  CHECK(slurp(d / "series.csv").rfind("# seed=42\n", 0) == 0);
}

TEST_CASE("unwritable output directory exits 4") {
  const fs::path d = scratch("io");
  std::ofstream(d / "blocker") << "x";
  const fs::path cfg = write_cfg(d, kTiny);
  CHECK(exit_code("--output-dir " + (d / "blocker" / "sub").string() + " run " + cfg.string(), d / "log") == 4);
}

TEST_CASE("Picard failure exits 3") {
  const fs::path d = scratch("picard");
  std::string text = kTiny;
  text.replace(text.find("picard_max = 60"), 15, "picard_max = 1");
  const fs::path cfg = write_cfg(d, text);
  CHECK(exit_code("--output-dir " + d.string() + " run " + cfg.string(), d / "log") == 3);
}

TEST_CASE("kernel self-test passes, is deterministic and catches the injected fault") {
  const fs::path d = scratch("kernel");
  CHECK(exit_code("kernel-selftest --samples 2000", d / "a") == 0);
  CHECK(exit_code("kernel-selftest --samples 2000", d / "b") == 0);
  CHECK(slurp(d / "a") == slurp(d / "b"));
  CHECK(slurp(d / "a").find("FAIL") == std::string::npos);
  CHECK(exit_code("kernel-selftest --samples 2000 --inject-fault", d / "c") == 1);
  CHECK(slurp(d / "c").find("FAIL cancellation_Q") != std::string::npos);
}

TEST_CASE("degenerate battery grid exits 2") {
  const fs::path d = scratch("rothe");
  const fs::path cfg = write_cfg(d, "[battery]\nn = 1\n");
  CHECK(exit_code("rothe-verify " + cfg.string(), d / "log") == 2);
}

TEST_CASE("small battery prints structured certificates") {
  const fs::path d = scratch("rothe_ok");
  const fs::path cfg = write_cfg(d, "[battery]\nproblems = 2\nn = 4\nN = 4\n");
  CHECK(exit_code("--threads 2 rothe-verify " + cfg.string(), d / "log") == 0);
  const std::string log = slurp(d / "log");
  CHECK(log.find("energy_bound_pass: true") != std::string::npos);
  CHECK(log.find("result: PASS") != std::string::npos);
}

TEST_CASE("mms rejects a one-cell ladder") {
  const fs::path d = scratch("mms");
  const fs::path cfg = write_cfg(d, "[mms]\nsizes = 1, 2\n");
  CHECK(exit_code("mms " + cfg.string(), d / "log") == 2);
}

TEST_CASE("two-run validates eps and writes one row per eps") {
  const fs::path d = scratch("two");
  const fs::path cfg = write_cfg(d, kTiny);
  CHECK(exit_code("--output-dir " + d.string() + " two-run " + cfg.string() + " --eps 0", d / "log") == 2);
  CHECK(exit_code("--output-dir " + d.string() + " two-run " + cfg.string() + " --eps 1e-3", d / "log") == 0);
  const std::string csv = slurp(d / "two_run.csv");
  CHECK(csv.find("eps,amplification,t_of_max\n0.001,") != std::string::npos);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
}

TEST_CASE("print-config output loads back to the same listing") {
  const fs::path d = scratch("printcfg");
  REQUIRE(exit_code("print-config " + kConfigs + "/cell.cfg", d / "a.cfg") == 0);
  const std::string first = slurp(d / "a.cfg");
  CHECK(first.find("picard_max = 60") != std::string::npos);
  CHECK(first.find("(given)") != std::string::npos);
  REQUIRE(exit_code("print-config " + (d / "a.cfg").string(), d / "b.cfg") == 0);
  CHECK(slurp(d / "b.cfg") == first);
}
