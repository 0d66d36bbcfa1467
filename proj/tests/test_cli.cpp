// End-to-end tests of the command-line tool. The binary path arrives as
// argv[1] (wired up by CTest), ahead of doctest's own arguments.
#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

namespace {

std::string cli_path;
std::filesystem::path work_dir;

struct RunResult {
  int exit_code = -1;
  std::string output;
};

RunResult run_cli(const std::string& args) {
  const std::string command = cli_path + " " + args + " 2>&1";
  FILE* pipe = popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult result;
  char buffer[4096];
  while (std::size_t got = std::fread(buffer, 1, sizeof buffer, pipe)) result.output.append(buffer, got);
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

std::string ex_a_args() {
  return "--input-x " + (work_dir / "exA_x.csv").string() + " --input-y " +
         (work_dir / "exA_y.csv").string();
}

}  // namespace

TEST_CASE("select runs EX-A end to end") {
  const RunResult result =
      run_cli("select --algorithm greg --sensors 2 --lambda 0 " + ex_a_args());
  CHECK(result.exit_code == 0);
  CHECK(result.output.find("selection.indices = [1, 2]") != std::string::npos);
  CHECK(result.output.find("selection.trajectory = [4, 4]") != std::string::npos);
  CHECK(result.output.find("selection.termination = budget-reached") != std::string::npos);
}

TEST_CASE("naive and greg agree through the CLI") {
  const RunResult greg =
      run_cli("select --algorithm greg --sensors 2 --lambda 0 --no-timing " + ex_a_args());
  const RunResult naive =
      run_cli("select --algorithm naive --sensors 2 --lambda 0 --no-timing " + ex_a_args());
  CHECK(greg.exit_code == 0);
  CHECK(naive.exit_code == 0);
  const auto indices_line = [](const std::string& text) {
    const auto at = text.find("selection.indices");
    return text.substr(at, text.find('\n', at) - at);
  };
  CHECK(indices_line(greg.output) == indices_line(naive.output));
}

TEST_CASE("reports are byte-identical without timing") {
  const auto report1 = work_dir / "rep1.txt";
  const auto report2 = work_dir / "rep2.txt";
  const std::string base = "select --algorithm greg --sensors 2 --lambda 0 --no-timing --quiet " +
                           ex_a_args() + " --output ";
  CHECK(run_cli(base + report1.string()).exit_code == 0);
  CHECK(run_cli(base + report2.string()).exit_code == 0);
  const std::string first = slurp(report1);
  CHECK(!first.empty());
  CHECK(first == slurp(report2));
}

TEST_CASE("synth is deterministic under a fixed seed") {
  const std::string args = "synth --n 40 --m 20 --rank 5 --seed 7 --noise 0.02";
  CHECK(run_cli(args + " --output-x " + (work_dir / "x1.csv").string() + " --output-y " +
                (work_dir / "y1.csv").string())
            .exit_code == 0);
  CHECK(run_cli(args + " --output-x " + (work_dir / "x2.csv").string() + " --output-y " +
                (work_dir / "y2.csv").string())
            .exit_code == 0);
  CHECK(slurp(work_dir / "x1.csv") == slurp(work_dir / "x2.csv"));
  CHECK(slurp(work_dir / "y1.csv") == slurp(work_dir / "y2.csv"));
}

TEST_CASE("crossval golden run on synthetic data") {
  const std::string base = "crossval --algorithm greg --sensors 3 --lambda 0.01 --folds 4 "
                           "--seed 11 --center --no-timing --quiet --input-x " +
                           (work_dir / "x1.csv").string() + " --input-y " +
                           (work_dir / "y1.csv").string() + " --output ";
  const auto cv1 = work_dir / "cv1.txt";
  const auto cv2 = work_dir / "cv2.txt";
  CHECK(run_cli(base + cv1.string()).exit_code == 0);
  CHECK(run_cli(base + cv2.string()).exit_code == 0);
  const std::string report = slurp(cv1);
  CHECK(report == slurp(cv2));
  CHECK(report.find("fold.4.indices") != std::string::npos);
  CHECK(report.find("aggregate.test-error.mean") != std::string::npos);
  CHECK(report.find("selection-seconds") == std::string::npos);
}

TEST_CASE("dmat files travel through synth and select") {
  CHECK(run_cli("synth --n 20 --m 12 --rank 3 --seed 5 --mode estimation --format dmat "
                "--output-x " +
                (work_dir / "x.dmat").string() + " --output-y " + (work_dir / "y.dmat").string())
            .exit_code == 0);
  const RunResult result = run_cli("select --algorithm reg --sensors 3 --format dmat --input-x " +
                                   (work_dir / "x.dmat").string());
  CHECK(result.exit_code == 0);
  CHECK(result.output.find("selection.indices") != std::string::npos);

  const RunResult greg = run_cli("select --algorithm greg --sensors 3 --lambda 1e-4 "
                                 "--format dmat --input-x " +
                                 (work_dir / "x.dmat").string() + " --input-y " +
                                 (work_dir / "y.dmat").string());
  CHECK(greg.exit_code == 0);
}

TEST_CASE("leave-groups crossval holds out one label per fold") {
  // 12 snapshots in 3 labelled groups of 4.
  write_file(work_dir / "groups.csv", "0,0,0,0,1,1,1,1,2,2,2,2\n");
  CHECK(run_cli("synth --n 15 --m 12 --rank 2 --noise 0.01 --seed 3 --output-x " +
                (work_dir / "gx.csv").string() + " --output-y " + (work_dir / "gy.csv").string())
            .exit_code == 0);
  const RunResult result = run_cli(
      "crossval --algorithm greg --sensors 2 --lambda 0.01 --no-timing --leave-groups " +
      (work_dir / "groups.csv").string() + " --input-x " + (work_dir / "gx.csv").string() +
      " --input-y " + (work_dir / "gy.csv").string());
  CHECK(result.exit_code == 0);
  CHECK(result.output.find("cv.folds = 3") != std::string::npos);
  CHECK(result.output.find("fold.3.indices") != std::string::npos);
}

TEST_CASE("estimate fits and reports metrics") {
  const RunResult result =
      run_cli("estimate --indices 1 --lambda 0 " + ex_a_args());
  CHECK(result.exit_code == 0);
  CHECK(result.output.find("estimator.indices = [1]") != std::string::npos);
  CHECK(result.output.find("train.normalized-error = 0") != std::string::npos);
}

TEST_CASE("estimate scores held-out data when asked") {
  // Train and test on the same files: the held-out metrics must match the
  // training ones.
  const RunResult result = run_cli("estimate --indices 1,2 --lambda 0 " + ex_a_args() +
                                   " --test-x " + (work_dir / "exA_x.csv").string() +
                                   " --test-y " + (work_dir / "exA_y.csv").string());
  CHECK(result.exit_code == 0);
  CHECK(result.output.find("test.normalized-error = 0") != std::string::npos);

  CHECK(run_cli("estimate --indices 1 --lambda 0 " + ex_a_args() + " --test-x " +
                (work_dir / "exA_x.csv").string())
            .exit_code == 1);  // --test-x without --test-y
}

TEST_CASE("leave-groups accepts a label column as well as a row") {
  write_file(work_dir / "groups_col.csv", "0\n0\n0\n0\n1\n1\n1\n1\n2\n2\n2\n2\n");
  const RunResult result = run_cli(
      "crossval --algorithm greg --sensors 2 --lambda 0.01 --no-timing --leave-groups " +
      (work_dir / "groups_col.csv").string() + " --input-x " + (work_dir / "gx.csv").string() +
      " --input-y " + (work_dir / "gy.csv").string());
  CHECK(result.exit_code == 0);
  CHECK(result.output.find("cv.folds = 3") != std::string::npos);
}

TEST_CASE("usage errors exit with code 1") {
  CHECK(run_cli("crossval --folds 1 --algorithm greg --sensors 2 " + ex_a_args()).exit_code == 1);
  CHECK(run_cli("select --no-such-flag").exit_code == 1);
  CHECK(run_cli("select --algorithm nonsense --sensors 1 " + ex_a_args()).exit_code == 1);
  CHECK(run_cli("").exit_code == 1);
}

TEST_CASE("data errors exit with code 2") {
  write_file(work_dir / "bad.csv", "1,2\n3\n");
  CHECK(run_cli("select --algorithm greg --sensors 1 --input-x " +
                (work_dir / "bad.csv").string())
            .exit_code == 2);
  CHECK(run_cli("select --algorithm greg --sensors 1 --input-x " +
                (work_dir / "missing.csv").string())
            .exit_code == 2);
}

TEST_CASE("numerical failures exit with code 3") {
  write_file(work_dir / "flat.csv", "1,0\n1,0\n");
  const RunResult result = run_cli("estimate --indices 1,2 --lambda 0 --input-x " +
                                   (work_dir / "flat.csv").string());
  CHECK(result.exit_code == 3);
}

TEST_CASE("bench emits the timing csv") {
  const RunResult result = run_cli("bench --algorithm greg --sizes 40:12:2:3 --repeats 2");
  CHECK(result.exit_code == 0);
  CHECK(result.output.find("algorithm,n,m,n_y,p,repeats,median_seconds") != std::string::npos);
  CHECK(result.output.find("greg,40,12,2,3,2,") != std::string::npos);
}

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: test_cli <path-to-sensorsel-binary> [doctest args]\n");
    return 64;
  }
  cli_path = argv[1];

  work_dir = std::filesystem::temp_directory_path() /
             ("sensorsel_cli_" + std::to_string(::getpid()));
  std::filesystem::create_directories(work_dir);
  write_file(work_dir / "exA_x.csv", "1,0\n0,1\n1,1\n");
  write_file(work_dir / "exA_y.csv", "2,0\n");

  doctest::Context context;
  context.applyCommandLine(argc - 1, argv + 1);
  const int rc = context.run();
  std::filesystem::remove_all(work_dir);
  return rc;
}
