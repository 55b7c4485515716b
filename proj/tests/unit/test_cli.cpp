#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    static std::mt19937_64 rng(std::random_device{}());
    path = fs::temp_directory_path() /
           ("qwork_cli_test_" + std::to_string(rng()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
};

int run_cli(const std::string& args) {
  const std::string cmd =
      std::string(QWORK_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

void write_config(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
  REQUIRE(out.good());
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string first_line(const std::string& text) {
  return text.substr(0, text.find('\n'));
}

std::size_t count_lines(const std::string& text) {
  std::size_t n = 0;
  for (char c : text)
    if (c == '\n') ++n;
  return n;
}

const char* kTwoLevelConfig = R"([model]
kind = two_level
delta = 1.0

[schedule]
shape = smoothstep
tau = 1.0
lambda_start = 0.2
lambda_end = 1.4

[run]
beta = 1.3
steps = 300
)";

}  // namespace

TEST_CASE("two-time run writes its outputs and passes its own check") {
  TempDir tmp;
  write_config(tmp.path / "run.cfg", kTwoLevelConfig);
  const int rc = run_cli("ttm --config " + (tmp.path / "run.cfg").string() +
                         " --out " + (tmp.path / "out").string());
  CHECK(rc == 0);
  const std::string csv = slurp(tmp.path / "out" / "ttm_distribution.csv");
  CHECK(first_line(csv) == "w,prob");
  const std::string summary = slurp(tmp.path / "out" / "ttm_summary.json");
  for (const char* field : {"mean_work", "exp_avg", "z0", "ztau", "delta_f",
                            "jarzynski_residual", "basis_convention"})
    CHECK(summary.find('"' + std::string(field) + '"') != std::string::npos);
}

TEST_CASE("measurement-free run reports the pinned identity fields") {
  TempDir tmp;
  write_config(tmp.path / "run.cfg", kTwoLevelConfig);
  const int rc = run_cli("mf --config " + (tmp.path / "run.cfg").string() +
                         " --out " + (tmp.path / "out").string());
  CHECK(rc == 0);
  const std::string csv = slurp(tmp.path / "out" / "mf_distribution.csv");
  CHECK(first_line(csv) == "w,prob");
  const std::string summary = slurp(tmp.path / "out" / "mf_summary.json");
  for (const char* field :
       {"mean_work", "exp_avg", "z_tilde", "s_rel_matrix",
        "s_rel_closed_form", "residual_eq18", "slack_eq19",
        "modified_jarzynski", "bounds", "slack21"})
    CHECK(summary.find('"' + std::string(field) + '"') != std::string::npos);
}

TEST_CASE("identical configuration produces byte-identical outputs") {
  TempDir tmp;
  write_config(tmp.path / "run.cfg", kTwoLevelConfig);
  const std::string cfg = (tmp.path / "run.cfg").string();
  REQUIRE(run_cli("ttm --config " + cfg + " --out " +
                  (tmp.path / "a").string()) == 0);
  REQUIRE(run_cli("ttm --config " + cfg + " --out " +
                  (tmp.path / "b").string()) == 0);
  CHECK(slurp(tmp.path / "a" / "ttm_distribution.csv") ==
        slurp(tmp.path / "b" / "ttm_distribution.csv"));
  CHECK(slurp(tmp.path / "a" / "ttm_summary.json") ==
        slurp(tmp.path / "b" / "ttm_summary.json"));

  REQUIRE(run_cli("mf --config " + cfg + " --out " +
                  (tmp.path / "c").string()) == 0);
  REQUIRE(run_cli("mf --config " + cfg + " --out " +
                  (tmp.path / "d").string()) == 0);
  CHECK(slurp(tmp.path / "c" / "mf_summary.json") ==
        slurp(tmp.path / "d" / "mf_summary.json"));
}

TEST_CASE("oscillator presets emit the sweep files") {
  TempDir tmp;
  for (const std::string preset : {"fig1", "fig2"}) {
    const fs::path out = tmp.path / preset;
    const int rc = run_cli("oscillator --preset " + preset + " --out " +
                           out.string());
    CHECK(rc == 0);
    const std::string csv = slurp(out / "sweep.csv");
    CHECK(first_line(csv) == "qstar,beta_w,beta_df,beta_df_plus_s");
    CHECK(count_lines(csv) == 42);  // header + 41 grid points
    CHECK(slurp(out / "sweep.json").find("\"rows\"") != std::string::npos);
  }
}

TEST_CASE("oscillator duration sweep runs from a config file") {
  TempDir tmp;
  write_config(tmp.path / "osc.cfg", R"([run]
beta = 1.0
[oscillator]
omega0 = 1.0
omega_tau = 2.0
shape = smoothstep
tau = 1.0
sweep = tau
tau_min = 0.2
tau_max = 2.0
points = 5
)");
  const int rc = run_cli("oscillator --config " +
                         (tmp.path / "osc.cfg").string() + " --out " +
                         (tmp.path / "out").string());
  CHECK(rc == 0);
  CHECK(count_lines(slurp(tmp.path / "out" / "sweep.csv")) == 6);
}

TEST_CASE("verification of the do-nothing protocol passes at roundoff") {
  TempDir tmp;
  write_config(tmp.path / "v.cfg", R"([verify]
mode = identity
dim = 4

[run]
beta = 1.1
seed = 9
)");
  const int rc = run_cli("verify --config " + (tmp.path / "v.cfg").string() +
                         " --out " + (tmp.path / "out").string());
  CHECK(rc == 0);
  const std::string report = slurp(tmp.path / "out" / "verify_report.json");
  CHECK(report.find("\"pass\": true") != std::string::npos);
  for (const char* name :
       {"ttm_jarzynski_identity", "first_law_mean_work",
        "mf_exponentiated_identity", "modified_jarzynski_identity",
        "relative_entropy_closed_form", "maximum_work_bound"})
    CHECK(report.find(name) != std::string::npos);
}

TEST_CASE("random-batch verification passes and is seed-deterministic") {
  TempDir tmp;
  write_config(tmp.path / "v.cfg", R"([verify]
mode = random
instances = 15
dim_min = 2
dim_max = 5
steps = 80

[run]
seed = 4242
)");
  const std::string cfg = (tmp.path / "v.cfg").string();
  REQUIRE(run_cli("verify --config " + cfg + " --out " +
                  (tmp.path / "a").string()) == 0);
  REQUIRE(run_cli("verify --config " + cfg + " --out " +
                  (tmp.path / "b").string()) == 0);
  CHECK(slurp(tmp.path / "a" / "verify_report.json") ==
        slurp(tmp.path / "b" / "verify_report.json"));
  CHECK(slurp(tmp.path / "a" / "verify_report.json")
            .find("\"pass\": true") != std::string::npos);
}

TEST_CASE("a broken numerical setup is reported as failure, not success") {
  TempDir tmp;
  // Twelve propagation steps cannot resolve the drive; the cross-check must
  // flag the mean-work mismatch via exit status 1 and pass = false.
  write_config(tmp.path / "v.cfg", R"([verify]
mode = oscillator
steps = 12

[oscillator]
omega0 = 1.0
omega_tau = 2.0
shape = smoothstep
tau = 1.0
n_trunc = 40

[run]
beta = 1.0
)");
  const int rc = run_cli("verify --config " + (tmp.path / "v.cfg").string() +
                         " --out " + (tmp.path / "out").string());
  CHECK(rc == 1);
  CHECK(slurp(tmp.path / "out" / "verify_report.json")
            .find("\"pass\": false") != std::string::npos);
}

TEST_CASE("usage and configuration errors exit with status 2") {
  TempDir tmp;
  CHECK(run_cli("") == 2);
  CHECK(run_cli("ttm") == 2);  // --config is required
  CHECK(run_cli("ttm --config /nonexistent/run.cfg") == 2);
  CHECK(run_cli("oscillator") == 2);
  CHECK(run_cli("oscillator --preset fig9") == 2);

  write_config(tmp.path / "bad.cfg", R"([model]
kind = two_level
typo_key = 1.0

[run]
beta = 1.0
)");
  CHECK(run_cli("ttm --config " + (tmp.path / "bad.cfg").string()) == 2);

  write_config(tmp.path / "badsweep.cfg", R"([oscillator]
sweep = nonsense
)");
  CHECK(run_cli("oscillator --config " +
                (tmp.path / "badsweep.cfg").string()) == 2);

  CHECK(run_cli("--help") == 0);
}
