#include "doctest.h"

#include <omp.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "qplasma/error.hpp"
#include "qplasma/scenario.hpp"

using namespace qplasma;
namespace fs = std::filesystem;

namespace {

config::ScenarioConfig small(const std::string& model) {
  config::ScenarioConfig c;
  c.model = model;
  c.nx = 32;
  c.nv = 32;
  c.t_end = 2.0;
  c.dt = 0.05;
  c.alpha = 0.05;
  c.snapshot_every = 20;
  if (model != "vlasov") c.H = 1.0;
  if (model == "hartree") c.streams = {-1.5, -0.5, 0.5, 1.5};
  return c;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

fs::path fresh_dir(const std::string& name) {
  const auto d = fs::temp_directory_path() / ("qplasma_test_" + name);
  fs::remove_all(d);
  return d;
}

}  // namespace

TEST_CASE("runs produce the expected artefacts") {
  for (const std::string m : {"vlasov", "wigner", "hartree", "fluid"}) {
    const auto r = scenario::run(small(m));
    CHECK(r.series.samples.size() == 41);
    CHECK(r.summary.steps == 40);
    CHECK(r.series.model == m);
    CHECK(r.hash == config::config_hash(small(m)));
    CHECK(r.snapshots.size() == 1);
    CHECK(r.summary.mass_drift < 1e-8);
    CHECK(r.final_f.has_value() == (m == "vlasov" || m == "wigner"));
  }
}

TEST_CASE("outputs are byte-identical across runs") {
  const auto c = small("wigner");
  const auto a = fresh_dir("a"), b = fresh_dir("b");
  scenario::write_outputs(scenario::run(c), a);
  scenario::write_outputs(scenario::run(c), b);
  std::size_t files = 0;
  for (const auto& e : fs::directory_iterator(a)) {
    ++files;
    const auto other = b / e.path().filename();
    REQUIRE(fs::exists(other));
    CHECK(slurp(e.path()) == slurp(other));
  }
  CHECK(files >= 4);
  CHECK(fs::exists(a / "series.csv"));
  CHECK(fs::exists(a / "summary.json"));
  CHECK(fs::exists(a / "config.cfg"));
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("serial and parallel runs agree bitwise") {
  const int saved = omp_get_max_threads();
  omp_set_num_threads(4);
  const auto c = small("vlasov");
  const auto s = scenario::run(c, Exec::Serial), p = scenario::run(c, Exec::Parallel);
  omp_set_num_threads(saved);
  REQUIRE(s.final_f.has_value());
  CHECK(std::equal(s.final_f->data().begin(), s.final_f->data().end(), p.final_f->data().begin()));
}

TEST_CASE("compare joins matching runs and refuses mismatched grids") {
  auto a = small("vlasov"), b = small("wigner");
  b.t_end = a.t_end;
  const auto cmp = scenario::compare(a, b);
  CHECK(cmp.joined_csv.find('\n') != std::string::npos);
  std::istringstream is(cmp.joined_csv);
  std::string line;
  std::size_t rows = 0;
  while (std::getline(is, line)) ++rows;
  CHECK(rows == 43);
  b.nv = 64;
  CHECK_THROWS_AS(scenario::compare(a, b), DomainError);
}

TEST_CASE("thread cap from the environment") {
  const int saved = omp_get_max_threads();
  setenv("QPLASMA_THREADS", "1", 1);
  CHECK(scenario::apply_thread_cap() == 1);
  CHECK(omp_get_max_threads() == 1);
  setenv("QPLASMA_THREADS", "zero", 1);
  CHECK_THROWS_AS(scenario::apply_thread_cap(), DomainError);
  unsetenv("QPLASMA_THREADS");
  CHECK(scenario::apply_thread_cap() == 0);
  omp_set_num_threads(saved);
}
