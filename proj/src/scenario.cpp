#include "qplasma/scenario.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "qplasma/dispersion.hpp"
#include "qplasma/equilibria.hpp"
#include "qplasma/error.hpp"
#include "qplasma/hartree.hpp"
#include "qplasma/qfluid.hpp"
#include "qplasma/vlasov.hpp"
#include "qplasma/wigner.hpp"

namespace qplasma::scenario {

namespace {

using config::ScenarioConfig;

equilibria::Equilibrium make_equilibrium(const ScenarioConfig& c) {
  return equilibria::by_name(c.equilibrium, c.t_over_tf);
}

StreamSpec make_streams(const ScenarioConfig& c, const SpatialGrid& grid) {
  std::vector<double> u;
  for (double v : c.streams) u.push_back(equilibria::snap_velocity(v, grid, c.H));
  if (c.occupations == "uniform") {
    StreamSpec s;
    s.velocities = u;
    s.probabilities.assign(u.size(), 1.0 / static_cast<double>(u.size()));
    s.validate();
    return s;
  }
  const auto eq = make_equilibrium(c);
  const double t = eq.kind() == equilibria::Kind::ProjectedFD_finiteT ? c.t_over_tf : 0.0;
  return equilibria::fd_stream_occupations(t, eq.mu(), u);
}

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

struct Recorder {
  const ScenarioConfig& c;
  RunResult& r;
  DiagnosticSample first;
  bool have_first = false;

  void sample(const DiagnosticSample& s) {
    if (!have_first) {
      first = s;
      have_first = true;
    }
    r.series.samples.push_back(s);
    auto rel = [](double now, double ref) { return std::abs(now - ref) / std::max(std::abs(ref), 1e-300); };
    r.summary.mass_drift = std::max(r.summary.mass_drift, rel(s.mass, first.mass));
    r.summary.energy_drift = std::max(r.summary.energy_drift, rel(s.total_energy, first.total_energy));
  }
};

void finish_phase_space(RunResult& r, const ScenarioConfig& c, const PhaseSpaceField& f) {
  diagio::VortexOptions vo;
  vo.threshold = c.vortex_threshold;
  vo.min_v_cells = static_cast<std::size_t>(c.vortex_min_v_cells);
  vo.min_x_fraction = c.vortex_min_x_fraction;
  r.summary.phase_velocity = phase_velocity(c);
  r.summary.vortex = diagio::detect_vortex(f, r.summary.phase_velocity, vo);
  r.final_f = f;
}

}  // namespace

double phase_velocity(const ScenarioConfig& c) {
  try {
    const auto root = dispersion::solve_root(dispersion::vlasov_model(make_equilibrium(c)), c.K);
    return root.omega.real() / c.K;
  } catch (const std::exception&) {
    return std::sqrt(1.0 + c.K * c.K) / c.K;
  }
}

RunResult run(const ScenarioConfig& c, Exec exec, const std::function<void(double)>& progress) {
  if (auto issues = config::validate(c); !issues.empty()) throw config::ConfigError(std::move(issues));
  RunResult r;
  r.config = c;
  r.hash = config::config_hash(c);
  r.series.model = c.model;
  r.series.config_hash = r.hash;
  const auto grid = c.grid();
  const auto steps = static_cast<std::size_t>(std::llround(c.t_end / c.dt));
  r.summary.steps = steps;
  Recorder rec{c, r, {}, false};
  auto snap_due = [&](std::size_t k) {
    return c.snapshot_every > 0 && k % static_cast<std::size_t>(c.snapshot_every) == 0 && k != steps;
  };
  auto tag = [&](diagio::Snapshot s) {
    s.header.config_hash = r.hash;
    s.header.provenance = r.summary.provenance;
    return s;
  };

  if (c.model == "vlasov" || c.model == "wigner") {
    PhaseSpaceField f0;
    if (c.model == "wigner" && c.init == "mixture") {
      const auto spec = make_streams(c, grid.space);
      const auto mix = hartree::perturbed_mixture(spec, grid.space, c.H, c.alpha, c.K);
      f0 = equilibria::wigner_of_mixture(mix, grid);
      r.summary.provenance = "Wigner transform of a perturbed plane-wave mixture";
    } else {
      f0 = equilibria::apply_cosine_perturbation(equilibria::sample(make_equilibrium(c), grid), c.alpha, c.K);
      r.summary.provenance = "perturbed kinetic equilibrium " + c.equilibrium;
    }
    const double background = mean(fields::density(f0));
    if (c.model == "vlasov") {
      vlasov::Options opt;
      opt.exec = exec;
      if (c.interpolation == "spectral") {
        opt.x_interp = vlasov::Interpolation::Spectral;
        opt.v_interp = vlasov::Interpolation::Spectral;
      }
      const vlasov::Integrator integ(grid, background, opt);
      vlasov::VlasovState st{std::move(f0), 0.0};
      rec.sample(integ.diagnose(st));
      for (std::size_t k = 1; k <= steps; ++k) {
        integ.step(st, c.dt);
        if (k % static_cast<std::size_t>(c.diag_every) == 0 || k == steps) rec.sample(integ.diagnose(st));
        if (snap_due(k)) r.snapshots.push_back(tag(diagio::phase_space_snapshot(st.f, c.model, st.time, 0.0, false)));
        if (progress) progress(st.time);
      }
      finish_phase_space(r, c, st.f);
    } else {
      wigner::Options opt;
      opt.exec = exec;
      wigner::Integrator integ(grid, c.H, background, opt);
      wigner::WignerState st{std::move(f0), 0.0, c.H, r.summary.provenance};
      rec.sample(integ.diagnose(st));
      for (std::size_t k = 1; k <= steps; ++k) {
        integ.step(st, c.dt);
        if (k % static_cast<std::size_t>(c.diag_every) == 0 || k == steps) rec.sample(integ.diagnose(st));
        if (snap_due(k)) r.snapshots.push_back(tag(diagio::phase_space_snapshot(st.f, c.model, st.time, c.H, true)));
        if (progress) progress(st.time);
      }
      r.summary.negative_mass = wigner::negative_mass(st.f);
      r.summary.aliasing_warnings = integ.aliasing_warnings();
      finish_phase_space(r, c, st.f);
    }
  } else if (c.model == "hartree") {
    const auto spec = make_streams(c, grid.space);
    const hartree::Integrator integ(grid.space, c.H, 1.0, {exec, 1e-8, true});
    hartree::HartreeState st{hartree::perturbed_mixture(spec, grid.space, c.H, c.alpha, c.K), 0.0};
    r.summary.provenance = "perturbed plane-wave mixture";
    std::vector<double> norms0;
    for (const auto& p : st.streams.psi) norms0.push_back(hartree::norm(p));
    rec.sample(integ.diagnose(st));
    for (std::size_t k = 1; k <= steps; ++k) {
      integ.step(st, c.dt);
      if (k % static_cast<std::size_t>(c.diag_every) == 0 || k == steps) rec.sample(integ.diagnose(st));
      if (snap_due(k))
        r.snapshots.push_back(tag(diagio::wavefunction_snapshot(st.streams.psi, grid.space, c.model, st.time, c.H)));
      if (progress) progress(st.time);
    }
    for (std::size_t a = 0; a < st.streams.size(); ++a)
      r.summary.norm_drift = std::max(r.summary.norm_drift, std::abs(hartree::norm(st.streams.psi[a]) / norms0[a] - 1.0));
    r.final_streams = std::move(st.streams);
  } else {
    const qfluid::Integrator integ(grid.space, c.H, {c.gamma, c.p0}, {exec, 1e-8, true});
    auto st = qfluid::seeded_state(grid.space, c.alpha, c.K);
    r.summary.provenance = "seeded density mode";
    const double n0 = hartree::norm(st.psi);
    rec.sample(integ.diagnose(st));
    for (std::size_t k = 1; k <= steps; ++k) {
      integ.step(st, c.dt);
      if (k % static_cast<std::size_t>(c.diag_every) == 0 || k == steps) rec.sample(integ.diagnose(st));
      if (snap_due(k)) r.snapshots.push_back(tag(diagio::wavefunction_snapshot({st.psi}, grid.space, c.model, st.time, c.H)));
      if (progress) progress(st.time);
    }
    r.summary.norm_drift = std::abs(hartree::norm(st.psi) / n0 - 1.0);
    StreamSet s;
    s.grid = grid.space;
    s.H = c.H;
    s.probabilities = {1.0};
    s.psi = {std::move(st.psi)};
    r.final_streams = std::move(s);
  }
  return r;
}

void write_outputs(const RunResult& r, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  diagio::write_series_csv(dir / "series.csv", r.series);
  {
    std::ofstream os(dir / "config.cfg", std::ios::binary);
    os << "# config_hash=" << r.hash << "\n" << config::serialize(r.config);
  }
  for (std::size_t i = 0; i < r.snapshots.size(); ++i) {
    char name[64];
    std::snprintf(name, sizeof name, "snapshot_%06zu.qpsn", i);
    diagio::write_snapshot(dir / name, r.snapshots[i]);
  }
  const auto& c = r.config;
  if (c.snapshot_final) {
    diagio::Snapshot s;
    const double t = r.series.samples.empty() ? 0.0 : r.series.samples.back().t;
    if (r.final_f)
      s = diagio::phase_space_snapshot(*r.final_f, c.model, t, c.H, c.model == "wigner");
    else if (r.final_streams)
      s = diagio::wavefunction_snapshot(r.final_streams->psi, r.final_streams->grid, c.model, t, c.H);
    s.header.config_hash = r.hash;
    s.header.provenance = r.summary.provenance;
    diagio::write_snapshot(dir / "snapshot_final.qpsn", s);
  }
  nlohmann::ordered_json j;
  j["model"] = c.model;
  j["config_hash"] = r.hash;
  j["provenance"] = r.summary.provenance;
  j["steps"] = r.summary.steps;
  j["mass_drift"] = r.summary.mass_drift;
  j["energy_drift"] = r.summary.energy_drift;
  j["norm_drift"] = r.summary.norm_drift;
  j["negative_mass"] = r.summary.negative_mass;
  j["aliasing_warnings"] = r.summary.aliasing_warnings;
  if (r.final_f) {
    j["phase_velocity"] = r.summary.phase_velocity;
    j["vortex"] = {{"present", r.summary.vortex.present},
                   {"width", r.summary.vortex.width},
                   {"v_cells", r.summary.vortex.v_cells},
                   {"x_fraction", r.summary.vortex.x_fraction},
                   {"coherence", r.summary.vortex.coherence}};
  }
  std::ofstream os(dir / "summary.json", std::ios::binary);
  os << j.dump(2) << "\n";
}

Comparison compare(const ScenarioConfig& a, const ScenarioConfig& b, Exec exec) {
  if (!(a.grid() == b.grid())) throw DomainError("compare: the two configs use different grids");
  if (a.dt != b.dt || a.t_end != b.t_end || a.diag_every != b.diag_every)
    throw DomainError("compare: the two configs use different time sampling");
  Comparison cmp{run(a, exec), run(b, exec), {}};
  std::ostringstream os;
  os << "# a_model=" << a.model << " a_config_hash=" << cmp.a.hash << " b_model=" << b.model
     << " b_config_hash=" << cmp.b.hash << "\n";
  os << "t,a_field_energy,a_kinetic_energy,a_total_energy,b_field_energy,b_kinetic_energy,b_total_energy\n";
  const auto& sa = cmp.a.series.samples;
  const auto& sb = cmp.b.series.samples;
  for (std::size_t i = 0; i < std::min(sa.size(), sb.size()); ++i) {
    using diagio::format_double;
    os << format_double(sa[i].t) << ',' << format_double(sa[i].field_energy) << ','
       << format_double(sa[i].kinetic_energy) << ',' << format_double(sa[i].total_energy) << ','
       << format_double(sb[i].field_energy) << ',' << format_double(sb[i].kinetic_energy) << ','
       << format_double(sb[i].total_energy) << '\n';
  }
  cmp.joined_csv = os.str();
  return cmp;
}

int apply_thread_cap() {
  const char* env = std::getenv("QPLASMA_THREADS");
  if (!env || !*env) return 0;
  char* end = nullptr;
  const long n = std::strtol(env, &end, 10);
  if (*end != '\0' || n < 1) throw DomainError("QPLASMA_THREADS must be a positive integer");
  const int cap = static_cast<int>(std::min<long>(n, omp_get_max_threads()));
  omp_set_num_threads(cap);
  return cap;
}

}  // namespace qplasma::scenario
