#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "json.hpp"
#include "qplasma/config.hpp"
#include "qplasma/diagio.hpp"
#include "qplasma/dispersion.hpp"
#include "qplasma/equilibria.hpp"
#include "qplasma/error.hpp"
#include "qplasma/params.hpp"
#include "qplasma/scenario.hpp"

using namespace qplasma;

namespace {

int fail(const std::string& type, const std::string& message, int code) {
  nlohmann::ordered_json j;
  j["error"] = {{"type", type}, {"message", message}};
  std::cerr << j.dump() << "\n";
  return code;
}

void emit(const std::string& text, const std::string& out_dir, const std::string& name) {
  if (out_dir.empty()) {
    std::cout << text;
    return;
  }
  std::filesystem::create_directories(out_dir);
  std::ofstream os(std::filesystem::path(out_dir) / name, std::ios::binary);
  os << text;
}

std::string dispersion_csv(const std::vector<dispersion::DispersionRoot>& roots) {
  std::ostringstream os;
  os << "k,re_omega,im_omega,residual,ordering\n";
  for (const auto& r : roots) {
    os << diagio::format_double(r.K) << ',' << diagio::format_double(r.omega.real()) << ','
       << diagio::format_double(r.omega.imag()) << ',' << diagio::format_double(r.residual) << ','
       << (r.ordering ? 1 : 0) << '\n';
  }
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum and classical electron plasma models in normalized units"};
  app.require_subcommand(1);

  std::string out_dir;
  std::vector<std::string> overrides;
  bool serial = false;

  auto* p = app.add_subcommand("params", "Scales and dimensionless groups for a plasma (SI)");
  std::string material, format = "text";
  double density = 0.0, temperature = 0.0;
  p->add_option("--material", material, "gold or white_dwarf");
  p->add_option("--density", density, "electron density in 1/m^3");
  p->add_option("--temperature", temperature, "temperature in K");
  p->add_option("--format", format, "text or csv")->check(CLI::IsMember({"text", "csv"}));
  p->add_option("--out", out_dir, "write params.txt / params.csv here instead of stdout");

  auto* d = app.add_subcommand("dispersion", "Roots of the dielectric function over a K range");
  std::string model = "vlasov", equilibrium = "waterbag1d";
  double kmin = 0.1, kmax = 2.0, H = 0.0, t_over_tf = 0.01, gamma = 3.0, v0 = 1.0 / std::sqrt(3.0);
  std::size_t nk = 20;
  std::vector<double> streams;
  d->add_option("--model", model, "vlasov, wigner, multistream or fluid");
  d->add_option("--equilibrium", equilibrium, "waterbag1d, fd3d_projected_T0 or fd3d_projected");
  d->add_option("--kmin", kmin);
  d->add_option("--kmax", kmax);
  d->add_option("--nk", nk);
  d->add_option("--H", H);
  d->add_option("--t-over-tf", t_over_tf);
  d->add_option("--gamma", gamma, "fluid polytropic exponent");
  d->add_option("--v0", v0, "fluid reference velocity (v_F units)");
  d->add_option("--streams", streams, "multistream velocities")->delimiter(',');
  d->add_option("--out", out_dir, "write dispersion.csv here instead of stdout");

  auto* r = app.add_subcommand("run", "Integrate one scenario");
  std::string config_path;
  r->add_option("--config", config_path, "scenario file")->required();
  r->add_option("--out", out_dir, "output directory (overrides out_dir)");
  r->add_option("--override", overrides, "key=value, repeatable");
  r->add_flag("--serial", serial, "use the serial reference kernels");

  auto* c = app.add_subcommand("compare", "Run two scenarios on the same grid and join their series");
  std::vector<std::string> configs;
  c->add_option("configs", configs, "two scenario files")->expected(2);
  c->add_option("--config", configs, "scenario file (give twice)");
  c->add_option("--out", out_dir, "output directory");
  c->add_option("--override", overrides, "key=value applied to both, repeatable");
  c->add_flag("--serial", serial, "use the serial reference kernels");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    return fail("usage", e.what(), 2);
  }

  try {
    scenario::apply_thread_cap();
    const Exec exec = serial ? Exec::Serial : Exec::Parallel;

    if (*p) {
      params::PhysicalConditions cond;
      if (!material.empty()) {
        cond = params::material(material);
      } else {
        if (density <= 0.0 || temperature <= 0.0) return fail("usage", "give --material or --density and --temperature", 2);
        cond = params::electron_conditions(density, temperature);
      }
      const auto report = params::make_report(cond);
      const bool csv = format == "csv";
      emit(csv ? params::format_csv(report) : params::format_text(report), out_dir, csv ? "params.csv" : "params.txt");
      return 0;
    }

    if (*d) {
      dispersion::DielectricModel m;
      switch (dispersion::model_kind_from_string(model)) {
        case dispersion::ModelKind::VlasovKinetic:
          m = dispersion::vlasov_model(equilibria::by_name(equilibrium, t_over_tf));
          break;
        case dispersion::ModelKind::WignerKinetic:
          m = dispersion::wigner_model(equilibria::by_name(equilibrium, t_over_tf), H);
          break;
        case dispersion::ModelKind::Multistream: {
          if (streams.empty()) return fail("usage", "multistream needs --streams", 2);
          StreamSpec s;
          s.velocities = streams;
          s.probabilities.assign(streams.size(), 1.0 / static_cast<double>(streams.size()));
          m = dispersion::multistream_model(s, H);
          break;
        }
        case dispersion::ModelKind::QuantumFluid:
          m = dispersion::fluid_model(gamma, v0, H);
          break;
      }
      emit(dispersion_csv(dispersion::scan(m, kmin, kmax, nk)), out_dir, "dispersion.csv");
      return 0;
    }

    if (*r) {
      auto cfg = config::load_config(config_path, overrides);
      if (!out_dir.empty()) cfg.out_dir = out_dir;
      const auto result = scenario::run(cfg, exec);
      scenario::write_outputs(result, cfg.out_dir);
      std::cout << "wrote " << cfg.out_dir << " (config_hash " << result.hash << ")\n";
      return 0;
    }

    if (*c) {
      if (configs.size() != 2) return fail("usage", "compare needs exactly two scenario files", 2);
      auto a = config::load_config(configs[0], overrides);
      auto b = config::load_config(configs[1], overrides);
      const std::string dir = out_dir.empty() ? a.out_dir : out_dir;
      const auto cmp = scenario::compare(a, b, exec);
      scenario::write_outputs(cmp.a, std::filesystem::path(dir) / "a");
      scenario::write_outputs(cmp.b, std::filesystem::path(dir) / "b");
      emit(cmp.joined_csv, dir, "compare.csv");
      std::cout << "wrote " << dir << "\n";
      return 0;
    }
  } catch (const config::ConfigError& e) {
    return fail("config", e.what(), 2);
  } catch (const DomainError& e) {
    return fail("domain", e.what(), 2);
  } catch (const NumericError& e) {
    return fail("numeric", e.what(), 3);
  } catch (const FormatError& e) {
    return fail("format", e.what(), 4);
  } catch (const std::exception& e) {
    return fail("internal", e.what(), 1);
  }
  return 0;
}
