#include "catline/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "catline/version.hpp"

namespace catline {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string header_block(const ScenarioConfig& config,
                         const std::vector<std::pair<std::string, std::string>>&
                             extras = {}) {
  std::ostringstream os;
  os << "# catline " << kVersion << "\n";
  std::istringstream cfg(render_config(config));
  std::string line;
  while (std::getline(cfg, line)) {
    if (line.empty()) {
      os << "#\n";
    } else {
      os << "# " << line << "\n";
    }
  }
  for (const auto& [key, value] : extras) {
    os << "# " << key << " = " << value << "\n";
  }
  return os.str();
}

void write_file(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write output file '" + path + "'");
  out << body;
}

std::string trajectory_csv(const ScenarioConfig& config, const Trajectory& traj,
                           const std::vector<std::pair<std::string, std::string>>&
                               extras = {}) {
  std::ostringstream os;
  os << header_block(config, extras);
  os << "t,p_e,p_g,z,trace_err,min_eig\n";
  for (size_t i = 0; i < traj.times.size(); ++i) {
    os << fmt(traj.times[i]) << ',' << fmt(traj.p_e[i]) << ','
       << fmt(traj.p_g[i]) << ',' << fmt(traj.z[i]) << ','
       << fmt(traj.trace_err[i]) << ',' << fmt(traj.min_eig[i]) << "\n";
  }
  return os.str();
}

std::string collision_csv(const ScenarioConfig& config,
                          const CollisionTrace& trace,
                          const std::vector<std::pair<std::string, std::string>>&
                              extras = {}) {
  std::ostringstream os;
  os << header_block(config, extras);
  os << "k,reservoir_index,p_e,p_g,z\n";
  for (size_t i = 0; i < trace.z.size(); ++i) {
    os << (i + 1) << ',' << trace.reservoir_choice[i] << ','
       << fmt(trace.p_e[i]) << ',' << fmt(trace.p_g[i]) << ','
       << fmt(trace.z[i]) << "\n";
  }
  return os.str();
}

double target_alpha_of(const ScenarioConfig& config) {
  const double eps2 = config.scenario == Scenario::Ramp ? config.drive.eps2_0
                                                        : config.system.eps2;
  return std::sqrt(eps2 / config.system.kerr);
}

DensityMatrix initial_plus(const ScenarioConfig& config) {
  CatBasis basis = cat_basis(target_alpha_of(config), config.run.dim);
  return plus_state(basis).density();
}

}  // namespace

ScenarioResult run_scenario(const ScenarioConfig& config) {
  validate_config(config);
  std::filesystem::create_directories(config.run.out_dir);
  const std::string base =
      (std::filesystem::path(config.run.out_dir) / scenario_name(config.scenario))
          .string();
  ScenarioResult result;

  switch (config.scenario) {
    case Scenario::Stabilize: {
      Trajectory traj = evolve(initial_plus(config), config.system,
                               config.drive, config.run.t_final, config.run.dt,
                               config.run.record_every);
      const std::string path = base + ".csv";
      write_file(path, trajectory_csv(config, traj));
      result.files.push_back(path);
      break;
    }
    case Scenario::Ramp: {
      DensityMatrix vacuum = fock(0, config.run.dim).density();
      Trajectory traj =
          evolve(vacuum, config.system, config.drive, config.run.t_final,
                 config.run.dt, config.run.record_every);
      CatBasis basis = cat_basis(target_alpha_of(config), config.run.dim);
      const double fid = fidelity(traj.final_state, basis.c_plus);
      const std::string path = base + ".csv";
      write_file(path,
                 trajectory_csv(config, traj, {{"final_fidelity", fmt(fid)}}));
      result.files.push_back(path);
      break;
    }
    case Scenario::Homogenize: {
      CatBasis basis = cat_basis(target_alpha_of(config), config.run.dim);
      const std::string path = base + ".csv";
      CollisionTrace trace;
      try {
        trace = run_collisions(plus_state(basis).density(), config.system,
                               config.collision, basis);
      } catch (const CollisionAbortError& e) {
        // Keep the partial record next to the failure, then propagate.
        write_file(path, collision_csv(config, e.partial_trace,
                                       {{"aborted", "true"}}));
        throw;
      }
      DetectorSettings detector{config.run.window, config.run.tol};
      auto hit = detect_steady_state(trace, detector.window, detector.tol);
      std::vector<std::pair<std::string, std::string>> extras;
      if (hit) {
        trace.steady_state_index = hit->first;
        trace.z_ss = hit->second;
        extras.push_back({"steady_state_index", std::to_string(hit->first)});
        extras.push_back({"z_ss", fmt(hit->second)});
      }
      write_file(path, collision_csv(config, trace, extras));
      result.files.push_back(path);
      break;
    }
    case Scenario::Classify: {
      CatBasis basis = cat_basis(target_alpha_of(config), config.run.dim);
      CollisionEngine engine(config.system, config.collision, basis);
      const std::string trace_path = base + ".csv";
      CollisionEngine::ChainResult chain = [&] {
        try {
          return engine.run(plus_state(basis).density(),
                            config.collision.n_collisions,
                            config.collision.seed);
        } catch (const CollisionAbortError& e) {
          write_file(trace_path, collision_csv(config, e.partial_trace,
                                               {{"aborted", "true"}}));
          throw;
        }
      }();
      DetectorSettings detector{config.run.window, config.run.tol};
      Decision decision = decide_from_trace(chain.trace, detector);
      std::vector<std::pair<std::string, std::string>> extras;
      if (chain.trace.steady_state_index) {
        extras.push_back({"steady_state_index",
                          std::to_string(*chain.trace.steady_state_index)});
      }
      write_file(trace_path, collision_csv(config, chain.trace, extras));
      result.files.push_back(trace_path);

      std::ostringstream summary;
      summary << header_block(config);
      summary << "label,z_ss,converged,n_used\n";
      summary << decision.label << ',' << fmt(decision.z_ss) << ','
              << (decision.converged ? "true" : "false") << ','
              << decision.n_used << "\n";
      const std::string summary_path = base + "_summary.csv";
      write_file(summary_path, summary.str());
      result.files.push_back(summary_path);
      result.converged = decision.converged;
      break;
    }
  }
  return result;
}

}  // namespace catline
