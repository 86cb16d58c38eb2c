// Command-line front end: convergence studies and curved-mesh export.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "curvefem/analysis.hpp"
#include "curvefem/config.hpp"
#include "curvefem/errors.hpp"

namespace {

using nlohmann::json;

int run_study_command(cfem::StudyConfig config) {
  config.validate();
  std::filesystem::create_directories(config.output_dir);

  std::vector<cfem::StudyReport> reports;
  for (int r : config.r_list)
    for (int k : config.k_list) {
      std::fprintf(stderr, "study %s r=%d k=%d levels=%d lift=%s\n", config.problem.c_str(), r,
                   k, config.levels, cfem::to_string(config.lift));
      cfem::StudyReport report = cfem::run_study(config.problem, r, k, config.levels, config.lift);
      const std::string csv_name = config.output_dir + "/study_" + config.problem + "_r" +
                                   std::to_string(r) + "_k" + std::to_string(k) + ".csv";
      std::ofstream csv(csv_name);
      if (!csv) throw cfem::IoError("cannot write " + csv_name);
      cfem::write_study_csv(report, csv);
      reports.push_back(std::move(report));
    }

  const std::string tables = cfem::eoc_markdown_tables(config.problem, reports);
  const std::string md_name = config.output_dir + "/eoc_table.md";
  std::ofstream md(md_name);
  if (!md) throw cfem::IoError("cannot write " + md_name);
  md << tables;

  if (config.format == "markdown") {
    std::cout << tables;
  } else {
    for (const auto& report : reports) {
      std::cout << "# " << report.problem << " r=" << report.r << " k=" << report.k << "\n";
      cfem::write_study_csv(report, std::cout);
    }
  }
  return 0;
}

int run_mesh_command(const std::string& domain_name, int r, int level, const std::string& out) {
  cfem::DomainPtr domain;
  cfem::AffineMesh affine;
  if (domain_name == "disk") {
    domain = cfem::unit_disk();
    affine = cfem::generate_disk_mesh(3);
    for (int l = 0; l < level; ++l) affine = cfem::refine(affine, domain.get());
  } else if (domain_name == "flower") {
    domain = cfem::flower();
    affine = cfem::generate_flower_mesh(3);
    for (int l = 0; l < level; ++l) affine = cfem::refine(affine, domain.get());
  } else if (domain_name == "sphere") {
    domain = cfem::unit_sphere_surface();
    affine = cfem::generate_sphere_surface_mesh(level);
  } else {
    throw cfem::ConfigError("domain must be disk, flower or sphere");
  }

  auto mesh = std::make_shared<const cfem::CurvedMesh>(
      std::make_shared<const cfem::AffineMesh>(std::move(affine)), domain, r);

  std::filesystem::path path(out);
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  cfem::export_vtk(*mesh, out);

  json summary;
  summary["domain"] = domain_name;
  summary["r"] = r;
  summary["level"] = level;
  summary["n_cells"] = mesh->n_cells();
  summary["n_boundary_faces"] = static_cast<int>(mesh->affine().boundary_faces.size());
  summary["h"] = mesh->affine().h;
  summary["max_boundary_distance"] = mesh->max_boundary_distance();
  const std::string json_name = out + ".json";
  std::ofstream js(json_name);
  if (!js) throw cfem::IoError("cannot write " + json_name);
  js << summary.dump(2) << "\n";
  std::cout << summary.dump(2) << "\n";
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"High-order curved-mesh finite elements: bulk problems with "
               "Laplace-Beltrami boundary conditions and surface problems, with "
               "lift-based convergence studies"};
  app.require_subcommand(1);

  // study
  auto* study = app.add_subcommand("study", "run a convergence study and write CSV/EOC tables");
  std::string config_path, problem, lift_name, out_dir, format;
  std::vector<int> r_list, k_list;
  int levels = -1;
  study->add_option("--config", config_path, "TOML config file");
  study->add_option("--problem", problem, "ventcel-disk | sphere-laplace");
  study->add_option("--r", r_list, "mesh degrees (comma separated)")->delimiter(',');
  study->add_option("--k", k_list, "FE degrees (comma separated)")->delimiter(',');
  study->add_option("--levels", levels, "number of refinement levels (>= 2)");
  study->add_option("--lift", lift_name, "modified | elliott");
  study->add_option("--out", out_dir, "output directory");
  study->add_option("--format", format, "stdout format: csv | markdown");

  // mesh
  auto* mesh_cmd = app.add_subcommand("mesh", "export a curved mesh as VTK plus a JSON summary");
  std::string mesh_domain = "disk", mesh_out = "mesh.vtk";
  int mesh_r = 2, mesh_level = 1;
  mesh_cmd->add_option("--domain", mesh_domain, "disk | flower | sphere");
  mesh_cmd->add_option("--r", mesh_r, "geometric degree");
  mesh_cmd->add_option("--level", mesh_level, "refinement level");
  mesh_cmd->add_option("--out", mesh_out, "output VTK path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return 0; // --help
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (study->parsed()) {
      cfem::StudyConfig config;
      if (!config_path.empty()) config = cfem::parse_toml_config(config_path);
      if (!problem.empty()) config.problem = problem;
      if (!r_list.empty()) config.r_list = r_list;
      if (!k_list.empty()) config.k_list = k_list;
      if (levels >= 0) config.levels = levels;
      if (!lift_name.empty()) config.lift = cfem::lift_variant_from_string(lift_name);
      if (!out_dir.empty()) config.output_dir = out_dir;
      if (!format.empty()) config.format = format;
      return run_study_command(config);
    }
    return run_mesh_command(mesh_domain, mesh_r, mesh_level, mesh_out);
  } catch (const cfem::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const cfem::Error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
