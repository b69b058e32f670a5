// Copyright 2026 The camplace Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "camplace/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include "camplace/hash.hpp"
#include "camplace/provenance.hpp"
#include "json.hpp"

namespace camplace {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

Box box_from(const json& j) {
  auto v = [](const json& a) {
    if (!a.is_array() || a.size() != 3) throw InputError("box corner must be [x, y, z]");
    return Vec3(a[0].get<double>(), a[1].get<double>(), a[2].get<double>());
  };
  return {v(j.at("min")), v(j.at("max"))};
}

fs::path resolve(const fs::path& base, const std::string& p) {
  const fs::path path(p);
  return path.is_absolute() ? path : base / path;
}

std::string run_name(Method m, int budget) {
  return std::string(to_string(m)) + "_n" + std::to_string(budget);
}

}  // namespace

void PipelineConfig::validate() const {
  const int sources = (synthetic_scene ? 1 : 0) + (builtin_scene ? 1 : 0) + (point_cloud ? 1 : 0);
  if (sources != 1) {
    throw InputError("config must name exactly one scene source (synthetic, builtin or point_cloud)");
  }
  if (synthetic_scene && !fs::exists(*synthetic_scene)) {
    throw InputError("scene file '" + synthetic_scene->string() + "' does not exist");
  }
  if (point_cloud && !fs::exists(*point_cloud)) {
    throw InputError("point cloud '" + point_cloud->string() + "' does not exist");
  }
  if (builtin_scene && *builtin_scene != "store") {
    throw InputError("unknown builtin scene '" + *builtin_scene + "'");
  }
  if (!(voxel_size > 0.0) || !std::isfinite(voxel_size)) {
    throw InputError("voxel_size must be positive");
  }
  if (min_points < 1) throw InputError("min_points must be at least 1");
  if (free_space_heights.empty() && shelf_boxes.empty() && !shelves_from_scene) {
    throw InputError("config needs at least one target entry (free_space or shelves)");
  }
  if (free_space_gamma < 0 || free_space_gamma > gamma_max || shelf_gamma < 0 ||
      shelf_gamma > gamma_max) {
    throw InputError("target gamma must lie in [0, gamma_max]");
  }
  camera.validate();
  if (!(lattice.spacing > 0.0)) throw InputError("candidate spacing must be positive");
  if (pixel_stride && *pixel_stride < 1) throw InputError("pixel_stride must be at least 1");
  if (max_incidence_deg && !(*max_incidence_deg > 0.0 && *max_incidence_deg <= 90.0)) {
    throw InputError("max_incidence_deg must lie in (0, 90]");
  }
  if (gamma_max < 1) throw InputError("gamma_max must be at least 1");
  for (const SolverSweep& s : solvers) {
    if (s.budgets.empty()) throw InputError("solver entry needs at least one budget");
    for (int b : s.budgets) {
      if (b < 1) throw InputError("budgets must be at least 1");
    }
    if (!(s.time_budget > 0.0)) throw InputError("time_budget must be positive");
  }
}

PipelineConfig pipeline_config_from_json(const std::string& text, const fs::path& base_dir) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw InputError(std::string("config: invalid JSON: ") + e.what());
  }
  PipelineConfig c;
  try {
    const json& scene = j.at("scene");
    if (scene.contains("synthetic")) c.synthetic_scene = resolve(base_dir, scene["synthetic"].get<std::string>());
    if (scene.contains("builtin")) c.builtin_scene = scene["builtin"].get<std::string>();
    if (scene.contains("point_cloud")) {
      c.point_cloud = resolve(base_dir, scene["point_cloud"].get<std::string>());
      const std::string fmt = scene.value("format", std::string("xyz"));
      if (fmt == "xyz") c.cloud_format = CloudFormat::kXyzAscii;
      else if (fmt == "ply") c.cloud_format = CloudFormat::kPlyAscii;
      else throw InputError("unknown point cloud format '" + fmt + "'");
      c.min_points = scene.value("min_points", 1);
    }
    c.voxel_size = j.value("voxel_size", kDefaultVoxelSize);
    c.max_voxels = j.value("max_voxels", kDefaultMaxVoxels);
    c.gamma_max = j.value("gamma_max", kDefaultGammaMax);

    if (!j.contains("targets")) {
      c.free_space_heights = {0.5, 1.5};
    } else {
      const json& t = j["targets"];
      if (t.contains("free_space")) {
        c.free_space_heights = t["free_space"].value("heights", std::vector<double>{0.5, 1.5});
        c.free_space_gamma = t["free_space"].value("gamma", 3);
      }
      if (t.contains("shelves")) {
        const json& s = t["shelves"];
        for (const json& b : s.value("boxes", json::array())) c.shelf_boxes.push_back(box_from(b));
        c.shelves_from_scene = s.value("from_scene", false);
        c.shelf_gamma = s.value("gamma", 1);
      }
      if (t.contains("max_incidence_deg")) {
        if (t["max_incidence_deg"].is_null()) c.max_incidence_deg.reset();
        else c.max_incidence_deg = t["max_incidence_deg"].get<double>();
      }
    }

    if (j.contains("camera")) {
      const json& cam = j["camera"];
      c.camera.hfov_deg = cam.value("hfov_deg", c.camera.hfov_deg);
      c.camera.vfov_deg = cam.value("vfov_deg", c.camera.vfov_deg);
      c.camera.width_px = cam.value("width_px", c.camera.width_px);
      c.camera.height_px = cam.value("height_px", c.camera.height_px);
      c.camera.max_range = cam.value("max_range", c.camera.max_range);
    }
    if (j.contains("candidates")) {
      const json& l = j["candidates"];
      c.lattice.spacing = l.value("spacing", c.lattice.spacing);
      if (l.contains("mount_height") && !l["mount_height"].is_null()) {
        c.lattice.mount_height = l["mount_height"].get<double>();
      }
      c.lattice.yaw_step_deg = l.value("yaw_step_deg", c.lattice.yaw_step_deg);
      c.lattice.pitch_values_deg = l.value("pitch_values_deg", c.lattice.pitch_values_deg);
    }
    if (j.contains("raycast") && j["raycast"].contains("pixel_stride") &&
        !j["raycast"]["pixel_stride"].is_null()) {
      c.pixel_stride = j["raycast"]["pixel_stride"].get<int>();
    }
    if (j.contains("solvers")) {
      for (const json& s : j["solvers"]) {
        SolverSweep sw;
        sw.method = method_from_string(s.at("method").get<std::string>());
        sw.budgets = s.at("budgets").get<std::vector<int>>();
        sw.time_budget = s.value("time_budget", 60.0);
        if (s.contains("node_limit") && !s["node_limit"].is_null()) {
          sw.node_limit = s["node_limit"].get<std::int64_t>();
        }
        c.solvers.push_back(std::move(sw));
      }
    } else {
      for (Method m : {Method::kProposedMip, Method::kProposedGreedy, Method::kGreedyBinary,
                       Method::kZhaoMip}) {
        c.solvers.push_back({m, {4, 8, 12, 16}, 60.0, std::nullopt});
      }
    }
    c.seed = j.value("seed", std::uint64_t{0});
    c.threads = j.value("threads", 0u);
    c.out_dir = j.value("out", std::string("out"));  // relative to the working directory
  } catch (const json::exception& e) {
    throw InputError(std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

PipelineConfig load_pipeline_config(const fs::path& path) {
  return pipeline_config_from_json(read_text_file(path), path.parent_path());
}

SceneSource build_grid(const PipelineConfig& cfg) {
  cfg.validate();
  SceneSource src;
  if (cfg.point_cloud) {
    src.grid = voxelize(load_point_cloud(*cfg.point_cloud, cfg.cloud_format), cfg.voxel_size,
                        cfg.min_points, cfg.max_voxels);
    return src;
  }
  SyntheticScene scene =
      cfg.synthetic_scene ? load_scene(*cfg.synthetic_scene) : make_store_scene(cfg.voxel_size);
  scene.voxel_size = cfg.voxel_size;
  src.grid = rasterize(scene, cfg.max_voxels);
  src.scene_shelves = scene.shelves;
  return src;
}

CoverageTarget build_targets(const PipelineConfig& cfg, const SceneSource& src) {
  std::vector<CoverageTarget> parts;
  if (!cfg.free_space_heights.empty()) {
    parts.push_back(build_free_space_targets(src.grid, cfg.free_space_heights, cfg.free_space_gamma));
  }
  std::vector<Box> boxes = cfg.shelf_boxes;
  if (cfg.shelves_from_scene) boxes.insert(boxes.end(), src.scene_shelves.begin(), src.scene_shelves.end());
  if (!boxes.empty()) parts.push_back(label_shelf_targets(src.grid, boxes, cfg.shelf_gamma));
  CoverageTarget targets = merge_targets(parts);
  validate_targets(src.grid, targets, cfg.gamma_max);
  if (targets.empty()) throw InputError("target settings select no voxels");
  return targets;
}

RaycastConfig raycast_config(const PipelineConfig& cfg) {
  return make_raycast_config(cfg.camera, cfg.voxel_size, cfg.pixel_stride, cfg.max_incidence_deg);
}

SceneStack prepare_stack(const PipelineConfig& cfg, const std::optional<fs::path>& cache_dir,
                         std::ostream& log) {
  SceneStack st;
  const SceneSource src = build_grid(cfg);
  st.grid = src.grid;
  st.targets = build_targets(cfg, src);
  const CandidateSet raw = generate_candidates(st.grid, cfg.lattice, cfg.camera);
  st.candidates_before_pruning = raw.size();
  const RaycastConfig rc = raycast_config(cfg);

  st.provenance.grid = grid_hash(st.grid);
  st.provenance.targets = targets_hash(st.provenance.grid, st.targets);
  st.provenance.candidates = candidates_hash(st.provenance.grid, raw);
  const std::uint64_t raw_prov =
      matrix_provenance(st.provenance.targets, st.provenance.candidates, rc);

  std::optional<VisibilityMatrix> raw_matrix;
  const fs::path cache_file = cache_dir ? *cache_dir / "visibility_raw.cpvm" : fs::path();
  if (cache_dir && fs::exists(cache_file)) {
    VisibilityMatrix cached = read_matrix(cache_file);
    if (cached.provenance == raw_prov && cached.n_g == raw.size() && cached.n_p == st.targets.size()) {
      log << "[visibility] reusing cached matrix " << hash_to_hex(raw_prov) << "\n";
      raw_matrix = std::move(cached);
    }
  }
  if (!raw_matrix) {
    log << "[visibility] raycasting " << raw.size() << " candidates x " << st.targets.size()
        << " targets, pixel stride " << rc.pixel_stride << "\n";
    raw_matrix = build_matrix(st.grid, st.targets, raw, rc, cfg.threads);
    if (cache_dir) {
      fs::create_directories(*cache_dir);
      write_matrix(cache_file, *raw_matrix);
    }
  }
  auto [pruned, matrix] = prune_blocked(raw, *raw_matrix);
  st.candidates = std::move(pruned);
  st.matrix = std::move(matrix);
  st.provenance.matrix = st.matrix.provenance;
  std::vector<int> gamma(st.targets.gamma.begin(), st.targets.gamma.end());
  st.instance = make_instance(st.matrix, gamma, st.candidates.location_group);
  log << "[visibility] " << st.candidates.size() << " of " << raw.size()
      << " candidates kept after pruning, " << st.instance.n_groups << " locations\n";

  if (cache_dir) {
    fs::create_directories(*cache_dir);
    write_grid(*cache_dir / "grid.cpg", st.grid);
    write_targets(*cache_dir / "targets.json", st.targets, st.provenance.grid);
    write_candidates(*cache_dir / "candidates.json", raw, st.provenance.grid);
    write_candidates(*cache_dir / "candidates_pruned.json", st.candidates, st.provenance.grid);
    write_matrix(*cache_dir / "visibility.cpvm", st.matrix);
  }
  return st;
}

void run_ingest(const PipelineConfig& cfg, std::ostream& log) {
  const SceneSource src = build_grid(cfg);
  fs::create_directories(cfg.out_dir);
  write_grid(cfg.out_dir / "grid.cpg", src.grid);
  json summary{{"dims", {src.grid.dims()[0], src.grid.dims()[1], src.grid.dims()[2]}},
               {"voxel_size", src.grid.voxel_size()},
               {"occupied_count", src.grid.occupied_count()},
               {"grid_hash", hash_to_hex(grid_hash(src.grid))}};
  write_text_file(cfg.out_dir / "grid_summary.json", summary.dump(1) + "\n");
  log << "[ingest] grid " << src.grid.dims()[0] << "x" << src.grid.dims()[1] << "x"
      << src.grid.dims()[2] << ", " << src.grid.occupied_count() << " occupied voxels\n";
}

void run_candidates(const PipelineConfig& cfg, std::ostream& log) {
  const SceneSource src = build_grid(cfg);
  const CandidateSet c = generate_candidates(src.grid, cfg.lattice, cfg.camera);
  fs::create_directories(cfg.out_dir);
  write_grid(cfg.out_dir / "grid.cpg", src.grid);
  write_candidates(cfg.out_dir / "candidates.json", c, grid_hash(src.grid));
  log << "[candidates] " << c.size() << " poses at " << c.group_count() << " locations\n";
}

void run_visibility(const PipelineConfig& cfg, std::ostream& log) {
  prepare_stack(cfg, cfg.out_dir, log);
}

std::string sweep_csv(const std::vector<SweepRow>& rows, std::uint64_t matrix_provenance) {
  std::ostringstream out;
  out << "method,budget,status,objective,best_bound,deficit_cost,coverage_gap,"
         "nontriangulatable_fraction,cameras,nodes,matrix_provenance\n";
  out.precision(12);
  for (const SweepRow& r : rows) {
    out << to_string(r.method) << ',' << r.budget << ',' << to_string(r.report.status) << ','
        << r.report.objective << ',' << r.report.best_bound << ',' << r.metrics.deficit_cost << ','
        << r.metrics.coverage_gap << ',' << r.metrics.nontriangulatable_fraction << ','
        << r.metrics.cameras << ',' << r.report.nodes_explored << ','
        << hash_to_hex(matrix_provenance) << '\n';
  }
  return out.str();
}

std::vector<SweepRow> run_solve(const PipelineConfig& cfg, std::ostream& log) {
  const SceneStack st = prepare_stack(cfg, cfg.out_dir, log);
  for (const char* sub : {"solutions", "metrics", "coverage"}) fs::create_directories(cfg.out_dir / sub);

  std::vector<SweepRow> rows;
  json timing = json::array();
  for (const SolverSweep& sw : cfg.solvers) {
    for (int budget : sw.budgets) {
      SolverConfig sc;
      sc.method = sw.method;
      sc.budget = budget;
      sc.time_budget = sw.time_budget;
      sc.gamma_max = cfg.gamma_max;
      sc.seed = cfg.seed;
      sc.node_limit = sw.node_limit;
      SolverReport rep = solve(st.instance, sc);
      for (const std::string& w : rep.warnings) log << "[solve] warning: " << w << "\n";
      const Metrics m = compute_metrics(st.instance, rep.selection);
      const std::string name = run_name(sw.method, budget);
      write_text_file(cfg.out_dir / "solutions" / (name + ".json"),
                      solution_to_json_text(rep, st.candidates, st.instance, st.provenance));
      const std::string csv_rel = "coverage/" + name + ".csv";
      write_text_file(cfg.out_dir / csv_rel,
                      coverage_csv(st.grid, st.targets, coverage_profile(st.instance, rep.selection).counts));
      write_text_file(cfg.out_dir / "metrics" / (name + ".json"),
                      metrics_to_json_text(m, st.provenance, csv_rel));
      log << "[solve] " << name << ": " << to_string(rep.status) << ", gap " << m.coverage_gap
          << ", non-triangulatable " << m.nontriangulatable_fraction << ", " << rep.elapsed_s
          << " s\n";
      timing.push_back({{"run", name}, {"elapsed_s", rep.elapsed_s}, {"nodes", rep.nodes_explored}});
      rows.push_back({sw.method, budget, std::move(rep), m});
    }
  }
  write_text_file(cfg.out_dir / "sweep.csv", sweep_csv(rows, st.provenance.matrix));
  write_text_file(cfg.out_dir / "run_log.json", timing.dump(1) + "\n");
  return rows;
}

Metrics run_evaluate(const PipelineConfig& cfg, const fs::path& solution, std::ostream& log) {
  const SolutionFile sol = read_solution(solution);
  const SceneStack st = prepare_stack(cfg, cfg.out_dir, log);
  if (sol.matrix_provenance != st.provenance.matrix) {
    throw InputError("solution was computed against matrix " + hash_to_hex(sol.matrix_provenance) +
                     " but the current scene stack yields " + hash_to_hex(st.provenance.matrix) +
                     " (stale matrix)");
  }
  const Selection x = Selection::of(st.instance.n_g(), std::max(sol.budget, 1), sol.selected);
  check_feasible(st.instance, Selection{x.chosen, static_cast<int>(st.instance.n_g())});
  const Metrics m = compute_metrics(st.instance, x);
  const std::int64_t recomputed = sol.sense == "maximize" ? m.satisfied : m.deficit_cost;
  if (recomputed != sol.objective) {
    throw InputError("recomputed objective " + std::to_string(recomputed) +
                     " differs from the reported " + std::to_string(sol.objective));
  }
  const fs::path dir = cfg.out_dir / "evaluate";
  fs::create_directories(dir);
  const std::string stem = solution.stem().string();
  const std::string csv_name = stem + "_coverage.csv";
  write_text_file(dir / csv_name,
                  coverage_csv(st.grid, st.targets, coverage_profile(st.instance, x).counts));
  write_text_file(dir / (stem + "_metrics.json"), metrics_to_json_text(m, st.provenance, csv_name));
  log << "[evaluate] " << stem << ": deficit " << m.deficit_cost << ", gap " << m.coverage_gap
      << ", non-triangulatable " << m.nontriangulatable_fraction << "\n";
  return m;
}

void run_export_lp(const PipelineConfig& cfg, int budget, const fs::path& path, std::ostream& log) {
  const SceneStack st = prepare_stack(cfg, cfg.out_dir, log);
  const MipModel model = build_mip(st.instance, budget, cfg.gamma_max);
  export_lp(model, path);
  log << "[export-lp] " << model.lp.variables.size() << " variables, "
      << model.lp.constraints.size() << " constraints -> " << path.string() << "\n";
}

}  // namespace camplace
