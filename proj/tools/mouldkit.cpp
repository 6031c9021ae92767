#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mouldkit/losses.hpp"
#include "mouldkit/mesh_io.hpp"
#include "mouldkit/metrics.hpp"
#include "mouldkit/mould.hpp"
#include "mouldkit/mould_io.hpp"
#include "mouldkit/primitives.hpp"
#include "mouldkit/random.hpp"
#include "mouldkit/sweep.hpp"
#include "mouldkit/voxel_grid.hpp"

namespace fs = std::filesystem;
using namespace mouldkit;

namespace {

void print_pair_warnings(const MouldPair& pair, const std::string& label) {
    if (pair.warnings.all_background)
        std::cerr << "warning: " << label << ": no ray hit the mesh (all-background pair)\n";
    if (pair.warnings.non_watertight)
        std::cerr << "warning: " << label << ": mesh is not watertight, hidden map may be unreliable\n";
    if (pair.warnings.range_violation)
        std::cerr << "warning: " << label << ": geometry beyond the background plane\n";
}

bool is_mesh_file(const fs::path& p) {
    std::string ext = p.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return ext == ".obj" || ext == ".ply";
}

std::vector<fs::path> mesh_files_in(const std::string& dir) {
    if (!fs::is_directory(dir)) throw std::runtime_error(dir + " is not a directory");
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && is_mesh_file(entry.path())) files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    return files;
}

void ensure_parent_dir(const std::string& path) {
    const fs::path parent = fs::path(path).parent_path();
    if (!parent.empty()) fs::create_directories(parent);
}

// The base camera for a subcommand: an explicit JSON camera wins; otherwise
// the standard capture camera, placed by the caller.
Camera base_camera_from(const std::string& camera_json_path, bool& explicit_pose) {
    explicit_pose = !camera_json_path.empty();
    if (explicit_pose) return load_camera_json(camera_json_path);
    return standard_camera();
}

int cmd_encode(const std::string& mesh_path, const std::string& out_stem, int n,
               double bg_distance, double epsilon, const std::string& camera_json) {
    const Mesh mesh = load_mesh(mesh_path);
    bool explicit_pose = false;
    Camera base = base_camera_from(camera_json, explicit_pose);
    if (!explicit_pose) base.pose = subject_placement(mesh.centroid(), 8.0);
    const Camera framed = frame_square(base, mesh.bounds(), n);
    const MouldPair pair = encode(mesh, framed, bg_distance, epsilon);
    print_pair_warnings(pair, mesh_path);
    ensure_parent_dir(out_stem);
    write_mould(pair, out_stem);
    std::cout << out_stem << ".vis.pfm " << out_stem << ".hid.pfm " << out_stem
              << ".mould.json\n";
    return 0;
}

int cmd_decode(const std::string& stem, const std::string& out_ply, double epsilon,
               bool ascii_ply) {
    const MouldPair pair = read_mould(stem);
    const auto problems = validate(pair);
    if (!problems.empty()) {
        for (const std::string& p : problems) std::cerr << "error: " << stem << ": " << p << "\n";
        return 2;
    }
    DecodeOptions options;
    options.epsilon = epsilon;  // negative: sidecar value
    const PointCloud cloud = decode(pair, options);
    if (cloud.empty()) std::cerr << "warning: " << stem << ": all-background pair, empty cloud\n";
    ensure_parent_dir(out_ply);
    write_point_cloud_ply(cloud, out_ply, !ascii_ply);
    std::cout << out_ply << " (" << cloud.size() << " points)\n";
    return 0;
}

int cmd_eval(const std::string& gt_stem, const std::string& pred_stem,
             std::vector<double> taus_mm) {
    const MouldPair gt = read_mould(gt_stem);
    const MouldPair pred = read_mould(pred_stem);
    if (taus_mm.empty()) taus_mm = {30.0, 50.0};
    std::sort(taus_mm.begin(), taus_mm.end());
    std::string csv = "tau_mm,overall,visible,hidden\n";
    char line[128];
    for (double tau_mm : taus_mm) {
        const DepthAccuracy acc = depth_accuracy(gt, pred, tau_mm * 1e-3);
        std::snprintf(line, sizeof(line), "%.6g,%.4f,%.4f,%.4f\n", tau_mm, acc.overall,
                      acc.visible, acc.hidden);
        csv += line;
    }
    std::cout << csv;
    return 0;
}

int cmd_sweep(const std::string& dir, const std::string& out_csv, std::vector<int> ns,
              std::vector<std::string> reps, std::size_t samples, std::uint64_t seed,
              double bg_distance, double epsilon, bool no_timing, bool vertices_gt) {
    const auto files = mesh_files_in(dir);
    if (files.empty()) throw std::runtime_error("no .obj/.ply meshes in " + dir);
    std::vector<Mesh> meshes;
    meshes.reserve(files.size());
    for (const auto& f : files) meshes.push_back(load_mesh(f.string()));

    SweepOptions options;
    if (!ns.empty()) options.mould_resolutions = ns;
    if (!reps.empty()) {
        options.include_mould = false;
        options.include_voxel = false;
        for (const std::string& rep : reps) {
            if (rep == "mould") options.include_mould = true;
            else if (rep == "voxel") options.include_voxel = true;
            else throw std::runtime_error("unknown representation '" + rep + "'");
        }
        if (options.include_voxel && !options.include_mould) {
            // voxel-only sweeps still need resolutions: match the mould list
            for (int n : options.mould_resolutions)
                options.voxel_resolutions.push_back(matched_voxel_resolution(n));
        }
    }
    options.samples = samples;
    options.seed = seed;
    options.background_distance = bg_distance;
    options.epsilon = epsilon;
    options.include_timing = !no_timing;
    options.vertices_as_ground_truth = vertices_gt;

    const SweepReport report = run_sweep(meshes, standard_camera(), options);
    if (!out_csv.empty()) {
        ensure_parent_dir(out_csv);
        std::ofstream out(out_csv);
        if (!out) throw std::runtime_error("cannot write " + out_csv);
        out << report.to_csv();
        if (!out) throw std::runtime_error("write failed for " + out_csv);
    }
    std::cout << report.to_table();
    return 0;
}

int cmd_render_gt(const std::string& dir, const std::string& out_dir, int n, double bg_distance,
                  double epsilon, std::uint64_t seed, const std::string& camera_json) {
    const auto files = mesh_files_in(dir);
    if (files.empty()) throw std::runtime_error("no .obj/.ply meshes in " + dir);
    fs::create_directories(out_dir);

    bool explicit_pose = false;
    Camera base = base_camera_from(camera_json, explicit_pose);

    // One distance draw per sequence; the camera stays fixed afterward and
    // the per-frame square crop tracks the subject.
    bool placed = explicit_pose;
    int written = 0;
    for (const auto& file : files) {
        Mesh mesh;
        try {
            mesh = load_mesh(file.string());
        } catch (const std::exception& e) {
            std::cerr << "warning: skipping " << file.string() << ": " << e.what() << "\n";
            continue;
        }
        if (!placed) {
            Rng rng(seed);
            const double distance = sample_subject_distance(rng);
            base.pose = subject_placement(mesh.centroid(), distance);
            placed = true;
        }
        const Camera framed = frame_square(base, mesh.bounds(), n);
        const MouldPair pair = encode(mesh, framed, bg_distance, epsilon);
        print_pair_warnings(pair, file.filename().string());
        const std::string stem = (fs::path(out_dir) / file.stem()).string();
        write_mould(pair, stem);
        ++written;
    }
    if (written == 0) throw std::runtime_error("no frame could be encoded");
    std::cout << written << " frame(s) written to " << out_dir << "\n";
    return 0;
}

int cmd_loss(const std::string& gt_stem, const std::string& pred_stem, double lambda) {
    const DepthBatch gt = DepthBatch::from_pairs({read_mould(gt_stem)});
    const DepthBatch pred = DepthBatch::from_pairs({read_mould(pred_stem)});
    const double l1 = l1_loss(gt, pred);
    char line[96];
    std::string csv = "loss,value\n";
    std::snprintf(line, sizeof(line), "l1,%.12g\n", l1);
    csv += line;
    std::snprintf(line, sizeof(line), "lambda_l1,%.12g\n", lambda * l1);
    csv += line;
    std::cout << csv;
    return 0;
}

int cmd_make_meshes(const std::string& out_dir, int count, std::uint64_t seed) {
    if (count < 1) throw std::runtime_error("count must be positive");
    fs::create_directories(out_dir);
    for (int i = 0; i < count; ++i) {
        // every third figure crosses its arms so the set always contains
        // self-occluding shapes
        const bool crossed = i % 3 == 2;
        const Mesh mesh = make_humanoid(seed + static_cast<std::uint64_t>(i),
                                        crossed ? HumanoidPose::kCrossedArms
                                                : HumanoidPose::kStanding);
        char name[64];
        std::snprintf(name, sizeof(name), "humanoid_%02d_%s.obj", i,
                      crossed ? "crossed" : "standing");
        write_obj(mesh, (fs::path(out_dir) / name).string());
    }
    std::cout << count << " mesh(es) written to " << out_dir << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"mould depth-map codec and evaluation toolkit"};
    app.require_subcommand(1);

    // encode
    auto* encode_cmd = app.add_subcommand("encode", "encode a mesh into a depth-map pair");
    std::string mesh_path, out_stem, camera_json;
    int n = 128;
    double bg_distance = 1.5, epsilon = 0.01;
    encode_cmd->add_option("--mesh", mesh_path, "input mesh (.obj/.ply)")->required();
    encode_cmd->add_option("--out", out_stem, "output stem")->required();
    encode_cmd->add_option("--n", n, "square resolution (default 128)");
    encode_cmd->add_option("--bg-distance", bg_distance, "background distance, meters (default 1.5)");
    encode_cmd->add_option("--epsilon", epsilon, "foreground margin, meters (default 0.01)");
    encode_cmd->add_option("--camera-json", camera_json, "camera JSON (default: standard capture camera at 8 m)");

    // decode
    auto* decode_cmd = app.add_subcommand("decode", "decode a depth-map pair into a point cloud");
    std::string stem, out_ply;
    double decode_epsilon = -1.0;
    bool ascii_ply = false;
    decode_cmd->add_option("--stem", stem, "mould stem (as written by encode)")->required();
    decode_cmd->add_option("--out", out_ply, "output PLY")->required();
    decode_cmd->add_option("--epsilon", decode_epsilon, "foreground margin override, meters");
    decode_cmd->add_flag("--ascii", ascii_ply, "write ASCII PLY instead of binary");

    // eval
    auto* eval_cmd = app.add_subcommand("eval", "depth accuracy of a predicted pair against ground truth");
    std::string gt_stem, pred_stem;
    std::vector<double> taus_mm;
    eval_cmd->add_option("--gt", gt_stem, "ground-truth stem")->required();
    eval_cmd->add_option("--pred", pred_stem, "predicted stem")->required();
    eval_cmd->add_option("--tau", taus_mm, "threshold(s) in mm, repeatable (default 30 50)");

    // sweep
    auto* sweep_cmd = app.add_subcommand("sweep", "resolution sweep: chamfer vs dimensionality");
    std::string sweep_dir, out_csv;
    std::vector<int> sweep_ns;
    std::vector<std::string> reps;
    std::size_t samples = 30000;
    std::uint64_t seed = 0;
    bool no_timing = false, vertices_gt = false;
    sweep_cmd->add_option("--dir", sweep_dir, "directory of meshes")->required();
    sweep_cmd->add_option("--out", out_csv, "output CSV path");
    sweep_cmd->add_option("--n", sweep_ns, "mould resolution(s), repeatable (default 32 64 128 256)");
    sweep_cmd->add_option("--rep", reps, "representation(s): mould, voxel (default both)");
    sweep_cmd->add_option("--samples", samples, "ground-truth samples per mesh (default 30000)");
    sweep_cmd->add_option("--seed", seed, "sampling seed (default 0)");
    sweep_cmd->add_option("--bg-distance", bg_distance, "background distance, meters");
    sweep_cmd->add_option("--epsilon", epsilon, "foreground margin, meters");
    sweep_cmd->add_flag("--no-timing", no_timing, "report 0 ms so reruns are byte-identical");
    sweep_cmd->add_flag("--vertices", vertices_gt, "use mesh vertices as ground truth");

    // render-gt
    auto* render_cmd = app.add_subcommand("render-gt", "per-frame ground-truth pairs for a mesh sequence");
    std::string frames_dir, render_out;
    int render_n = 128;
    render_cmd->add_option("--dir", frames_dir, "directory of per-frame meshes")->required();
    render_cmd->add_option("--out", render_out, "output directory")->required();
    render_cmd->add_option("--n", render_n, "square resolution (default 128)");
    render_cmd->add_option("--bg-distance", bg_distance, "background distance, meters");
    render_cmd->add_option("--epsilon", epsilon, "foreground margin, meters");
    render_cmd->add_option("--seed", seed, "subject-distance jitter seed");
    render_cmd->add_option("--camera-json", camera_json, "camera JSON with explicit pose (skips placement)");

    // loss
    auto* loss_cmd = app.add_subcommand("loss", "training-objective values between two pairs");
    double lambda = kDefaultLambda;
    loss_cmd->add_option("--gt", gt_stem, "ground-truth stem")->required();
    loss_cmd->add_option("--pred", pred_stem, "predicted stem")->required();
    loss_cmd->add_option("--lambda", lambda, "weight of the l1 term (default 1e4)");

    // make-meshes
    auto* make_cmd = app.add_subcommand("make-meshes", "write a procedural humanoid test set");
    std::string make_out;
    int make_count = 12;
    make_cmd->add_option("--out", make_out, "output directory")->required();
    make_cmd->add_option("--count", make_count, "number of figures (default 12)");
    make_cmd->add_option("--seed", seed, "shape jitter seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (encode_cmd->parsed())
            return cmd_encode(mesh_path, out_stem, n, bg_distance, epsilon, camera_json);
        if (decode_cmd->parsed()) return cmd_decode(stem, out_ply, decode_epsilon, ascii_ply);
        if (eval_cmd->parsed()) return cmd_eval(gt_stem, pred_stem, taus_mm);
        if (sweep_cmd->parsed())
            return cmd_sweep(sweep_dir, out_csv, sweep_ns, reps, samples, seed, bg_distance,
                             epsilon, no_timing, vertices_gt);
        if (render_cmd->parsed())
            return cmd_render_gt(frames_dir, render_out, render_n, bg_distance, epsilon, seed,
                                 camera_json);
        if (loss_cmd->parsed()) return cmd_loss(gt_stem, pred_stem, lambda);
        if (make_cmd->parsed()) return cmd_make_meshes(make_out, make_count, seed);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
