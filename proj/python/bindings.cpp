#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <cstring>
#include <stdexcept>
#include <string>
#include <vector>

#include "mouldkit/camera.hpp"
#include "mouldkit/losses.hpp"
#include "mouldkit/mesh.hpp"
#include "mouldkit/mesh_io.hpp"
#include "mouldkit/metrics.hpp"
#include "mouldkit/mould.hpp"
#include "mouldkit/mould_io.hpp"
#include "mouldkit/primitives.hpp"
#include "mouldkit/sweep.hpp"
#include "mouldkit/voxel_grid.hpp"

namespace py = pybind11;
using namespace mouldkit;

namespace {

using DoubleArray = py::array_t<double, py::array::c_style | py::array::forcecast>;
using IntArray = py::array_t<std::int64_t, py::array::c_style | py::array::forcecast>;

Vec3 to_vec3(const DoubleArray& a) {
    if (a.ndim() != 1 || a.shape(0) != 3)
        throw std::invalid_argument("expected a 3-vector");
    const double* p = a.data();
    return {p[0], p[1], p[2]};
}

py::array_t<double> from_vec3(const Vec3& v) {
    py::array_t<double> out(3);
    double* p = out.mutable_data();
    p[0] = v.x;
    p[1] = v.y;
    p[2] = v.z;
    return out;
}

std::vector<Vec3> to_points(const DoubleArray& a) {
    if (a.ndim() != 2 || a.shape(1) != 3)
        throw std::invalid_argument("expected an array of shape (n, 3)");
    const auto n = static_cast<std::size_t>(a.shape(0));
    std::vector<Vec3> pts(n);
    const double* p = a.data();
    for (std::size_t i = 0; i < n; ++i) pts[i] = {p[3 * i], p[3 * i + 1], p[3 * i + 2]};
    return pts;
}

py::array_t<double> from_points(const std::vector<Vec3>& pts) {
    py::array_t<double> out({static_cast<py::ssize_t>(pts.size()), py::ssize_t(3)});
    double* p = out.mutable_data();
    for (std::size_t i = 0; i < pts.size(); ++i) {
        p[3 * i] = pts[i].x;
        p[3 * i + 1] = pts[i].y;
        p[3 * i + 2] = pts[i].z;
    }
    return out;
}

PointCloud to_cloud(const DoubleArray& points, const py::object& normals,
                    const py::object& provenance) {
    PointCloud cloud;
    cloud.points = to_points(points);
    if (!normals.is_none()) {
        cloud.normals = to_points(normals.cast<DoubleArray>());
        if (cloud.normals.size() != cloud.points.size())
            throw std::invalid_argument("normals must align with points");
    }
    if (!provenance.is_none()) {
        auto prov = provenance.cast<py::array_t<std::uint8_t, py::array::c_style |
                                                                 py::array::forcecast>>();
        if (prov.ndim() != 1 || static_cast<std::size_t>(prov.shape(0)) != cloud.points.size())
            throw std::invalid_argument("provenance must align with points");
        cloud.provenance.resize(cloud.points.size());
        const std::uint8_t* p = prov.data();
        for (std::size_t i = 0; i < cloud.provenance.size(); ++i)
            cloud.provenance[i] = p[i] == 0 ? PointOrigin::kVisible : PointOrigin::kHidden;
    }
    return cloud;
}

py::dict from_cloud(const PointCloud& cloud) {
    py::dict out;
    out["points"] = from_points(cloud.points);
    out["normals"] = cloud.has_normals() ? py::object(from_points(cloud.normals))
                                         : py::object(py::none());
    if (cloud.has_provenance()) {
        py::array_t<std::uint8_t> prov(static_cast<py::ssize_t>(cloud.provenance.size()));
        std::uint8_t* p = prov.mutable_data();
        for (std::size_t i = 0; i < cloud.provenance.size(); ++i)
            p[i] = static_cast<std::uint8_t>(cloud.provenance[i]);
        out["provenance"] = prov;
    } else {
        out["provenance"] = py::none();
    }
    return out;
}

py::array_t<double> depth_image(const std::vector<double>& values, int height, int width) {
    py::array_t<double> out({static_cast<py::ssize_t>(height), static_cast<py::ssize_t>(width)});
    std::memcpy(out.mutable_data(), values.data(), values.size() * sizeof(double));
    return out;
}

std::vector<double> image_values(const DoubleArray& a, int height, int width) {
    if (a.ndim() != 2 || a.shape(0) != height || a.shape(1) != width)
        throw std::invalid_argument("depth image must have shape (height, width)");
    return {a.data(), a.data() + static_cast<std::size_t>(height) * width};
}

py::array_t<double> pose_matrix(const RigidTransform& pose) {
    const auto m = pose.to_matrix4();
    py::array_t<double> out({py::ssize_t(4), py::ssize_t(4)});
    std::memcpy(out.mutable_data(), m.data(), 16 * sizeof(double));
    return out;
}

RigidTransform pose_from_matrix(const DoubleArray& a) {
    if (a.ndim() != 2 || a.shape(0) != 4 || a.shape(1) != 4)
        throw std::invalid_argument("pose must be a 4x4 matrix");
    std::array<double, 16> m;
    std::memcpy(m.data(), a.data(), 16 * sizeof(double));
    return RigidTransform::from_matrix4(m);
}

DepthBatch batch_from_array(const DoubleArray& a) {
    if (a.ndim() != 4 || a.shape(1) != 2 || a.shape(2) != a.shape(3))
        throw std::invalid_argument("depth batch must have shape (batch, 2, n, n)");
    DepthBatch batch;
    batch.batch = static_cast<int>(a.shape(0));
    batch.resolution = static_cast<int>(a.shape(2));
    batch.values.assign(a.data(), a.data() + a.size());
    return batch;
}

HumanoidPose pose_from_name(const std::string& name) {
    if (name == "standing") return HumanoidPose::kStanding;
    if (name == "crossed") return HumanoidPose::kCrossedArms;
    throw std::invalid_argument("pose must be 'standing' or 'crossed'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Depth-pair shape codec: encode meshes to visible/hidden depth maps, "
              "decode to oriented point clouds, and compare against a voxel baseline.";

    py::class_<Mesh>(m, "Mesh")
        .def(py::init([](const DoubleArray& vertices, const IntArray& triangles) {
                 if (triangles.ndim() != 2 || triangles.shape(1) != 3)
                     throw std::invalid_argument("triangles must have shape (t, 3)");
                 std::vector<std::array<int, 3>> tris(static_cast<std::size_t>(triangles.shape(0)));
                 const std::int64_t* t = triangles.data();
                 for (std::size_t i = 0; i < tris.size(); ++i)
                     tris[i] = {static_cast<int>(t[3 * i]), static_cast<int>(t[3 * i + 1]),
                                static_cast<int>(t[3 * i + 2])};
                 return Mesh(to_points(vertices), std::move(tris));
             }),
             py::arg("vertices"), py::arg("triangles"))
        .def_property_readonly("vertices",
                               [](const Mesh& mesh) { return from_points(mesh.vertices()); })
        .def_property_readonly("triangles",
                               [](const Mesh& mesh) {
                                   const auto& tris = mesh.triangles();
                                   py::array_t<std::int64_t> out(
                                       {static_cast<py::ssize_t>(tris.size()), py::ssize_t(3)});
                                   std::int64_t* p = out.mutable_data();
                                   for (std::size_t i = 0; i < tris.size(); ++i) {
                                       p[3 * i] = tris[i][0];
                                       p[3 * i + 1] = tris[i][1];
                                       p[3 * i + 2] = tris[i][2];
                                   }
                                   return out;
                               })
        .def_property_readonly("vertex_count", &Mesh::vertex_count)
        .def_property_readonly("triangle_count", &Mesh::triangle_count)
        .def_property_readonly("centroid",
                               [](const Mesh& mesh) { return from_vec3(mesh.centroid()); })
        .def_property_readonly("surface_area", &Mesh::surface_area)
        .def_property_readonly("is_watertight", &Mesh::is_watertight)
        .def_property_readonly("bounds",
                               [](const Mesh& mesh) {
                                   const Aabb box = mesh.bounds();
                                   return py::make_tuple(from_vec3(box.lo), from_vec3(box.hi));
                               })
        .def("__repr__", [](const Mesh& mesh) {
            return "Mesh(" + std::to_string(mesh.vertex_count()) + " vertices, " +
                   std::to_string(mesh.triangle_count()) + " triangles)";
        });

    py::class_<Camera>(m, "Camera")
        .def(py::init([](int width, int height, double sensor_width_mm, double focal_length_mm,
                         const py::object& pose) {
                 Camera cam;
                 cam.width = width;
                 cam.height = height;
                 cam.sensor_width_mm = sensor_width_mm;
                 cam.focal_length_mm = focal_length_mm;
                 if (!pose.is_none()) cam.pose = pose_from_matrix(pose.cast<DoubleArray>());
                 return cam;
             }),
             py::arg("width"), py::arg("height"), py::arg("sensor_width_mm"),
             py::arg("focal_length_mm"), py::arg("pose") = py::none())
        .def_readwrite("width", &Camera::width)
        .def_readwrite("height", &Camera::height)
        .def_readwrite("sensor_width_mm", &Camera::sensor_width_mm)
        .def_readwrite("focal_length_mm", &Camera::focal_length_mm)
        .def_property(
            "pose", [](const Camera& cam) { return pose_matrix(cam.pose); },
            [](Camera& cam, const DoubleArray& a) { cam.pose = pose_from_matrix(a); })
        .def_property_readonly("pixel_size_mm", &Camera::pixel_size_mm)
        .def("pixel_ray",
             [](const Camera& cam, int u, int v) {
                 const Ray ray = cam.pixel_ray(u, v);
                 return py::make_tuple(from_vec3(ray.origin), from_vec3(ray.direction));
             },
             py::arg("u"), py::arg("v"),
             "Camera-frame ray through the center of pixel (u, v): (origin, direction).")
        .def("__repr__", [](const Camera& cam) {
            return "Camera(" + std::to_string(cam.width) + "x" + std::to_string(cam.height) +
                   ", sensor " + std::to_string(cam.sensor_width_mm) + " mm, focal " +
                   std::to_string(cam.focal_length_mm) + " mm)";
        });

    py::class_<MouldPair>(m, "MouldPair")
        .def_property(
            "visible",
            [](const MouldPair& p) { return depth_image(p.visible, p.height, p.width); },
            [](MouldPair& p, const DoubleArray& a) {
                p.visible = image_values(a, p.height, p.width);
            })
        .def_property(
            "hidden",
            [](const MouldPair& p) { return depth_image(p.hidden, p.height, p.width); },
            [](MouldPair& p, const DoubleArray& a) {
                p.hidden = image_values(a, p.height, p.width);
            })
        .def_readonly("width", &MouldPair::width)
        .def_readonly("height", &MouldPair::height)
        .def_readonly("z_orig", &MouldPair::z_orig)
        .def_readonly("background_distance", &MouldPair::background_distance)
        .def_readonly("epsilon", &MouldPair::epsilon)
        .def_readonly("camera", &MouldPair::camera)
        .def_property_readonly("warnings",
                               [](const MouldPair& p) {
                                   py::dict w;
                                   w["all_background"] = p.warnings.all_background;
                                   w["non_watertight"] = p.warnings.non_watertight;
                                   w["range_violation"] = p.warnings.range_violation;
                                   return w;
                               })
        .def("__repr__", [](const MouldPair& p) {
            return "MouldPair(" + std::to_string(p.width) + "x" + std::to_string(p.height) +
                   ", z_orig " + std::to_string(p.z_orig) + ")";
        });

    m.def("load_mesh", &load_mesh, py::arg("path"), "Load an OBJ or PLY mesh.");
    m.def("save_mesh",
          [](const Mesh& mesh, const std::string& path, bool binary) {
              if (path.size() >= 4 && path.substr(path.size() - 4) == ".obj")
                  write_obj(mesh, path);
              else
                  write_ply(mesh, path, binary);
          },
          py::arg("mesh"), py::arg("path"), py::arg("binary") = true,
          "Write a mesh as OBJ (by extension) or PLY.");

    m.def("standard_camera", &standard_camera,
          "The 320x240 capture camera: 32 mm sensor, 60 mm focal length, identity pose.");
    m.def("frame_square",
          [](const Camera& base, const DoubleArray& lo, const DoubleArray& hi, int n) {
              Aabb box;
              box.lo = to_vec3(lo);
              box.hi = to_vec3(hi);
              return frame_square(base, box, n);
          },
          py::arg("camera"), py::arg("lo"), py::arg("hi"), py::arg("n"),
          "Square n-by-n crop of `camera` aimed at a world-space box, sensor "
          "shrunk to the tightest footprint that still covers it.");
    m.def("subject_placement",
          [](const DoubleArray& anchor, double distance) {
              return pose_matrix(subject_placement(to_vec3(anchor), distance));
          },
          py::arg("anchor"), py::arg("distance"),
          "World-to-camera pose putting `anchor` on the optical axis at `distance` meters.");

    m.def("encode",
          [](const Mesh& mesh, const Camera& camera, double background_distance, double epsilon) {
              return encode(mesh, camera, background_distance, epsilon);
          },
          py::arg("mesh"), py::arg("camera"), py::arg("background_distance") = 1.5,
          py::arg("epsilon") = 0.01,
          "Ray-cast a mesh into a visible/hidden depth-map pair.");
    m.def("decode",
          [](const MouldPair& pair, double epsilon, bool world_space, bool normals) {
              DecodeOptions options;
              options.epsilon = epsilon;
              options.world_space = world_space;
              options.normals = normals;
              return from_cloud(decode(pair, options));
          },
          py::arg("pair"), py::arg("epsilon") = -1.0, py::arg("world_space") = true,
          py::arg("normals") = true,
          "Back-project foreground pixels to an oriented point cloud: dict with "
          "'points', 'normals', 'provenance'.");
    m.def("foreground_mask",
          [](const MouldPair& pair, const std::string& which, double epsilon) {
              PointOrigin origin;
              if (which == "visible") origin = PointOrigin::kVisible;
              else if (which == "hidden") origin = PointOrigin::kHidden;
              else throw std::invalid_argument("which must be 'visible' or 'hidden'");
              const auto mask = foreground_mask(pair, origin, epsilon);
              py::array_t<bool> out({static_cast<py::ssize_t>(pair.height),
                                     static_cast<py::ssize_t>(pair.width)});
              bool* p = out.mutable_data();
              for (std::size_t i = 0; i < mask.size(); ++i) p[i] = mask[i] != 0;
              return out;
          },
          py::arg("pair"), py::arg("which") = "visible", py::arg("epsilon") = -1.0);
    m.def("validate",
          [](const MouldPair& pair) { return validate(pair); }, py::arg("pair"),
          "List of invariant violations; empty for a well-formed pair.");

    m.def("write_mould", &write_mould, py::arg("pair"), py::arg("stem"),
          "Write <stem>.vis.pfm, <stem>.hid.pfm and <stem>.mould.json.");
    m.def("read_mould", &read_mould, py::arg("stem"));
    m.def("save_point_cloud",
          [](const std::string& path, const DoubleArray& points, const py::object& normals,
             const py::object& provenance, bool binary) {
              write_point_cloud_ply(to_cloud(points, normals, provenance), path, binary);
          },
          py::arg("path"), py::arg("points"), py::arg("normals") = py::none(),
          py::arg("provenance") = py::none(), py::arg("binary") = true);
    m.def("load_point_cloud",
          [](const std::string& path) { return from_cloud(read_point_cloud_ply(path)); },
          py::arg("path"));

    py::class_<VoxelGrid>(m, "VoxelGrid")
        .def_readonly("resolution", &VoxelGrid::resolution)
        .def_readonly("edge_length", &VoxelGrid::edge_length)
        .def_property_readonly("origin",
                               [](const VoxelGrid& g) { return from_vec3(g.origin); })
        .def_property_readonly("cell_size", &VoxelGrid::cell_size)
        .def_property_readonly("occupancy",
                               [](const VoxelGrid& g) {
                                   const auto n = static_cast<py::ssize_t>(g.resolution);
                                   py::array_t<bool> out({n, n, n});  // indexed [iz][iy][ix]
                                   bool* p = out.mutable_data();
                                   const std::size_t cells = g.cell_count();
                                   for (std::size_t i = 0; i < cells; ++i)
                                       p[i] = g.occupancy[i] != 0;
                                   return out;
                               })
        .def_property_readonly("occupied_count", &VoxelGrid::occupied_count)
        .def("points", [](const VoxelGrid& g) { return from_points(voxel_points(g).points); },
             "Centers of occupied cells in cell-index order.")
        .def("__repr__", [](const VoxelGrid& g) {
            return "VoxelGrid(" + std::to_string(g.resolution) + "^3, " +
                   std::to_string(g.occupied_count()) + " occupied)";
        });

    m.def("voxelize_surface", &voxelize_surface, py::arg("mesh"), py::arg("n"),
          "Mark every cell of an n^3 grid over the padded cubic bounds that "
          "touches a triangle.");
    m.def("matched_voxel_resolution", &matched_voxel_resolution, py::arg("mould_n"),
          "Smallest v with v^3 >= 2 * n^2.");

    m.def("chamfer",
          [](const DoubleArray& a, const DoubleArray& b, bool squared) {
              PointCloud ca, cb;
              ca.points = to_points(a);
              cb.points = to_points(b);
              ChamferOptions options;
              options.squared = squared;
              return chamfer(ca, cb, options);
          },
          py::arg("a"), py::arg("b"), py::arg("squared") = false,
          "Symmetric Chamfer distance between two point sets, in meters.");
    m.def("sample_surface",
          [](const Mesh& mesh, std::size_t count, std::uint64_t seed) {
              return from_points(sample_surface(mesh, count, seed).points);
          },
          py::arg("mesh"), py::arg("count"), py::arg("seed") = 0,
          "Area-weighted surface samples, deterministic per seed.");
    m.def("depth_accuracy",
          [](const MouldPair& gt, const MouldPair& pred, double tau) {
              const DepthAccuracy acc = depth_accuracy(gt, pred, tau);
              py::dict out;
              out["overall"] = acc.overall;
              out["visible"] = acc.visible;
              out["hidden"] = acc.hidden;
              return out;
          },
          py::arg("gt"), py::arg("pred"), py::arg("tau"),
          "Percentage of ground-truth foreground pixels within tau meters.");

    m.def("l1_loss",
          [](const DoubleArray& gt, const DoubleArray& pred) {
              return l1_loss(batch_from_array(gt), batch_from_array(pred));
          },
          py::arg("gt"), py::arg("pred"),
          "Mean absolute difference over a (batch, 2, n, n) depth batch.");
    m.def("l1_gradient",
          [](const DoubleArray& gt, const DoubleArray& pred) {
              const auto grad = l1_gradient(batch_from_array(gt), batch_from_array(pred));
              py::array_t<double> out({gt.shape(0), gt.shape(1), gt.shape(2), gt.shape(3)});
              std::memcpy(out.mutable_data(), grad.data(), grad.size() * sizeof(double));
              return out;
          },
          py::arg("gt"), py::arg("pred"));
    m.def("gan_loss",
          [](const std::vector<double>& real_scores, const std::vector<double>& fake_scores) {
              return gan_loss({real_scores, fake_scores});
          },
          py::arg("real_scores"), py::arg("fake_scores"),
          "Discriminator objective: mean log(real) + mean log(1 - fake).");
    m.def("combined_objective", &combined_objective, py::arg("gan"), py::arg("l1"),
          py::arg("lam") = kDefaultLambda);

    m.def("make_uv_sphere",
          [](const DoubleArray& center, double radius, int segments, int rings) {
              return make_uv_sphere(to_vec3(center), radius, segments, rings);
          },
          py::arg("center"), py::arg("radius"), py::arg("segments") = 32, py::arg("rings") = 16);
    m.def("make_box",
          [](const DoubleArray& center, const DoubleArray& size) {
              return make_box(to_vec3(center), to_vec3(size));
          },
          py::arg("center"), py::arg("size"));
    m.def("make_capsule",
          [](const DoubleArray& a, const DoubleArray& b, double radius, int segments,
             int cap_rings) {
              return make_capsule(to_vec3(a), to_vec3(b), radius, segments, cap_rings);
          },
          py::arg("a"), py::arg("b"), py::arg("radius"), py::arg("segments") = 16,
          py::arg("cap_rings") = 8);
    m.def("make_humanoid",
          [](std::uint64_t seed, const std::string& pose) {
              return make_humanoid(seed, pose_from_name(pose));
          },
          py::arg("seed") = 0, py::arg("pose") = "standing",
          "Watertight articulated capsule figure; pose 'standing' or 'crossed'.");

    m.def("run_sweep",
          [](const std::vector<Mesh>& meshes, std::size_t samples, std::uint64_t seed,
             const std::vector<int>& resolutions, bool include_timing) {
              SweepOptions options;
              if (!resolutions.empty()) options.mould_resolutions = resolutions;
              options.samples = samples;
              options.seed = seed;
              options.include_timing = include_timing;
              const SweepReport report = run_sweep(meshes, standard_camera(), options);
              py::list rows;
              for (const SweepRow& row : report.rows) {
                  py::dict r;
                  r["representation"] = row.representation;
                  r["n"] = row.n;
                  r["dimensionality"] = row.dimensionality;
                  r["chamfer_m"] = row.chamfer_m;
                  r["encode_ms"] = row.encode_ms;
                  rows.append(r);
              }
              return rows;
          },
          py::arg("meshes"), py::arg("samples") = 30000, py::arg("seed") = 0,
          py::arg("resolutions") = std::vector<int>{}, py::arg("include_timing") = true,
          "Fidelity sweep over both representations; list of row dicts sorted "
          "by dimensionality.");
}
