#include "mouldkit/mould_io.hpp"

#include <array>
#include <fstream>
#include <iterator>
#include <vector>

#include <json.hpp>

#include "mouldkit/pfm.hpp"

namespace mouldkit {

namespace {

using nlohmann::json;

std::vector<float> to_float(const std::vector<double>& values) {
    std::vector<float> out(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) out[i] = static_cast<float>(values[i]);
    return out;
}

std::vector<double> to_double(const std::vector<float>& values) {
    std::vector<double> out(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) out[i] = values[i];
    return out;
}

json pose_to_json(const RigidTransform& pose) {
    const auto m = pose.to_matrix4();
    return json(std::vector<double>(m.begin(), m.end()));
}

RigidTransform pose_from_json(const json& j) {
    if (!j.is_array() || j.size() != 16)
        throw MouldIoError("camera pose must be a flat array of 16 values");
    std::array<double, 16> m;
    for (std::size_t i = 0; i < 16; ++i) m[i] = j[i].get<double>();
    return RigidTransform::from_matrix4(m);
}

}  // namespace

void write_mould(const MouldPair& pair, const std::string& stem) {
    if (pair.visible.size() != pair.pixel_count() || pair.hidden.size() != pair.pixel_count())
        throw MouldIoError("depth buffers do not match the pixel grid");

    write_pfm(stem + ".vis.pfm", to_float(pair.visible), pair.width, pair.height);
    write_pfm(stem + ".hid.pfm", to_float(pair.hidden), pair.width, pair.height);

    json sidecar = {
        {"z_orig", pair.z_orig},
        {"L", pair.background_distance},
        {"epsilon", pair.epsilon},
        {"width", pair.width},
        {"height", pair.height},
        {"sensor_width_mm", pair.camera.sensor_width_mm},
        {"focal_length_mm", pair.camera.focal_length_mm},
        {"camera_pose", pose_to_json(pair.camera.pose)},
    };
    const std::string path = stem + ".mould.json";
    std::ofstream out(path);
    if (!out) throw MouldIoError("cannot write " + path);
    out << sidecar.dump(2) << "\n";
    if (!out) throw MouldIoError("write failed for " + path);
}

MouldPair read_mould(const std::string& stem) {
    const std::string sidecar_path = stem + ".mould.json";
    std::ifstream in(sidecar_path);
    if (!in) throw MouldIoError("cannot open " + sidecar_path);
    json sidecar;
    try {
        in >> sidecar;
    } catch (const json::exception& e) {
        throw MouldIoError(sidecar_path + ": " + e.what());
    }

    MouldPair pair;
    try {
        pair.z_orig = sidecar.at("z_orig").get<double>();
        pair.background_distance = sidecar.at("L").get<double>();
        pair.epsilon = sidecar.at("epsilon").get<double>();
        pair.width = sidecar.at("width").get<int>();
        pair.height = sidecar.at("height").get<int>();
        pair.camera.sensor_width_mm = sidecar.at("sensor_width_mm").get<double>();
        pair.camera.focal_length_mm = sidecar.at("focal_length_mm").get<double>();
        pair.camera.pose = pose_from_json(sidecar.at("camera_pose"));
    } catch (const json::exception& e) {
        throw MouldIoError(sidecar_path + ": " + e.what());
    }
    pair.camera.width = pair.width;
    pair.camera.height = pair.height;

    int w = 0, h = 0;
    pair.visible = to_double(read_pfm(stem + ".vis.pfm", w, h));
    if (w != pair.width || h != pair.height)
        throw MouldIoError(stem + ".vis.pfm does not match the sidecar dimensions");
    pair.hidden = to_double(read_pfm(stem + ".hid.pfm", w, h));
    if (w != pair.width || h != pair.height)
        throw MouldIoError(stem + ".hid.pfm does not match the sidecar dimensions");

    // Warnings that are pure functions of the maps are reconstructed here;
    // whether the source mesh was watertight is not recoverable from disk.
    bool all_background = true, beyond = false;
    for (const auto* map : {&pair.visible, &pair.hidden}) {
        for (const double v : *map) {
            if (v != pair.background_distance) all_background = false;
            if (v > pair.background_distance) beyond = true;
        }
    }
    pair.warnings.all_background = all_background;
    pair.warnings.range_violation = beyond;
    return pair;
}

std::string camera_to_json(const Camera& camera) {
    const json j = {
        {"width", camera.width},
        {"height", camera.height},
        {"sensor_width_mm", camera.sensor_width_mm},
        {"focal_length_mm", camera.focal_length_mm},
        {"pose", pose_to_json(camera.pose)},
    };
    return j.dump(2);
}

Camera camera_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw MouldIoError(std::string("camera JSON: ") + e.what());
    }
    Camera camera;
    try {
        camera.width = j.at("width").get<int>();
        camera.height = j.at("height").get<int>();
        camera.sensor_width_mm = j.at("sensor_width_mm").get<double>();
        camera.focal_length_mm = j.at("focal_length_mm").get<double>();
        if (j.contains("pose")) camera.pose = pose_from_json(j.at("pose"));
    } catch (const json::exception& e) {
        throw MouldIoError(std::string("camera JSON: ") + e.what());
    }
    if (camera.width <= 0 || camera.height <= 0 || camera.sensor_width_mm <= 0.0 ||
        camera.focal_length_mm <= 0.0)
        throw MouldIoError("camera JSON: dimensions, sensor and focal length must be positive");
    return camera;
}

Camera load_camera_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw MouldIoError("cannot open " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return camera_from_json(text);
}

}  // namespace mouldkit
