#include "mouldkit/mesh_io.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

namespace mouldkit {

namespace {

std::string lower_ext(const std::string& path) {
    const auto dot = path.find_last_of('.');
    if (dot == std::string::npos) return "";
    std::string ext = path.substr(dot + 1);
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return ext;
}

// ---------------------------------------------------------------- OBJ ----

int resolve_obj_index(long raw, std::size_t vertex_count, const std::string& path) {
    // OBJ indices are 1-based; negative indices count back from the end.
    long idx = raw > 0 ? raw - 1 : static_cast<long>(vertex_count) + raw;
    if (idx < 0 || idx >= static_cast<long>(vertex_count))
        throw MeshIoError(path + ": face index out of range");
    return static_cast<int>(idx);
}

Mesh load_obj(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw MeshIoError("cannot open " + path);

    std::vector<Vec3> vertices;
    std::vector<Triangle> triangles;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string tag;
        ls >> tag;
        if (tag == "v") {
            Vec3 v;
            if (!(ls >> v.x >> v.y >> v.z)) throw MeshIoError(path + ": malformed vertex line");
            vertices.push_back(v);
        } else if (tag == "f") {
            std::vector<int> corners;
            std::string entry;
            while (ls >> entry) {
                // "i", "i/t", "i//n", "i/t/n" -- only the vertex index matters here
                const long raw = std::strtol(entry.c_str(), nullptr, 10);
                if (raw == 0) throw MeshIoError(path + ": malformed face entry '" + entry + "'");
                corners.push_back(resolve_obj_index(raw, vertices.size(), path));
            }
            if (corners.size() < 3) throw MeshIoError(path + ": face with fewer than 3 vertices");
            for (std::size_t i = 1; i + 1 < corners.size(); ++i)
                triangles.push_back({corners[0], corners[i], corners[i + 1]});
        }
        // all other records (vn, vt, usemtl, ...) are ignored
    }
    return Mesh(std::move(vertices), std::move(triangles));
}

// ---------------------------------------------------------------- PLY ----

enum class PlyType { kInt8, kUint8, kInt16, kUint16, kInt32, kUint32, kFloat32, kFloat64 };

PlyType ply_type(const std::string& name, const std::string& path) {
    if (name == "char" || name == "int8") return PlyType::kInt8;
    if (name == "uchar" || name == "uint8") return PlyType::kUint8;
    if (name == "short" || name == "int16") return PlyType::kInt16;
    if (name == "ushort" || name == "uint16") return PlyType::kUint16;
    if (name == "int" || name == "int32") return PlyType::kInt32;
    if (name == "uint" || name == "uint32") return PlyType::kUint32;
    if (name == "float" || name == "float32") return PlyType::kFloat32;
    if (name == "double" || name == "float64") return PlyType::kFloat64;
    throw MeshIoError(path + ": unknown PLY property type '" + name + "'");
}

std::size_t ply_type_size(PlyType t) {
    switch (t) {
        case PlyType::kInt8:
        case PlyType::kUint8: return 1;
        case PlyType::kInt16:
        case PlyType::kUint16: return 2;
        case PlyType::kInt32:
        case PlyType::kUint32:
        case PlyType::kFloat32: return 4;
        case PlyType::kFloat64: return 8;
    }
    return 0;
}

struct PlyProperty {
    std::string name;
    PlyType type = PlyType::kFloat32;
    bool is_list = false;
    PlyType count_type = PlyType::kUint8;
};

struct PlyElement {
    std::string name;
    std::size_t count = 0;
    std::vector<PlyProperty> properties;
};

struct PlyHeader {
    bool binary = false;
    std::vector<PlyElement> elements;
};

PlyHeader read_ply_header(std::istream& in, const std::string& path) {
    std::string line;
    if (!std::getline(in, line)) throw MeshIoError("cannot read " + path);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "ply") throw MeshIoError(path + ": not a PLY file");

    PlyHeader header;
    bool have_format = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::istringstream ls(line);
        std::string tag;
        ls >> tag;
        if (tag == "comment" || tag == "obj_info" || tag.empty()) continue;
        if (tag == "format") {
            std::string fmt;
            ls >> fmt;
            if (fmt == "ascii") header.binary = false;
            else if (fmt == "binary_little_endian") header.binary = true;
            else throw MeshIoError(path + ": unsupported PLY format '" + fmt + "'");
            have_format = true;
        } else if (tag == "element") {
            PlyElement el;
            ls >> el.name >> el.count;
            header.elements.push_back(el);
        } else if (tag == "property") {
            if (header.elements.empty()) throw MeshIoError(path + ": property before element");
            PlyProperty prop;
            std::string type_name;
            ls >> type_name;
            if (type_name == "list") {
                std::string count_name, item_name;
                ls >> count_name >> item_name >> prop.name;
                prop.is_list = true;
                prop.count_type = ply_type(count_name, path);
                prop.type = ply_type(item_name, path);
            } else {
                ls >> prop.name;
                prop.type = ply_type(type_name, path);
            }
            header.elements.back().properties.push_back(prop);
        } else if (tag == "end_header") {
            if (!have_format) throw MeshIoError(path + ": PLY header missing format line");
            return header;
        } else {
            throw MeshIoError(path + ": unexpected PLY header line '" + line + "'");
        }
    }
    throw MeshIoError(path + ": PLY header not terminated");
}

// Reads one scalar of the given type as double (binary little-endian; the
// host is assumed little-endian).
double read_binary_scalar(std::istream& in, PlyType t, const std::string& path) {
    unsigned char buf[8];
    if (!in.read(reinterpret_cast<char*>(buf), static_cast<std::streamsize>(ply_type_size(t))))
        throw MeshIoError(path + ": truncated PLY data");
    switch (t) {
        case PlyType::kInt8: return static_cast<double>(static_cast<std::int8_t>(buf[0]));
        case PlyType::kUint8: return static_cast<double>(buf[0]);
        case PlyType::kInt16: { std::int16_t v; std::memcpy(&v, buf, 2); return v; }
        case PlyType::kUint16: { std::uint16_t v; std::memcpy(&v, buf, 2); return v; }
        case PlyType::kInt32: { std::int32_t v; std::memcpy(&v, buf, 4); return v; }
        case PlyType::kUint32: { std::uint32_t v; std::memcpy(&v, buf, 4); return v; }
        case PlyType::kFloat32: { float v; std::memcpy(&v, buf, 4); return v; }
        case PlyType::kFloat64: { double v; std::memcpy(&v, buf, 8); return v; }
    }
    return 0.0;
}

double read_ascii_scalar(std::istream& in, const std::string& path) {
    double v;
    if (!(in >> v)) throw MeshIoError(path + ": truncated PLY data");
    return v;
}

double read_scalar(std::istream& in, bool binary, PlyType t, const std::string& path) {
    return binary ? read_binary_scalar(in, t, path) : read_ascii_scalar(in, path);
}

struct PlyContents {
    std::vector<Vec3> vertices;
    std::vector<Vec3> normals;
    std::vector<std::uint8_t> provenance;
    bool has_normals = false;
    bool has_provenance = false;
    std::vector<std::vector<int>> faces;
};

PlyContents read_ply_contents(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw MeshIoError("cannot open " + path);
    const PlyHeader header = read_ply_header(in, path);

    PlyContents out;
    for (const PlyElement& el : header.elements) {
        if (el.name == "vertex") {
            int ix = -1, iy = -1, iz = -1, inx = -1, iny = -1, inz = -1, iprov = -1;
            for (std::size_t p = 0; p < el.properties.size(); ++p) {
                const std::string& n = el.properties[p].name;
                if (n == "x") ix = static_cast<int>(p);
                else if (n == "y") iy = static_cast<int>(p);
                else if (n == "z") iz = static_cast<int>(p);
                else if (n == "nx") inx = static_cast<int>(p);
                else if (n == "ny") iny = static_cast<int>(p);
                else if (n == "nz") inz = static_cast<int>(p);
                else if (n == "provenance") iprov = static_cast<int>(p);
            }
            if (ix < 0 || iy < 0 || iz < 0) throw MeshIoError(path + ": PLY vertex element lacks x/y/z");
            out.has_normals = inx >= 0 && iny >= 0 && inz >= 0;
            out.has_provenance = iprov >= 0;
            out.vertices.reserve(el.count);
            for (std::size_t i = 0; i < el.count; ++i) {
                Vec3 v, n;
                std::uint8_t prov = 0;
                for (std::size_t p = 0; p < el.properties.size(); ++p) {
                    const PlyProperty& prop = el.properties[p];
                    if (prop.is_list) {
                        const auto count = static_cast<std::size_t>(
                            read_scalar(in, header.binary, prop.count_type, path));
                        for (std::size_t k = 0; k < count; ++k)
                            read_scalar(in, header.binary, prop.type, path);
                        continue;
                    }
                    const double value = read_scalar(in, header.binary, prop.type, path);
                    const int pi = static_cast<int>(p);
                    if (pi == ix) v.x = value;
                    else if (pi == iy) v.y = value;
                    else if (pi == iz) v.z = value;
                    else if (pi == inx) n.x = value;
                    else if (pi == iny) n.y = value;
                    else if (pi == inz) n.z = value;
                    else if (pi == iprov) prov = static_cast<std::uint8_t>(value);
                }
                out.vertices.push_back(v);
                if (out.has_normals) out.normals.push_back(n);
                if (out.has_provenance) out.provenance.push_back(prov);
            }
        } else if (el.name == "face") {
            out.faces.reserve(el.count);
            for (std::size_t i = 0; i < el.count; ++i) {
                std::vector<int> face;
                for (const PlyProperty& prop : el.properties) {
                    if (prop.is_list) {
                        const auto count = static_cast<std::size_t>(
                            read_scalar(in, header.binary, prop.count_type, path));
                        face.clear();
                        face.reserve(count);
                        for (std::size_t k = 0; k < count; ++k)
                            face.push_back(static_cast<int>(
                                read_scalar(in, header.binary, prop.type, path)));
                    } else {
                        read_scalar(in, header.binary, prop.type, path);
                    }
                }
                out.faces.push_back(std::move(face));
            }
        } else {
            // skip unknown elements record by record
            for (std::size_t i = 0; i < el.count; ++i) {
                for (const PlyProperty& prop : el.properties) {
                    if (prop.is_list) {
                        const auto count = static_cast<std::size_t>(
                            read_scalar(in, header.binary, prop.count_type, path));
                        for (std::size_t k = 0; k < count; ++k)
                            read_scalar(in, header.binary, prop.type, path);
                    } else {
                        read_scalar(in, header.binary, prop.type, path);
                    }
                }
            }
        }
    }
    return out;
}

Mesh load_ply(const std::string& path) {
    PlyContents contents = read_ply_contents(path);
    std::vector<Triangle> triangles;
    triangles.reserve(contents.faces.size());
    const int vcount = static_cast<int>(contents.vertices.size());
    for (const std::vector<int>& face : contents.faces) {
        if (face.size() < 3) throw MeshIoError(path + ": face with fewer than 3 vertices");
        for (int idx : face) {
            if (idx < 0 || idx >= vcount) throw MeshIoError(path + ": face index out of range");
        }
        for (std::size_t i = 1; i + 1 < face.size(); ++i)
            triangles.push_back({face[0], face[static_cast<int>(i)], face[i + 1]});
    }
    return Mesh(std::move(contents.vertices), std::move(triangles));
}

void append_float_le(std::string& buf, float v) {
    char raw[4];
    std::memcpy(raw, &v, 4);
    buf.append(raw, 4);
}

}  // namespace

Mesh load_mesh(const std::string& path) {
    const std::string ext = lower_ext(path);
    if (ext == "obj") return load_obj(path);
    if (ext == "ply") return load_ply(path);
    throw MeshIoError("unsupported mesh format '" + ext + "' for " + path);
}

void write_obj(const Mesh& mesh, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw MeshIoError("cannot write " + path);
    char line[128];
    for (const Vec3& v : mesh.vertices()) {
        std::snprintf(line, sizeof(line), "v %.17g %.17g %.17g\n", v.x, v.y, v.z);
        out << line;
    }
    for (const Triangle& t : mesh.triangles()) {
        std::snprintf(line, sizeof(line), "f %d %d %d\n", t[0] + 1, t[1] + 1, t[2] + 1);
        out << line;
    }
    if (!out) throw MeshIoError("write failed for " + path);
}

void write_ply(const Mesh& mesh, const std::string& path, bool binary) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw MeshIoError("cannot write " + path);
    out << "ply\nformat " << (binary ? "binary_little_endian" : "ascii") << " 1.0\n"
        << "element vertex " << mesh.vertex_count() << "\n"
        << "property double x\nproperty double y\nproperty double z\n"
        << "element face " << mesh.triangle_count() << "\n"
        << "property list uchar int vertex_indices\nend_header\n";
    if (binary) {
        std::string buf;
        buf.reserve(mesh.vertex_count() * 24 + mesh.triangle_count() * 13);
        for (const Vec3& v : mesh.vertices()) {
            char raw[24];
            std::memcpy(raw, &v.x, 8);
            std::memcpy(raw + 8, &v.y, 8);
            std::memcpy(raw + 16, &v.z, 8);
            buf.append(raw, 24);
        }
        for (const Triangle& t : mesh.triangles()) {
            const std::uint8_t n = 3;
            buf.append(reinterpret_cast<const char*>(&n), 1);
            char raw[12];
            std::memcpy(raw, t.data(), 12);
            buf.append(raw, 12);
        }
        out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    } else {
        char line[128];
        for (const Vec3& v : mesh.vertices()) {
            std::snprintf(line, sizeof(line), "%.17g %.17g %.17g\n", v.x, v.y, v.z);
            out << line;
        }
        for (const Triangle& t : mesh.triangles())
            out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
    }
    if (!out) throw MeshIoError("write failed for " + path);
}

void write_point_cloud_ply(const PointCloud& cloud, const std::string& path, bool binary) {
    if (cloud.has_normals() && cloud.normals.size() != cloud.points.size())
        throw MeshIoError("point cloud normals not aligned with points");
    if (cloud.has_provenance() && cloud.provenance.size() != cloud.points.size())
        throw MeshIoError("point cloud provenance not aligned with points");

    std::ofstream out(path, std::ios::binary);
    if (!out) throw MeshIoError("cannot write " + path);
    out << "ply\nformat " << (binary ? "binary_little_endian" : "ascii") << " 1.0\n"
        << "element vertex " << cloud.size() << "\n"
        << "property float x\nproperty float y\nproperty float z\n";
    if (cloud.has_normals()) out << "property float nx\nproperty float ny\nproperty float nz\n";
    if (cloud.has_provenance()) out << "property uchar provenance\n";
    out << "end_header\n";

    if (binary) {
        std::string buf;
        for (std::size_t i = 0; i < cloud.size(); ++i) {
            const Vec3& p = cloud.points[i];
            append_float_le(buf, static_cast<float>(p.x));
            append_float_le(buf, static_cast<float>(p.y));
            append_float_le(buf, static_cast<float>(p.z));
            if (cloud.has_normals()) {
                const Vec3& n = cloud.normals[i];
                append_float_le(buf, static_cast<float>(n.x));
                append_float_le(buf, static_cast<float>(n.y));
                append_float_le(buf, static_cast<float>(n.z));
            }
            if (cloud.has_provenance())
                buf.push_back(static_cast<char>(cloud.provenance[i]));
        }
        out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    } else {
        char line[256];
        for (std::size_t i = 0; i < cloud.size(); ++i) {
            const Vec3& p = cloud.points[i];
            std::snprintf(line, sizeof(line), "%.9g %.9g %.9g", p.x, p.y, p.z);
            out << line;
            if (cloud.has_normals()) {
                const Vec3& n = cloud.normals[i];
                std::snprintf(line, sizeof(line), " %.9g %.9g %.9g", n.x, n.y, n.z);
                out << line;
            }
            if (cloud.has_provenance()) out << ' ' << static_cast<int>(cloud.provenance[i]);
            out << '\n';
        }
    }
    if (!out) throw MeshIoError("write failed for " + path);
}

PointCloud read_point_cloud_ply(const std::string& path) {
    PlyContents contents = read_ply_contents(path);
    PointCloud cloud;
    cloud.points = std::move(contents.vertices);
    if (contents.has_normals) cloud.normals = std::move(contents.normals);
    if (contents.has_provenance) {
        cloud.provenance.reserve(contents.provenance.size());
        for (std::uint8_t p : contents.provenance)
            cloud.provenance.push_back(p == 0 ? PointOrigin::kVisible : PointOrigin::kHidden);
    }
    return cloud;
}

}  // namespace mouldkit
