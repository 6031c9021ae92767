#include "mouldkit/pfm.hpp"

#include <cctype>
#include <cstring>
#include <fstream>

namespace mouldkit {

void write_pfm(const std::string& path, const std::vector<float>& data, int width, int height) {
    if (width <= 0 || height <= 0)
        throw PfmError("pfm dimensions must be positive");
    if (data.size() != static_cast<std::size_t>(width) * height)
        throw PfmError("pfm data size does not match dimensions");

    std::ofstream out(path, std::ios::binary);
    if (!out) throw PfmError("cannot write " + path);
    out << "Pf\n" << width << " " << height << "\n-1.0\n";
    // scanlines bottom-to-top per the format
    for (int row = height - 1; row >= 0; --row) {
        out.write(reinterpret_cast<const char*>(data.data() + static_cast<std::size_t>(row) * width),
                  static_cast<std::streamsize>(width) * 4);
    }
    if (!out) throw PfmError("write failed for " + path);
}

namespace {

// Header tokens are separated by arbitrary whitespace; exactly one
// whitespace byte follows the scale before the pixel data begins.
std::string next_token(std::istream& in, const std::string& path) {
    std::string token;
    int c;
    while ((c = in.get()) != EOF && std::isspace(c)) {
    }
    if (c == EOF) throw PfmError(path + ": truncated PFM header");
    do {
        token.push_back(static_cast<char>(c));
    } while ((c = in.get()) != EOF && !std::isspace(c));
    if (c == EOF) throw PfmError(path + ": truncated PFM header");
    return token;
}

}  // namespace

std::vector<float> read_pfm(const std::string& path, int& width, int& height) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw PfmError("cannot open " + path);

    const std::string magic = next_token(in, path);
    if (magic == "PF") throw PfmError(path + ": color PFM not supported");
    if (magic != "Pf") throw PfmError(path + ": not a PFM file");

    width = std::stoi(next_token(in, path));
    height = std::stoi(next_token(in, path));
    if (width <= 0 || height <= 0) throw PfmError(path + ": invalid PFM dimensions");
    const double scale = std::stod(next_token(in, path));
    if (scale >= 0.0) throw PfmError(path + ": big-endian PFM not supported");

    std::vector<float> data(static_cast<std::size_t>(width) * height);
    for (int row = height - 1; row >= 0; --row) {
        if (!in.read(reinterpret_cast<char*>(data.data() + static_cast<std::size_t>(row) * width),
                     static_cast<std::streamsize>(width) * 4))
            throw PfmError(path + ": truncated PFM data");
    }
    return data;
}

}  // namespace mouldkit
