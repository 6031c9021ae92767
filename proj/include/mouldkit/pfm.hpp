#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace mouldkit {

struct PfmError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Writes a single-channel PFM image: header "Pf\n<w> <h>\n-1.0\n" followed
/// by little-endian float32 scanlines stored bottom-to-top. `data` is
/// row-major with row 0 at the top, matching the depth-map layout.
void write_pfm(const std::string& path, const std::vector<float>& data, int width, int height);

/// Reads a single-channel little-endian PFM written by write_pfm (or any
/// grayscale PFM with a negative scale). Returns row-major data with row 0
/// at the top. Color ("PF") and big-endian files are rejected.
std::vector<float> read_pfm(const std::string& path, int& width, int& height);

}  // namespace mouldkit
