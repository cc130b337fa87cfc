#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace parsimony {

/// Interleaved raster with 1 (gray) or 3 (RGB) channels. Samples are kept
/// as 16-bit so region-id maps with maxval > 255 fit.
struct Raster {
    int width = 0;
    int height = 0;
    int channels = 1;
    int maxval = 255;
    std::vector<std::uint16_t> samples;

    std::uint16_t at(int x, int y, int c = 0) const {
        return samples[(static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x)) *
                           static_cast<std::size_t>(channels) +
                       static_cast<std::size_t>(c)];
    }
    std::size_t num_pixels() const noexcept { return static_cast<std::size_t>(width) * static_cast<std::size_t>(height); }
};

/// Binary PGM (P5) / PPM (P6), maxval up to 65535, '#' comments allowed in
/// the header. Throws InvalidInput on anything else.
Raster read_pnm(const std::string& path);
Raster parse_pnm(const std::string& bytes);

/// Writes P5 or P6 depending on channels; maxval > 255 uses 2-byte samples.
/// No comments are emitted.
void write_pnm(const std::string& path, const Raster& raster);
std::string encode_pnm(const Raster& raster);

}  // namespace parsimony
