#include "parsimony/raster.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "parsimony/types.hpp"

namespace parsimony {

namespace {

class HeaderReader {
public:
    explicit HeaderReader(const std::string& bytes) : bytes_(bytes) {}

    int next_int(const char* what) {
        skip_space_and_comments();
        if (pos_ >= bytes_.size() || !std::isdigit(static_cast<unsigned char>(bytes_[pos_]))) {
            throw InvalidInput(std::string("PNM header: expected ") + what);
        }
        long v = 0;
        while (pos_ < bytes_.size() && std::isdigit(static_cast<unsigned char>(bytes_[pos_]))) {
            v = v * 10 + (bytes_[pos_++] - '0');
            if (v > 1'000'000'000L) {
                throw InvalidInput(std::string("PNM header: ") + what + " too large");
            }
        }
        return static_cast<int>(v);
    }

    // exactly one whitespace byte separates the header from the samples
    std::size_t data_start() {
        if (pos_ >= bytes_.size() || !std::isspace(static_cast<unsigned char>(bytes_[pos_]))) {
            throw InvalidInput("PNM header: missing separator before sample data");
        }
        return pos_ + 1;
    }

    std::size_t pos_ = 2;

private:
    void skip_space_and_comments() {
        while (pos_ < bytes_.size()) {
            const char c = bytes_[pos_];
            if (c == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n') {
                    ++pos_;
                }
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                ++pos_;
            } else {
                break;
            }
        }
    }

    const std::string& bytes_;
};

}  // namespace

Raster parse_pnm(const std::string& bytes) {
    if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '5' && bytes[1] != '6')) {
        throw InvalidInput("unsupported image format: expected binary PGM (P5) or PPM (P6)");
    }
    Raster r;
    r.channels = bytes[1] == '5' ? 1 : 3;
    HeaderReader h(bytes);
    r.width = h.next_int("width");
    r.height = h.next_int("height");
    r.maxval = h.next_int("maxval");
    if (r.width <= 0 || r.height <= 0 || r.maxval <= 0 || r.maxval > 65535) {
        throw InvalidInput("PNM header: invalid dimensions or maxval");
    }
    const std::size_t start = h.data_start();
    const std::size_t bps = r.maxval > 255 ? 2 : 1;
    const std::size_t count = r.num_pixels() * static_cast<std::size_t>(r.channels);
    if (bytes.size() < start + count * bps) {
        throw InvalidInput("PNM data truncated");
    }
    r.samples.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        const auto* p = reinterpret_cast<const unsigned char*>(bytes.data() + start + i * bps);
        r.samples[i] = bps == 2 ? static_cast<std::uint16_t>((p[0] << 8) | p[1]) : p[0];
        if (r.samples[i] > r.maxval) {
            throw InvalidInput("PNM sample exceeds maxval");
        }
    }
    return r;
}

Raster read_pnm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InvalidInput(path + ": cannot open image");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
        return parse_pnm(ss.str());
    } catch (const InvalidInput& e) {
        throw InvalidInput(path + ": " + e.what());
    }
}

std::string encode_pnm(const Raster& r) {
    if (r.channels != 1 && r.channels != 3) {
        throw InvalidInput("only 1- or 3-channel rasters can be written");
    }
    std::string out = (r.channels == 1 ? "P5\n" : "P6\n") + std::to_string(r.width) + " " + std::to_string(r.height) +
                      "\n" + std::to_string(r.maxval) + "\n";
    const bool wide = r.maxval > 255;
    out.reserve(out.size() + r.samples.size() * (wide ? 2 : 1));
    for (auto s : r.samples) {
        if (wide) {
            out.push_back(static_cast<char>(s >> 8));
        }
        out.push_back(static_cast<char>(s & 0xff));
    }
    return out;
}

void write_pnm(const std::string& path, const Raster& raster) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw InvalidInput(path + ": cannot open for writing");
    }
    const auto bytes = encode_pnm(raster);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

}  // namespace parsimony
