#pragma once

#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "ringworm/error.hpp"
#include "ringworm/image.hpp"

namespace ringworm {

namespace detail {

// Tokenizer over the ASCII part of a PGM stream. '#' starts a comment that
// runs to end of line.
struct PgmCursor {
    const std::uint8_t* data;
    std::size_t size;
    std::size_t pos = 0;

    void skip_space_and_comments() {
        while (pos < size) {
            const char c = static_cast<char>(data[pos]);
            if (c == '#') {
                while (pos < size && data[pos] != '\n') ++pos;
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                ++pos;
            } else {
                break;
            }
        }
    }

    std::string next_token(const char* field) {
        skip_space_and_comments();
        if (pos >= size) throw DataError(std::string("pgm: missing ") + field);
        std::string tok;
        while (pos < size && !std::isspace(static_cast<unsigned char>(data[pos])) && data[pos] != '#')
            tok.push_back(static_cast<char>(data[pos++]));
        return tok;
    }

    int next_int(const char* field) {
        const std::string tok = next_token(field);
        for (char c : tok)
            if (!std::isdigit(static_cast<unsigned char>(c)))
                throw DataError(std::string("pgm: non-numeric ") + field + " token '" + tok + "'");
        if (tok.empty() || tok.size() > 9)
            throw DataError(std::string("pgm: bad ") + field + " token '" + tok + "'");
        return std::stoi(tok);
    }
};

inline std::uint8_t rescale_sample(int v, int maxval) {
    if (v < 0) v = 0;
    if (v > maxval) v = maxval; // tolerate out-of-range samples by clamping
    if (maxval == 255) return static_cast<std::uint8_t>(v);
    return static_cast<std::uint8_t>(std::floor(v * 255.0 / maxval + 0.5));
}

} // namespace detail

// Decodes binary (P5) or ASCII (P2) PGM. Maxval below 255 is rescaled
// linearly onto the full 8-bit range.
inline GrayImage decode_pgm(const std::uint8_t* bytes, std::size_t size) {
    detail::PgmCursor cur{bytes, size};
    const std::string magic = cur.next_token("magic");
    if (magic != "P5" && magic != "P2")
        throw DataError("pgm: malformed magic '" + magic + "' (expected P5 or P2)");
    const bool binary = magic == "P5";

    const int width = cur.next_int("width");
    const int height = cur.next_int("height");
    const int maxval = cur.next_int("maxval");
    if (width < 1 || height < 1) throw DataError("pgm: width/height must be >= 1");
    if (maxval > 255) throw DataError("pgm: maxval " + std::to_string(maxval) + " exceeds 255");
    if (maxval < 1) throw DataError("pgm: maxval must be >= 1");

    GrayImage img(width, height);
    const std::size_t count = img.pixels.size();
    if (binary) {
        // exactly one whitespace byte separates the header from the raster
        if (cur.pos >= size || !std::isspace(static_cast<unsigned char>(bytes[cur.pos])))
            throw DataError("pgm: missing whitespace before pixel data");
        ++cur.pos;
        if (size - cur.pos < count)
            throw DataError("pgm: truncated pixel data (" + std::to_string(size - cur.pos) +
                            " of " + std::to_string(count) + " bytes)");
        for (std::size_t i = 0; i < count; ++i)
            img.pixels[i] = detail::rescale_sample(bytes[cur.pos + i], maxval);
    } else {
        for (std::size_t i = 0; i < count; ++i) {
            cur.skip_space_and_comments();
            if (cur.pos >= size)
                throw DataError("pgm: truncated pixel data (" + std::to_string(i) +
                                " of " + std::to_string(count) + " samples)");
            img.pixels[i] = detail::rescale_sample(cur.next_int("pixel sample"), maxval);
        }
    }
    return img;
}

inline GrayImage decode_pgm(const std::vector<std::uint8_t>& bytes) {
    return decode_pgm(bytes.data(), bytes.size());
}

// Always encodes binary P5 with maxval 255; decode_pgm(encode_pgm(img)) == img.
inline std::vector<std::uint8_t> encode_pgm(const GrayImage& img) {
    const std::string header =
        "P5\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n255\n";
    std::vector<std::uint8_t> out(header.begin(), header.end());
    out.insert(out.end(), img.pixels.begin(), img.pixels.end());
    return out;
}

inline GrayImage load_pgm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("pgm: cannot open '" + path + "'");
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    try {
        return decode_pgm(bytes);
    } catch (const DataError& e) {
        throw DataError(std::string(e.what()) + " [" + path + "]");
    }
}

inline void save_pgm(const std::string& path, const GrayImage& img) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("pgm: cannot open '" + path + "' for writing");
    const auto bytes = encode_pgm(img);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw DataError("pgm: write failed for '" + path + "'");
}

} // namespace ringworm
