#pragma once

#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "sbmca/errors.hpp"
#include "sbmca/types.hpp"

namespace sbmca {

enum class WavFormat { Pcm16, Float32 };

struct WavData {
    Vector samples;     // mono, in [-1, 1] for PCM sources
    double sample_rate; // Hz
    int channels;
};

namespace detail {

template <typename T>
void put_le(std::string& out, T v) {
    char buf[sizeof(T)];
    std::memcpy(buf, &v, sizeof(T));
    out.append(buf, sizeof(T));
}

template <typename T>
T get_le(const char* p) {
    T v;
    std::memcpy(&v, p, sizeof(T));
    return v;
}

} // namespace detail

inline void write_wav(const std::string& path, const Vector& samples,
                      double sample_rate, WavFormat format = WavFormat::Float32) {
    const std::uint32_t n = static_cast<std::uint32_t>(samples.size());
    const std::uint16_t bits = (format == WavFormat::Pcm16) ? 16 : 32;
    const std::uint16_t tag = (format == WavFormat::Pcm16) ? 1 : 3; // PCM / IEEE float
    const std::uint32_t byte_rate = static_cast<std::uint32_t>(sample_rate) * bits / 8;
    const std::uint32_t data_bytes = n * bits / 8;

    std::string out;
    out.reserve(44 + data_bytes);
    out.append("RIFF");
    detail::put_le<std::uint32_t>(out, 36 + data_bytes);
    out.append("WAVEfmt ");
    detail::put_le<std::uint32_t>(out, 16);
    detail::put_le<std::uint16_t>(out, tag);
    detail::put_le<std::uint16_t>(out, 1); // mono
    detail::put_le<std::uint32_t>(out, static_cast<std::uint32_t>(sample_rate));
    detail::put_le<std::uint32_t>(out, byte_rate);
    detail::put_le<std::uint16_t>(out, bits / 8);
    detail::put_le<std::uint16_t>(out, bits);
    out.append("data");
    detail::put_le<std::uint32_t>(out, data_bytes);
    for (Index i = 0; i < samples.size(); ++i) {
        if (format == WavFormat::Pcm16) {
            double v = samples(i);
            if (v > 1.0) v = 1.0;
            if (v < -1.0) v = -1.0;
            detail::put_le<std::int16_t>(out, static_cast<std::int16_t>(std::lround(v * 32767.0)));
        } else {
            detail::put_le<float>(out, static_cast<float>(samples(i)));
        }
    }

    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open for writing: " + path);
    f.write(out.data(), static_cast<std::streamsize>(out.size()));
    if (!f) throw IoError("write failed: " + path);
}

inline WavData read_wav(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open: " + path);
    std::string raw((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    if (raw.size() < 44 || raw.compare(0, 4, "RIFF") != 0 || raw.compare(8, 4, "WAVE") != 0)
        throw IoError("not a RIFF/WAVE file: " + path);

    std::uint16_t tag = 0, channels = 0, bits = 0;
    std::uint32_t rate = 0;
    std::size_t data_off = 0, data_len = 0;
    std::size_t pos = 12;
    while (pos + 8 <= raw.size()) {
        const std::string cid = raw.substr(pos, 4);
        const std::uint32_t clen = detail::get_le<std::uint32_t>(raw.data() + pos + 4);
        if (cid == "fmt " && pos + 8 + 16 <= raw.size()) {
            tag = detail::get_le<std::uint16_t>(raw.data() + pos + 8);
            channels = detail::get_le<std::uint16_t>(raw.data() + pos + 10);
            rate = detail::get_le<std::uint32_t>(raw.data() + pos + 12);
            bits = detail::get_le<std::uint16_t>(raw.data() + pos + 22);
        } else if (cid == "data") {
            data_off = pos + 8;
            data_len = std::min<std::size_t>(clen, raw.size() - data_off);
        }
        pos += 8 + clen + (clen & 1);
    }
    if (channels == 0 || data_off == 0)
        throw IoError("missing fmt or data chunk: " + path);
    if (!(tag == 1 && bits == 16) && !(tag == 3 && bits == 32))
        throw IoError("unsupported WAV encoding (need PCM16 or float32): " + path);

    const std::size_t bytes_per = bits / 8;
    const std::size_t frames = data_len / (bytes_per * channels);
    WavData w;
    w.sample_rate = rate;
    w.channels = channels;
    w.samples.resize(static_cast<Index>(frames));
    for (std::size_t i = 0; i < frames; ++i) {
        // average channels down to mono
        double acc = 0.0;
        for (std::size_t c = 0; c < channels; ++c) {
            const char* p = raw.data() + data_off + (i * channels + c) * bytes_per;
            acc += (tag == 1) ? detail::get_le<std::int16_t>(p) / 32767.0
                              : static_cast<double>(detail::get_le<float>(p));
        }
        w.samples(static_cast<Index>(i)) = acc / channels;
    }
    return w;
}

} // namespace sbmca
