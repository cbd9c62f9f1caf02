#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sbmca/dictionary.hpp"
#include "sbmca/errors.hpp"
#include "sbmca/grid.hpp"
#include "sbmca/metrics.hpp"
#include "sbmca/separators.hpp"
#include "sbmca/synth.hpp"
#include "sbmca/wav.hpp"

namespace sbmca {

// --- CSV signals: one sample per line, round-trip exact via %.17g ---------

inline void save_signal_csv(const std::string& path, const Vector& x) {
    std::ofstream f(path);
    if (!f) throw IoError("cannot open for writing: " + path);
    char buf[40];
    for (Index i = 0; i < x.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g\n", x(i));
        f << buf;
    }
    if (!f) throw IoError("write failed: " + path);
}

inline Vector load_signal_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open: " + path);
    std::vector<double> vals;
    std::string line;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        vals.push_back(std::stod(line));
    }
    Vector x(static_cast<Index>(vals.size()));
    for (std::size_t i = 0; i < vals.size(); ++i) x(static_cast<Index>(i)) = vals[i];
    return x;
}

// --- background ingestion -------------------------------------------------

// Loads a mono waveform (WAV or CSV), linearly resampled to fs and
// truncated to n samples.
inline Vector load_background(const std::string& path, Index n, double fs) {
    Vector raw;
    double src_fs = fs;
    if (path.size() > 4 && path.substr(path.size() - 4) == ".csv") {
        raw = load_signal_csv(path);
    } else {
        WavData w = read_wav(path);
        raw = w.samples;
        src_fs = w.sample_rate;
    }
    if (src_fs != fs && raw.size() > 1) {
        const double ratio = src_fs / fs;
        const Index out_len = static_cast<Index>(raw.size() / ratio);
        Vector resampled(out_len);
        for (Index i = 0; i < out_len; ++i) {
            const double pos = i * ratio;
            const Index lo = static_cast<Index>(pos);
            const Index hi = std::min<Index>(lo + 1, raw.size() - 1);
            const double frac = pos - lo;
            resampled(i) = (1.0 - frac) * raw(lo) + frac * raw(hi);
        }
        raw = resampled;
    }
    if (raw.size() < n)
        throw IoError("background too short (" + std::to_string(raw.size()) +
                      " < " + std::to_string(n) + " samples): " + path);
    return raw.head(n);
}

// --- dataset directory ----------------------------------------------------

inline void save_dataset(const std::string& dir, const MixtureDataset& ds,
                         const nlohmann::json& extra_params = {}) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    write_wav(dir + "/x.wav", ds.x, ds.fs);
    write_wav(dir + "/x_p.wav", ds.x_p, ds.fs);
    write_wav(dir + "/x_u.wav", ds.x_u, ds.fs);
    save_signal_csv(dir + "/x.csv", ds.x);
    save_signal_csv(dir + "/x_p.csv", ds.x_p);
    save_signal_csv(dir + "/x_u.csv", ds.x_u);

    nlohmann::json j;
    j["n"] = ds.x.size();
    j["fs"] = ds.fs;
    j["sigma"] = ds.sigma;
    j["seed"] = ds.seed;
    j["labels"] = ds.labels;
    j["onsets"] = ds.onsets;
    if (!extra_params.is_null()) j["params"] = extra_params;
    std::ofstream f(dir + "/manifest.json");
    if (!f) throw IoError("cannot open for writing: " + dir + "/manifest.json");
    f << j.dump(2) << "\n";
}

inline MixtureDataset load_dataset(const std::string& dir) {
    std::ifstream f(dir + "/manifest.json");
    if (!f) throw IoError("cannot open: " + dir + "/manifest.json");
    nlohmann::json j;
    f >> j;
    MixtureDataset ds;
    ds.fs = j.at("fs").get<double>();
    ds.sigma = j.at("sigma").get<double>();
    ds.seed = j.at("seed").get<std::uint64_t>();
    ds.labels = j.at("labels").get<std::vector<int>>();
    ds.onsets = j.at("onsets").get<std::vector<Index>>();
    ds.x = load_signal_csv(dir + "/x.csv");
    ds.x_p = load_signal_csv(dir + "/x_p.csv");
    ds.x_u = load_signal_csv(dir + "/x_u.csv");
    return ds;
}

// --- separation result directory ------------------------------------------

// Persists estimates, codes, the learned dictionary and a run manifest.
// Timing is deliberately kept out of the files so identical runs produce
// bit-identical output.
inline void save_result(const std::string& dir, const SeparationResult& res,
                        double fs, const nlohmann::json& params) {
    namespace fs_ = std::filesystem;
    fs_::create_directories(dir);
    const Vector xp = deblockify(res.Xp_hat);
    const Vector xu = deblockify(res.Xu_hat);
    write_wav(dir + "/xp_hat.wav", xp, fs);
    write_wav(dir + "/xu_hat.wav", xu, fs);
    save_signal_csv(dir + "/xp_hat.csv", xp);
    save_signal_csv(dir + "/xu_hat.csv", xu);
    if (res.D2_hat) save_dictionary(*res.D2_hat, dir + "/d2.dict");

    {
        std::ofstream f(dir + "/trace.csv");
        if (!f) throw IoError("cannot open for writing: " + dir + "/trace.csv");
        f << "stage,objective\n";
        char buf[40];
        for (const auto& [stage, value] : res.objective_trace) {
            std::snprintf(buf, sizeof buf, "%.17g", value);
            f << stage << "," << buf << "\n";
        }
    }

    nlohmann::json j;
    j["params"] = params;
    j["outer_iters"] = res.outer_iters;
    j["converged"] = res.converged;
    j["block_len"] = res.Xp_hat.block_len;
    j["orig_len"] = res.Xp_hat.orig_len;
    std::ofstream f(dir + "/manifest.json");
    if (!f) throw IoError("cannot open for writing: " + dir + "/manifest.json");
    f << j.dump(2) << "\n";
}

// --- CSV reports -----------------------------------------------------------

inline void save_histogram_csv(const std::string& path,
                               const std::vector<HistogramBin>& bins) {
    std::ofstream f(path);
    if (!f) throw IoError("cannot open for writing: " + path);
    f << "bin_lo,bin_hi,count\n";
    for (const auto& b : bins) f << b.lo << "," << b.hi << "," << b.count << "\n";
}

inline void save_grid_csv(const std::string& path, const std::vector<GridRow>& rows) {
    std::ofstream f(path);
    if (!f) throw IoError("cannot open for writing: " + path);
    f << "method,params,snr_xp_db,snr_xu_db,exact_xp,exact_xu\n";
    for (const auto& r : rows)
        f << r.method << ",\"" << r.params << "\"," << r.snr_xp_db << ","
          << r.snr_xu_db << "," << r.exact_xp << "," << r.exact_xu << "\n";
}

} // namespace sbmca
