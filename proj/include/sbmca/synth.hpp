#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sbmca/types.hpp"

namespace sbmca {

// Damped sinusoid p(t) = amplitude * exp(-decay_rate*t) * sin(2*pi*f*t + phase)
// on [0, duration), emulating a series RLC discharge.
struct PulseSpec {
    double carrier_freq = 1200.0; // Hz
    double decay_rate = 60.0;     // 1/s
    double duration = 0.025;      // s
    double amplitude = 1.0;
    double phase = 0.0;           // rad
};

struct PulseTrain {
    Vector x_p;
    std::vector<int> labels;        // 0 = low, 1 = high, per discharge
    std::vector<Index> onsets;      // sample indices, strictly increasing
    int overlap_count = 0;          // discharges overlapping their neighbor
};

struct MixtureDataset {
    Vector x_p, x_u, x;
    std::vector<int> labels;
    std::vector<Index> onsets;
    double sigma = 0.0;
    std::uint64_t seed = 0;
    double fs = 14400.0;
};

inline Vector sample_pulse(const PulseSpec& spec, double fs, Index m) {
    if (spec.carrier_freq >= fs / 2.0)
        throw std::invalid_argument("sample_pulse: carrier at or above Nyquist");
    if (spec.decay_rate <= 0.0 || spec.duration <= 0.0)
        throw std::invalid_argument("sample_pulse: invalid pulse spec");
    Vector p = Vector::Zero(m);
    const double two_pi = 6.28318530717958647692;
    const Index len = std::min<Index>(m, static_cast<Index>(spec.duration * fs));
    for (Index t = 0; t < len; ++t) {
        const double tt = t / fs;
        p(t) = spec.amplitude * std::exp(-spec.decay_rate * tt) *
               std::sin(two_pi * spec.carrier_freq * tt + spec.phase);
    }
    return p;
}

inline std::pair<Vector, Vector> make_prototypes(const PulseSpec& low,
                                                 const PulseSpec& high,
                                                 double fs, Index m) {
    return {sample_pulse(low, fs, m), sample_pulse(high, fs, m)};
}

// Nominal onsets at round(k*fs/rate), each offset by uniform integer jitter
// in [-jitter_max, +jitter_max]; each discharge picks the low or high
// prototype uniformly at random.
inline PulseTrain make_pulse_train(Index n, double fs, double rate,
                                   int jitter_max, const Vector& proto_low,
                                   const Vector& proto_high, std::uint64_t seed) {
    if (rate <= 0.0 || fs <= 0.0)
        throw std::invalid_argument("make_pulse_train: fs and rate must be positive");
    const double period = fs / rate;
    if (n < static_cast<Index>(period))
        throw std::invalid_argument("make_pulse_train: signal shorter than one period");
    if (jitter_max < 0 || jitter_max >= period / 2.0)
        throw std::invalid_argument("make_pulse_train: jitter too large for period");
    if (proto_low.size() != proto_high.size())
        throw std::invalid_argument("make_pulse_train: prototype length mismatch");

    const Index m = proto_low.size();
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> jitter(-jitter_max, jitter_max);
    std::uniform_int_distribution<int> which(0, 1);

    PulseTrain train;
    train.x_p = Vector::Zero(n);
    Index prev_end = 0;
    for (Index k = 0;; ++k) {
        const Index nominal = static_cast<Index>(std::llround(k * period));
        if (nominal >= n) break;
        const int j = jitter(rng);
        const int lab = which(rng);
        Index onset = nominal + j;
        if (onset < 0) onset = 0;
        if (onset >= n) break;
        const Vector& proto = (lab == 0) ? proto_low : proto_high;
        const Index len = std::min<Index>(m, n - onset);
        train.x_p.segment(onset, len) += proto.head(len);
        if (!train.onsets.empty() && onset < prev_end) ++train.overlap_count;
        prev_end = onset + len;
        train.labels.push_back(lab);
        train.onsets.push_back(onset);
    }
    return train;
}

// Sum of three harmonic chirps with slowly varying amplitude; a
// self-contained speech-like stand-in for a recorded background. Base
// frequencies and drift are chosen so every harmonic stays below ~1 kHz,
// matching the low-frequency concentration of voiced speech.
inline Vector synth_background(Index n, double fs, std::uint64_t seed) {
    if (n < 1 || fs <= 0.0)
        throw std::invalid_argument("synth_background: invalid size or rate");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> freq(110.0, 260.0);
    std::uniform_real_distribution<double> sweep(-0.02, 0.02);
    std::uniform_real_distribution<double> am_rate(0.7, 3.5);
    std::uniform_real_distribution<double> phase(0.0, 6.28318530717958647692);

    const double two_pi = 6.28318530717958647692;
    Vector x = Vector::Zero(n);
    for (int c = 0; c < 3; ++c) {
        const double f0 = freq(rng) * (c + 1);
        const double slope = sweep(rng) * f0;   // Hz per second
        const double fam = am_rate(rng);
        const double ph = phase(rng);
        const double ph_am = phase(rng);
        for (Index t = 0; t < n; ++t) {
            const double tt = t / fs;
            const double inst_phase = two_pi * (f0 * tt + 0.5 * slope * tt * tt) + ph;
            const double am = 0.55 + 0.45 * std::sin(two_pi * fam * tt + ph_am);
            x(t) += am * std::sin(inst_phase) / 3.0;
        }
    }
    return x;
}

// Rescales `bg` so that RMS(bg)/RMS(ref) equals `ratio`. Ratio 0 silences
// the background.
inline Vector scale_to_rms_ratio(const Vector& bg, const Vector& ref, double ratio) {
    if (ratio < 0.0) throw std::invalid_argument("scale_to_rms_ratio: negative ratio");
    if (ratio == 0.0 || bg.size() == 0) return Vector::Zero(bg.size());
    const double rms_bg = std::sqrt(bg.squaredNorm() / bg.size());
    const double rms_ref = std::sqrt(ref.squaredNorm() / ref.size());
    if (rms_bg == 0.0) return bg;
    return bg * (ratio * rms_ref / rms_bg);
}

inline MixtureDataset mix(const Vector& x_p, const Vector& x_u, double sigma,
                          std::uint64_t seed) {
    if (x_p.size() != x_u.size())
        throw std::invalid_argument("mix: component length mismatch");
    if (sigma < 0.0) throw std::invalid_argument("mix: negative sigma");
    MixtureDataset ds;
    ds.x_p = x_p;
    ds.x_u = x_u;
    ds.sigma = sigma;
    ds.seed = seed;
    ds.x = x_p + x_u;
    if (sigma > 0.0) {
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> gauss(0.0, 1.0);
        for (Index t = 0; t < ds.x.size(); ++t) ds.x(t) += sigma * gauss(rng);
    }
    return ds;
}

} // namespace sbmca
