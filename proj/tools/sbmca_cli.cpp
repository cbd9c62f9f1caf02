// Command-line front end: dataset synthesis, separation, evaluation,
// clairvoyant lambda sweeps and histogram export.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "sbmca/sbmca.hpp"

using namespace sbmca;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitBadArgs = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitIo = 4;

struct PulseArgs {
    double low_freq = 1200.0, low_decay = 60.0, low_duration = 0.025;
    double high_freq = 2200.0, high_decay = 140.0, high_duration = 0.012;

    PulseSpec low() const { return {low_freq, low_decay, low_duration, 1.0, 0.0}; }
    PulseSpec high() const { return {high_freq, high_decay, high_duration, 1.0, 0.0}; }

    void add_flags(CLI::App* cmd) {
        cmd->add_option("--low-freq", low_freq, "Low-load carrier frequency [Hz]");
        cmd->add_option("--low-decay", low_decay, "Low-load decay rate [1/s]");
        cmd->add_option("--low-duration", low_duration, "Low-load pulse duration [s]");
        cmd->add_option("--high-freq", high_freq, "High-load carrier frequency [Hz]");
        cmd->add_option("--high-decay", high_decay, "High-load decay rate [1/s]");
        cmd->add_option("--high-duration", high_duration, "High-load pulse duration [s]");
    }

    json to_json() const {
        return {{"low", {{"freq", low_freq}, {"decay", low_decay}, {"duration", low_duration}}},
                {"high", {{"freq", high_freq}, {"decay", high_decay}, {"duration", high_duration}}}};
    }

    static PulseArgs from_json(const json& j) {
        PulseArgs p;
        p.low_freq = j.at("low").at("freq");
        p.low_decay = j.at("low").at("decay");
        p.low_duration = j.at("low").at("duration");
        p.high_freq = j.at("high").at("freq");
        p.high_decay = j.at("high").at("decay");
        p.high_duration = j.at("high").at("duration");
        return p;
    }
};

Dictionary build_d1(const std::string& dataset_dir, Index m, long shift_max) {
    std::ifstream f(dataset_dir + "/manifest.json");
    if (!f) throw IoError("cannot open: " + dataset_dir + "/manifest.json");
    json manifest;
    f >> manifest;
    const double fs = manifest.at("fs");
    PulseArgs pulses = PulseArgs::from_json(manifest.at("params").at("pulses"));
    auto [low, high] = make_prototypes(pulses.low(), pulses.high(), fs, m);
    std::vector<long> shifts;
    for (long s = -shift_max; s <= shift_max; ++s) shifts.push_back(s);
    return build_pulse_dictionary({low, high}, shifts);
}

std::vector<double> parse_grid(const std::string& csv, const std::string& flag) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos < csv.size()) {
        const std::size_t comma = csv.find(',', pos);
        const std::string tok = csv.substr(pos, comma == std::string::npos
                                                    ? std::string::npos
                                                    : comma - pos);
        if (!tok.empty()) out.push_back(std::stod(tok));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (out.empty()) throw std::invalid_argument(flag + ": empty grid");
    return out;
}

void write_eval_report(const std::string& dir, const EvalReport& rep) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    json j;
    j["method"] = rep.method;
    j["params"] = rep.params;
    j["snr_xp_db"] = rep.snr_xp.exact ? json("exact") : json(rep.snr_xp.db);
    j["snr_xu_db"] = rep.snr_xu.exact ? json("exact") : json(rep.snr_xu.db);
    j["zero_blocks_xp"] = rep.zero_blocks_xp;
    j["zero_blocks_xu"] = rep.zero_blocks_xu;
    std::ofstream f(dir + "/eval.json");
    if (!f) throw IoError("cannot open for writing: " + dir + "/eval.json");
    f << j.dump(2) << "\n";
    save_signal_csv(dir + "/block_errors_xp.csv", rep.block_errors_xp);
    save_signal_csv(dir + "/block_errors_xu.csv", rep.block_errors_xu);
}

int run(int argc, char** argv) {
    CLI::App app{"Semi-blind MCA single-channel source separation"};
    app.require_subcommand(1);

    // --- synth ---
    auto* synth = app.add_subcommand("synth", "Generate a synthetic mixture dataset");
    std::string synth_out;
    std::uint64_t seed = 0;
    long n = 144000;
    double fs = 14400.0, rate = 36.0, sigma = 0.0, rms_ratio = 1.0;
    int jitter = 5, block_len = 400;
    std::string background_path;
    std::uint64_t bg_seed = 1;
    PulseArgs pulses;
    synth->add_option("--out", synth_out, "Output dataset directory")->required();
    synth->add_option("--seed", seed, "RNG seed")->required();
    synth->add_option("--n", n, "Signal length [samples]");
    synth->add_option("--fs", fs, "Sample rate [Hz]");
    synth->add_option("--rate", rate, "Discharge rate [Hz]");
    synth->add_option("--jitter", jitter, "Max onset jitter [samples]");
    synth->add_option("--sigma", sigma, "Gaussian noise std");
    synth->add_option("--rms-ratio", rms_ratio, "RMS(x_u)/RMS(x_p)");
    synth->add_option("--m", block_len, "Block length [samples]");
    synth->add_option("--background", background_path,
                      "Mono WAV/CSV background (default: synthetic chirps)");
    synth->add_option("--bg-seed", bg_seed, "Synthetic background seed");
    pulses.add_flags(synth);

    // --- separate ---
    auto* sep = app.add_subcommand("separate", "Run a separation method on a dataset");
    std::string sep_dataset, sep_out, method = "sbmca", init_name = "mca-dct-omp";
    double lambda = 0.1, lambda1 = 0.1, lambda2 = 0.1, lambda3 = 0.1;
    int atoms = 64, outer_iters = 10, inner_iters = 20, rank = 8, sep_m = 400;
    long shift_max = 8;
    double outer_tol = 1e-4;
    std::uint64_t dict_seed = 0;
    sep->add_option("--dataset", sep_dataset, "Dataset directory")->required();
    sep->add_option("--out", sep_out, "Result directory")->required();
    sep->add_option("--method", method, "sbmca | mca-dct | mca-identity | tsvd");
    sep->add_option("--m", sep_m, "Block length [samples]");
    sep->add_option("--lambda", lambda, "MCA penalty");
    sep->add_option("--lambda1", lambda1, "SBMCA init penalty");
    sep->add_option("--lambda2", lambda2, "SBMCA dictionary-learning penalty");
    sep->add_option("--lambda3", lambda3, "SBMCA coefficient-update penalty");
    sep->add_option("--atoms", atoms, "Learned dictionary size");
    sep->add_option("--outer-iters", outer_iters, "SBMCA outer iterations");
    sep->add_option("--inner-iters", inner_iters, "Dictionary-learning rounds");
    sep->add_option("--outer-tol", outer_tol, "SBMCA relative objective tolerance");
    sep->add_option("--init", init_name, "lasso-d1 | mca-dct-omp");
    sep->add_option("--dict-seed", dict_seed, "Dictionary initialization seed");
    sep->add_option("--shift-max", shift_max, "D1 circular shift range");
    sep->add_option("--rank", rank, "Rank for tsvd");

    // --- eval ---
    auto* eval = app.add_subcommand("eval", "Score a result against ground truth");
    std::string eval_result, eval_dataset, eval_out;
    int eval_m = 400;
    eval->add_option("--result", eval_result, "Result directory")->required();
    eval->add_option("--dataset", eval_dataset, "Dataset directory")->required();
    eval->add_option("--out", eval_out, "Report directory")->required();
    eval->add_option("--m", eval_m, "Block length [samples]");

    // --- grid ---
    auto* grid = app.add_subcommand("grid", "Clairvoyant lambda sweep");
    std::string grid_dataset, grid_out, grid_method = "sbmca";
    std::string lambdas_csv, lambda1s_csv, lambda23s_csv;
    int grid_m = 400, grid_atoms = 64, grid_outer = 10;
    long grid_shift_max = 8;
    std::uint64_t grid_dict_seed = 0;
    grid->add_option("--dataset", grid_dataset, "Dataset directory")->required();
    grid->add_option("--out", grid_out, "Output directory")->required();
    grid->add_option("--method", grid_method, "sbmca | mca-dct | mca-identity");
    grid->add_option("--lambdas", lambdas_csv, "Comma-separated lambdas (MCA)");
    grid->add_option("--lambda1s", lambda1s_csv, "Comma-separated lambda1 values (SBMCA)");
    grid->add_option("--lambda23s", lambda23s_csv,
                     "Comma-separated coupled lambda2=lambda3 values (SBMCA)");
    grid->add_option("--m", grid_m, "Block length [samples]");
    grid->add_option("--atoms", grid_atoms, "Learned dictionary size");
    grid->add_option("--outer-iters", grid_outer, "SBMCA outer iterations");
    grid->add_option("--shift-max", grid_shift_max, "D1 circular shift range");
    grid->add_option("--dict-seed", grid_dict_seed, "Dictionary initialization seed");

    // --- hist ---
    auto* hist = app.add_subcommand("hist", "Histogram of per-block errors");
    std::string hist_in, hist_out;
    int bins = 30;
    double hist_lo = 0.0, hist_hi = 1.5;
    hist->add_option("--errors", hist_in, "CSV of error values")->required();
    hist->add_option("--out", hist_out, "Output CSV")->required();
    hist->add_option("--bins", bins, "Bin count");
    hist->add_option("--lo", hist_lo, "Range lower edge");
    hist->add_option("--hi", hist_hi, "Range upper edge");

    CLI11_PARSE(app, argc, argv);

    if (synth->parsed()) {
        auto [low, high] = make_prototypes(pulses.low(), pulses.high(), fs, block_len);
        PulseTrain train = make_pulse_train(n, fs, rate, jitter, low, high, seed);
        Vector bg = background_path.empty()
                        ? synth_background(n, fs, bg_seed)
                        : load_background(background_path, n, fs);
        bg = scale_to_rms_ratio(bg, train.x_p, rms_ratio);
        MixtureDataset ds = mix(train.x_p, bg, sigma, seed + 1);
        ds.labels = train.labels;
        ds.onsets = train.onsets;
        ds.fs = fs;
        ds.seed = seed;
        json extra = {{"pulses", pulses.to_json()},
                      {"rate", rate},
                      {"jitter", jitter},
                      {"rms_ratio", rms_ratio},
                      {"m", block_len},
                      {"bg_seed", bg_seed},
                      {"background", background_path}};
        save_dataset(synth_out, ds, extra);
        std::cout << "dataset written to " << synth_out << " (" << ds.x.size()
                  << " samples, " << ds.onsets.size() << " discharges)\n";
        return kExitOk;
    }

    if (sep->parsed()) {
        MixtureDataset ds = load_dataset(sep_dataset);
        BlockMatrix X = blockify(ds.x, sep_m);
        json params = {{"method", method}, {"m", sep_m}};

        SeparationResult res;
        if (method == "tsvd") {
            res.Xp_hat = truncated_svd_denoise(X, rank);
            res.Xu_hat = X;
            res.Xu_hat.data -= res.Xp_hat.data;
            res.outer_iters = 1;
            res.converged = true;
            params["rank"] = rank;
        } else if (method == "mca-dct" || method == "mca-identity") {
            Dictionary D1 = build_d1(sep_dataset, sep_m, shift_max);
            Dictionary D2 = (method == "mca-dct") ? dct_dictionary(sep_m)
                                                  : identity_dictionary(sep_m);
            res = mca_separate(X, D1, D2, lambda);
            params["lambda"] = lambda;
            params["shift_max"] = shift_max;
        } else if (method == "sbmca") {
            Dictionary D1 = build_d1(sep_dataset, sep_m, shift_max);
            SbmcaParams p;
            p.lambda1 = lambda1;
            p.lambda2 = lambda2;
            p.lambda3 = lambda3;
            p.dict_opts.num_atoms = atoms;
            p.dict_opts.inner_iters = inner_iters;
            p.dict_opts.seed = dict_seed;
            p.max_outer_iters = outer_iters;
            p.outer_tol = outer_tol;
            if (init_name == "lasso-d1")
                p.init = SbmcaInit::LassoD1;
            else if (init_name == "mca-dct-omp")
                p.init = SbmcaInit::McaDctOmp;
            else
                throw std::invalid_argument("unknown init: " + init_name);
            res = sbmca_separate(X, D1, p);
            params["lambda1"] = lambda1;
            params["lambda2"] = lambda2;
            params["lambda3"] = lambda3;
            params["atoms"] = atoms;
            params["outer_iters"] = outer_iters;
            params["init"] = init_name;
            params["dict_seed"] = dict_seed;
            params["shift_max"] = shift_max;
        } else {
            throw std::invalid_argument("unknown method: " + method);
        }
        save_result(sep_out, res, ds.fs, params);
        std::cerr << "separated in " << res.wall_time << " s, " << res.outer_iters
                  << " outer iteration(s)\n";
        std::cout << "result written to " << sep_out << "\n";
        return kExitOk;
    }

    if (eval->parsed()) {
        MixtureDataset ds = load_dataset(eval_dataset);
        Vector xp_hat = load_signal_csv(eval_result + "/xp_hat.csv");
        Vector xu_hat = load_signal_csv(eval_result + "/xu_hat.csv");
        std::ifstream mf(eval_result + "/manifest.json");
        json manifest;
        std::string method_tag = "unknown";
        if (mf) {
            mf >> manifest;
            method_tag = manifest.value("params", json::object()).value("method", "unknown");
        }

        EvalReport rep;
        rep.method = method_tag;
        rep.params = manifest.dump();
        rep.snr_xp = reconstruction_snr(ds.x_p, xp_hat);
        rep.snr_xu = reconstruction_snr(ds.x_u, xu_hat);
        rep.block_errors_xp = per_block_errors(blockify(ds.x_p, eval_m),
                                               blockify(xp_hat, eval_m),
                                               &rep.zero_blocks_xp);
        rep.block_errors_xu = per_block_errors(blockify(ds.x_u, eval_m),
                                               blockify(xu_hat, eval_m),
                                               &rep.zero_blocks_xu);
        write_eval_report(eval_out, rep);
        std::cout << "snr_xp_db=" << (rep.snr_xp.exact ? std::string("exact")
                                                       : std::to_string(rep.snr_xp.db))
                  << " snr_xu_db=" << (rep.snr_xu.exact ? std::string("exact")
                                                        : std::to_string(rep.snr_xu.db))
                  << "\n";
        return kExitOk;
    }

    if (grid->parsed()) {
        MixtureDataset ds = load_dataset(grid_dataset);
        BlockMatrix X = blockify(ds.x, grid_m);
        Dictionary D1 = build_d1(grid_dataset, grid_m, grid_shift_max);

        GridSpec spec;
        if (grid_method == "sbmca") {
            spec.method = Method::Sbmca;
            spec.couple_lambda23 = true;
            if (lambda1s_csv.empty() || lambda23s_csv.empty())
                throw std::invalid_argument("sbmca grid needs --lambda1s and --lambda23s");
            spec.lambda1 = parse_grid(lambda1s_csv, "--lambda1s");
            spec.lambda3 = parse_grid(lambda23s_csv, "--lambda23s");
            spec.base.dict_opts.num_atoms = grid_atoms;
            spec.base.dict_opts.seed = grid_dict_seed;
            spec.base.max_outer_iters = grid_outer;
        } else if (grid_method == "mca-dct" || grid_method == "mca-identity") {
            spec.method = (grid_method == "mca-dct") ? Method::McaDct : Method::McaIdentity;
            if (lambdas_csv.empty()) {
                const Dictionary D2 = (spec.method == Method::McaDct)
                                          ? dct_dictionary(grid_m)
                                          : identity_dictionary(grid_m);
                const Dictionary joint = concat(D1, D2);
                const double scale =
                    (joint.atoms.transpose() * X.data).lpNorm<Eigen::Infinity>();
                spec.lambda = default_lambda_grid(scale);
            } else {
                spec.lambda = parse_grid(lambdas_csv, "--lambdas");
            }
        } else {
            throw std::invalid_argument("unknown method: " + grid_method);
        }

        GridOutcome out = grid_search(X, D1, ds.x_p, ds.x_u, spec);
        std::filesystem::create_directories(grid_out);
        save_grid_csv(grid_out + "/grid.csv", out.rows);
        json best = {{"method", grid_method},
                     {"best_xp", {{"snr_db", out.best_xp.snr_xp.db},
                                  {"params", out.best_xp.params}}},
                     {"best_xu", {{"snr_db", out.best_xu.snr_xu.db},
                                  {"params", out.best_xu.params}}}};
        std::ofstream f(grid_out + "/best.json");
        if (!f) throw IoError("cannot open for writing: " + grid_out + "/best.json");
        f << best.dump(2) << "\n";
        std::cout << best.dump(2) << "\n";
        return kExitOk;
    }

    if (hist->parsed()) {
        Vector values = load_signal_csv(hist_in);
        save_histogram_csv(hist_out, histogram(values, bins, hist_lo, hist_hi));
        std::cout << "histogram written to " << hist_out << "\n";
        return kExitOk;
    }

    return kExitBadArgs;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const IoError& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return kExitIo;
    } catch (const NumericError& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid arguments: " << e.what() << "\n";
        return kExitBadArgs;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
}
