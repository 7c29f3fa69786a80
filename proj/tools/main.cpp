// chaoslab command-line workbench: orbit generation, chaos diagnostics,
// image encryption and differential metrics. Flag precedence is
// CLI > config file > built-in defaults; every output CSV has a header row,
// comma separation and LF line endings.

#include <CLI11.hpp>

#include <algorithm>

#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "chaoslab/cipher.hpp"
#include "chaoslab/config.hpp"
#include "chaoslab/csv.hpp"
#include "chaoslab/dynamics.hpp"
#include "chaoslab/image.hpp"
#include "chaoslab/maps.hpp"
#include "chaoslab/metrics.hpp"

namespace fs = std::filesystem;
using namespace chaoslab;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;
constexpr int kExitFormat = 4;

struct CliState {
    RunConfig cfg;
    std::string out_dir = ".";
};

std::string out_path(const CliState& st, const std::string& name) {
    fs::path p = fs::path(st.out_dir) / name;
    return p.string();
}

void ensure_out_dir(const CliState& st) {
    std::error_code ec;
    fs::create_directories(st.out_dir, ec);
    if (ec) throw IoError("cannot create output directory " + st.out_dir);
}

// ---------------------------------------------------------------------------
// command bodies
// ---------------------------------------------------------------------------

void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
    CsvWriter csv(path, {"step", "x"});
    for (std::size_t i = 0; i < traj.samples.size(); ++i)
        csv.row(i + 1, traj.samples[i]);
    csv.close();
}

void run_generate(const CliState& st, const std::string& name) {
    ensure_out_dir(st);
    const AnalysisConfig& a = st.cfg.analysis;
    Trajectory traj = iterate(st.cfg.map, st.cfg.hcm2, a.iterations, a.burn_in);
    write_trajectory_csv(out_path(st, name), traj);
    std::printf("wrote %s (%zu samples)\n", out_path(st, name).c_str(),
                traj.samples.size());
}

void run_lyapunov(const CliState& st) {
    ensure_out_dir(st);
    const AnalysisConfig& a = st.cfg.analysis;
    auto results = lyapunov_sweep(st.cfg.map, st.cfg.hcm2, a.sweep, a.range_lo,
                                  a.range_hi, a.points, a.lyapunov_iterations,
                                  a.d0, a.threads);
    CsvWriter csv(out_path(st, "lyapunov.csv"), {"r1", "r2", "lambda", "n_iters"});
    for (const LyapunovResult& r : results)
        csv.row(r.r1, r.r2, r.lambda, r.n_iters);
    csv.close();
    std::printf("wrote %s (%zu points, sweep %s)\n",
                out_path(st, "lyapunov.csv").c_str(), results.size(),
                to_string(a.sweep).c_str());
}

void run_bifurcation(const CliState& st) {
    ensure_out_dir(st);
    const AnalysisConfig& a = st.cfg.analysis;
    auto points = bifurcation_scan(st.cfg.map, st.cfg.hcm2, a.sweep, a.range_lo,
                                   a.range_hi, a.points, st.cfg.map.x0,
                                   a.bifurcation_burn_in, a.keep, a.threads);
    CsvWriter csv(out_path(st, "bifurcation.csv"), {"r", "x"});
    for (const BifurcationPoint& p : points) csv.row(p.r, p.x);
    csv.close();
    std::printf("wrote %s (%zu points)\n", out_path(st, "bifurcation.csv").c_str(),
                points.size());
}

void run_histogram(const CliState& st) {
    ensure_out_dir(st);
    const AnalysisConfig& a = st.cfg.analysis;
    Trajectory traj = iterate(st.cfg.map, st.cfg.hcm2, a.iterations, a.burn_in);
    HistogramReport rep = histogram_uniformity(traj.samples, a.bins);
    CsvWriter csv(out_path(st, "histogram.csv"), {"bin_lo", "bin_hi", "count"});
    for (int b = 0; b < rep.n_bins; ++b)
        csv.row(static_cast<double>(b) / rep.n_bins,
                static_cast<double>(b + 1) / rep.n_bins, rep.bin_counts[b]);
    csv.close();
    std::printf("wrote %s (%zu samples, %d bins) chi2=%g p=%g\n",
                out_path(st, "histogram.csv").c_str(), rep.n_samples, rep.n_bins,
                rep.chi2, rep.p_value);
}

void run_sensitivity(const CliState& st) {
    ensure_out_dir(st);
    const AnalysisConfig& a = st.cfg.analysis;
    SensitivityReport rep = sensitivity_probe(st.cfg.map, st.cfg.hcm2, a.perturb,
                                              a.delta, a.horizon, a.threshold);
    CsvWriter csv(out_path(st, "sensitivity.csv"),
                  {"step", "x_base", "x_pert", "gap"});
    for (std::size_t i = 0; i < rep.base.size(); ++i)
        csv.row(i + 1, rep.base[i], rep.perturbed[i],
                std::fabs(rep.base[i] - rep.perturbed[i]));
    csv.close();
    if (rep.divergence_step)
        std::printf("wrote %s; diverged past %g at step %zu (max gap %g)\n",
                    out_path(st, "sensitivity.csv").c_str(), a.threshold,
                    *rep.divergence_step, rep.max_gap);
    else
        std::printf("wrote %s; no divergence past %g within %zu steps (max gap %g)\n",
                    out_path(st, "sensitivity.csv").c_str(), a.threshold,
                    a.horizon, rep.max_gap);
}

void run_cobweb(const CliState& st) {
    ensure_out_dir(st);
    auto segments = cobweb_trace(st.cfg.map, st.cfg.hcm2, st.cfg.analysis.cobweb_steps);
    CsvWriter csv(out_path(st, "cobweb.csv"),
                  {"x_from", "y_from", "x_to", "y_to"});
    for (const CobwebSegment& s : segments)
        csv.row(s.x_from, s.y_from, s.x_to, s.y_to);
    csv.close();
    std::printf("wrote %s (%zu segments)\n", out_path(st, "cobweb.csv").c_str(),
                segments.size());
}

CipherKey make_key(const CliState& st) {
    return CipherKey{st.cfg.map, st.cfg.hcm2, st.cfg.crypto.nonce};
}

void run_crypt(const CliState& st, const std::string& in_path,
               const std::string& out_file, bool decrypting) {
    ImageBuffer img = read_image(in_path);
    const CipherKey key = make_key(st);
    ImageBuffer out = decrypting ? decrypt(img, key, st.cfg.crypto.rounds)
                                 : encrypt(img, key, st.cfg.crypto.rounds);
    write_image(out_file, out);
    std::printf("%s %s -> %s (%dx%dx%d)\n", decrypting ? "decrypted" : "encrypted",
                in_path.c_str(), out_file.c_str(), out.width, out.height,
                out.channels);
}

void write_metrics_csv(const std::string& path, const DiffMetrics& dm) {
    static const char* kRgb[3] = {"r", "g", "b"};
    CsvWriter csv(path, {"channel", "npcr", "uaci"});
    for (int c = 0; c < dm.channels; ++c)
        csv.row(dm.channels == 3 ? kRgb[c] : "gray", dm.npcr[c], dm.uaci[c]);
    csv.row("average", dm.npcr_avg, dm.uaci_avg);
    csv.close();
}

void run_metrics(const CliState& st, const std::string& img_path,
                 const std::string& name) {
    ensure_out_dir(st);
    ImageBuffer img = read_image(img_path);
    DiffMetrics dm = differential_test(img, make_key(st), st.cfg.crypto.trials,
                                       st.cfg.crypto.rounds);
    write_metrics_csv(out_path(st, name), dm);
    std::printf("wrote %s  NPCR avg %.4f  UACI avg %.4f (%d trials)\n",
                out_path(st, name).c_str(), dm.npcr_avg, dm.uaci_avg,
                st.cfg.crypto.trials);
}

// ---------------------------------------------------------------------------
// repro: the pinned figure/table runs
// ---------------------------------------------------------------------------

void run_repro(const CliState& base, const std::string& only,
               const std::string& lena_path) {
    static const char* kTargets[] = {"fig2", "fig3", "fig4",
                                     "fig5", "fig6", "table1"};
    if (!only.empty() &&
        std::none_of(std::begin(kTargets), std::end(kTargets),
                     [&](const char* t) { return only == t; }))
        throw ConfigError("repro: unknown target '" + only +
                          "' (expected fig2..fig6 or table1)");
    auto wants = [&](const char* name) { return only.empty() || only == name; };

    if (wants("fig2")) {
        CliState st = base;
        st.out_dir = out_path(base, "fig2");
        st.cfg.map.r1 = 0.01;
        st.cfg.map.r2 = 0.3;
        st.cfg.map.x0 = 0.03;
        st.cfg.analysis.iterations = 140000;
        st.cfg.analysis.burn_in = 0;
        st.cfg.analysis.bins = 100;
        run_histogram(st);
    }
    if (wants("fig3")) {
        struct Case {
            double r1, r2, x0;
            const char* name;
        };
        const Case cases[] = {{0.01, 0.3, 0.2, "cobweb_r1_0.01_r2_0.3_x0_0.2.csv"},
                              {0.01, 0.3, 0.6, "cobweb_r1_0.01_r2_0.3_x0_0.6.csv"},
                              {0.3, 0.01, 0.2, "cobweb_r1_0.3_r2_0.01_x0_0.2.csv"},
                              {0.3, 0.01, 0.6, "cobweb_r1_0.3_r2_0.01_x0_0.6.csv"}};
        for (const Case& c : cases) {
            CliState st = base;
            st.out_dir = out_path(base, "fig3");
            ensure_out_dir(st);
            st.cfg.map.r1 = c.r1;
            st.cfg.map.r2 = c.r2;
            st.cfg.map.x0 = c.x0;
            auto segments =
                cobweb_trace(st.cfg.map, st.cfg.hcm2, st.cfg.analysis.cobweb_steps);
            CsvWriter csv(out_path(st, c.name),
                          {"x_from", "y_from", "x_to", "y_to"});
            for (const CobwebSegment& s : segments)
                csv.row(s.x_from, s.y_from, s.x_to, s.y_to);
            csv.close();
            std::printf("wrote %s\n", out_path(st, c.name).c_str());
        }
    }
    if (wants("fig4")) {
        for (PerturbTarget target : {PerturbTarget::X0, PerturbTarget::R1}) {
            CliState st = base;
            st.out_dir = out_path(base, "fig4");
            ensure_out_dir(st);
            st.cfg.map.r1 = 0.1;
            st.cfg.map.r2 = 0.3;
            st.cfg.map.x0 = 0.6;
            SensitivityReport rep =
                sensitivity_probe(st.cfg.map, st.cfg.hcm2, target, 1e-16,
                                  st.cfg.analysis.horizon, st.cfg.analysis.threshold);
            const std::string name =
                std::string("sensitivity_") + to_string(target) + ".csv";
            CsvWriter csv(out_path(st, name), {"step", "x_base", "x_pert", "gap"});
            for (std::size_t i = 0; i < rep.base.size(); ++i)
                csv.row(i + 1, rep.base[i], rep.perturbed[i],
                        std::fabs(rep.base[i] - rep.perturbed[i]));
            csv.close();
            std::printf("wrote %s\n", out_path(st, name).c_str());
        }
    }
    if (wants("fig5")) {
        for (double x0 : {0.5, 0.2}) {
            for (SweepAxis axis : {SweepAxis::R1, SweepAxis::R2}) {
                CliState st = base;
                st.out_dir = out_path(base, "fig5");
                ensure_out_dir(st);
                st.cfg.map.x0 = x0;
                auto points = bifurcation_scan(
                    st.cfg.map, st.cfg.hcm2, axis, 0.0, 1.0, 500, x0,
                    st.cfg.analysis.bifurcation_burn_in, st.cfg.analysis.keep,
                    st.cfg.analysis.threads);
                char name[64];
                std::snprintf(name, sizeof(name), "bifurcation_%s_x0_%g.csv",
                              to_string(axis).c_str(), x0);
                CsvWriter csv(out_path(st, name), {"r", "x"});
                for (const BifurcationPoint& p : points) csv.row(p.r, p.x);
                csv.close();
                std::printf("wrote %s\n", out_path(st, name).c_str());
            }
        }
    }
    if (wants("fig6")) {
        for (SweepAxis axis : {SweepAxis::R1, SweepAxis::R2}) {
            CliState st = base;
            st.out_dir = out_path(base, "fig6");
            ensure_out_dir(st);
            st.cfg.map.x0 = 0.5;
            auto results = lyapunov_sweep(st.cfg.map, st.cfg.hcm2, axis, 0.0, 1.0,
                                          50, 10000, st.cfg.analysis.d0,
                                          st.cfg.analysis.threads);
            const std::string name =
                std::string("lyapunov_") + to_string(axis) + ".csv";
            CsvWriter csv(out_path(st, name), {"r1", "r2", "lambda", "n_iters"});
            for (const LyapunovResult& r : results)
                csv.row(r.r1, r.r2, r.lambda, r.n_iters);
            csv.close();
            std::printf("wrote %s\n", out_path(st, name).c_str());
        }
    }
    if (wants("table1")) {
        CliState st = base;
        st.out_dir = out_path(base, "table1");
        ensure_out_dir(st);
        ImageBuffer synth = synthetic_photo(256, 256, 3);
        const std::string synth_path = out_path(st, "synthetic_256x256.ppm");
        write_pnm(synth_path, synth);
        DiffMetrics dm = differential_test(synth, make_key(st),
                                           st.cfg.crypto.trials,
                                           st.cfg.crypto.rounds);
        write_metrics_csv(out_path(st, "metrics_synthetic.csv"), dm);
        std::printf("wrote %s  NPCR avg %.4f  UACI avg %.4f\n",
                    out_path(st, "metrics_synthetic.csv").c_str(), dm.npcr_avg,
                    dm.uaci_avg);
        if (!lena_path.empty()) {
            ImageBuffer lena = read_image(lena_path);
            DiffMetrics lm = differential_test(lena, make_key(st),
                                               st.cfg.crypto.trials,
                                               st.cfg.crypto.rounds);
            write_metrics_csv(out_path(st, "metrics_lena.csv"), lm);
            std::printf("wrote %s  NPCR avg %.4f  UACI avg %.4f\n",
                        out_path(st, "metrics_lena.csv").c_str(), lm.npcr_avg,
                        lm.uaci_avg);
        }
    }
}

// ---------------------------------------------------------------------------
// flag wiring
// ---------------------------------------------------------------------------

// Pre-scan for --config so file values become the defaults the full parse
// overrides (and --help shows effective defaults).
std::string find_config_arg(int argc, char** argv) {
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--config" && i + 1 < argc) return argv[i + 1];
        if (arg.rfind("--config=", 0) == 0) return arg.substr(9);
    }
    return "";
}

void add_map_flags(CLI::App* cmd, RunConfig& cfg, std::string& phi1,
                   std::string& phi2) {
    cmd->add_option("--r1", cfg.map.r1, "HCM1 control parameter")
        ->capture_default_str();
    cmd->add_option("--r2", cfg.map.r2, "HCM2 control parameter")
        ->capture_default_str();
    cmd->add_option("--x0", cfg.map.x0, "initial state in [0,1)")
        ->capture_default_str();
    cmd->add_option("--gamma", cfg.map.gamma, "composition gain (> 0)")
        ->capture_default_str();
    cmd->add_option("--phi1", phi1, "composition function phi1 (sin_pi|identity)")
        ->capture_default_str();
    cmd->add_option("--phi2", phi2, "composition combiner phi2 (sum|product|mean)")
        ->capture_default_str();
}

int dispatch(int argc, char** argv) {
    CliState st;
    const std::string config_path = find_config_arg(argc, argv);
    if (!config_path.empty()) apply_config_file(st.cfg, config_path);

    CLI::App app{"two-parameter hybrid chaotic map workbench"};
    app.require_subcommand(1);
    std::string config_dummy;
    app.add_option("--config", config_dummy, "JSON config file (applied before flags)");
    app.add_option("--out", st.out_dir, "output directory")->capture_default_str();
    app.add_option("--seed-nonce", st.cfg.crypto.nonce,
                   "nonce mixed into the cipher key's x0")
        ->capture_default_str();

    std::string phi1 = to_string(st.cfg.map.phi1);
    std::string phi2 = to_string(st.cfg.map.phi2);
    std::string sweep = to_string(st.cfg.analysis.sweep);
    std::string perturb = to_string(st.cfg.analysis.perturb);
    std::vector<double> range;

    // generate
    CLI::App* generate = app.add_subcommand("generate", "write a trajectory CSV");
    std::string traj_name = "trajectory.csv";
    add_map_flags(generate, st.cfg, phi1, phi2);
    generate->add_option("-n,--samples", st.cfg.analysis.iterations, "sample count")
        ->capture_default_str();
    generate->add_option("--burn-in", st.cfg.analysis.burn_in, "discarded steps")
        ->capture_default_str();
    generate->add_option("-o,--output", traj_name, "output file name")
        ->capture_default_str();

    // analyze <kind>
    CLI::App* analyze = app.add_subcommand("analyze", "chaos diagnostics");
    analyze->require_subcommand(1);

    CLI::App* lyap = analyze->add_subcommand("lyapunov", "largest Lyapunov exponent sweep");
    add_map_flags(lyap, st.cfg, phi1, phi2);
    lyap->add_option("--sweep", sweep, "swept axis (r1|r2)")->capture_default_str();
    lyap->add_option("--range", range, "sweep range lo,hi")->delimiter(',')->expected(2);
    lyap->add_option("--points", st.cfg.analysis.points, "sweep sample count")
        ->capture_default_str();
    lyap->add_option("--iters", st.cfg.analysis.lyapunov_iterations,
                     "iterations per estimate")
        ->capture_default_str();
    lyap->add_option("--d0", st.cfg.analysis.d0, "companion separation")
        ->capture_default_str();
    lyap->add_option("--threads", st.cfg.analysis.threads, "worker threads (0=auto)")
        ->capture_default_str();

    CLI::App* bif = analyze->add_subcommand("bifurcation", "post-transient state scan");
    add_map_flags(bif, st.cfg, phi1, phi2);
    bif->add_option("--sweep", sweep, "swept axis (r1|r2)")->capture_default_str();
    bif->add_option("--range", range, "sweep range lo,hi")->delimiter(',')->expected(2);
    bif->add_option("--points", st.cfg.analysis.points, "sweep sample count")
        ->capture_default_str();
    bif->add_option("--burn-in", st.cfg.analysis.bifurcation_burn_in,
                    "transient steps discarded per r")
        ->capture_default_str();
    bif->add_option("--keep", st.cfg.analysis.keep, "states kept per r")
        ->capture_default_str();
    bif->add_option("--threads", st.cfg.analysis.threads, "worker threads (0=auto)")
        ->capture_default_str();

    CLI::App* hist = analyze->add_subcommand("histogram", "orbit histogram + chi-square");
    add_map_flags(hist, st.cfg, phi1, phi2);
    hist->add_option("-n,--samples", st.cfg.analysis.iterations, "sample count")
        ->capture_default_str();
    hist->add_option("--burn-in", st.cfg.analysis.burn_in, "discarded steps")
        ->capture_default_str();
    hist->add_option("--bins", st.cfg.analysis.bins, "bin count")->capture_default_str();

    CLI::App* sens = analyze->add_subcommand("sensitivity", "perturbed-orbit divergence");
    add_map_flags(sens, st.cfg, phi1, phi2);
    sens->add_option("--target", perturb, "perturbed scalar (x0|r1|r2)")
        ->capture_default_str();
    sens->add_option("--delta", st.cfg.analysis.delta, "perturbation")
        ->capture_default_str();
    sens->add_option("--horizon", st.cfg.analysis.horizon, "compared steps")
        ->capture_default_str();
    sens->add_option("--threshold", st.cfg.analysis.threshold, "divergence threshold")
        ->capture_default_str();

    CLI::App* cob = analyze->add_subcommand("cobweb", "cobweb segment trace");
    add_map_flags(cob, st.cfg, phi1, phi2);
    cob->add_option("-n,--steps", st.cfg.analysis.cobweb_steps, "orbit steps")
        ->capture_default_str();

    // encrypt / decrypt
    std::string in_path, out_file;
    CLI::App* enc = app.add_subcommand("encrypt", "encrypt an image file");
    add_map_flags(enc, st.cfg, phi1, phi2);
    enc->add_option("-i,--input", in_path, "input image (PPM/PGM/PNG)")->required();
    enc->add_option("-o,--output", out_file, "output image path")->required();
    enc->add_option("--rounds", st.cfg.crypto.rounds, "permute+diffuse rounds")
        ->capture_default_str();

    CLI::App* dec = app.add_subcommand("decrypt", "decrypt an image file");
    add_map_flags(dec, st.cfg, phi1, phi2);
    dec->add_option("-i,--input", in_path, "input image (PPM/PGM/PNG)")->required();
    dec->add_option("-o,--output", out_file, "output image path")->required();
    dec->add_option("--rounds", st.cfg.crypto.rounds, "permute+diffuse rounds")
        ->capture_default_str();

    // metrics
    std::string metrics_name = "metrics.csv";
    CLI::App* met = app.add_subcommand("metrics", "NPCR/UACI differential test");
    add_map_flags(met, st.cfg, phi1, phi2);
    met->add_option("-i,--input", in_path, "plaintext image")->required();
    met->add_option("--trials", st.cfg.crypto.trials, "single-pixel-flip trials")
        ->capture_default_str();
    met->add_option("--rounds", st.cfg.crypto.rounds, "permute+diffuse rounds")
        ->capture_default_str();
    met->add_option("-o,--output", metrics_name, "output file name")
        ->capture_default_str();

    // repro
    std::string only, lena_path;
    CLI::App* repro = app.add_subcommand(
        "repro", "run the pinned figure/table configurations");
    repro->add_option("--only", only, "restrict to one target (fig2..fig6, table1)");
    repro->add_option("--lena", lena_path, "path to a user-supplied Lena image");
    repro->add_option("--trials", st.cfg.crypto.trials, "table1 trials")
        ->capture_default_str();
    repro->add_option("--threads", st.cfg.analysis.threads, "worker threads (0=auto)")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    st.cfg.map.phi1 = parse_unary_fn(phi1);
    st.cfg.map.phi2 = parse_binary_fn(phi2);
    st.cfg.analysis.sweep = parse_sweep_axis(sweep);
    st.cfg.analysis.perturb = parse_perturb_target(perturb);
    if (!range.empty()) {
        st.cfg.analysis.range_lo = range[0];
        st.cfg.analysis.range_hi = range[1];
    }
    validate(st.cfg);

    if (generate->parsed()) run_generate(st, traj_name);
    if (analyze->parsed()) {
        if (lyap->parsed()) run_lyapunov(st);
        if (bif->parsed()) run_bifurcation(st);
        if (hist->parsed()) run_histogram(st);
        if (sens->parsed()) run_sensitivity(st);
        if (cob->parsed()) run_cobweb(st);
    }
    if (enc->parsed()) run_crypt(st, in_path, out_file, false);
    if (dec->parsed()) run_crypt(st, in_path, out_file, true);
    if (met->parsed()) run_metrics(st, in_path, metrics_name);
    if (repro->parsed()) run_repro(st, only, lena_path);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return dispatch(argc, argv);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const ImageFormatError& e) {
        std::fprintf(stderr, "format error: %s\n", e.what());
        return kExitFormat;
    } catch (const ImageIoError& e) {
        std::fprintf(stderr, "io error: %s\n", e.what());
        return kExitIo;
    } catch (const IoError& e) {
        std::fprintf(stderr, "io error: %s\n", e.what());
        return kExitIo;
    } catch (const PerturbationLost& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
