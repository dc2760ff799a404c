// SPDX-License-Identifier: Apache-2.0
//
// serdsp command line front end.
//
//   sweep        link-level experiment from a config file -> metrics CSV
//   bifurcation  quadratic-map terminal-value table -> CSV
//   calibrate    front-end identification run -> taps/cost/response CSV
//   classify     convergence class of one (s, delta0) point
//   selfcheck    quick invariant pass over the core algorithms

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "serdsp/csv.hpp"
#include "serdsp/dynamics.hpp"
#include "serdsp/experiment.hpp"

namespace fs = std::filesystem;
using namespace serdsp;

namespace {

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

int cmd_sweep(const std::string& config_path, const std::string& out_dir, long seed_override,
              int verbosity) {
    Config cfg = Config::from_file(config_path);
    ExperimentSpec spec = parse_experiment(cfg);
    cfg.check_all_consumed();
    if (seed_override >= 0) spec.seeds = {static_cast<uint64_t>(seed_override)};

    fs::create_directories(out_dir);
    auto rows = run_experiment(spec);
    if (verbosity > 0) {
        for (const auto& r : rows)
            std::cout << spec.name << " " << r.sweep_name << "=" << csv_num(r.sweep_value)
                      << " seed=" << r.seed << " snr=" << csv_num(r.effective_snr_db)
                      << " dB ber=" << csv_num(r.ber) << "\n";
    }
    write_metrics_csv(out_dir + "/" + spec.name + ".csv", rows);
    write_text(out_dir + "/effective_config.cfg", cfg.echo());
    return 0;
}

int cmd_bifurcation(double bmin, double bmax, int nb, int samples, int iters, uint64_t seed,
                    const std::string& out_dir, bool delta_coords, int verbosity) {
    fs::create_directories(out_dir);
    auto rows = delta_coords ? bifurcation_delta(bmin, bmax, nb, samples, iters, seed)
                             : bifurcation(bmin, bmax, nb, samples, iters, seed);
    const char* first_col = delta_coords ? "s" : "b";
    CsvWriter w(out_dir + "/bifurcation.csv", {first_col, "terminal_value", "multiplicity"});
    for (const auto& r : rows) {
        w.begin_row();
        w.field(r.b);
        w.field(r.terminal_value);
        w.field(r.multiplicity);
        w.end_row();
    }
    if (verbosity > 0)
        std::cout << "bifurcation: " << rows.size() << " rows over " << nb << " grid points\n";
    return 0;
}

int cmd_calibrate(const std::string& config_path, const std::string& out_dir, long seed_override,
                  int verbosity) {
    Config cfg = Config::from_file(config_path);
    CalibrationScenario sc = parse_calibration(cfg);
    cfg.check_all_consumed();
    if (seed_override >= 0) sc.seed = static_cast<uint64_t>(seed_override);

    fs::create_directories(out_dir);
    CalibrationRun run = run_calibration_scenario(sc);
    write_calibration_csv(out_dir, run);
    write_text(out_dir + "/effective_config.cfg", cfg.echo());
    if (verbosity > 0 && !run.mse_db.empty())
        std::cout << "calibrate: terminal windowed MSE " << csv_num(run.mse_db.back())
                  << " dB over " << run.mse_db.size() << " windows\n";
    return 0;
}

int cmd_classify(double s, double delta0) {
    ConvergenceClass c = classify(s, delta0);
    std::cout << to_string(c.kind);
    if (c.kind == ConvergenceKind::ConvergesToOffset) std::cout << " offset=" << csv_num(c.offset);
    double b = s * s + s;
    std::cout << " (b=" << csv_num(b) << ", e0=" << csv_num(2.0 * delta0 + s) << ")\n";
    return 0;
}

bool check(const char* name, bool ok) {
    std::cout << (ok ? "[ok]   " : "[FAIL] ") << name << "\n";
    return ok;
}

int cmd_selfcheck() {
    bool all = true;
    {
        auto seq = gen_qam_symbols(QamFormat::QAM64, 1 << 14, 3);
        all &= check("qam64 mean power within 1%", std::abs(mean_power(seq.symbols) - 1.0) < 0.01);
    }
    {
        auto fp = fixed_points(0.0);
        all &= check("map fixed points at b=0", fp.alpha == -1.0 && fp.beta == 0.0);
        auto traj = iterate_map(0.0, 0.5, 64);
        all &= check("map converges to 0 at b=0", std::abs(traj.back()) < 1e-9);
    }
    {
        // Round trip through detection and closed-form reconstruction.
        auto syms = gen_qam_symbols(QamFormat::QAM16, 1 << 12, 5);
        Waveform w = rrc_shape(syms, 2, 0.1, 32);
        FrontEndConfig fe;
        fe = set_lospr(w, 14.0, fe);
        auto pair = detect(w, fe);
        auto rec = dfr(pair, fe.a1, fe.a2);
        double err = 0.0;
        for (size_t k = 0; k < rec.i_hat.size(); ++k) {
            err = std::max(err, std::abs(rec.i_hat[k] - w.samples[k].real()));
            err = std::max(err, std::abs(rec.q_hat[k] - w.samples[k].imag()));
        }
        all &= check("dfr reconstructs a high-LOSPR trace", err < 1e-6);
        all &= check("dfr uses 10 real mults/sample", rec.real_mults_per_sample == 10);
    }
    {
        all &= check("mult count table", mult_count(Method::CIC, 4) == 10 &&
                                             mult_count(Method::GD, 20) == 122 &&
                                             mult_count(Method::DFR, 0) == 10);
    }
    std::cout << (all ? "selfcheck passed\n" : "selfcheck FAILED\n");
    return all ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"single-ended coherent receiver DSP toolkit"};
    app.require_subcommand(1);

    std::string config_path, out_dir = "out";
    long seed_override = -1;
    int verbosity = 1;
    app.add_flag_function("-q,--quiet", [&](int64_t) { verbosity = 0; }, "suppress per-point output");

    auto* sweep = app.add_subcommand("sweep", "run a link-level experiment");
    sweep->add_option("--config", config_path, "experiment config file")->required();
    sweep->add_option("--out", out_dir, "output directory");
    sweep->add_option("--seed", seed_override, "override the seed list with one seed");

    auto* bif = app.add_subcommand("bifurcation", "quadratic-map terminal values");
    double bmin = -0.25, bmax = 2.5;
    int nb = 500, samples = 64, iters = 1000;
    uint64_t bseed = 1;
    bool delta_coords = false;
    bif->add_option("--bmin", bmin, "grid start");
    bif->add_option("--bmax", bmax, "grid end");
    bif->add_option("--nb", nb, "grid points");
    bif->add_option("--samples", samples, "initial values per grid point");
    bif->add_option("--iters", iters, "iterations per trajectory (>= 100)");
    bif->add_option("--seed", bseed, "RNG seed");
    bif->add_option("--out", out_dir, "output directory");
    bif->add_flag("--delta-coords", delta_coords,
                  "grid is s = Ibar+Qbar, values are terminal errors");

    auto* cal = app.add_subcommand("calibrate", "run the self-calibration circuit");
    cal->add_option("--config", config_path, "calibration config file")->required();
    cal->add_option("--out", out_dir, "output directory");
    cal->add_option("--seed", seed_override, "override the config seed");

    auto* cls = app.add_subcommand("classify", "classify one cancellation-error sample");
    double s_val = 0.0, delta0 = 0.0;
    cls->add_option("--s", s_val, "Ibar + Qbar")->required();
    cls->add_option("--delta0", delta0, "initial error")->required();

    app.add_subcommand("selfcheck", "run quick invariant checks");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sweep->parsed()) return cmd_sweep(config_path, out_dir, seed_override, verbosity);
        if (bif->parsed())
            return cmd_bifurcation(bmin, bmax, nb, samples, iters, bseed, out_dir, delta_coords,
                                   verbosity);
        if (cal->parsed()) return cmd_calibrate(config_path, out_dir, seed_override, verbosity);
        if (cls->parsed()) return cmd_classify(s_val, delta0);
        return cmd_selfcheck();
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
