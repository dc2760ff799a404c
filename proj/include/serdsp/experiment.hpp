// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "serdsp/calibration.hpp"
#include "serdsp/config.hpp"
#include "serdsp/rxdsp.hpp"

namespace serdsp {

enum class SweepVar { None, LosprDb, Bwr, Iterations, ClipDb, OsnrDb };

const char* to_string(SweepVar v);
SweepVar sweep_var_from_string(const std::string& s);

/// One link-level experiment: a modulation/shaping/channel/front-end setup,
/// a reconstruction method, and a sweep grid. Reports are deterministic
/// given the seeds.
struct ExperimentSpec {
    std::string name = "experiment";
    QamFormat format = QamFormat::QAM64;
    size_t symbol_count = 1u << 15;
    int sps = 2;
    double rolloff = 0.01;
    int span = 256;
    double symbol_rate = 100e9;
    ChannelConfig channel{160.0, 17.0, 1550.0, {}, 12.5e9};
    double lospr_db = 8.0;
    double a2_over_a1 = 1.0;
    std::optional<double> bwr;
    Method method = Method::DFR;
    int iterations = 20;
    double mu = 0.05;
    enum class ClipMode { None, Auto, Fixed };
    ClipMode clip_mode = ClipMode::Auto;
    double clip_db = 0.0;  // used when Fixed
    SweepVar sweep = SweepVar::LosprDb;
    std::vector<double> grid{6, 8, 10, 12, 14};
    std::vector<uint64_t> seeds{1};
};

ExperimentSpec parse_experiment(Config& cfg);

/// Runs every (grid point, seed) job; rows are ordered by grid index then
/// seed, independent of worker scheduling. Worker count is capped by the
/// SER_DSP_THREADS environment variable.
std::vector<MetricReport> run_experiment(const ExperimentSpec& spec);

/// One job of the sweep, exposed for tests.
MetricReport run_sweep_point(const ExperimentSpec& spec, double sweep_value, uint64_t seed,
                             size_t grid_index);

void write_metrics_csv(const std::string& path, const std::vector<MetricReport>& rows);

/// Self-calibration scenario: known training sequence through Gaussian Tx
/// responses, square-law detection through Gaussian Rx responses, then the
/// adaptive identification circuit.
struct CalibrationScenario {
    QamFormat format = QamFormat::QAM16;
    size_t symbol_count = 1u << 16;
    int sps = 2;
    double rolloff = 0.01;
    int span = 128;
    double symbol_rate = 100e9;
    double tx_f3db_hz = 35e9;
    double rx_f3db_hz = 35e9;
    int gauss_order = 2;
    int response_taps = 65;
    bool ideal_responses = false;  // identity Tx/Rx, for oracle runs
    double lospr_db = 13.0;
    size_t filter_len = 33;
    double mu1 = 1e-3;
    double mu2 = 1e-3;
    InversionBlock inversion = InversionBlock::DFR_BLOCK;
    std::optional<double> osnr_db;
    uint64_t seed = 1;
};

CalibrationScenario parse_calibration(Config& cfg);

struct CalibrationRun {
    CalibrationState state;
    RealVec mse_db;  // 1024-sample windows
    ResponseEstimate responses;
    RealVec grid_hz;
    RealVec true_rx_mag_db;  // response of the actual Rx taps on the grid
};

CalibrationRun run_calibration_scenario(const CalibrationScenario& sc);

void write_calibration_csv(const std::string& out_dir, const CalibrationRun& run);

uint64_t mix_seed(uint64_t seed, uint64_t salt);

size_t worker_count();

}  // namespace serdsp
