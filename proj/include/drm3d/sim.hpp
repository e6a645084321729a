#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "drm3d/grid.hpp"
#include "drm3d/rng.hpp"

namespace drm3d {

struct PathLossParams {
    double ref_gain_db = -30.0;  // gain at 1 m
    double exponent = 2.5;
};

struct GroundBaseStation {
    Vec3 location;
    double power_budget_dbm = 45.0;
    int antenna_streams = 8;  // N_t
    PathLossParams gain;
};

struct Uav {
    std::uint32_t id = 0;
    Vec3 position;
    Vec3 velocity;
    Vec3 destination;
    double speed = 5.0;  // m/s, held while en route
};

struct Measurement {
    double value_dbm = 0.0;
    Vec3 position;
    VoxelIndex voxel;
    std::uint32_t uav_id = 0;
};

using MeasurementFrame = std::vector<Measurement>;

// Log-distance gain in dB; distances below floor_distance_m are floored.
double path_gain_db(const PathLossParams& params, const Vec3& station, const Vec3& point,
                    double floor_distance_m);

// Constant-velocity step toward the destination. Arrival within one step
// snaps to the destination and re-aims at a fresh uniform destination.
Uav step_mobility(const Uav& uav, double dt, const Box& bounds, Rng& rng);

Uav spawn_uav(std::uint32_t id, const Box& bounds, double speed, Rng& rng);

// Per-station served UAV ids and allocated powers for one sampling instant.
struct ScheduleState {
    std::vector<std::vector<std::uint32_t>> served;      // per station, uav ids
    std::vector<std::vector<double>> allocated_watts;    // parallel to served
};

// Nearest-station association, truncated to the N_t nearest per station.
// Ties break on lower station index, then lower UAV id.
ScheduleState associate_and_schedule(const std::vector<Uav>& uavs,
                                     const std::vector<GroundBaseStation>& stations,
                                     double alpha, const std::vector<double>& tx_power_dbm,
                                     double floor_distance_m);

// Distance-weighted split of total_power_watts: P_q = (d^alpha / sum d'^alpha) * P.
// The last element absorbs rounding so the sum is exact. Zero distances are
// floored to floor_distance_m.
std::vector<double> allocate_power(const std::vector<double>& distances_m, double alpha,
                                   double total_power_watts, double floor_distance_m);

struct PowerProcessParams {
    double p_min_dbm = 30.0;
    double p_max_dbm = 45.0;
    double target_rx_dbm = -70.0;
    double smoothing = 0.9;   // rho, weight on previous value
    double slew_db = 1.0;     // max per-step change
};

// One load-adaptive update: aim so the farthest served UAV sees
// target_rx_dbm, exponentially smoothed, slew-limited, clamped.
// farthest_gain_db is the gain toward that UAV; empty served set decays
// toward p_min_dbm.
double bs_power_step(double prev_dbm, std::optional<double> farthest_gain_db,
                     const PowerProcessParams& params);

inline double bs_power_initial(const PowerProcessParams& params) {
    return 0.5 * (params.p_min_dbm + params.p_max_dbm);
}

// Static world shared by every frame of one sequence.
struct Scene {
    VoxelGrid grid;
    std::vector<GroundBaseStation> stations;
    double alpha = 1.0;
    double shadow_sigma_db = 0.0;
    std::uint64_t shadow_seed = 0;

    double floor_distance_m() const { return 0.5 * grid.voxel_size; }

    // Path gain plus the frozen per-(station, voxel) shadowing draw.
    double gain_db(int station, const Vec3& point) const;

    // Linear (mW-per-mW) gain at every voxel center; one field per station.
    std::vector<std::vector<double>> gain_fields_linear() const;
};

// Eq-style map construction: per-voxel linear sum over stations of
// gain * transmit power, in milliwatts, reported in dBm.
RadioMap ground_truth_map(const Scene& scene,
                          const std::vector<std::vector<double>>& gain_fields_linear,
                          const std::vector<double>& tx_power_dbm, std::int64_t time_index);

struct NoiseParams {
    bool enabled = true;
    double bandwidth_hz = 100e6;
    double noise_figure_db = 5.0;
    double sigma_meas_db = 0.5;

    // Thermal floor: -174 dBm/Hz + 10 log10(B) + NF.
    double floor_dbm() const;
};

// Averaged measurement at the UAV's voxel: map value plus linear-domain
// noise floor plus Gaussian dB jitter.
Measurement measure_uav(const Uav& uav, const RadioMap& map, const NoiseParams& noise, Rng& rng);

}  // namespace drm3d
