#include "drm3d/sim.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numeric>

#include "drm3d/thread_pool.hpp"

namespace drm3d {

double path_gain_db(const PathLossParams& params, const Vec3& station, const Vec3& point,
                    double floor_distance_m) {
    double d = std::max(distance(station, point), floor_distance_m);
    return params.ref_gain_db - 10.0 * params.exponent * std::log10(d);
}

Uav spawn_uav(std::uint32_t id, const Box& bounds, double speed, Rng& rng) {
    auto draw = [&](double lo, double hi) { return rng.uniform(lo, hi); };
    Uav uav;
    uav.id = id;
    uav.speed = speed;
    uav.position = {draw(bounds.lo.x, bounds.hi.x), draw(bounds.lo.y, bounds.hi.y),
                    draw(bounds.lo.z, bounds.hi.z)};
    uav.destination = {draw(bounds.lo.x, bounds.hi.x), draw(bounds.lo.y, bounds.hi.y),
                       draw(bounds.lo.z, bounds.hi.z)};
    Vec3 dir = uav.destination - uav.position;
    double n = dir.norm();
    uav.velocity = n > 0.0 ? dir * (speed / n) : Vec3{};
    return uav;
}

Uav step_mobility(const Uav& uav, double dt, const Box& bounds, Rng& rng) {
    Uav next = uav;
    double step_len = uav.speed * dt;
    double remaining = distance(uav.destination, uav.position);
    if (remaining <= step_len) {
        // Arrived: snap, then re-aim at a fresh destination.
        next.position = uav.destination;
        Vec3 dest = next.position;
        double n = 0.0;
        do {
            dest = {rng.uniform(bounds.lo.x, bounds.hi.x), rng.uniform(bounds.lo.y, bounds.hi.y),
                    rng.uniform(bounds.lo.z, bounds.hi.z)};
            n = distance(dest, next.position);
        } while (n == 0.0);
        next.destination = dest;
        next.velocity = (dest - next.position) * (uav.speed / n);
    } else {
        next.position = uav.position + uav.velocity * dt;
    }
    return next;
}

std::vector<double> allocate_power(const std::vector<double>& distances_m, double alpha,
                                   double total_power_watts, double floor_distance_m) {
    if (distances_m.empty()) throw UsageError("allocate_power: empty served set");
    if (alpha < 0.0) throw ConfigError("allocate_power: alpha must be >= 0");
    if (!(total_power_watts > 0.0)) throw ConfigError("allocate_power: power must be > 0");
    std::vector<double> weights(distances_m.size());
    double wsum = 0.0;
    for (std::size_t i = 0; i < distances_m.size(); ++i) {
        double d = distances_m[i];
        if (d <= 0.0) {
            std::clog << "allocate_power: zero distance floored to " << floor_distance_m
                      << " m\n";
            d = floor_distance_m;
        }
        weights[i] = std::pow(d, alpha);
        wsum += weights[i];
    }
    std::vector<double> out(distances_m.size());
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < out.size(); ++i) {
        out[i] = total_power_watts * (weights[i] / wsum);
        acc += out[i];
    }
    out.back() = total_power_watts - acc;  // absorbs rounding
    return out;
}

ScheduleState associate_and_schedule(const std::vector<Uav>& uavs,
                                     const std::vector<GroundBaseStation>& stations,
                                     double alpha, const std::vector<double>& tx_power_dbm,
                                     double floor_distance_m) {
    if (stations.empty()) throw UsageError("associate_and_schedule: no stations");
    ScheduleState state;
    state.served.resize(stations.size());
    state.allocated_watts.resize(stations.size());

    struct Candidate {
        double dist;
        std::uint32_t id;
        Vec3 pos;
    };
    std::vector<std::vector<Candidate>> candidates(stations.size());
    for (const Uav& u : uavs) {
        int best = 0;
        double best_d = distance(u.position, stations[0].location);
        for (std::size_t m = 1; m < stations.size(); ++m) {
            double d = distance(u.position, stations[m].location);
            if (d < best_d) {  // tie keeps lower station index
                best_d = d;
                best = static_cast<int>(m);
            }
        }
        candidates[best].push_back({best_d, u.id, u.position});
    }
    for (std::size_t m = 0; m < stations.size(); ++m) {
        auto& cs = candidates[m];
        std::sort(cs.begin(), cs.end(), [](const Candidate& a, const Candidate& b) {
            if (a.dist != b.dist) return a.dist < b.dist;
            return a.id < b.id;
        });
        std::size_t keep = std::min<std::size_t>(cs.size(), stations[m].antenna_streams);
        cs.resize(keep);
        std::vector<double> dists;
        dists.reserve(keep);
        for (const auto& c : cs) {
            state.served[m].push_back(c.id);
            dists.push_back(c.dist);
        }
        if (!cs.empty()) {
            double watts = dbm_to_mw(tx_power_dbm[m]) / 1000.0;
            state.allocated_watts[m] = allocate_power(dists, alpha, watts, floor_distance_m);
        }
    }
    return state;
}

double bs_power_step(double prev_dbm, std::optional<double> farthest_gain_db,
                     const PowerProcessParams& params) {
    double desired;
    if (farthest_gain_db.has_value()) {
        desired = params.target_rx_dbm - *farthest_gain_db;
    } else {
        desired = params.p_min_dbm;
    }
    double raw = params.smoothing * prev_dbm + (1.0 - params.smoothing) * desired;
    raw = std::clamp(raw, prev_dbm - params.slew_db, prev_dbm + params.slew_db);
    return std::clamp(raw, params.p_min_dbm, params.p_max_dbm);
}

double Scene::gain_db(int station, const Vec3& point) const {
    double g = path_gain_db(stations[station].gain, stations[station].location, point,
                            floor_distance_m());
    if (shadow_sigma_db > 0.0) {
        std::int64_t vox = grid.linear_index(voxel_of(grid, point));
        std::uint64_t h = splitmix64(shadow_seed ^ splitmix64(static_cast<std::uint64_t>(station) * 0x9e3779b97f4a7c15ULL + static_cast<std::uint64_t>(vox)));
        // Two uniforms from the hash drive one Box-Muller draw, frozen per
        // (station, voxel) for the life of the scene.
        double u1 = static_cast<double>(h >> 11) * 0x1.0p-53;
        double u2 = static_cast<double>(splitmix64(h) >> 11) * 0x1.0p-53;
        if (u1 <= 0.0) u1 = 0x1.0p-53;
        g += shadow_sigma_db * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }
    return g;
}

std::vector<std::vector<double>> Scene::gain_fields_linear() const {
    std::vector<std::vector<double>> fields(stations.size());
    std::int64_t n = grid.voxel_count();
    for (std::size_t m = 0; m < stations.size(); ++m) {
        fields[m].resize(n);
        auto& field = fields[m];
        parallel_for(n, [&](std::int64_t begin, std::int64_t end) {
            for (std::int64_t v = begin; v < end; ++v) {
                Vec3 c = grid.voxel_center(grid.from_linear(v));
                field[v] = db_to_lin(gain_db(static_cast<int>(m), c));
            }
        });
    }
    return fields;
}

RadioMap ground_truth_map(const Scene& scene,
                          const std::vector<std::vector<double>>& gain_fields_linear,
                          const std::vector<double>& tx_power_dbm, std::int64_t time_index) {
    std::int64_t n = scene.grid.voxel_count();
    std::size_t m_count = scene.stations.size();
    std::vector<double> p_lin(m_count);
    for (std::size_t m = 0; m < m_count; ++m) p_lin[m] = dbm_to_mw(tx_power_dbm[m]);

    std::vector<double> values(n);
    parallel_for(n, [&](std::int64_t begin, std::int64_t end) {
        for (std::int64_t v = begin; v < end; ++v) {
            double acc_mw = 0.0;
            for (std::size_t m = 0; m < m_count; ++m) {
                acc_mw += gain_fields_linear[m][v] * p_lin[m];
            }
            values[v] = mw_to_dbm(acc_mw);
        }
    });
    RadioMap out;
    out.grid = scene.grid;
    out.time_index = time_index;
    out.values = std::move(values);
    return out;
}

double NoiseParams::floor_dbm() const {
    return -174.0 + 10.0 * std::log10(bandwidth_hz) + noise_figure_db;
}

Measurement measure_uav(const Uav& uav, const RadioMap& map, const NoiseParams& noise, Rng& rng) {
    Measurement m;
    m.uav_id = uav.id;
    m.position = uav.position;
    m.voxel = voxel_of(map.grid, uav.position);
    double value = map.at(m.voxel);
    if (noise.enabled) {
        double lin = dbm_to_mw(value) + dbm_to_mw(noise.floor_dbm());
        value = mw_to_dbm(lin) + rng.normal(0.0, noise.sigma_meas_db);
    }
    m.value_dbm = value;
    return m;
}

}  // namespace drm3d
