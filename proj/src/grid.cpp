#include "drm3d/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace drm3d {

VoxelGrid make_grid(std::array<int, 3> dims, double voxel_size, Vec3 origin) {
    if (dims[0] < 1 || dims[1] < 1 || dims[2] < 1) {
        throw ConfigError("grid dims must be >= 1 per axis");
    }
    if (!(voxel_size > 0.0)) {
        throw ConfigError("voxel_size must be > 0");
    }
    return VoxelGrid{dims, voxel_size, origin};
}

VoxelIndex voxel_of(const VoxelGrid& grid, const Vec3& position) {
    static const char* axis_names[3] = {"x", "y", "z"};
    VoxelIndex out;
    int* idx[3] = {&out.i, &out.j, &out.k};
    for (int a = 0; a < 3; ++a) {
        double rel = position[a] - grid.origin[a];
        double hi = grid.dims[a] * grid.voxel_size;
        if (rel < 0.0 || rel > hi) {
            throw RangeError(std::string("position outside grid on axis ") + axis_names[a]);
        }
        int v = static_cast<int>(std::floor(rel / grid.voxel_size));
        *idx[a] = std::min(v, grid.dims[a] - 1);  // exact upper bound clamps
    }
    return out;
}

RadioMap make_map(const VoxelGrid& grid, std::int64_t time_index, std::vector<double> values) {
    if (static_cast<std::int64_t>(values.size()) != grid.voxel_count()) {
        throw ShapeError("map value count " + std::to_string(values.size()) +
                         " != voxel count " + std::to_string(grid.voxel_count()));
    }
    for (double v : values) {
        if (!std::isfinite(v)) throw NumericError("non-finite map value");
    }
    return RadioMap{grid, time_index, std::move(values)};
}

RadioMap normalize_map(const RadioMap& map, const NormStats& stats) {
    if (!(stats.max_dbm > stats.min_dbm)) {
        throw ConfigError("degenerate normalization stats: max <= min");
    }
    RadioMap out = map;
    double span = stats.max_dbm - stats.min_dbm;
    for (double& v : out.values) {
        v = std::clamp((v - stats.min_dbm) / span, 0.0, 1.0);
    }
    return out;
}

RadioMap denormalize_map(const RadioMap& map, const NormStats& stats) {
    if (!(stats.max_dbm > stats.min_dbm)) {
        throw ConfigError("degenerate normalization stats: max <= min");
    }
    RadioMap out = map;
    double span = stats.max_dbm - stats.min_dbm;
    for (double& v : out.values) {
        v = stats.min_dbm + v * span;
    }
    return out;
}

PatchLayout partition_patches(const VoxelGrid& grid, int patch_side) {
    if (patch_side < 1) throw ConfigError("patch_side must be >= 1");
    PatchLayout layout;
    layout.grid = grid;
    layout.patch_side = patch_side;
    for (int a = 0; a < 3; ++a) {
        int n = (grid.dims[a] + patch_side - 1) / patch_side;
        layout.patch_grid[a] = n;
        layout.padded_dims[a] = n * patch_side;
    }
    layout.patch_count = layout.patch_grid[0] * layout.patch_grid[1] * layout.patch_grid[2];
    layout.patch_origins.reserve(layout.patch_count);
    for (int pz = 0; pz < layout.patch_grid[2]; ++pz) {
        for (int py = 0; py < layout.patch_grid[1]; ++py) {
            for (int px = 0; px < layout.patch_grid[0]; ++px) {
                layout.patch_origins.push_back(
                    VoxelIndex{px * patch_side, py * patch_side, pz * patch_side});
            }
        }
    }
    return layout;
}

Vec3 PatchLayout::patch_center_meters(int r) const {
    const VoxelIndex& o = patch_origins[r];
    double half = 0.5 * patch_side * grid.voxel_size;
    return grid.origin + Vec3{o.i * grid.voxel_size + half, o.j * grid.voxel_size + half,
                              o.k * grid.voxel_size + half};
}

std::vector<double> flatten_patch(const RadioMap& map, const PatchLayout& layout, int r,
                                  double pad_value) {
    if (r < 0 || r >= layout.patch_count) {
        throw RangeError("patch index " + std::to_string(r) + " out of range (R=" +
                         std::to_string(layout.patch_count) + ")");
    }
    const VoxelIndex& o = layout.patch_origins[r];
    const auto& dims = layout.grid.dims;
    int p = layout.patch_side;
    std::vector<double> out;
    out.reserve(layout.patch_volume());
    for (int dz = 0; dz < p; ++dz) {
        for (int dy = 0; dy < p; ++dy) {
            for (int dx = 0; dx < p; ++dx) {
                VoxelIndex v{o.i + dx, o.j + dy, o.k + dz};
                if (v.i < dims[0] && v.j < dims[1] && v.k < dims[2]) {
                    out.push_back(map.values[layout.grid.linear_index(v)]);
                } else {
                    out.push_back(pad_value);
                }
            }
        }
    }
    return out;
}

RadioMap assemble_patches(const std::vector<std::vector<double>>& patch_values,
                          const PatchLayout& layout, std::int64_t time_index) {
    if (static_cast<int>(patch_values.size()) != layout.patch_count) {
        throw ShapeError("expected " + std::to_string(layout.patch_count) + " patches, got " +
                         std::to_string(patch_values.size()));
    }
    const auto& dims = layout.grid.dims;
    int p = layout.patch_side;
    std::vector<double> values(layout.grid.voxel_count(), 0.0);
    for (int r = 0; r < layout.patch_count; ++r) {
        const auto& pv = patch_values[r];
        if (static_cast<std::int64_t>(pv.size()) != layout.patch_volume()) {
            throw ShapeError("patch " + std::to_string(r) + " has length " +
                             std::to_string(pv.size()) + ", expected " +
                             std::to_string(layout.patch_volume()));
        }
        const VoxelIndex& o = layout.patch_origins[r];
        std::size_t n = 0;
        for (int dz = 0; dz < p; ++dz) {
            for (int dy = 0; dy < p; ++dy) {
                for (int dx = 0; dx < p; ++dx, ++n) {
                    VoxelIndex v{o.i + dx, o.j + dy, o.k + dz};
                    if (v.i < dims[0] && v.j < dims[1] && v.k < dims[2]) {
                        values[layout.grid.linear_index(v)] = pv[n];
                    }
                }
            }
        }
    }
    RadioMap out;
    out.grid = layout.grid;
    out.time_index = time_index;
    out.values = std::move(values);
    return out;
}

std::vector<char> patch_valid_mask(const PatchLayout& layout) {
    const auto& dims = layout.grid.dims;
    int p = layout.patch_side;
    std::vector<char> mask;
    mask.reserve(static_cast<std::size_t>(layout.patch_count) * layout.patch_volume());
    for (int r = 0; r < layout.patch_count; ++r) {
        const VoxelIndex& o = layout.patch_origins[r];
        for (int dz = 0; dz < p; ++dz) {
            for (int dy = 0; dy < p; ++dy) {
                for (int dx = 0; dx < p; ++dx) {
                    bool in = (o.i + dx) < dims[0] && (o.j + dy) < dims[1] && (o.k + dz) < dims[2];
                    mask.push_back(in ? 1 : 0);
                }
            }
        }
    }
    return mask;
}

}  // namespace drm3d
