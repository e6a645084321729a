#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "drm3d/common.hpp"

namespace drm3d {

struct VoxelIndex {
    int i = 0;
    int j = 0;
    int k = 0;
    bool operator==(const VoxelIndex&) const = default;
};

// Uniform discretization of the scene volume. Axis order is fixed: linear
// indices run x fastest, then y, then z; all serialization uses that order.
struct VoxelGrid {
    std::array<int, 3> dims{1, 1, 1};  // W, L, H voxel counts
    double voxel_size = 1.0;           // meters
    Vec3 origin;                       // min corner, meters

    std::int64_t voxel_count() const {
        return static_cast<std::int64_t>(dims[0]) * dims[1] * dims[2];
    }
    Vec3 extent() const {
        return {dims[0] * voxel_size, dims[1] * voxel_size, dims[2] * voxel_size};
    }
    Box bounds() const { return {origin, origin + extent()}; }

    std::int64_t linear_index(const VoxelIndex& v) const {
        return v.i + static_cast<std::int64_t>(dims[0]) * (v.j + static_cast<std::int64_t>(dims[1]) * v.k);
    }
    VoxelIndex from_linear(std::int64_t n) const {
        VoxelIndex v;
        v.i = static_cast<int>(n % dims[0]);
        v.j = static_cast<int>((n / dims[0]) % dims[1]);
        v.k = static_cast<int>(n / (static_cast<std::int64_t>(dims[0]) * dims[1]));
        return v;
    }
    Vec3 voxel_center(const VoxelIndex& v) const {
        return origin + Vec3{(v.i + 0.5) * voxel_size, (v.j + 0.5) * voxel_size,
                             (v.k + 0.5) * voxel_size};
    }

    bool operator==(const VoxelGrid&) const = default;
};

VoxelGrid make_grid(std::array<int, 3> dims, double voxel_size, Vec3 origin = {});

// Voxel containing a position. Positions exactly on the upper boundary clamp
// to the last voxel; anything outside throws RangeError naming the axis.
VoxelIndex voxel_of(const VoxelGrid& grid, const Vec3& position);

// One 3D field of received power (dBm) at sampling instant time_index.
struct RadioMap {
    VoxelGrid grid;
    std::int64_t time_index = 0;
    std::vector<double> values;  // size W*L*H, x fastest

    double at(const VoxelIndex& v) const { return values[grid.linear_index(v)]; }
};

RadioMap make_map(const VoxelGrid& grid, std::int64_t time_index, std::vector<double> values);

struct NormStats {
    double min_dbm = -120.0;
    double max_dbm = -30.0;
};

// Affine map to [0, 1], clamped. Degenerate stats throw ConfigError.
RadioMap normalize_map(const RadioMap& map, const NormStats& stats);
// Exact inverse of normalize_map on [min_dbm, max_dbm]; plain affine (no clamp).
RadioMap denormalize_map(const RadioMap& map, const NormStats& stats);

// Disjoint cubic patches of side patch_side voxels tiling the zero-padded grid.
struct PatchLayout {
    VoxelGrid grid;
    int patch_side = 1;
    std::array<int, 3> padded_dims{};
    std::array<int, 3> patch_grid{};       // patches per axis
    int patch_count = 0;                   // R
    std::vector<VoxelIndex> patch_origins; // x fastest, then y, then z

    std::int64_t patch_volume() const {
        return static_cast<std::int64_t>(patch_side) * patch_side * patch_side;
    }
    // Patch center in meters (may lie outside the unpadded grid for padded patches).
    Vec3 patch_center_meters(int r) const;
};

PatchLayout partition_patches(const VoxelGrid& grid, int patch_side);

// Voxel powers of patch r, x fastest. Padding voxels take pad_value.
std::vector<double> flatten_patch(const RadioMap& map, const PatchLayout& layout, int r,
                                  double pad_value = 0.0);

// Inverse of flatten_patch on unpadded voxels; padding is discarded.
RadioMap assemble_patches(const std::vector<std::vector<double>>& patch_values,
                          const PatchLayout& layout, std::int64_t time_index);

// 1 for voxels inside the unpadded grid, 0 for padding; R*P^3 entries in
// (patch, within-patch) order matching flatten_patch.
std::vector<char> patch_valid_mask(const PatchLayout& layout);

}  // namespace drm3d
