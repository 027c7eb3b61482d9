#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "nsdamp/fields.hpp"

namespace nsdamp {

enum class IcKind { taylor_green, random_divfree, single_mode, from_checkpoint };

std::string to_string(IcKind kind);
IcKind ic_kind_from_string(const std::string& s);

struct InitialCondition {
    IcKind kind = IcKind::taylor_green;
    int dim = 0;  // taylor_green: required grid dimension, 0 accepts either
    double amplitude = 1.0;
    // random_divfree: |k|^slope * exp(-(|k|/peak)^2) shaping, amplitude is the target H^1 seminorm
    double spectrum_slope = 2.0;
    double peak_wavenumber = 3.0;
    std::uint64_t seed = 0;
    // single_mode: amplitude * cos(k.x) along one component, then projected
    std::array<int, 3> mode{1, 0, 0};
    int component = 1;
    // from_checkpoint
    std::string checkpoint_path;

    friend bool operator==(const InitialCondition&, const InitialCondition&) = default;
};

/// Real, mean-free, divergence-free, dealiased initial velocity.
/// Deterministic in (ic, grid). from_checkpoint loads the file and checks the grid.
SpectralField build_ic(const InitialCondition& ic, const Grid& grid);

}  // namespace nsdamp
