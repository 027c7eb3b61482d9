#pragma once

#include "nsdamp/fields.hpp"

namespace nsdamp {

/// Process-wide execution settings for the FFT backend.
///
/// In strict mode every transform runs single-threaded with a fixed plan,
/// so identical inputs give bit-identical outputs. Otherwise FFTW may use
/// up to `threads` threads (capped by the NS_THREADS environment variable).
struct ExecutionPolicy {
    int threads = 1;
    bool strict_deterministic = true;
};

void set_execution_policy(const ExecutionPolicy& policy);
ExecutionPolicy execution_policy();

/// Reads NS_THREADS; returns 1 when unset or invalid.
int threads_from_environment();

/// Throws ValidationError naming the first non-finite sample.
SpectralField forward_transform(const PhysicalField& f);

/// Rejects input whose Hermitian defect exceeds 1e-12 of its largest coefficient.
PhysicalField inverse_transform(const SpectralField& g);

namespace detail {
/// Unchecked transforms used on hot paths whose inputs are Hermitian by construction.
SpectralField forward_unchecked(const PhysicalField& f);
PhysicalField inverse_unchecked(const SpectralField& g);
}  // namespace detail

}  // namespace nsdamp
