#pragma once

#include "nsdamp/fields.hpp"

namespace nsdamp {

/// Modewise u - (u.xi) xi / |xi|^2. The zero mode passes through unchanged.
/// Requires a field with grid().dim() components.
SpectralField leray_project(const SpectralField& g);

/// J_R: zero every coefficient with |xi| >= radius. Throws for radius <= 0.
SpectralField friedrichs_truncate(const SpectralField& g, double radius);

/// Component c*dim + j of the result holds d_j g_c (multiplier i xi_j).
/// Nyquist-plane entries are zero.
SpectralField spectral_gradient(const SpectralField& g);

/// Multiplier -|xi|^2 on every component.
SpectralField laplacian(const SpectralField& g);

/// Scalar field i sum_j xi_j g_j.
SpectralField divergence(const SpectralField& g);

/// Sobolev norm under the Parseval normalization. Homogeneous: weight
/// |xi|^{2s}, zero mode excluded; otherwise (1+|xi|^2)^s. For homogeneous
/// s < 0 the zero mode must vanish.
double sobolev_norm(const SpectralField& g, double s, bool homogeneous);

/// Re <a, b>_{L^2} computed in coefficient space.
double inner_product(const SpectralField& a, const SpectralField& b);
double l2_norm_sq(const SpectralField& g) noexcept;

/// Zero all modes outside the spherical two-thirds ball, in place.
void dealias(SpectralField& g) noexcept;
/// Zero every mode with an index on a Nyquist plane, in place.
void zero_nyquist(SpectralField& g) noexcept;
/// Zero the k = 0 coefficient of every component, in place.
void remove_mean(SpectralField& g) noexcept;

/// max_k |sum_j xi_j g_j(k)| / (|xi| |g(k)|), 0 for empty modes.
double max_relative_divergence(const SpectralField& g) noexcept;

}  // namespace nsdamp
