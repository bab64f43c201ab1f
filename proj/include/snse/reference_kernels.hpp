// Plain serial reference transforms, kept for testing the OpenMP kernels and
// for the benchmark target. Direct per-point Legendre recurrence and naive
// trigonometric sums; no FFT, no table sharing, no threading.
#pragma once

#include "snse/transforms.hpp"

namespace snse::ref {

// Fully normalized Lambda_lm(mu) with Condon-Shortley phase, evaluated
// standalone by upward recurrence.
double legendre_lm(int l, int m, double mu);

GridField synthesize(const SpectralField& f, const SphereGrid& g);
SpectralField analyze(const GridField& vals, const SphereGrid& g, int l_max, int l_min);

}  // namespace snse::ref
