#pragma once

#include "fluctmirror/dists.hpp"

namespace fluctmirror::quad {

/// Density of the sum of two independent draws from f, g = f * f.
///
/// Reduces double integrals of f(s) f(r) K(s + r) to single integrals of
/// g(w) K(w). Delta maps to delta, a Gaussian of width D to a Gaussian of
/// width sqrt(2) D, and the compact quartic to its exact degree-17
/// piecewise polynomial on [-2 s0, 2 s0]. Custom densities are convolved by
/// quadrature, derivatives included.
Distribution self_convolution(const Distribution& f);

}  // namespace fluctmirror::quad
