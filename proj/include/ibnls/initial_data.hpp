#pragma once
#include <array>
#include <cstdint>
#include <random>

#include "ibnls/grid.hpp"

namespace ibnls {

// A exp(-|x - x0|²/(2σ²))
Field gaussian(const Grid& g, double amplitude, double width, std::array<double, 3> center = {0, 0, 0});
// A exp(-(|x| - r0)²/(2σ²))
Field ring(const Grid& g, double amplitude, double radius, double width);
// spectrum exp(1 - 1/(1 - |ξ|²/ξc²)) on |ξ| < ξc, scaled so the peak modulus is A
Field bandlimited_bump(const Grid& g, double amplitude, double xi_c);
// sum of a few modulated Gaussians with random centres, widths, momenta and phases
Field random_smooth(const Grid& g, std::mt19937_64& rng, double amplitude, double spread);
Field random_field(const Grid& g, std::mt19937_64& rng);  // white noise, for algebraic identities

}  // namespace ibnls
