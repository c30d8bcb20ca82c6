#pragma once

#include <span>

#include "divcurl/grid.hpp"

namespace divcurl::fft {

// Normalized forward transform: out(k) = n^{-d} sum_x in(x) e^{-ik.x}.
void forward(const Grid& grid, std::span<const cplx> in, std::span<cplx> out);

// Inverse of forward: out(x) = sum_k in(k) e^{ik.x}.
void inverse(const Grid& grid, std::span<const cplx> in, std::span<cplx> out);

}  // namespace divcurl::fft
