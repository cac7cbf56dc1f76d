#pragma once

#include <vector>

#include "canonica/common.hpp"

namespace canonica::detail {

// Unnormalized complex DFT, out[m] = sum_k in[k] e^{sign 2 pi i m k / n}.
// sign = -1 is the forward transform. Backed by a mutex-guarded FFTW plan
// cache; safe to call concurrently.
void dft(const std::vector<cdouble>& in, std::vector<cdouble>& out, int sign);

}  // namespace canonica::detail
