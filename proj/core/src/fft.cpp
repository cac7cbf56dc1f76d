#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>

namespace canonica::detail {

namespace {

std::mutex g_plan_mutex;
std::map<std::pair<std::size_t, int>, fftw_plan> g_plans;

// FFTW_UNALIGNED keeps the plan valid for new-array execution on ordinary
// vector storage; FFTW_ESTIMATE keeps planning deterministic.
fftw_plan plan_for(std::size_t n, int sign) {
  std::lock_guard<std::mutex> lock(g_plan_mutex);
  auto it = g_plans.find({n, sign});
  if (it != g_plans.end()) return it->second;
  std::vector<fftw_complex> scratch_in(n), scratch_out(n);
  fftw_plan p = fftw_plan_dft_1d(static_cast<int>(n), scratch_in.data(),
                                 scratch_out.data(), sign,
                                 FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (!p) throw input_error("FFT planning failed");
  g_plans.emplace(std::make_pair(n, sign), p);
  return p;
}

}  // namespace

void dft(const std::vector<cdouble>& in, std::vector<cdouble>& out, int sign) {
  const std::size_t n = in.size();
  if (n == 0) throw input_error("empty transform");
  out.resize(n);
  fftw_plan p = plan_for(n, sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD);
  // std::complex<double> is layout-compatible with fftw_complex.
  auto* src = reinterpret_cast<fftw_complex*>(const_cast<cdouble*>(in.data()));
  auto* dst = reinterpret_cast<fftw_complex*>(out.data());
  fftw_execute_dft(p, src, dst);
}

}  // namespace canonica::detail
