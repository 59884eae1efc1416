#include "fft_backend.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>

namespace magtorus::detail {
namespace {

struct PlanPair {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
};

// FFTW_ESTIMATE keeps the algorithm choice deterministic between runs;
// FFTW_UNALIGNED lets the plan execute on any caller buffer.
PlanPair& plans_for(int m) {
  static std::mutex mu;
  static std::map<int, PlanPair> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(m);
  if (it != cache.end()) return it->second;

  fftw_complex* buf = fftw_alloc_complex(static_cast<std::size_t>(m) * m);
  PlanPair p;
  p.forward = fftw_plan_dft_2d(m, m, buf, buf, FFTW_FORWARD,
                               FFTW_ESTIMATE | FFTW_UNALIGNED);
  p.backward = fftw_plan_dft_2d(m, m, buf, buf, FFTW_BACKWARD,
                                FFTW_ESTIMATE | FFTW_UNALIGNED);
  fftw_free(buf);
  return cache.emplace(m, p).first->second;
}

}  // namespace

void dft2_forward(std::complex<double>* data, int resolution) {
  auto* raw = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(plans_for(resolution).forward, raw, raw);
}

void dft2_backward(std::complex<double>* data, int resolution) {
  auto* raw = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(plans_for(resolution).backward, raw, raw);
}

}  // namespace magtorus::detail
