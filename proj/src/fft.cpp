#include "qew/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <utility>

namespace qew::fft {
namespace {

struct PlanPair {
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
};

class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [n, p] : plans_) {
      fftw_destroy_plan(p.fwd);
      fftw_destroy_plan(p.bwd);
    }
  }

  const PlanPair& get(std::size_t n) {
    std::lock_guard lock(mutex_);
    auto it = plans_.find(n);
    if (it != plans_.end()) return it->second;
    // ESTIMATE keeps plan selection (and therefore rounding) deterministic.
    auto* buf = fftw_alloc_complex(n);
    const int len = static_cast<int>(n);
    PlanPair p;
    p.fwd = fftw_plan_dft_1d(len, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    p.bwd = fftw_plan_dft_1d(len, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(buf);
    return plans_.emplace(n, p).first->second;
  }

 private:
  std::mutex mutex_;
  std::map<std::size_t, PlanPair> plans_;
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

fftw_complex* raw(std::span<cplx> d) { return reinterpret_cast<fftw_complex*>(d.data()); }

}  // namespace

void forward(std::span<cplx> data) {
  if (data.size() < 2) return;
  fftw_execute_dft(cache().get(data.size()).fwd, raw(data), raw(data));
}

void backward(std::span<cplx> data) {
  if (data.size() < 2) return;
  fftw_execute_dft(cache().get(data.size()).bwd, raw(data), raw(data));
}

}  // namespace qew::fft
