#include "divcurl/fft.hpp"

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>
#include <tuple>
#include <vector>

namespace divcurl::fft {
namespace {

// FFTW planning is not thread-safe, execution with the new-array interface
// is. Plans are created once per (d, n, sign) under a lock and reused.
class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(const Grid& grid, int sign) {
    const auto key = std::make_tuple(grid.dim(), grid.n(), sign);
    std::lock_guard lock(mutex_);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    std::vector<int> dims(static_cast<std::size_t>(grid.dim()), grid.n());
    std::vector<cplx> a(grid.size()), b(grid.size());
    fftw_plan plan = fftw_plan_dft(grid.dim(), dims.data(),
                                   reinterpret_cast<fftw_complex*>(a.data()),
                                   reinterpret_cast<fftw_complex*>(b.data()), sign,
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

void execute(const Grid& grid, int sign, std::span<const cplx> in, std::span<cplx> out) {
  if (in.size() != grid.size() || out.size() != grid.size()) {
    throw GridMismatch("transform buffer size does not match grid");
  }
  fftw_plan plan = cache().get(grid, sign);
  if (in.data() == out.data()) {
    std::vector<cplx> tmp(in.begin(), in.end());
    fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(tmp.data()),
                     reinterpret_cast<fftw_complex*>(out.data()));
    return;
  }
  // out-of-place c2c leaves the input untouched
  fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in.data())),
                   reinterpret_cast<fftw_complex*>(out.data()));
}

}  // namespace

void forward(const Grid& grid, std::span<const cplx> in, std::span<cplx> out) {
  execute(grid, FFTW_FORWARD, in, out);
  const double scale = 1.0 / static_cast<double>(grid.size());
  for (auto& c : out) c *= scale;
}

void inverse(const Grid& grid, std::span<const cplx> in, std::span<cplx> out) {
  execute(grid, FFTW_BACKWARD, in, out);
}

}  // namespace divcurl::fft
