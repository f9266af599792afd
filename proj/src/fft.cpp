#include "fft.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <new>
#include <utility>

namespace epkg::detail {

namespace {
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

Fft2d::Fft2d(int m0, int m1) : m0_(m0), m1_(m1) {
  const std::size_t n = static_cast<std::size_t>(m0) * m1;
  const std::size_t nh = static_cast<std::size_t>(m0) * (m1 / 2 + 1);
  cbuf_ = fftw_alloc_complex(n);
  hbuf_ = fftw_alloc_complex(nh);
  rbuf_ = fftw_alloc_real(n);
  if (!cbuf_ || !hbuf_ || !rbuf_) throw std::bad_alloc();
  // FFTW_ESTIMATE keeps plan selection, and hence results, reproducible.
  std::lock_guard lock(planner_mutex());
  fwd_ = fftw_plan_dft_2d(m0, m1, cbuf_, cbuf_, FFTW_FORWARD, FFTW_ESTIMATE);
  bwd_ = fftw_plan_dft_2d(m0, m1, cbuf_, cbuf_, FFTW_BACKWARD, FFTW_ESTIMATE);
  r2c_ = fftw_plan_dft_r2c_2d(m0, m1, rbuf_, hbuf_, FFTW_ESTIMATE);
  c2r_ = fftw_plan_dft_c2r_2d(m0, m1, hbuf_, rbuf_, FFTW_ESTIMATE);
}

Fft2d::~Fft2d() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(fwd_);
  fftw_destroy_plan(bwd_);
  fftw_destroy_plan(r2c_);
  fftw_destroy_plan(c2r_);
  fftw_free(cbuf_);
  fftw_free(hbuf_);
  fftw_free(rbuf_);
}

Fft2d& fft_for(int m0, int m1) {
  thread_local std::map<std::pair<int, int>, std::unique_ptr<Fft2d>> cache;
  auto& slot = cache[{m0, m1}];
  if (!slot) slot = std::make_unique<Fft2d>(m0, m1);
  return *slot;
}

}  // namespace epkg::detail
