#pragma once

// Thin RAII wrapper over FFTW plans. Plans and their buffers are cached per
// (m0, m1) shape and per thread; plan creation is serialized.

#include <fftw3.h>

#include <complex>

namespace epkg::detail {

class Fft2d {
 public:
  Fft2d(int m0, int m1);
  ~Fft2d();
  Fft2d(const Fft2d&) = delete;
  Fft2d& operator=(const Fft2d&) = delete;

  int m0() const { return m0_; }
  int m1() const { return m1_; }
  int half() const { return m1_ / 2 + 1; }

  std::complex<double>* cbuf() { return reinterpret_cast<std::complex<double>*>(cbuf_); }
  std::complex<double>* hbuf() { return reinterpret_cast<std::complex<double>*>(hbuf_); }
  double* rbuf() { return rbuf_; }

  /// In-place on cbuf: Σ c e^{-2πi k·n/m}.
  void forward() { fftw_execute(fwd_); }
  /// In-place on cbuf: Σ c e^{+2πi k·n/m}.
  void backward() { fftw_execute(bwd_); }
  /// rbuf -> hbuf (m0 x (m1/2+1)).
  void forward_real() { fftw_execute(r2c_); }
  /// hbuf -> rbuf; destroys hbuf.
  void backward_real() { fftw_execute(c2r_); }

 private:
  int m0_, m1_;
  fftw_complex* cbuf_ = nullptr;
  fftw_complex* hbuf_ = nullptr;
  double* rbuf_ = nullptr;
  fftw_plan fwd_{}, bwd_{}, r2c_{}, c2r_{};
};

/// Thread-local cached transform for the given shape.
Fft2d& fft_for(int m0, int m1);

}  // namespace epkg::detail
