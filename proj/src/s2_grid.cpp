#include "sphlab/s2_grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <stdexcept>

namespace sphlab {

namespace {

// FFTW's planner is not thread-safe; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

// One backward and one forward plan of length `azimuths`. Executed through the
// new-array interface on per-call buffers, so a shared grid is safe to use
// from several threads; only planning needs the lock.
struct S2Grid::RingFft {
  int n = 0;
  fftw_plan backward = nullptr;
  fftw_plan forward = nullptr;

  explicit RingFft(int length) : n(length) {
    std::lock_guard lock(planner_mutex());
    auto* in = fftw_alloc_complex(static_cast<std::size_t>(n));
    auto* out = fftw_alloc_complex(static_cast<std::size_t>(n));
    backward = fftw_plan_dft_1d(n, in, out, FFTW_BACKWARD, FFTW_ESTIMATE);
    forward = fftw_plan_dft_1d(n, in, out, FFTW_FORWARD, FFTW_ESTIMATE);
    fftw_free(in);
    fftw_free(out);
  }
  ~RingFft() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(backward);
    fftw_destroy_plan(forward);
  }
  RingFft(const RingFft&) = delete;
  RingFft& operator=(const RingFft&) = delete;
};

namespace {

struct FftBuffer {
  fftw_complex* in;
  fftw_complex* out;
  explicit FftBuffer(std::size_t n) : in(fftw_alloc_complex(n)), out(fftw_alloc_complex(n)) {}
  ~FftBuffer() {
    fftw_free(in);
    fftw_free(out);
  }
  FftBuffer(const FftBuffer&) = delete;
  FftBuffer& operator=(const FftBuffer&) = delete;
  complex* input() { return reinterpret_cast<complex*>(in); }
  complex* output() { return reinterpret_cast<complex*>(out); }
};

}  // namespace

S2Grid::S2Grid(int max_degree, int exact_degree)
    : rule_(sphere_rule(2, exact_degree)),
      max_degree_(max_degree),
      table_stride_(static_cast<std::size_t>(max_degree + 1) * static_cast<std::size_t>(max_degree + 2) / 2) {
  if (max_degree < 0) throw std::invalid_argument("S2Grid: max_degree >= 0 required");
  const auto rings = static_cast<std::size_t>(rule_.polar_count);
  const auto azimuths = static_cast<std::size_t>(rule_.azimuths);
  legendre_.resize(rings * table_stride_);
  for (std::size_t i = 0; i < rings; ++i) {
    const SpherePoint& x = rule_.nodes[i * azimuths];
    const double t = x[2];
    const double s = std::hypot(x[0], x[1]);
    for (int m = 0; m <= max_degree; ++m) {
      std::span<double> column(legendre_.data() + i * table_stride_ + column_offset(m),
                               static_cast<std::size_t>(max_degree - m + 1));
      normalized_legendre_column(m, max_degree, t, s, column);
    }
  }
  fft_ = std::make_shared<const RingFft>(rule_.azimuths);
}

std::size_t S2Grid::column_offset(int m) const {
  // sum_{k < m} (max_degree - k + 1)
  const auto mm = static_cast<std::size_t>(m);
  const auto lm = static_cast<std::size_t>(max_degree_);
  return mm * (lm + 1) - mm * (mm - 1) / 2;
}

std::vector<complex> S2Grid::synthesize(const CoefficientVector& f) const {
  std::vector<complex> out(size());
  synthesize(f, out);
  return out;
}

void S2Grid::synthesize(const CoefficientVector& f, std::span<complex> out) const {
  if (f.max_degree() > max_degree_) throw std::invalid_argument("S2Grid::synthesize: degree exceeds grid");
  if (out.size() != size()) throw std::invalid_argument("S2Grid::synthesize: output size mismatch");
  const auto support = f.degree_support();
  if (!support) {
    std::fill(out.begin(), out.end(), complex{});
    return;
  }
  const auto [l_lo, l_hi] = *support;
  const auto rings = static_cast<std::size_t>(rule_.polar_count);
  const auto azimuths = static_cast<std::size_t>(rule_.azimuths);
  const auto coeff = f.data();
  std::vector<complex> pos(static_cast<std::size_t>(l_hi) + 1);
  std::vector<complex> neg(static_cast<std::size_t>(l_hi) + 1);
  FftBuffer buffer(azimuths);

  for (std::size_t i = 0; i < rings; ++i) {
    for (int m = 0; m <= l_hi; ++m) {
      complex sp = 0.0;
      complex sn = 0.0;
      for (int l = std::max(m, l_lo); l <= l_hi; ++l) {
        const double p = legendre(i, l, m);
        sp += coeff[CoefficientVector::index(l, m)] * p;
        if (m > 0) sn += coeff[CoefficientVector::index(l, -m)] * p;
      }
      pos[m] = sp;
      neg[m] = (m % 2 == 0) ? sn : -sn;
    }
    // ring value at φ_j = 2π j / N is sum_m pos[m] e^{i m φ_j} + neg[m] e^{-i m φ_j}:
    // a backward DFT of the orders folded modulo N
    complex* bins = buffer.input();
    std::fill(bins, bins + azimuths, complex{});
    for (int m = 0; m <= l_hi; ++m) {
      const auto k = static_cast<std::size_t>(m) % azimuths;
      bins[k] += pos[m];
      if (m > 0) bins[(azimuths - k) % azimuths] += neg[m];
    }
    fftw_execute_dft(fft_->backward, buffer.in, buffer.out);
    std::copy(buffer.output(), buffer.output() + azimuths, out.data() + i * azimuths);
  }
}

CoefficientVector S2Grid::analyze(std::span<const complex> values, int l_max, int l_min) const {
  if (values.size() != size()) throw std::invalid_argument("S2Grid::analyze: value count mismatch");
  if (l_max > max_degree_ || l_min < 0 || l_min > l_max) {
    throw std::invalid_argument("S2Grid::analyze: degree range outside grid");
  }
  CoefficientVector out(l_max);
  auto coeff = out.data();
  const auto rings = static_cast<std::size_t>(rule_.polar_count);
  const auto azimuths = static_cast<std::size_t>(rule_.azimuths);
  std::vector<complex> fourier_pos(static_cast<std::size_t>(l_max) + 1);
  std::vector<complex> fourier_neg(static_cast<std::size_t>(l_max) + 1);
  FftBuffer buffer(azimuths);

  for (std::size_t i = 0; i < rings; ++i) {
    std::copy(values.data() + i * azimuths, values.data() + (i + 1) * azimuths, buffer.input());
    // forward DFT: bin k holds sum_j v_j e^{-2πi jk/N}
    fftw_execute_dft(fft_->forward, buffer.in, buffer.out);
    const complex* bins = buffer.output();
    // all nodes on a ring share one weight
    const double w = rule_.weights[i * azimuths];
    for (int m = 0; m <= l_max; ++m) {
      const auto k = static_cast<std::size_t>(m) % azimuths;
      const complex sp = bins[k];
      const complex sn = bins[(azimuths - k) % azimuths];
      fourier_pos[m] = w * sp;
      fourier_neg[m] = (m % 2 == 0) ? w * sn : -w * sn;
    }
    for (int m = 0; m <= l_max; ++m) {
      for (int l = std::max(m, l_min); l <= l_max; ++l) {
        const double p = legendre(i, l, m);
        coeff[CoefficientVector::index(l, m)] += p * fourier_pos[m];
        if (m > 0) coeff[CoefficientVector::index(l, -m)] += p * fourier_neg[m];
      }
    }
  }
  return out;
}

}  // namespace sphlab
