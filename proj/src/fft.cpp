#include "fiolab/fft.hpp"

#include "fiolab/errors.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>

namespace fiolab {
namespace {

// fftw planning is not thread-safe; execution on fresh arrays is.
class PlanCache {
public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(std::size_t n, std::size_t stride, std::size_t outer, int sign, fftw_complex* sample) {
    std::lock_guard lock(mutex_);
    auto key = std::make_tuple(n, stride, outer, sign);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    fftw_iodim dim{static_cast<int>(n), static_cast<int>(stride), static_cast<int>(stride)};
    fftw_iodim loops[2] = {
        {static_cast<int>(outer), static_cast<int>(n * stride), static_cast<int>(n * stride)},
        {static_cast<int>(stride), 1, 1},
    };
    // FFTW_ESTIMATE leaves the arrays untouched during planning.
    fftw_plan plan = fftw_plan_guru_dft(1, &dim, 2, loops, sample, sample, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (plan == nullptr) throw ResourceError("fftw could not create a plan");
    plans_.emplace(key, plan);
    return plan;
  }

private:
  std::mutex mutex_;
  std::map<std::tuple<std::size_t, std::size_t, std::size_t, int>, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

void alternate_signs(std::span<cplx> data, std::size_t n, std::size_t stride, bool flip_all) {
  // multiply element with axis index j by (-1)^j, optionally times -1 overall
  const std::size_t block = n * stride;
  for (std::size_t base = 0; base < data.size(); base += block) {
    for (std::size_t j = 0; j < n; ++j) {
      const bool negate = ((j & 1U) != 0U) != flip_all;
      if (!negate) continue;
      cplx* row = data.data() + base + j * stride;
      for (std::size_t i = 0; i < stride; ++i) row[i] = -row[i];
    }
  }
}

} // namespace

void centered_dft(std::span<cplx> data, std::span<const std::size_t> shape, std::span<const std::size_t> axes,
                  FftDirection direction) {
  std::size_t total = 1;
  for (auto s : shape) total *= s;
  if (total != data.size()) throw StructuralError("centered_dft: shape does not match data length");
  const int sign = direction == FftDirection::forward ? FFTW_FORWARD : FFTW_BACKWARD;
  auto* raw = reinterpret_cast<fftw_complex*>(data.data());

  for (std::size_t axis : axes) {
    if (axis >= shape.size()) throw StructuralError("centered_dft: axis out of range");
    const std::size_t n = shape[axis];
    if (n % 2 != 0) throw StructuralError("centered_dft: axis length must be even");
    std::size_t stride = 1;
    for (std::size_t b = axis + 1; b < shape.size(); ++b) stride *= shape[b];
    const std::size_t outer = total / (n * stride);

    // exp(-+2 pi i (j - n/2)(m - n/2)/n) = (-1)^j (-1)^m (-1)^{n/2} exp(-+2 pi i j m / n)
    alternate_signs(data, n, stride, false);
    fftw_execute_dft(cache().get(n, stride, outer, sign, raw), raw, raw);
    alternate_signs(data, n, stride, (n / 2) % 2 == 1);
  }
}

void centered_dft(std::span<cplx> data, FftDirection direction) {
  const std::size_t shape[1] = {data.size()};
  const std::size_t axes[1] = {0};
  centered_dft(data, shape, axes, direction);
}

} // namespace fiolab
