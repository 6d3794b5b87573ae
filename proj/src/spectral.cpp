#include "pdl/spectral.hpp"

#include <fftw3.h>

#include <mutex>
#include <utility>

#include "pdl/error.hpp"

namespace pdl {

namespace {

// The FFTW planner is not thread-safe; execution is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

fftw_complex* as_fftw(std::complex<double>* p) { return reinterpret_cast<fftw_complex*>(p); }

} // namespace

SpectralTransform::SpectralTransform(std::size_t n) : n_(n) {
    if (n == 0) {
        throw InvalidArgument("transform length must be positive");
    }
    const int len = static_cast<int>(n);
    std::lock_guard lock(planner_mutex());
    // In-place plans; executed later through the new-array interface on
    // caller storage, hence FFTW_UNALIGNED.
    fftw_complex* scratch = fftw_alloc_complex(n);
    forward_plan_ = fftw_plan_dft_1d(len, scratch, scratch, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    backward_plan_ = fftw_plan_dft_1d(len, scratch, scratch, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(scratch);
    if (forward_plan_ == nullptr || backward_plan_ == nullptr) {
        if (forward_plan_ != nullptr) fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
        if (backward_plan_ != nullptr) fftw_destroy_plan(static_cast<fftw_plan>(backward_plan_));
        throw NumericalError("FFTW failed to create a plan");
    }
}

SpectralTransform::~SpectralTransform() { release(); }

SpectralTransform::SpectralTransform(SpectralTransform&& other) noexcept
    : n_(other.n_),
      forward_plan_(std::exchange(other.forward_plan_, nullptr)),
      backward_plan_(std::exchange(other.backward_plan_, nullptr)) {}

SpectralTransform& SpectralTransform::operator=(SpectralTransform&& other) noexcept {
    if (this != &other) {
        release();
        n_ = other.n_;
        forward_plan_ = std::exchange(other.forward_plan_, nullptr);
        backward_plan_ = std::exchange(other.backward_plan_, nullptr);
    }
    return *this;
}

void SpectralTransform::release() noexcept {
    if (forward_plan_ == nullptr && backward_plan_ == nullptr) {
        return;
    }
    std::lock_guard lock(planner_mutex());
    if (forward_plan_ != nullptr) {
        fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
        forward_plan_ = nullptr;
    }
    if (backward_plan_ != nullptr) {
        fftw_destroy_plan(static_cast<fftw_plan>(backward_plan_));
        backward_plan_ = nullptr;
    }
}

void SpectralTransform::forward(std::span<std::complex<double>> data) const {
    if (data.size() != n_) {
        throw InvalidArgument("transform length mismatch");
    }
    fftw_execute_dft(static_cast<fftw_plan>(forward_plan_), as_fftw(data.data()), as_fftw(data.data()));
}

void SpectralTransform::inverse(std::span<std::complex<double>> data) const {
    if (data.size() != n_) {
        throw InvalidArgument("transform length mismatch");
    }
    fftw_execute_dft(static_cast<fftw_plan>(backward_plan_), as_fftw(data.data()), as_fftw(data.data()));
    const double scale = 1.0 / static_cast<double>(n_);
    for (auto& v : data) {
        v *= scale;
    }
}

} // namespace pdl
