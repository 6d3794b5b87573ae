#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace pdl {

// Owns a forward/backward FFTW plan pair for one transform length.
// inverse() includes the 1/n factor, so inverse(forward(f)) == f.
class SpectralTransform {
public:
    explicit SpectralTransform(std::size_t n);
    ~SpectralTransform();

    SpectralTransform(const SpectralTransform&) = delete;
    SpectralTransform& operator=(const SpectralTransform&) = delete;
    SpectralTransform(SpectralTransform&& other) noexcept;
    SpectralTransform& operator=(SpectralTransform&& other) noexcept;

    std::size_t size() const { return n_; }

    void forward(std::span<std::complex<double>> data) const;
    void inverse(std::span<std::complex<double>> data) const;

private:
    void release() noexcept;

    std::size_t n_ = 0;
    void* forward_plan_ = nullptr;
    void* backward_plan_ = nullptr;
};

} // namespace pdl
