#include <fftw3.h>

#include <cmath>
#include <mutex>

#include "oisac/error.hpp"
#include "oisac/modem.hpp"

namespace oisac {

namespace {
// Only fftw_execute* is thread-safe; planning is not.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace

struct Dft::Plans {
    fftw_plan fwd = nullptr;
    fftw_plan inv = nullptr;
};

Dft::Dft(int n) : n_(n), plans_(std::make_unique<Plans>()) {
    if (n < 2) throw DomainError("dft: size must be at least 2");
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_complex* a = fftw_alloc_complex(static_cast<std::size_t>(n));
    fftw_complex* b = fftw_alloc_complex(static_cast<std::size_t>(n));
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    plans_->fwd = fftw_plan_dft_1d(n, a, b, FFTW_FORWARD, flags);
    plans_->inv = fftw_plan_dft_1d(n, a, b, FFTW_BACKWARD, flags);
    fftw_free(a);
    fftw_free(b);
}

Dft::~Dft() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(plans_->fwd);
    fftw_destroy_plan(plans_->inv);
}

namespace {
CMatrix run(fftw_plan plan, const CMatrix& x, int n) {
    if (x.rows() != n) throw ShapeError("dft: row count does not match transform size");
    CMatrix in = x;
    CMatrix out(x.rows(), x.cols());
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (Eigen::Index c = 0; c < x.cols(); ++c) {
        fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(in.col(c).data()),
                         reinterpret_cast<fftw_complex*>(out.col(c).data()));
    }
    out *= scale;
    return out;
}
}  // namespace

CMatrix Dft::forward(const CMatrix& x) const { return run(plans_->fwd, x, n_); }
CMatrix Dft::inverse(const CMatrix& x) const { return run(plans_->inv, x, n_); }

}  // namespace oisac
