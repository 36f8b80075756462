#include "fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <tuple>

namespace pfrac::detail {
namespace {

struct PlanDeleter {
    void operator()(fftw_plan_s* plan) const { fftw_destroy_plan(plan); }
};

struct BufferDeleter {
    void operator()(fftw_complex* buffer) const { fftw_free(buffer); }
};

// One plan and one scratch buffer per (dim, n, sign). FFTW planning is not
// thread-safe, and the scratch buffer is shared, so every use holds the lock.
struct CachedPlan {
    std::unique_ptr<fftw_plan_s, PlanDeleter> plan;
    std::unique_ptr<fftw_complex, BufferDeleter> buffer;
    std::size_t length = 0;
};

std::mutex& plan_mutex() {
    static std::mutex mutex;
    return mutex;
}

std::map<std::tuple<int, int, int>, CachedPlan>& plan_cache() {
    static std::map<std::tuple<int, int, int>, CachedPlan> cache;
    return cache;
}

CachedPlan& plan_for(int dim, int points, int sign) {
    auto& cache = plan_cache();
    auto key = std::make_tuple(dim, points, sign);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    std::size_t length = 1;
    int dims[3] = {points, points, points};
    for (int d = 0; d < dim; ++d) length *= static_cast<std::size_t>(points);

    CachedPlan entry;
    entry.length = length;
    entry.buffer.reset(fftw_alloc_complex(length));
    if (!entry.buffer) throw std::bad_alloc();
    entry.plan.reset(fftw_plan_dft(dim, dims, entry.buffer.get(), entry.buffer.get(),
                                   sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD, FFTW_ESTIMATE));
    if (!entry.plan) throw std::runtime_error("fftw planning failed");
    return cache.emplace(key, std::move(entry)).first->second;
}

}  // namespace

void fft_inplace(std::span<std::complex<double>> data, int dim, int points, int sign) {
    std::lock_guard<std::mutex> lock(plan_mutex());
    CachedPlan& entry = plan_for(dim, points, sign);
    if (data.size() != entry.length) throw std::invalid_argument("fft length mismatch");
    std::memcpy(entry.buffer.get(), data.data(), entry.length * sizeof(fftw_complex));
    fftw_execute(entry.plan.get());
    std::memcpy(static_cast<void*>(data.data()), entry.buffer.get(), entry.length * sizeof(fftw_complex));
}

}  // namespace pfrac::detail
