#pragma once

// Thin FFTW wrapper. Plans are created once per (shape, sign) and shared by
// all callers; planning is serialized, execution is reentrant.

#include <fftw3.h>

#include <complex>
#include <map>
#include <mutex>
#include <vector>

namespace rcm::fft_detail {

using cplx = std::complex<double>;

class PlanCache {
public:
    static PlanCache& instance() {
        static PlanCache cache;
        return cache;
    }

    // In-place complex transform of a rank-`dims.size()` array. FFTW_UNALIGNED
    // lets one plan serve every buffer regardless of its alignment.
    fftw_plan get(const std::vector<int>& dims, int sign, cplx* data) {
        std::vector<int> key = dims;
        key.push_back(sign);
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = plans_.find(key);
        if (it != plans_.end()) return it->second;
        auto* p = reinterpret_cast<fftw_complex*>(data);
        fftw_plan plan = fftw_plan_dft(static_cast<int>(dims.size()), dims.data(), p, p, sign,
                                       FFTW_ESTIMATE | FFTW_UNALIGNED);
        plans_.emplace(std::move(key), plan);
        return plan;
    }

    PlanCache(const PlanCache&) = delete;
    PlanCache& operator=(const PlanCache&) = delete;

private:
    PlanCache() = default;
    ~PlanCache() {
        for (auto& [k, p] : plans_) fftw_destroy_plan(p);
    }
    std::mutex mutex_;
    std::map<std::vector<int>, fftw_plan> plans_;
};

// Unnormalized in-place transform over `rank` axes of length n each.
// sign = +1 computes sum f e^{+2 pi i jm/n}, sign = -1 the conjugate kernel.
inline void transform(std::vector<cplx>& data, int rank, int n, int sign) {
    std::vector<int> dims(static_cast<size_t>(rank), n);
    fftw_plan plan = PlanCache::instance().get(dims, sign > 0 ? FFTW_BACKWARD : FFTW_FORWARD,
                                               data.data());
    auto* p = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(plan, p, p);
}

}  // namespace rcm::fft_detail
