#include "nsdamp/transform.hpp"

#include <fftw3.h>

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <map>
#include <mutex>
#include <sstream>
#include <tuple>

#include "nsdamp/error.hpp"

namespace nsdamp {

namespace {

std::mutex g_policy_mutex;
ExecutionPolicy g_policy{};

struct PlanPair {
    fftw_plan forward = nullptr;
    fftw_plan backward = nullptr;
};

// FFTW's planner is not thread-safe; executing an existing plan is.
class PlanCache {
public:
    static PlanCache& instance() {
        static PlanCache cache;
        return cache;
    }

    PlanPair get(int dim, int n, int threads) {
        std::lock_guard lock(mutex_);
        auto key = std::make_tuple(dim, n, threads);
        if (auto it = plans_.find(key); it != plans_.end()) return it->second;
        if (!threads_initialized_) {
            fftw_init_threads();
            threads_initialized_ = true;
        }
        fftw_plan_with_nthreads(threads);
        int dims[3] = {n, n, n};
        std::size_t size = 1;
        for (int j = 0; j < dim; ++j) size *= static_cast<std::size_t>(n);
        auto* in = fftw_alloc_complex(size);
        auto* out = fftw_alloc_complex(size);
        const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
        PlanPair p;
        p.forward = fftw_plan_dft(dim, dims, in, out, FFTW_FORWARD, flags);
        p.backward = fftw_plan_dft(dim, dims, in, out, FFTW_BACKWARD, flags);
        fftw_free(in);
        fftw_free(out);
        plans_.emplace(key, p);
        return p;
    }

    ~PlanCache() {
        for (auto& [key, p] : plans_) {
            fftw_destroy_plan(p.forward);
            fftw_destroy_plan(p.backward);
        }
    }

private:
    std::mutex mutex_;
    std::map<std::tuple<int, int, int>, PlanPair> plans_;
    bool threads_initialized_ = false;
};

PlanPair plans_for(const Grid& g) {
    const auto policy = execution_policy();
    const int threads = policy.strict_deterministic ? 1 : std::max(1, policy.threads);
    return PlanCache::instance().get(g.dim(), g.n(), threads);
}

fftw_complex* as_fftw(Complex* p) { return reinterpret_cast<fftw_complex*>(p); }

}  // namespace

void set_execution_policy(const ExecutionPolicy& policy) {
    std::lock_guard lock(g_policy_mutex);
    g_policy = policy;
    g_policy.threads = std::max(1, std::min(policy.threads, threads_from_environment()));
}

ExecutionPolicy execution_policy() {
    std::lock_guard lock(g_policy_mutex);
    return g_policy;
}

int threads_from_environment() {
    const char* env = std::getenv("NS_THREADS");
    if (env == nullptr) return 1;
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 1) return 1;
    return static_cast<int>(std::min(v, 256L));
}

namespace detail {

SpectralField forward_unchecked(const PhysicalField& f) {
    const Grid& g = f.grid();
    const std::size_t size = g.size();
    const double scale = std::sqrt(g.volume()) / static_cast<double>(size);
    const auto plans = plans_for(g);
    SpectralField out(g, f.components());
    std::vector<Complex> packed(size), spec(size);
    for (int c = 0; c < f.components(); c += 2) {
        const bool pair = c + 1 < f.components();
        auto a = f.component(c);
        for (std::size_t i = 0; i < size; ++i)
            packed[i] = Complex(a[i], pair ? f.component(c + 1)[i] : 0.0);
        fftw_execute_dft(plans.forward, as_fftw(packed.data()), as_fftw(spec.data()));
        auto A = out.component(c);
        for (std::size_t m = 0; m < size; ++m) {
            const Complex z = spec[m];
            const Complex zm = std::conj(spec[g.mirror(m)]);
            A[m] = 0.5 * scale * (z + zm);
            if (pair) {
                const Complex d = z - zm;
                // (d / 2i) written out so that B(-k) = conj B(k) holds bit-exactly
                out.component(c + 1)[m] = 0.5 * scale * Complex(d.imag(), -d.real());
            }
        }
    }
    return out;
}

PhysicalField inverse_unchecked(const SpectralField& g_in) {
    const Grid& g = g_in.grid();
    const std::size_t size = g.size();
    const double scale = 1.0 / std::sqrt(g.volume());
    const auto plans = plans_for(g);
    PhysicalField out(g, g_in.components());
    std::vector<Complex> packed(size), phys(size);
    for (int c = 0; c < g_in.components(); c += 2) {
        const bool pair = c + 1 < g_in.components();
        auto A = g_in.component(c);
        if (pair) {
            auto B = g_in.component(c + 1);
            for (std::size_t m = 0; m < size; ++m)
                packed[m] = Complex(A[m].real() - B[m].imag(), A[m].imag() + B[m].real());
        } else {
            std::copy(A.begin(), A.end(), packed.begin());
        }
        fftw_execute_dft(plans.backward, as_fftw(packed.data()), as_fftw(phys.data()));
        auto a = out.component(c);
        for (std::size_t i = 0; i < size; ++i) a[i] = scale * phys[i].real();
        if (pair) {
            auto b = out.component(c + 1);
            for (std::size_t i = 0; i < size; ++i) b[i] = scale * phys[i].imag();
        }
    }
    return out;
}

}  // namespace detail

SpectralField forward_transform(const PhysicalField& f) {
    const auto& data = f.data();
    for (std::size_t i = 0; i < data.size(); ++i) {
        if (!std::isfinite(data[i])) {
            const std::size_t c = i / f.points();
            const auto idx = f.grid().unflatten(i % f.points());
            std::ostringstream msg;
            msg << "forward_transform: non-finite value at component " << c << ", point (" << idx[0] << ", "
                << idx[1];
            if (f.grid().dim() == 3) msg << ", " << idx[2];
            msg << ")";
            throw ValidationError(msg.str());
        }
    }
    return detail::forward_unchecked(f);
}

PhysicalField inverse_transform(const SpectralField& g) {
    if (!g.all_finite()) throw ValidationError("inverse_transform: non-finite coefficient");
    const double defect = g.hermitian_defect();
    if (defect > 1e-12 * g.max_abs())
        throw ValidationError("inverse_transform: coefficients are not Hermitian-symmetric (defect " +
                              std::to_string(defect) + ")");
    return detail::inverse_unchecked(g);
}

}  // namespace nsdamp
