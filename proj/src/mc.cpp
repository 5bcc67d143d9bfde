#include "starkhole/mc.hpp"

#include <atomic>
#include <cmath>
#include <thread>

#include "starkhole/errors.hpp"
#include "starkhole/lineshape.hpp"

namespace starkhole {

void EnsembleSpec::validate() const {
    if (n_samples < 1) throw DomainError("ensemble spec: n_samples must be >= 1");
    if (!(f_bar >= 0.0)) throw DomainError("ensemble spec: f_bar must be >= 0");
    if (x_grid.empty()) throw DomainError("ensemble spec: empty x grid");
    for (double x : x_grid)
        if (!std::isfinite(x)) throw DomainError("ensemble spec: non-finite x");
}

double sample_shift(double f_bar, CounterRng& rng) {
    // Maxwell magnitude with mode f_bar: norm of three normals with
    // sd f_bar/sqrt(2), drawn rejection-free.
    const double n1 = rng.normal();
    const double n2 = rng.normal();
    const double n3 = rng.normal();
    const double f = f_bar * std::sqrt(0.5 * (n1 * n1 + n2 * n2 + n3 * n3));
    const double c = rng.uniform_pm1();
    return f * c;
}

namespace {

// Per-sample draws; must stay below CounterRng::kStride.
// (3 normals at 2 uniforms each + 1 orientation uniform = 7.)

// Per-block mean and centered second moment. Accumulating deviations from
// the block's first sample instead of raw squares keeps the variance free
// of cancellation: a constant stream yields an exact zero.
struct BlockStats {
    std::size_t n = 0;
    std::vector<double> mean;
    std::vector<double> m2;
};

constexpr std::size_t kBlock = 8192;

BlockStats accumulate_block(const EnsembleSpec& spec, std::size_t begin, std::size_t end) {
    const std::size_t n_x = spec.x_grid.size();
    BlockStats out;
    out.n = end - begin;
    out.mean.assign(n_x, 0.0);
    out.m2.assign(n_x, 0.0);

    std::vector<double> ref(n_x, 0.0);
    std::vector<double> sum_d(n_x, 0.0), sum_d2(n_x, 0.0);
    for (std::size_t i = begin; i < end; ++i) {
        CounterRng rng(spec.seed, i);
        const double s = sample_shift(spec.f_bar, rng);
        for (std::size_t k = 0; k < n_x; ++k) {
            const double v = lorentzian_unit(spec.x_grid[k] - s);
            if (i == begin) ref[k] = v;
            const double d = v - ref[k];
            sum_d[k] += d;
            sum_d2[k] += d * d;
        }
    }
    const double n = static_cast<double>(out.n);
    for (std::size_t k = 0; k < n_x; ++k) {
        out.mean[k] = ref[k] + sum_d[k] / n;
        const double m2 = sum_d2[k] - sum_d[k] * (sum_d[k] / n);
        out.m2[k] = m2 > 0.0 ? m2 : 0.0;
    }
    return out;
}

}  // namespace

McProfile mc_hole_shape(const EnsembleSpec& spec) {
    spec.validate();
    const std::size_t n = spec.n_samples;
    const std::size_t n_x = spec.x_grid.size();
    const std::size_t n_blocks = (n + kBlock - 1) / kBlock;

    unsigned workers = spec.n_workers > 0 ? static_cast<unsigned>(spec.n_workers)
                                          : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, n_blocks));

    std::vector<BlockStats> partials(n_blocks);
    if (workers <= 1) {
        for (std::size_t b = 0; b < n_blocks; ++b)
            partials[b] = accumulate_block(spec, b * kBlock, std::min(n, (b + 1) * kBlock));
    } else {
        std::atomic<std::size_t> next{0};
        auto work = [&] {
            for (;;) {
                const std::size_t b = next.fetch_add(1);
                if (b >= n_blocks) return;
                partials[b] = accumulate_block(spec, b * kBlock, std::min(n, (b + 1) * kBlock));
            }
        };
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }

    // Fixed block order keeps the reduction bit-identical for any worker
    // count or scheduling.
    McProfile profile;
    profile.x = spec.x_grid;
    profile.mean.assign(n_x, 0.0);
    profile.std_error.assign(n_x, 0.0);
    profile.n_samples = n;

    std::vector<double> mean(n_x, 0.0), m2(n_x, 0.0);
    std::size_t n_merged = 0;
    for (std::size_t b = 0; b < n_blocks; ++b) {
        const BlockStats& blk = partials[b];
        if (n_merged == 0) {
            mean = blk.mean;
            m2 = blk.m2;
        } else {
            const double na = static_cast<double>(n_merged);
            const double nb = static_cast<double>(blk.n);
            const double nn = na + nb;
            for (std::size_t k = 0; k < n_x; ++k) {
                const double delta = blk.mean[k] - mean[k];
                mean[k] += delta * (nb / nn);
                m2[k] += blk.m2[k] + delta * delta * (na * nb / nn);
            }
        }
        n_merged += blk.n;
    }

    for (std::size_t k = 0; k < n_x; ++k) {
        profile.mean[k] = mean[k];
        if (n > 1)
            profile.std_error[k] =
                std::sqrt(m2[k] / static_cast<double>(n - 1) / static_cast<double>(n));
    }
    return profile;
}

}  // namespace starkhole
