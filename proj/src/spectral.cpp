#include "geis/spectral.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <tuple>

#include <fftw3.h>
#include <fmt/format.h>

#include "geis/errors.hpp"

namespace geis {
namespace {

// Plans are created once per (dim, N, sign) and executed with the new-array
// interface, which FFTW guarantees to be thread safe. Creation is not.
class PlanCache {
public:
    ~PlanCache() {
        for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
    }

    fftw_plan get(int dim, int n, int sign) {
        std::lock_guard lock(mutex_);
        auto key = std::make_tuple(dim, n, sign);
        if (auto it = plans_.find(key); it != plans_.end()) return it->second;
        std::size_t total = dim == 1 ? n : static_cast<std::size_t>(n) * n;
        std::vector<cplx> in(total), out(total);
        auto* pin = reinterpret_cast<fftw_complex*>(in.data());
        auto* pout = reinterpret_cast<fftw_complex*>(out.data());
        unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
        fftw_plan plan = dim == 1 ? fftw_plan_dft_1d(n, pin, pout, sign, flags)
                                  : fftw_plan_dft_2d(n, n, pin, pout, sign, flags);
        plans_.emplace(key, plan);
        return plan;
    }

private:
    std::mutex mutex_;
    std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

PlanCache& plan_cache() {
    static PlanCache cache;
    return cache;
}

// Swap halves along every axis. For even N this is its own inverse.
std::vector<cplx> half_shift(std::span<const cplx> v, const Grid& g) {
    std::vector<cplx> out(v.size());
    const std::size_t n = g.points_per_axis();
    const std::size_t half = n / 2;
    if (g.dim() == 1) {
        for (std::size_t i = 0; i < n; ++i) out[(i + half) % n] = v[i];
    } else {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                out[((i + half) % n) * n + (j + half) % n] = v[i * n + j];
    }
    return out;
}

GridFunction run_fft(const GridFunction& u, int sign, double scale) {
    const Grid& g = u.grid();
    std::vector<cplx> in = half_shift(u.values(), g);
    std::vector<cplx> out(in.size());
    fftw_plan plan = plan_cache().get(g.dim(), g.points_per_axis(), sign);
    fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(in.data()),
                     reinterpret_cast<fftw_complex*>(out.data()));
    std::vector<cplx> shifted = half_shift(out, g);
    for (auto& v : shifted) v *= scale;
    return GridFunction(g, std::move(shifted));
}

double weighted_lp(std::span<const cplx> v, double p, double weight) {
    if (!(p >= 1.0)) throw DomainError(fmt::format("L^p norm needs p >= 1, got {}", p));
    if (std::isinf(p)) {
        double m = 0.0;
        for (const auto& z : v) m = std::max(m, std::abs(z));
        return m;
    }
    double s = 0.0;
    if (p == 2.0) {
        for (const auto& z : v) s += std::norm(z);
        return std::sqrt(s * weight);
    }
    for (const auto& z : v) s += std::pow(std::abs(z), p);
    return std::pow(s * weight, 1.0 / p);
}

}  // namespace

GridFunction transform(const GridFunction& u) {
    return run_fft(u, FFTW_FORWARD, u.grid().cell_volume());
}

GridFunction inverse_transform(const GridFunction& u_hat) {
    return run_fft(u_hat, FFTW_BACKWARD, u_hat.grid().freq_cell_volume());
}

double lp_norm(const GridFunction& u, double p) {
    return weighted_lp(u.values(), p, u.grid().cell_volume());
}

double frequency_lp_norm(const GridFunction& u_hat, double p) {
    return weighted_lp(u_hat.values(), p, u_hat.grid().freq_cell_volume());
}

cplx pair(const GridFunction& u, const GridFunction& psi) {
    require_same_grid(u.grid(), psi.grid(), "pairing");
    cplx s{};
    for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * psi[i];
    return s * u.grid().cell_volume();
}

GridFunction direct_convolution(const GridFunction& u, const GridFunction& v) {
    require_same_grid(u.grid(), v.grid(), "convolution");
    const Grid& g = u.grid();
    const std::size_t n = g.points_per_axis();
    // x_i - x_m lands on index (i - m + N/2) mod N in the centered layout.
    auto wrap = [n](std::size_t i, std::size_t m) { return (i + n + n / 2 - m) % n; };
    std::vector<cplx> out(g.size());
    if (g.dim() == 1) {
        for (std::size_t i = 0; i < n; ++i) {
            cplx s{};
            for (std::size_t m = 0; m < n; ++m) s += u[m] * v[wrap(i, m)];
            out[i] = s;
        }
    } else {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                cplx s{};
                for (std::size_t a = 0; a < n; ++a)
                    for (std::size_t b = 0; b < n; ++b)
                        s += u[a * n + b] * v[wrap(i, a) * n + wrap(j, b)];
                out[i * n + j] = s;
            }
    }
    for (auto& z : out) z *= g.cell_volume();
    return GridFunction(g, std::move(out));
}

cplx derivative_symbol(const Point& xi, const MultiIndex& alpha, int dim) {
    cplx r{1.0, 0.0};
    for (int j = 0; j < dim; ++j) {
        const cplx d{0.0, 2.0 * std::numbers::pi * xi[j]};
        for (int k = 0; k < alpha[j]; ++k) r *= d;
    }
    return r;
}

GridFunction differentiate(const GridFunction& u, const MultiIndex& alpha) {
    GridFunction u_hat = transform(u);
    const Grid& g = u.grid();
    std::vector<cplx> v(u_hat.values().begin(), u_hat.values().end());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] *= derivative_symbol(g.frequency(i), alpha, g.dim());
    return inverse_transform(GridFunction(g, std::move(v)));
}

Mollifier::Mollifier(double sharpness) : sharpness_(sharpness) {
    if (!(sharpness > 0.0)) {
        throw DomainError(fmt::format("mollifier sharpness must be positive, got {}", sharpness));
    }
}

Mollifier Mollifier::from_name(const std::string& name) {
    if (name == "bump") return Mollifier(1.0);
    if (name == "narrow_bump") return Mollifier(4.0);
    throw DomainError(fmt::format("unknown mollifier profile '{}'", name));
}

double Mollifier::profile(double r) const noexcept {
    if (r >= 1.0) return 0.0;
    return std::exp(-sharpness_ / (1.0 - r * r));
}

int Mollifier::max_resolved_n(const Grid& grid) noexcept {
    return static_cast<int>(std::floor(0.25 / grid.spacing() + 1e-12));
}

GridFunction Mollifier::sample(const Grid& grid, int n) const {
    if (n < 1) throw DomainError(fmt::format("mollifier index must be >= 1, got {}", n));
    if (n * grid.spacing() > 0.25 + 1e-12) {
        const int max_n = max_resolved_n(grid);
        throw ResolutionError(
            fmt::format("theta_{} is not resolved (n*h = {} > 1/4); largest usable n is {}", n,
                        n * grid.spacing(), max_n),
            max_n);
    }
    const int d = grid.dim();
    std::vector<cplx> v(grid.size());
    double mass = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double theta = profile(n * norm(grid.point(i), d));
        v[i] = theta;
        mass += theta;
    }
    mass *= grid.cell_volume();
    for (auto& z : v) z /= mass;
    return GridFunction(grid, std::move(v));
}

GridFunction unit_impulse(const Grid& grid) {
    std::vector<cplx> v(grid.size(), cplx{});
    v[grid.origin_index()] = 1.0 / grid.cell_volume();
    return GridFunction(grid, std::move(v));
}

DistributionRep DistributionRep::delta(const Grid& grid) {
    return delta_derivative(grid, {0, 0});
}

DistributionRep DistributionRep::delta_derivative(const Grid& grid, const MultiIndex& alpha) {
    DistributionRep rep(grid);
    rep.add(alpha, unit_impulse(grid));
    return rep;
}

DistributionRep DistributionRep::function(const GridFunction& g) {
    DistributionRep rep(g.grid());
    rep.add({0, 0}, g);
    return rep;
}

DistributionRep& DistributionRep::add(const MultiIndex& alpha, GridFunction g) {
    require_same_grid(grid_, g.grid(), "distribution term");
    if (alpha[0] < 0 || alpha[1] < 0 || (grid_.dim() == 1 && alpha[1] != 0)) {
        throw DomainError(fmt::format("invalid multi-index ({}, {}) for d = {}", alpha[0],
                                      alpha[1], grid_.dim()));
    }
    terms_.push_back({alpha, std::move(g)});
    return *this;
}

int DistributionRep::max_order() const noexcept {
    int k = 0;
    for (const auto& t : terms_) k = std::max(k, t.alpha[0] + t.alpha[1]);
    return k;
}

GridFunction mollify(const DistributionRep& u, const Mollifier& theta, int n, double p) {
    const Grid& g = u.grid();
    GridFunction theta_hat = transform(theta.sample(g, n));
    std::vector<cplx> acc(g.size(), cplx{});
    for (const auto& term : u.terms()) {
        if (!std::isfinite(lp_norm(term.g, p))) {
            throw DomainError(fmt::format("distribution term of order ({}, {}) has no finite L^{} norm",
                                          term.alpha[0], term.alpha[1], p));
        }
        GridFunction g_hat = transform(term.g);
        for (std::size_t i = 0; i < acc.size(); ++i) {
            acc[i] += g_hat[i] * derivative_symbol(g.frequency(i), term.alpha, g.dim());
        }
    }
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] *= theta_hat[i];
    return inverse_transform(GridFunction(g, std::move(acc)));
}

}  // namespace geis
