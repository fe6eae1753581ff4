#include "lsdev/gff/sampler.hpp"

#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include <fftw3.h>
#include <Eigen/Dense>

#include "lsdev/gff/green.hpp"
#include "lsdev/mc/rng.hpp"

namespace lsdev::gff {

namespace {

// The FFTW planner is not reentrant; execution is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

struct FftwBuffer {
    explicit FftwBuffer(std::size_t count) : data(static_cast<double*>(fftw_malloc(sizeof(double) * count))) {
        if (data == nullptr) throw std::bad_alloc();
    }
    ~FftwBuffer() { fftw_free(data); }
    FftwBuffer(const FftwBuffer&) = delete;
    FftwBuffer& operator=(const FftwBuffer&) = delete;
    double* data;
};

}  // namespace

struct FieldSampler::Impl {
    int m = 0;  // interior side N - 2
    std::vector<double> scale;  // (1 - lambda_jk)^{-1/2} / (2 (m + 1))
    fftw_plan plan = nullptr;
    Eigen::MatrixXd chol;

    ~Impl() {
        if (plan != nullptr) {
            std::lock_guard lock(planner_mutex());
            fftw_destroy_plan(plan);
        }
    }
};

FieldSampler::FieldSampler(int n, Backend backend) : n_(n), backend_(backend), impl_(std::make_unique<Impl>()) {
    const Grid grid(n);
    const int m = n - 2;
    impl_->m = m;
    if (backend == Backend::Spectral) {
        impl_->scale.resize(static_cast<std::size_t>(m) * m);
        const double norm = 1.0 / (2.0 * (m + 1));
        for (int j = 0; j < m; ++j) {
            const double cj = std::cos(std::numbers::pi * (j + 1) / (m + 1));
            for (int k = 0; k < m; ++k) {
                const double ck = std::cos(std::numbers::pi * (k + 1) / (m + 1));
                impl_->scale[static_cast<std::size_t>(j) * m + k] = norm / std::sqrt(1.0 - 0.5 * (cj + ck));
            }
        }
        FftwBuffer in(impl_->scale.size());
        FftwBuffer out(impl_->scale.size());
        std::lock_guard lock(planner_mutex());
        impl_->plan = fftw_plan_r2r_2d(m, m, in.data, out.data, FFTW_RODFT00, FFTW_RODFT00, FFTW_ESTIMATE);
        if (impl_->plan == nullptr) throw std::runtime_error("FFTW planning failed");
    } else {
        if (n > kDenseMaxN) {
            throw std::invalid_argument("dense backend limited to N <= " + std::to_string(kDenseMaxN));
        }
        const Eigen::MatrixXd g = box_green_matrix(n, n);
        Eigen::LLT<Eigen::MatrixXd> llt(g);
        if (llt.info() != Eigen::Success) throw std::runtime_error("Green matrix is not positive definite");
        impl_->chol = llt.matrixL();
    }
}

FieldSampler::~FieldSampler() = default;
FieldSampler::FieldSampler(FieldSampler&&) noexcept = default;
FieldSampler& FieldSampler::operator=(FieldSampler&&) noexcept = default;

Field FieldSampler::sample(std::uint64_t seed) const {
    const int m = impl_->m;
    const std::size_t count = static_cast<std::size_t>(m) * m;
    mc::Stream stream(seed);
    Field field(n_);
    if (backend_ == Backend::Spectral) {
        FftwBuffer in(count);
        FftwBuffer out(count);
        for (std::size_t i = 0; i < count; ++i) in.data[i] = stream.normal() * impl_->scale[i];
        fftw_execute_r2r(impl_->plan, in.data, out.data);
        for (int a = 0; a < m; ++a) {
            for (int b = 0; b < m; ++b) field.at(a + 2, b + 2) = out.data[static_cast<std::size_t>(a) * m + b];
        }
    } else {
        Eigen::VectorXd xi(static_cast<Eigen::Index>(count));
        for (Eigen::Index i = 0; i < xi.size(); ++i) xi[i] = stream.normal();
        const Eigen::VectorXd phi = impl_->chol.triangularView<Eigen::Lower>() * xi;
        for (int a = 0; a < m; ++a) {
            for (int b = 0; b < m; ++b) field.at(a + 2, b + 2) = phi[static_cast<Eigen::Index>(a) * m + b];
        }
    }
    return field;
}

Field sample_field(int n, std::uint64_t seed, Backend backend) { return FieldSampler(n, backend).sample(seed); }

}  // namespace lsdev::gff
