// Portable reference kernels. These define the semantics the SIMD variants
// are tested against.

#include <algorithm>
#include <cmath>

#include "geophase/kernels.hpp"

namespace geophase::kernels::scalar {

namespace {

constexpr double kTermTolerance = 1e-18;
constexpr int kMaxTerms = 60;

void prepare(const ComplexBlock& block, DisplaceWorkspace& ws) {
    if (ws.term.rows() != block.rows() || ws.term.cols() != block.cols()) {
        ws.term = ComplexBlock(block.rows(), block.cols());
        ws.next = ComplexBlock(block.rows(), block.cols());
    }
    if (static_cast<int>(ws.sqrt_n.size()) != block.rows() + 1) {
        ws.sqrt_n.resize(static_cast<std::size_t>(block.rows()) + 1);
        for (std::size_t n = 0; n < ws.sqrt_n.size(); ++n) {
            ws.sqrt_n[n] = std::sqrt(static_cast<double>(n));
        }
    }
}

}  // namespace

int displace_step(ComplexBlock& block, std::complex<double> g, DisplaceWorkspace& ws) {
    prepare(block, ws);
    const int rows = block.rows();
    const int stride = block.stride();
    const std::size_t total = static_cast<std::size_t>(rows) * static_cast<std::size_t>(stride);

    std::copy_n(block.re(), total, ws.term.re());
    std::copy_n(block.im(), total, ws.term.im());

    int k = 1;
    for (; k <= kMaxTerms; ++k) {
        const double gr = g.real() / k;
        const double gi = g.imag() / k;
        const double* tr = ws.term.re();
        const double* ti = ws.term.im();
        double* nr = ws.next.re();
        double* ni = ws.next.im();
        double largest = 0.0;
        for (int n = 0; n < rows; ++n) {
            // u = sqrt(n) t[n-1], w = sqrt(n+1) t[n+1]
            const double su = ws.sqrt_n[static_cast<std::size_t>(n)];
            const double sw = ws.sqrt_n[static_cast<std::size_t>(n) + 1];
            for (int c = 0; c < stride; ++c) {
                double ur = 0.0, ui = 0.0, wr = 0.0, wi = 0.0;
                if (n > 0) {
                    ur = su * tr[(n - 1) * stride + c];
                    ui = su * ti[(n - 1) * stride + c];
                }
                if (n + 1 < rows) {
                    wr = sw * tr[(n + 1) * stride + c];
                    wi = sw * ti[(n + 1) * stride + c];
                }
                const double outr = gr * (wr - ur) + gi * (ui + wi);
                const double outi = gr * (wi - ui) - gi * (ur + wr);
                nr[n * stride + c] = outr;
                ni[n * stride + c] = outi;
                block.re()[n * stride + c] += outr;
                block.im()[n * stride + c] += outi;
                largest = std::max({largest, std::abs(outr), std::abs(outi)});
            }
        }
        std::swap(ws.term, ws.next);
        if (largest < kTermTolerance) break;
    }
    return std::min(k, kMaxTerms);
}

double shoelace_sum(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = std::min(x.size(), y.size());
    double sum = 0.0;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        sum += x[k] * y[k + 1] - y[k] * x[k + 1];
    }
    return sum;
}

double trapezoid(std::span<const double> t, std::span<const double> v) {
    const std::size_t n = std::min(t.size(), v.size());
    double sum = 0.0;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        sum += (t[k + 1] - t[k]) * (v[k] + v[k + 1]);
    }
    return 0.5 * sum;
}

}  // namespace geophase::kernels::scalar
