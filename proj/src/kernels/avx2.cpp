// AVX2 + FMA kernels. Compiled with -mavx2 -mfma; only reached when
// detected_isa() reports support.

#include <immintrin.h>

#include <algorithm>
#include <cmath>

#include "geophase/kernels.hpp"

#if !defined(__AVX2__) || !defined(__FMA__)
#error "this translation unit must be compiled with AVX2 and FMA enabled"
#endif

namespace geophase::kernels::avx2 {

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

inline double hmax(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d m = _mm_max_pd(lo, hi);
    return std::max(_mm_cvtsd_f64(m), _mm_cvtsd_f64(_mm_unpackhi_pd(m, m)));
}

inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(s) + _mm_cvtsd_f64(_mm_unpackhi_pd(s, s));
}

}  // namespace

int displace_step(ComplexBlock& block, std::complex<double> g, DisplaceWorkspace& ws) {
    prepare(block, ws);
    const int rows = block.rows();
    const int stride = block.stride();
    const std::size_t total = static_cast<std::size_t>(rows) * static_cast<std::size_t>(stride);
    const __m256d sign_mask = _mm256_set1_pd(-0.0);
    const __m256d zero = _mm256_setzero_pd();

    std::copy_n(block.re(), total, ws.term.re());
    std::copy_n(block.im(), total, ws.term.im());

    int k = 1;
    for (; k <= kMaxTerms; ++k) {
        const __m256d gr = _mm256_set1_pd(g.real() / k);
        const __m256d gi = _mm256_set1_pd(g.imag() / k);
        const double* tr = ws.term.re();
        const double* ti = ws.term.im();
        double* nr = ws.next.re();
        double* ni = ws.next.im();
        double* br = block.re();
        double* bi = block.im();
        __m256d largest = zero;
        for (int n = 0; n < rows; ++n) {
            const __m256d su = _mm256_set1_pd(ws.sqrt_n[static_cast<std::size_t>(n)]);
            const __m256d sw = _mm256_set1_pd(ws.sqrt_n[static_cast<std::size_t>(n) + 1]);
            const bool has_up = n > 0;
            const bool has_down = n + 1 < rows;
            for (int c = 0; c < stride; c += 4) {
                __m256d ur = zero, ui = zero, wr = zero, wi = zero;
                if (has_up) {
                    ur = _mm256_mul_pd(su, _mm256_loadu_pd(tr + (n - 1) * stride + c));
                    ui = _mm256_mul_pd(su, _mm256_loadu_pd(ti + (n - 1) * stride + c));
                }
                if (has_down) {
                    wr = _mm256_mul_pd(sw, _mm256_loadu_pd(tr + (n + 1) * stride + c));
                    wi = _mm256_mul_pd(sw, _mm256_loadu_pd(ti + (n + 1) * stride + c));
                }
                const __m256d outr =
                    _mm256_fmadd_pd(gr, _mm256_sub_pd(wr, ur), _mm256_mul_pd(gi, _mm256_add_pd(ui, wi)));
                const __m256d outi =
                    _mm256_fmsub_pd(gr, _mm256_sub_pd(wi, ui), _mm256_mul_pd(gi, _mm256_add_pd(ur, wr)));
                _mm256_storeu_pd(nr + n * stride + c, outr);
                _mm256_storeu_pd(ni + n * stride + c, outi);
                _mm256_storeu_pd(br + n * stride + c,
                                 _mm256_add_pd(_mm256_loadu_pd(br + n * stride + c), outr));
                _mm256_storeu_pd(bi + n * stride + c,
                                 _mm256_add_pd(_mm256_loadu_pd(bi + n * stride + c), outi));
                largest = _mm256_max_pd(largest, _mm256_andnot_pd(sign_mask, outr));
                largest = _mm256_max_pd(largest, _mm256_andnot_pd(sign_mask, outi));
            }
        }
        std::swap(ws.term, ws.next);
        if (hmax(largest) < kTermTolerance) break;
    }
    return std::min(k, kMaxTerms);
}

double shoelace_sum(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = std::min(x.size(), y.size());
    if (n < 2) return 0.0;
    const std::size_t pairs = n - 1;
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t k = 0;
    for (; k + 8 <= pairs; k += 8) {
        const __m256d x0 = _mm256_loadu_pd(x.data() + k);
        const __m256d y0 = _mm256_loadu_pd(y.data() + k);
        const __m256d x1 = _mm256_loadu_pd(x.data() + k + 1);
        const __m256d y1 = _mm256_loadu_pd(y.data() + k + 1);
        acc0 = _mm256_add_pd(acc0, _mm256_fmsub_pd(x0, y1, _mm256_mul_pd(y0, x1)));
        const __m256d x2 = _mm256_loadu_pd(x.data() + k + 4);
        const __m256d y2 = _mm256_loadu_pd(y.data() + k + 4);
        const __m256d x3 = _mm256_loadu_pd(x.data() + k + 5);
        const __m256d y3 = _mm256_loadu_pd(y.data() + k + 5);
        acc1 = _mm256_add_pd(acc1, _mm256_fmsub_pd(x2, y3, _mm256_mul_pd(y2, x3)));
    }
    double sum = hsum(_mm256_add_pd(acc0, acc1));
    for (; k < pairs; ++k) sum += x[k] * y[k + 1] - y[k] * x[k + 1];
    return sum;
}

double trapezoid(std::span<const double> t, std::span<const double> v) {
    const std::size_t n = std::min(t.size(), v.size());
    if (n < 2) return 0.0;
    const std::size_t pairs = n - 1;
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t k = 0;
    for (; k + 8 <= pairs; k += 8) {
        const __m256d dt0 = _mm256_sub_pd(_mm256_loadu_pd(t.data() + k + 1), _mm256_loadu_pd(t.data() + k));
        const __m256d sv0 = _mm256_add_pd(_mm256_loadu_pd(v.data() + k), _mm256_loadu_pd(v.data() + k + 1));
        acc0 = _mm256_fmadd_pd(dt0, sv0, acc0);
        const __m256d dt1 =
            _mm256_sub_pd(_mm256_loadu_pd(t.data() + k + 5), _mm256_loadu_pd(t.data() + k + 4));
        const __m256d sv1 =
            _mm256_add_pd(_mm256_loadu_pd(v.data() + k + 4), _mm256_loadu_pd(v.data() + k + 5));
        acc1 = _mm256_fmadd_pd(dt1, sv1, acc1);
    }
    double sum = hsum(_mm256_add_pd(acc0, acc1));
    for (; k < pairs; ++k) sum += (t[k + 1] - t[k]) * (v[k] + v[k + 1]);
    return 0.5 * sum;
}

}  // namespace geophase::kernels::avx2
