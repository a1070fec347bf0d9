// SPDX-License-Identifier: Apache-2.0
//
// wpt-lab: beamforming policies for multi-antenna RF wireless power transfer
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef WPT_LINALG_HPP
#define WPT_LINALG_HPP

#include "wpt/errors.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace wpt
{

using cplx = std::complex<double>;
using CVector = std::vector<cplx>;

// Dense row-major complex matrix
class CMatrix
{
public:
    CMatrix() = default;
    CMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    static CMatrix identity(std::size_t n)
    {
        CMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            m(i, i) = 1.0;
        return m;
    }

    static CMatrix diagonal(std::span<const double> d)
    {
        CMatrix m(d.size(), d.size());
        for (std::size_t i = 0; i < d.size(); ++i)
            m(i, i) = d[i];
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    cplx &operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
    const cplx &operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

    std::span<const cplx> data() const noexcept { return data_; }

    bool all_finite() const noexcept
    {
        return std::all_of(data_.begin(), data_.end(),
                           [](const cplx &v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); });
    }

    friend bool operator==(const CMatrix &, const CMatrix &) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<cplx> data_;
};

// Per-slot M x N channel between the access point (N antennas) and one receiver (M antennas)
using ChannelMatrix = CMatrix;

// Square Hermitian matrix. Every constructor path enforces exact conjugate symmetry.
class GramMatrix
{
public:
    static constexpr double hermitian_tolerance = 1e-10;

    GramMatrix() = default;

    // Accepts a matrix within `hermitian_tolerance` of Hermitian (max-abs norm) and symmetrizes it.
    static GramMatrix from_matrix(CMatrix m)
    {
        if (m.rows() != m.cols())
            throw StructuralError("GramMatrix: matrix is " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                                  ", expected square");
        if (!m.all_finite())
            throw StructuralError("GramMatrix: non-finite entry");
        const std::size_t n = m.rows();
        double worst = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = j; k < n; ++k)
                worst = std::max(worst, std::abs(m(j, k) - std::conj(m(k, j))));
        if (worst > hermitian_tolerance)
            throw StructuralError("GramMatrix: not Hermitian, max |W - W*| = " + std::to_string(worst));
        return GramMatrix(symmetrize(std::move(m)));
    }

    static GramMatrix zeros(std::size_t n) { return GramMatrix(CMatrix(n, n)); }
    static GramMatrix identity(std::size_t n) { return GramMatrix(CMatrix::identity(n)); }
    static GramMatrix diagonal(std::span<const double> d) { return GramMatrix(CMatrix::diagonal(d)); }

    std::size_t dim() const noexcept { return m_.rows(); }
    const cplx &operator()(std::size_t r, std::size_t c) const noexcept { return m_(r, c); }
    const CMatrix &matrix() const noexcept { return m_; }

    friend bool operator==(const GramMatrix &, const GramMatrix &) = default;

private:
    explicit GramMatrix(CMatrix m) : m_(std::move(m)) {}

    // (W + W*) / 2, with a real diagonal
    static CMatrix symmetrize(CMatrix m)
    {
        const std::size_t n = m.rows();
        for (std::size_t j = 0; j < n; ++j)
        {
            m(j, j) = m(j, j).real();
            for (std::size_t k = j + 1; k < n; ++k)
            {
                const cplx avg = 0.5 * (m(j, k) + std::conj(m(k, j)));
                m(j, k) = avg;
                m(k, j) = std::conj(avg);
            }
        }
        return m;
    }

    friend GramMatrix gram(const ChannelMatrix &h);
    friend GramMatrix weighted_combine(std::span<const double>, std::span<const GramMatrix>, double);

    CMatrix m_;
};

// Largest eigenvalue with a unit eigenvector
struct EigenPair
{
    double value = 0.0;
    CVector vector;
};

// Transmit beamforming vector; squared norm is the transmit power in watts
struct BeamVector
{
    CVector entries;

    static BeamVector zeros(std::size_t n) { return BeamVector{CVector(n)}; }

    double power() const noexcept
    {
        double p = 0.0;
        for (const auto &e : entries)
            p += std::norm(e);
        return p;
    }

    std::size_t size() const noexcept { return entries.size(); }
};

inline double norm2(std::span<const cplx> v) noexcept
{
    double s = 0.0;
    for (const auto &e : v)
        s += std::norm(e);
    return std::sqrt(s);
}

// W = H^* H
inline GramMatrix gram(const ChannelMatrix &h)
{
    if (!h.all_finite())
        throw StructuralError("gram: channel matrix has a non-finite entry");
    const std::size_t m = h.rows(), n = h.cols();
    CMatrix w(n, n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = j; k < n; ++k)
        {
            cplx s = 0.0;
            for (std::size_t r = 0; r < m; ++r)
                s += std::conj(h(r, j)) * h(r, k);
            w(j, k) = s;
            w(k, j) = std::conj(s);
        }
    for (std::size_t j = 0; j < n; ++j)
        w(j, j) = w(j, j).real();
    return GramMatrix(std::move(w));
}

// sum_i weights[i] * grams[i] - shift * I. May be indefinite.
inline GramMatrix weighted_combine(std::span<const double> weights, std::span<const GramMatrix> grams, double shift)
{
    if (grams.empty())
        throw StructuralError("weighted_combine: empty matrix list");
    if (weights.size() != grams.size())
        throw StructuralError("weighted_combine: " + std::to_string(weights.size()) + " weights for " +
                              std::to_string(grams.size()) + " matrices");
    const std::size_t n = grams.front().dim();
    CMatrix out(n, n);
    for (std::size_t i = 0; i < grams.size(); ++i)
    {
        if (grams[i].dim() != n)
            throw StructuralError("weighted_combine: dimension mismatch");
        const double w = weights[i];
        if (w == 0.0)
            continue;
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = j; k < n; ++k)
                out(j, k) += w * grams[i](j, k);
    }
    for (std::size_t j = 0; j < n; ++j)
    {
        out(j, j) = out(j, j).real() - shift;
        for (std::size_t k = j + 1; k < n; ++k)
            out(k, j) = std::conj(out(j, k));
    }
    return GramMatrix(std::move(out));
}

// Full spectrum of a Hermitian matrix: values ascending, vectors(:, k) pairs with values[k]
struct HermitianSpectrum
{
    std::vector<double> values;
    CMatrix vectors;
};

inline constexpr int max_jacobi_sweeps = 200;

// Cyclic complex Jacobi. Each rotation first removes the phase of a_pq, then applies a real Givens rotation.
inline HermitianSpectrum hermitian_eigen(const GramMatrix &w)
{
    const std::size_t n = w.dim();
    CMatrix a = w.matrix();
    CMatrix v = CMatrix::identity(n);

    double frob2 = 0.0;
    for (const auto &e : a.data())
        frob2 += std::norm(e);
    const double stop = frob2 * 1e-30; // off-diagonal norm below 1e-15 ||W||_F

    auto off_mass = [&] {
        double s = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q)
                s += std::norm(a(p, q));
        return 2.0 * s;
    };

    int sweep = 0;
    for (double off = off_mass(); off > stop; off = off_mass())
    {
        if (++sweep > max_jacobi_sweeps)
            throw NumericError("hermitian_eigen: no convergence after " + std::to_string(max_jacobi_sweeps) + " sweeps",
                               std::sqrt(off));
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q)
            {
                const double mag = std::abs(a(p, q));
                if (mag == 0.0)
                    continue;
                const cplx phase = a(p, q) / mag; // e^{i phi}
                const double app = a(p, p).real(), aqq = a(q, q).real();
                const double tau = (aqq - app) / (2.0 * mag);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                const cplx pc = std::conj(phase);

                // A <- A U with U e_p = c e_p - s e^{-i phi} e_q, U e_q = s e_p + c e^{-i phi} e_q
                for (std::size_t k = 0; k < n; ++k)
                {
                    const cplx akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * pc * akq;
                    a(k, q) = s * akp + c * pc * akq;
                    const cplx vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - s * pc * vkq;
                    v(k, q) = s * vkp + c * pc * vkq;
                }
                // A <- U^* A
                for (std::size_t k = 0; k < n; ++k)
                {
                    const cplx apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * phase * aqk;
                    a(q, k) = s * apk + c * phase * aqk;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = a(p, p).real();
                a(q, q) = a(q, q).real();
            }
    }

    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i)
        order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return a(x, x).real() < a(y, y).real(); });

    HermitianSpectrum out{std::vector<double>(n), CMatrix(n, n)};
    for (std::size_t k = 0; k < n; ++k)
    {
        out.values[k] = a(order[k], order[k]).real();
        for (std::size_t r = 0; r < n; ++r)
            out.vectors(r, k) = v(r, order[k]);
    }
    return out;
}

namespace detail
{
inline double residual(const GramMatrix &w, double value, std::span<const cplx> x)
{
    const std::size_t n = w.dim();
    double s = 0.0;
    for (std::size_t r = 0; r < n; ++r)
    {
        cplx acc = -value * x[r];
        for (std::size_t k = 0; k < n; ++k)
            acc += w(r, k) * x[k];
        s += std::norm(acc);
    }
    return std::sqrt(s);
}
} // namespace detail

// Algebraically largest eigenvalue and a deterministic unit eigenvector.
//
// If the top eigenvalue is degenerate, the vector is the normalized projection of the standard basis
// vector e_j onto the top eigenspace, with j maximizing that projection (lowest index on ties). In all
// cases the first component with magnitude above 1e-10 is rotated to be real and positive.
inline EigenPair max_eigpair(const GramMatrix &w)
{
    const std::size_t n = w.dim();
    if (n == 0)
        throw StructuralError("max_eigpair: empty matrix");

    const HermitianSpectrum spec = hermitian_eigen(w);
    const double top = spec.values.back();
    const double scale = std::max({1.0, std::abs(spec.values.front()), std::abs(top)});
    const double deg_tol = 1e-12 * scale;

    std::size_t first = n - 1;
    while (first > 0 && spec.values[first - 1] >= top - deg_tol)
        --first;

    CVector u(n);
    if (first == n - 1)
    {
        for (std::size_t r = 0; r < n; ++r)
            u[r] = spec.vectors(r, n - 1);
    }
    else
    {
        std::size_t best = 0;
        double best_w = -1.0;
        for (std::size_t j = 0; j < n; ++j)
        {
            double wj = 0.0;
            for (std::size_t k = first; k < n; ++k)
                wj += std::norm(spec.vectors(j, k));
            if (wj > best_w + 1e-12)
            {
                best_w = wj;
                best = j;
            }
        }
        for (std::size_t k = first; k < n; ++k)
        {
            const cplx coef = std::conj(spec.vectors(best, k));
            for (std::size_t r = 0; r < n; ++r)
                u[r] += spec.vectors(r, k) * coef;
        }
    }

    const double nrm = norm2(u);
    for (auto &e : u)
        e /= nrm;
    for (const auto &e : u)
        if (std::abs(e) > 1e-10)
        {
            const cplx rot = std::conj(e) / std::abs(e);
            for (auto &x : u)
                x *= rot;
            break;
        }
    for (auto &e : u)
        if (std::abs(e.imag()) == 0.0)
            e = {e.real(), 0.0};

    const double res = detail::residual(w, top, u);
    if (!(res <= 1e-8 * std::max(1.0, std::abs(top))))
        throw NumericError("max_eigpair: eigenvector residual too large", res);
    return EigenPair{top, std::move(u)};
}

// x^* W x (real part; the imaginary part is round-off for Hermitian W)
inline double quad_form(const GramMatrix &w, const BeamVector &x)
{
    const std::size_t n = w.dim();
    if (x.size() != n)
        throw StructuralError("quad_form: beam of length " + std::to_string(x.size()) + " for " + std::to_string(n) +
                              "x" + std::to_string(n) + " matrix");
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j)
    {
        if (x.entries[j] == 0.0)
            continue;
        acc += w(j, j).real() * std::norm(x.entries[j]);
        for (std::size_t k = j + 1; k < n; ++k)
            acc += 2.0 * (std::conj(x.entries[j]) * w(j, k) * x.entries[k]).real();
    }
    return acc;
}

} // namespace wpt

#endif
