#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "mrpke/bitmatrix.hpp"
#include "mrpke/errors.hpp"
#include "mrpke/gf2m.hpp"
#include "mrpke/rng.hpp"

namespace mrpke {

// Gabidulin code of length len over GF(2^ext), dimension kappa, evaluation vector g.
// Codewords are len×ext bit matrices, one row per symbol.
class GabidulinCode {
public:
    GabidulinCode(std::shared_ptr<const Field> field, std::vector<FieldElement> g, unsigned kappa)
        : field_(std::move(field)), g_(std::move(g)), kappa_(kappa) {
        if (kappa_ > g_.size() || g_.size() > field_->degree())
            throw std::invalid_argument("GabidulinCode: need kappa <= length <= extension degree");
        if (rank_weight(*field_, g_) != g_.size())
            throw std::invalid_argument("GabidulinCode: evaluation points are GF(2)-dependent");
        std::size_t depth = std::max<std::size_t>(kappa_, radius() + kappa_);
        gpow_.assign(depth, std::vector<FieldElement>(g_.size()));
        for (std::size_t i = 0; i < g_.size(); ++i) {
            FieldElement x = g_[i];
            for (std::size_t j = 0; j < depth; ++j) {
                gpow_[j][i] = x;
                x = field_->sqr(x);
            }
        }
    }

    // Evaluation vector from successive expander outputs, resampled until independent.
    static GabidulinCode from_rng(unsigned ext, unsigned len, unsigned kappa, Expander& rng) {
        if (len > ext || kappa == 0 || kappa > len)
            throw std::invalid_argument("GabidulinCode: need 0 < kappa <= len <= ext");
        auto field = std::make_shared<const Field>(ext);
        for (int attempt = 0; attempt < kRejectionCap; ++attempt) {
            std::vector<FieldElement> g(len);
            for (auto& e : g) e = field->random(rng);
            if (rank_weight(*field, g) == len) return GabidulinCode(field, std::move(g), kappa);
        }
        throw InternalError("GabidulinCode: rejection cap exceeded");
    }

    const Field& field() const { return *field_; }
    std::shared_ptr<const Field> field_ptr() const { return field_; }
    const std::vector<FieldElement>& points() const { return g_; }
    std::size_t length() const { return g_.size(); }
    unsigned dimension() const { return kappa_; }
    std::size_t radius() const { return (g_.size() - kappa_) / 2; }

    std::vector<FieldElement> encode_symbols(std::span<const FieldElement> msg) const {
        if (msg.size() != kappa_) throw ShapeError("Gabidulin encode: message length must be kappa");
        std::vector<FieldElement> c(g_.size(), 0);
        for (std::size_t j = 0; j < kappa_; ++j) {
            if (msg[j] == 0) continue;
            for (std::size_t i = 0; i < g_.size(); ++i) c[i] ^= field_->mul(msg[j], gpow_[j][i]);
        }
        return c;
    }

    BitMatrix encode(std::span<const FieldElement> msg) const {
        return vector_to_bitmatrix(*field_, encode_symbols(msg));
    }

    // Welch–Berlekamp for linearized polynomials: find (V, N), V ≠ 0 of q-degree
    // <= t and N of q-degree < t + kappa, with V(y_i) = N(g_i); then N = V∘f.
    // The result is accepted only if its re-encoding lies within the radius.
    std::optional<std::vector<FieldElement>> decode(const BitMatrix& y) const {
        if (y.rows() != g_.size() || y.cols() != field_->degree())
            throw ShapeError("Gabidulin decode: received word has wrong shape");
        const Field& f = *field_;
        std::vector<FieldElement> ys = bitmatrix_to_vector(f, y);
        std::size_t n = g_.size(), t = radius(), nv = t + 1, nn = t + kappa_, cols = nv + nn;

        std::vector<std::vector<FieldElement>> sys(n, std::vector<FieldElement>(cols));
        for (std::size_t i = 0; i < n; ++i) {
            FieldElement x = ys[i];
            for (std::size_t j = 0; j < nv; ++j) {
                sys[i][j] = x;
                x = f.sqr(x);
            }
            for (std::size_t j = 0; j < nn; ++j) sys[i][nv + j] = gpow_[j][i];
        }
        auto sol = field_kernel_vector(f, sys, cols);
        if (!sol) return std::nullopt;

        QPoly v(std::vector<FieldElement>(sol->begin(), sol->begin() + nv));
        QPoly num(std::vector<FieldElement>(sol->begin() + nv, sol->end()));
        if (v.is_zero()) return std::nullopt;

        auto quotient = left_divide(v, num);
        if (!quotient) return std::nullopt;
        std::vector<FieldElement> msg(kappa_, 0);
        for (std::size_t j = 0; j < kappa_; ++j) msg[j] = quotient->coeff(j);

        BitMatrix residual = y ^ encode(msg);
        if (rank(residual) > t) return std::nullopt;
        return msg;
    }

private:
    // Nonzero x with sys·x = 0, taking the first free column; nullopt if the kernel is trivial.
    static std::optional<std::vector<FieldElement>> field_kernel_vector(
        const Field& f, std::vector<std::vector<FieldElement>>& sys, std::size_t cols) {
        std::size_t rows = sys.size(), r = 0;
        std::vector<std::size_t> pivot_col;
        std::vector<bool> is_pivot(cols, false);
        for (std::size_t c = 0; c < cols && r < rows; ++c) {
            std::size_t p = r;
            while (p < rows && sys[p][c] == 0) ++p;
            if (p == rows) continue;
            std::swap(sys[p], sys[r]);
            FieldElement inv = f.inv(sys[r][c]);
            for (std::size_t j = c; j < cols; ++j) sys[r][j] = f.mul(sys[r][j], inv);
            for (std::size_t i = 0; i < rows; ++i) {
                if (i == r || sys[i][c] == 0) continue;
                FieldElement s = sys[i][c];
                for (std::size_t j = c; j < cols; ++j) sys[i][j] ^= f.mul(s, sys[r][j]);
            }
            pivot_col.push_back(c);
            is_pivot[c] = true;
            ++r;
        }
        std::size_t free = 0;
        while (free < cols && is_pivot[free]) ++free;
        if (free == cols) return std::nullopt;
        std::vector<FieldElement> x(cols, 0);
        x[free] = 1;
        for (std::size_t i = 0; i < pivot_col.size(); ++i) x[pivot_col[i]] = sys[i][free];
        return x;
    }

    // q with v∘q = num and q-degree < kappa, solved from the top coefficient down.
    std::optional<QPoly> left_divide(const QPoly& v, const QPoly& num) const {
        const Field& f = *field_;
        int dv = v.qdeg();
        std::vector<FieldElement> q(kappa_, 0);
        FieldElement lead_inv = f.inv(v.c[dv]);
        for (int j = static_cast<int>(kappa_) - 1; j >= 0; --j) {
            std::size_t s = j + dv;
            FieldElement acc = num.coeff(s);
            for (int i = 0; i < dv; ++i) {
                std::size_t idx = s - i;
                if (idx < kappa_) acc ^= f.mul(v.c[i], f.frobenius_pow(q[idx], i));
            }
            q[j] = f.frobenius_root(f.mul(acc, lead_inv), dv);
        }
        QPoly quotient(q);
        if (!(qpoly_compose(f, v, quotient) == num)) return std::nullopt;
        return quotient;
    }

    std::shared_ptr<const Field> field_;
    std::vector<FieldElement> g_;
    unsigned kappa_;
    std::vector<std::vector<FieldElement>> gpow_;
};

} // namespace mrpke
