#pragma once

// Toy-scale executable attacks: the kernel (support-guessing) attack on a
// MinRank instance, exhaustive search, and the MSL -> MinRank pipeline that
// augments, shortens and then runs the kernel attack.

#include <functional>
#include <optional>
#include <vector>

#include "mrpke/bitmatrix.hpp"
#include "mrpke/codes.hpp"
#include "mrpke/errors.hpp"
#include "mrpke/rng.hpp"

namespace mrpke::attack {

// Rank of a matrix with at most 64 columns, one word per row.
inline std::size_t rank_small(std::vector<std::uint64_t> rows) {
    std::size_t r = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        std::uint64_t pivot_row = rows[i];
        if (!pivot_row) continue;
        std::uint64_t low = pivot_row & (~pivot_row + 1);
        ++r;
        for (std::size_t j = i + 1; j < rows.size(); ++j)
            if (rows[j] & low) rows[j] ^= pivot_row;
    }
    return r;
}

// Rank of rho_inv(v) for a 1×mn row vector, without materialising the matrix.
inline std::size_t vector_rank(const BitMatrix::Word* v, std::size_t m, std::size_t n) {
    if (n > 64) throw ShapeError("vector_rank: at most 64 columns");
    std::vector<std::uint64_t> rows(m, 0);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            std::size_t bit = i * n + j;
            if ((v[bit >> 6] >> (bit & 63)) & 1) rows[i] |= std::uint64_t(1) << j;
        }
    return rank_small(std::move(rows));
}

inline std::size_t codeword_rank(const BitMatrix& x) {
    if (x.cols() <= 64) {
        std::vector<std::uint64_t> rows(x.rows());
        for (std::size_t i = 0; i < x.rows(); ++i) rows[i] = x.row(i)[0];
        return rank_small(std::move(rows));
    }
    return rank(x);
}

struct MinRankInstance {
    std::size_t m, n, t;
    MatrixCode code;
    std::optional<BitMatrix> planted;

    std::size_t dim() const { return code.dim(); }
};

// dim−1 uniform matrices plus one planted error of rank exactly t.
inline MinRankInstance random_minrank_instance(std::size_t m, std::size_t n, std::size_t dim, std::size_t t,
                                               Expander& rng) {
    if (dim == 0 || dim >= m * n) throw ShapeError("random_minrank_instance: need 0 < dim < mn");
    for (int attempt = 0; attempt < kRejectionCap; ++attempt) {
        BitMatrix e = sample_error_column_support(sample_support(m, t, rng), n, rng).matrix;
        MatrixCode code(m, n, BitMatrix::vstack(random_matrix(dim - 1, m * n, rng), rho(e)));
        if (code.dim() == dim) return {m, n, t, std::move(code), std::move(e)};
    }
    throw InternalError("random_minrank_instance: rejection cap exceeded");
}

struct KernelResult {
    std::optional<BitMatrix> solution;
    std::size_t iterations = 0;

    bool found() const { return solution.has_value(); }
};

using Acceptor = std::function<bool(const BitMatrix&)>;

inline std::size_t kernel_guess_dim(const MinRankInstance& inst) { return (inst.dim() + inst.m - 1) / inst.m; }

namespace detail {

// Tries every nonzero combination of a small solution space, else only its basis.
inline std::optional<BitMatrix> scan_solutions(const MinRankInstance& inst, const BitMatrix& lambdas,
                                               const Acceptor& accept) {
    auto test = [&](const BitMatrix& lambda) -> std::optional<BitMatrix> {
        BitMatrix x = rho_inv(mul(lambda, inst.code.gen()), inst.m, inst.n);
        if (x.is_zero() || codeword_rank(x) > inst.t) return std::nullopt;
        if (accept && !accept(x)) return std::nullopt;
        return x;
    };
    std::size_t s = lambdas.rows();
    if (s <= 10) {
        BitMatrix cur(1, lambdas.cols());
        for (std::uint64_t g = 1; g < (std::uint64_t(1) << s); ++g) {
            cur.xor_row_into(0, lambdas.row(std::countr_zero(g)));
            if (auto x = test(cur)) return x;
        }
        return std::nullopt;
    }
    for (std::size_t i = 0; i < s; ++i)
        if (auto x = test(lambdas.row_range(i, i + 1))) return x;
    return std::nullopt;
}

} // namespace detail

// Guess an l-dimensional W inside the right kernel of the error and solve X·W = 0
// over the code; l = ceil(dim/m) makes the system generically overdetermined.
inline KernelResult kernel_attack(const MinRankInstance& inst, Expander& rng, std::size_t max_iters,
                                  const Acceptor& accept = {}) {
    const std::size_t m = inst.m, n = inst.n, dim = inst.dim();
    if (dim >= m * n) throw ShapeError("kernel_attack: instance dimension must be < mn");
    KernelResult res;
    if (dim == 0) return res;
    if (dim == 1 || inst.t >= std::min(m, n)) {
        res.iterations = 1;
        res.solution = detail::scan_solutions(inst, BitMatrix::identity(dim), accept);
        return res;
    }
    const std::size_t l = std::min(kernel_guess_dim(inst), n);
    std::vector<BitMatrix> basis;
    for (std::size_t i = 0; i < dim; ++i) basis.push_back(inst.code.basis_matrix(i));
    for (res.iterations = 1; res.iterations <= max_iters; ++res.iterations) {
        BitMatrix w = random_full_rank(n, l, rng);
        BitMatrix sys(dim, m * l);
        for (std::size_t i = 0; i < dim; ++i) sys.xor_row_into(i, rho(mul(basis[i], w)).row(0));
        BitMatrix lambdas = kernel_basis(sys.transpose());
        if (lambdas.rows() == 0) continue;
        if (auto x = detail::scan_solutions(inst, lambdas, accept)) {
            res.solution = std::move(x);
            return res;
        }
    }
    res.iterations = max_iters;
    return res;
}

inline constexpr std::size_t kBruteForceMaxDim = 24;

// Every nonzero codeword of rank <= t, by Gray-code enumeration.
inline std::vector<BitMatrix> brute_force_minrank(const MinRankInstance& inst) {
    const std::size_t dim = inst.dim();
    if (dim > kBruteForceMaxDim) throw TooLarge("brute_force_minrank: q^dim exceeds 2^24");
    std::vector<BitMatrix> out;
    const BitMatrix& gen = inst.code.gen();
    BitMatrix cur(1, gen.cols());
    for (std::uint64_t g = 1; g < (std::uint64_t(1) << dim); ++g) {
        cur.xor_row_into(0, gen.row(std::countr_zero(g)));
        std::size_t rk = inst.n <= 64 ? vector_rank(cur.row(0), inst.m, inst.n)
                                      : rank(rho_inv(cur, inst.m, inst.n));
        if (rk <= inst.t) out.push_back(rho_inv(cur, inst.m, inst.n));
    }
    return out;
}

// ---- MSL instances ----

struct MslInstance {
    std::size_t m, n, k, t;
    MatrixCode code;
    Subspace support;
    std::vector<BitMatrix> es, ys;

    std::size_t count() const { return ys.size(); }
};

// Resamples until the N errors are linearly independent.
inline MslInstance sample_msl(std::size_t m, std::size_t n, std::size_t k, std::size_t count, std::size_t t,
                              Expander& rng) {
    if (count > t * n) throw ShapeError("sample_msl: more than t*n errors cannot be independent");
    for (int attempt = 0; attempt < kRejectionCap; ++attempt) {
        Subspace s = sample_support(m, t, rng);
        std::vector<BitMatrix> es;
        for (std::size_t j = 0; j < count; ++j) es.push_back(sample_error_column_support(s, n, rng).matrix);
        if (rank(vectorize(es, m, n)) != count) continue;
        MatrixCode code(m, n, random_matrix(k, m * n, rng));
        std::vector<BitMatrix> ys;
        for (const auto& e : es) ys.push_back(code.random_codeword(rng) ^ e);
        return {m, n, k, t, std::move(code), std::move(s), std::move(es), std::move(ys)};
    }
    throw InternalError("sample_msl: rejection cap exceeded");
}

inline MinRankInstance build_caug(const MslInstance& msl) {
    return {msl.m, msl.n, msl.t, augment(msl.code, vectorize(msl.ys, msl.m, msl.n)), msl.es.front()};
}

inline std::size_t shortening_columns(std::size_t count, std::size_t t) { return (count - 1) / t; }

inline constexpr std::size_t kCombinationMaxCount = 20;

// Some nonzero combination of the errors satisfies pred; exhaustive over lambda.
inline bool exists_combination(const MslInstance& msl, const std::function<bool(const BitMatrix&)>& pred) {
    std::size_t count = msl.count();
    if (count > kCombinationMaxCount) throw TooLarge("error combinations exceed 2^20");
    BitMatrix cur(msl.m, msl.n);
    for (std::uint64_t g = 1; g < (std::uint64_t(1) << count); ++g) {
        cur ^= msl.es[std::countr_zero(g)];
        if (pred(cur)) return true;
    }
    return false;
}

// Some nonzero combination of the errors has its first floor((N−1)/t) columns zero.
inline bool verify_shortening(const MslInstance& msl) {
    std::size_t a = shortening_columns(msl.count(), msl.t);
    return exists_combination(msl, [&](const BitMatrix& x) {
        for (std::size_t i = 0; i < x.rows(); ++i)
            for (std::size_t j = 0; j < a; ++j)
                if (x.get(i, j)) return false;
        return true;
    });
}

// Some nonzero combination of the errors has rank <= t − delta.
inline bool verify_rank_reduction(const MslInstance& msl, std::size_t delta) {
    if (delta > msl.t) throw ShapeError("verify_rank_reduction: delta exceeds t");
    return exists_combination(msl, [&](const BitMatrix& x) { return codeword_rank(x) <= msl.t - delta; });
}

// Every Y_j lies in C + {matrices with column space inside support}.
inline bool support_consistent(const MslInstance& msl, const Subspace& support) {
    const std::size_t m = msl.m, n = msl.n;
    BitMatrix gens = msl.code.gen();
    BitMatrix spread(support.dim() * n, m * n);
    for (std::size_t s = 0; s < support.dim(); ++s)
        for (std::size_t c = 0; c < n; ++c)
            for (std::size_t i = 0; i < m; ++i)
                if (support.basis().get(s, i)) spread.set(s * n + c, i * n + c, true);
    MatrixCode widened(m, n, BitMatrix::vstack(gens, spread));
    for (const auto& y : msl.ys)
        if (!widened.contains(y)) return false;
    return true;
}

// Random subcode of codimension c.
inline MatrixCode random_subcode(const MatrixCode& code, std::size_t codim, Expander& rng) {
    if (codim == 0) return code;
    if (codim >= code.dim()) return MatrixCode(code.m(), code.n());
    BitMatrix combos = random_full_rank(code.dim() - codim, code.dim(), rng);
    return MatrixCode(code.m(), code.n(), mul(combos, code.gen()));
}

struct PipelineResult {
    std::optional<Subspace> support;
    std::size_t iterations = 0;
    std::size_t shortened = 0;   // a
    std::size_t reduced_dim = 0; // dimension handed to the kernel attack
};

// C_aug -> shorten by a = floor((N−1)/t) -> cut the q^(N−at) solution multiplicity
// down to one line -> kernel attack, accepting only supports that explain every Y_j.
inline PipelineResult msl_attack_pipeline(const MslInstance& msl, Expander& rng, std::size_t budget) {
    PipelineResult out;
    MinRankInstance caug = build_caug(msl);
    out.shortened = shortening_columns(msl.count(), msl.t);
    MatrixCode shortened = shorten_columns(caug.code, out.shortened);
    std::size_t residual = msl.count() - out.shortened * msl.t;
    MatrixCode reduced = random_subcode(shortened, residual - 1, rng);
    out.reduced_dim = reduced.dim();
    MinRankInstance inst{msl.m, msl.n - out.shortened, msl.t, std::move(reduced), std::nullopt};
    if (inst.dim() == 0) return out;
    std::optional<Subspace> found;
    auto accept = [&](const BitMatrix& x) {
        Subspace s = Subspace::column_span(x);
        if (s.dim() != msl.t || !support_consistent(msl, s)) return false;
        found = s;
        return true;
    };
    KernelResult kr = kernel_attack(inst, rng, budget, accept);
    out.iterations = kr.iterations;
    if (kr.found()) out.support = found;
    return out;
}

} // namespace mrpke::attack
