#include <gtest/gtest.h>

#include "mrpke/attacks.hpp"
#include "mrpke/estimator.hpp"

using namespace mrpke;
using namespace mrpke::attack;

TEST(RankHelpers, AgreeWithGenericRank) {
    Expander rng(seed_from_u64(71));
    for (int t = 0; t < 100; ++t) {
        BitMatrix x = random_matrix(1 + rng.uniform(12), 1 + rng.uniform(12), rng);
        EXPECT_EQ(codeword_rank(x), rank(x));
        EXPECT_EQ(vector_rank(rho(x).row(0), x.rows(), x.cols()), rank(x));
    }
    BitMatrix wide = random_matrix(4, 70, rng);
    EXPECT_EQ(codeword_rank(wide), rank(wide));
    EXPECT_THROW(vector_rank(rho(wide).row(0), 4, 70), ShapeError);
}

TEST(KernelAttack, OutputsAreLowRankCodewords) {
    Expander rng(seed_from_u64(72));
    int found = 0;
    for (int t = 0; t < 40; ++t) {
        MinRankInstance inst = random_minrank_instance(6, 6, 12, 2, rng);
        EXPECT_EQ(kernel_guess_dim(inst), 2u);
        KernelResult r = kernel_attack(inst, rng, 2000);
        if (!r.found()) continue;
        ++found;
        EXPECT_FALSE(r.solution->is_zero());
        EXPECT_LE(rank(*r.solution), 2u);
        EXPECT_TRUE(inst.code.contains(*r.solution));
        EXPECT_GE(r.iterations, 1u);
    }
    EXPECT_EQ(found, 40);
}

TEST(KernelAttack, FullRankTargetSucceedsAtOnce) {
    Expander rng(seed_from_u64(73));
    MinRankInstance inst = random_minrank_instance(5, 4, 6, 4, rng);
    KernelResult r = kernel_attack(inst, rng, 10);
    ASSERT_TRUE(r.found());
    EXPECT_EQ(r.iterations, 1u);
    EXPECT_THROW(random_minrank_instance(3, 3, 9, 1, rng), ShapeError);
}

TEST(KernelAttack, BudgetIsReported) {
    Expander rng(seed_from_u64(74));
    // a uniform code of small dimension has no rank-1 codeword with overwhelming probability
    MinRankInstance inst{10, 10, 1, MatrixCode(10, 10, random_matrix(3, 100, rng)), std::nullopt};
    KernelResult r = kernel_attack(inst, rng, 25);
    EXPECT_FALSE(r.found());
    EXPECT_EQ(r.iterations, 25u);
}

TEST(BruteForce, PlantedFoundAndDensity) {
    Expander rng(seed_from_u64(75));
    double total = 0;
    const int trials = 400;
    for (int t = 0; t < trials; ++t) {
        MinRankInstance inst = random_minrank_instance(4, 4, 4, 1, rng);
        auto sols = brute_force_minrank(inst);
        bool planted = false;
        for (const auto& s : sols) {
            EXPECT_FALSE(s.is_zero());
            EXPECT_LE(rank(s), 1u);
            planted |= s == *inst.planted;
        }
        EXPECT_TRUE(planted);
        total += double(sols.size());
    }
    // planted codeword plus 14 near-uniform others, each rank 1 with probability S(4,4,1)/2^16
    double expect = 1 + 14 * double(est::rank_count(4, 4, 1, 2)) / 65536.0;
    EXPECT_NEAR(total / trials, expect, 0.05);

    MinRankInstance big{8, 8, 1, MatrixCode(8, 8, random_matrix(25, 64, rng)), std::nullopt};
    EXPECT_THROW(brute_force_minrank(big), TooLarge);
}

TEST(Msl, AugmentedCodeHoldsErrors) {
    Expander rng(seed_from_u64(76));
    MslInstance msl = sample_msl(6, 6, 10, 5, 2, rng);
    EXPECT_EQ(msl.count(), 5u);
    EXPECT_EQ(rank(vectorize(msl.es, 6, 6)), 5u);
    MinRankInstance caug = build_caug(msl);
    EXPECT_LE(caug.dim(), 15u);
    for (const auto& e : msl.es) {
        EXPECT_TRUE(caug.code.contains(e));
        EXPECT_EQ(Subspace::column_span(e), msl.support);
    }
    EXPECT_TRUE(support_consistent(msl, msl.support));
    EXPECT_THROW(sample_msl(6, 6, 10, 13, 2, rng), ShapeError);
}

TEST(Msl, ShorteningAndRankReductionCombinations) {
    Expander rng(seed_from_u64(77));
    EXPECT_EQ(shortening_columns(5, 2), 2u);
    for (int t = 0; t < 30; ++t) EXPECT_TRUE(verify_shortening(sample_msl(6, 6, 10, 5, 2, rng)));
    int reduced = 0;
    for (int t = 0; t < 30; ++t) reduced += verify_rank_reduction(sample_msl(6, 6, 10, 7, 2, rng), 1);
    EXPECT_GE(reduced, 27);
    MslInstance msl = sample_msl(6, 6, 10, 3, 2, rng);
    EXPECT_TRUE(verify_rank_reduction(msl, 0));
    EXPECT_THROW(verify_rank_reduction(msl, 3), ShapeError);
    EXPECT_THROW(exists_combination(sample_msl(8, 8, 4, 21, 3, rng), [](const BitMatrix&) { return false; }),
                 TooLarge);
}

TEST(Msl, PipelineRecoversSupport) {
    Expander rng(seed_from_u64(78));
    int ok = 0;
    for (int t = 0; t < 10; ++t) {
        MslInstance msl = sample_msl(8, 8, 8, 4, 2, rng);
        PipelineResult r = msl_attack_pipeline(msl, rng, std::size_t(1) << 16);
        EXPECT_EQ(r.shortened, 1u);
        if (!r.support) continue;
        EXPECT_EQ(r.support->dim(), 2u);
        ok += *r.support == msl.support;
    }
    EXPECT_GE(ok, 8);
}

TEST(RandomSubcode, Codimension) {
    Expander rng(seed_from_u64(79));
    MatrixCode c(4, 4, random_full_rank(9, 16, rng));
    EXPECT_EQ(random_subcode(c, 0, rng), c);
    EXPECT_EQ(random_subcode(c, 3, rng).dim(), 6u);
    EXPECT_EQ(random_subcode(c, 12, rng).dim(), 0u);
    MatrixCode sub = random_subcode(c, 4, rng);
    for (std::size_t i = 0; i < sub.dim(); ++i) EXPECT_TRUE(c.contains(sub.basis_matrix(i)));
}
