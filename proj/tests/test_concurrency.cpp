#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "greenfab/concurrency.hpp"
#include "greenfab/dataset.hpp"

using namespace greenfab;

namespace {

KernelProfile util_kernel(double u, const char* name = "k") {
    return {name, "test", 0.5, 0.5, u, 1.0, false};
}

}  // namespace

TEST(AverageUtilization, Examples) {
    const auto ds = builtin_paper_dataset();
    EXPECT_NEAR(average_utilization(ds.kernels), 0.64, 1e-12);
    const std::vector<KernelProfile> full{util_kernel(1.0), util_kernel(1.0), util_kernel(1.0)};
    EXPECT_EQ(average_utilization(full), 1.0);
    const std::vector<KernelProfile> pair{util_kernel(1.0), util_kernel(0.26)};
    EXPECT_NEAR(average_utilization(pair), 0.63, 1e-12);
    EXPECT_THROW(average_utilization(std::vector<KernelProfile>{}), Error);
}

TEST(AverageUtilization, RejectsOutOfRangeInsteadOfClamping) {
    const std::vector<KernelProfile> bad{util_kernel(1.0), util_kernel(1.5)};
    EXPECT_THROW(average_utilization(bad), Error);
    const std::vector<KernelProfile> zero{util_kernel(0.0)};
    EXPECT_THROW(average_utilization(zero), Error);
}

TEST(ScaleFactor, Examples) {
    const auto ds = builtin_paper_dataset();
    EXPECT_NEAR(scale_factor(2, ScaleMode::average(), ds.kernels), 1.28, 1e-12);
    EXPECT_NEAR(scale_factor(4, ScaleMode::average(), ds.kernels), 2.56, 1e-12);
    EXPECT_EQ(scale_factor(1, ScaleMode::average(), ds.kernels), 1.0);
    EXPECT_EQ(scale_factor(3, ScaleMode::conservative()), 3.0);
    EXPECT_EQ(scale_factor(3, ScaleMode::fixed(1.7)), 1.7);
    EXPECT_NEAR(scale_factor(4, ScaleMode::average(0.63)), 2.52, 1e-12);
    EXPECT_THROW(ScaleMode::fixed(0.5), Error);
    EXPECT_THROW(scale_factor(2, ScaleMode::average(1.2)), Error);
}

TEST(ScaleFactor, ParseKind) {
    EXPECT_EQ(parse_scale_kind("avg"), ScaleKind::average_utilization);
    EXPECT_EQ(parse_scale_kind("conservative"), ScaleKind::conservative);
    EXPECT_THROW(parse_scale_kind("half"), Error);
}

TEST(ScaleFactorProperty, MonotoneBoundedAndBelowConservative) {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.01, 1.0);
    for (int i = 0; i < 1000; ++i) {
        const double mean = u(rng);
        const double higher = std::min(1.0, mean + 0.1 * u(rng));
        double prev = 0.0;
        for (int n = 1; n <= 8; ++n) {
            const double s = scale_factor(n, ScaleMode::average(mean));
            EXPECT_EQ(scale_factor(n, ScaleMode::conservative()), static_cast<double>(n));
            EXPECT_GE(s, 1.0);
            EXPECT_GE(s, prev);
            EXPECT_LE(s, scale_factor(n, ScaleMode::average(higher)));
            EXPECT_LE(fabric_footprint(s), fabric_footprint(n));
            prev = s;
        }
    }
}

TEST(Packing, Examples) {
    const GridSpec grid;
    const std::vector<KernelProfile> halves{util_kernel(0.5), util_kernel(0.5)};
    auto r = packing_feasible(halves, grid, 1.0);
    EXPECT_TRUE(r.feasible);
    EXPECT_EQ(r.allocated, 64);
    EXPECT_EQ(r.allocation, (std::vector<int>{32, 32}));

    const std::vector<KernelProfile> full{util_kernel(1.0, "GeMM"), util_kernel(1.0, "FIR")};
    r = packing_feasible(full, grid, 1.0);
    EXPECT_FALSE(r.feasible);
    EXPECT_EQ(r.allocated, 128);

    const std::vector<KernelProfile> mixed{util_kernel(1.0, "GeMM"), util_kernel(0.45, "Conv2D")};
    r = packing_feasible(mixed, grid, 1.45);
    EXPECT_EQ(r.allocated, 93);
    EXPECT_EQ(r.budget, 92);
    EXPECT_FALSE(r.feasible);
    EXPECT_TRUE(packing_feasible(mixed, grid, 1.5).feasible);
}

TEST(PackingProperty, ConstructiveWitnessFits) {
    std::mt19937_64 rng(19);
    std::uniform_real_distribution<double> u(0.01, 1.0);
    std::uniform_int_distribution<int> side(1, 16), count(1, 8);
    for (int i = 0; i < 1000; ++i) {
        const GridSpec grid{side(rng), side(rng)};
        const int P = grid.pe_count();
        std::vector<KernelProfile> ks;
        const int m = count(rng);
        int demand = 0;
        for (int j = 0; j < m; ++j) {
            ks.push_back(util_kernel(u(rng)));
            demand += static_cast<int>(std::ceil(ks.back().utilization * P - 1e-9));
        }
        const double witness = std::max(1.0, static_cast<double>(demand) / P);
        const auto r = packing_feasible(ks, grid, witness);
        EXPECT_TRUE(r.feasible) << demand << "/" << P;
        EXPECT_LE(r.allocated, r.budget);
    }
}
