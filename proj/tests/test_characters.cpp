#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "stf/characters.hpp"
#include "stf/errors.hpp"

using namespace stf;

namespace {

const GroupCatalog& catalog() {
    static GroupCatalog c = load_group_catalog(std::string(STF_DATA_DIR) + "/groups.json");
    return c;
}

// sin(n theta) / sin(theta) as a sum of weights
std::complex<double> su2_character(int n, double theta) {
    std::complex<double> s = 0;
    for (int j = 0; j < n; ++j) s += std::exp(std::complex<double>(0, (n - 1 - 2 * j) * theta));
    return s;
}

TorusPoint point(QVec turns, std::vector<double> real = {}) {
    TorusPoint h = make_point(turns);
    h.real = std::move(real);
    return h;
}

}  // namespace

TEST(Characters, CompactRankOneAgainstWeightSum) {
    const auto& g = catalog().group("SU2");
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.01, 0.49);
    for (int n = 1; n <= 6; ++n) {
        HCParameter p = make_hc_parameter(g, {frac(n, 2)});
        for (int i = 0; i < 20; ++i) {
            TorusPoint h = make_point({Q(0)});
            h.drift = {u(rng)};
            Value v = stable_ds_character(p, h);
            EXPECT_FALSE(v.is_exact());
            auto want = su2_character(n, 2 * std::numbers::pi * h.drift[0]);
            EXPECT_NEAR(std::abs(v.numeric() - want), 0.0, 1e-9) << n << " at " << h.drift[0];
        }
        for (int den : {5, 7, 9, 12}) {
            Value v = stable_ds_character(p, make_point({frac(1, den)}));
            ASSERT_TRUE(v.is_exact());
            EXPECT_NEAR(std::abs(v.numeric() - su2_character(n, 2 * std::numbers::pi / den)), 0.0, 1e-12);
        }
    }
}

TEST(Characters, ExactRationalPoint) {
    HCParameter p = make_hc_parameter(catalog().group("SU2"), {frac(3, 2)});
    Value v = stable_ds_character(p, make_point({frac(1, 8)}));
    ASSERT_TRUE(v.is_exact());
    EXPECT_EQ(*v.exact(), Cyc(1));
}

TEST(Characters, CentralLimitIsWeylDimension) {
    HCParameter p = make_hc_parameter(catalog().group("Spin5"), {Q(3), Q(2)});
    Q dim = weyl_dimension(*p.group.datum, p.lambda);
    Value lim = singular_character_limit(p, make_point({Q(0), Q(0)}));
    ASSERT_TRUE(lim.is_exact());
    EXPECT_EQ(*lim.exact(), Cyc(dim));
    Value num = richardson_character_limit(p, make_point({Q(0), Q(0)}));
    EXPECT_NEAR(std::abs(num.numeric() - std::complex<double>(dim.get_d(), 0)), 0.0, 1e-6);
}

TEST(Characters, NonCentralLimitMatchesExtrapolation) {
    HCParameter p = make_hc_parameter(catalog().group("Spin5"), {Q(3), Q(2)});
    TorusPoint h = make_point({frac(1, 2), Q(0)});
    ASSERT_FALSE(is_regular(*p.group.datum, h));
    Value exact = singular_character_limit(p, h);
    Value num = richardson_character_limit(p, h);
    EXPECT_TRUE(exact.is_exact());
    EXPECT_NEAR(std::abs(exact.numeric() - num.numeric()), 0.0, 1e-6);
}

TEST(Characters, RegularPointIsNotALimit) {
    HCParameter p = make_hc_parameter(catalog().group("SU2"), {frac(3, 2)});
    EXPECT_THROW(singular_character_limit(p, make_point({frac(1, 8)})), InputError);
}

TEST(Characters, SingularLambdaRejected) {
    EXPECT_THROW(make_hc_parameter(catalog().group("SU2"), {Q(0)}), InputError);
    EXPECT_THROW(make_hc_parameter(catalog().group("SL2"), {Q(0)}), InputError);
}

TEST(Characters, AveragedEqualsSignedMemberSum) {
    struct Case {
        const char* group;
        QVec lambda;
        const char* levi;
        TorusPoint h;
    };
    std::vector<Case> cases = {
        {"SL2", {frac(11, 2)}, "G", point({frac(1, 8)})},
        {"SL2", {frac(11, 2)}, "G", point({frac(2, 7)})},
        {"SL2", {frac(11, 2)}, "T", point({Q(0)}, {0.3})},
        {"SL2", {frac(7, 2)}, "T", point({Q(0)}, {-0.45})},
        {"Sp4R", {Q(3), Q(2)}, "G", point({frac(1, 7), frac(1, 5)})},
    };
    for (const auto& c : cases) {
        const auto& g = catalog().group(c.group);
        HCParameter p = make_hc_parameter(g, c.lambda);
        Value avg = averaged_character_phiM(p, c.levi, c.h);
        Value sum = member_sum_phiM(p, c.levi, c.h);
        Value direct(0);
        for (size_t m = 0; m < g.member_labels.size(); ++m) direct += member_phiM(p, c.levi, static_cast<int>(m), c.h);
        double sign = g.q % 2 ? -1.0 : 1.0;
        EXPECT_NEAR(std::abs(avg.numeric() - sign * sum.numeric()), 0.0, 1e-9) << c.group << " " << c.levi;
        EXPECT_NEAR(std::abs(sum.numeric() - direct.numeric()), 0.0, 1e-9) << c.group << " " << c.levi;
    }
}

TEST(Characters, SplitMemberDecay) {
    const auto& g = catalog().group("SL2");
    HCParameter p = weight_parameter(g, 12);
    // each member is e^{-(k-1)|t|} on the split torus
    for (double t : {0.1, -0.2, 0.35}) {
        Value v = member_phiM(p, "T", 0, point({Q(0)}, {t}));
        EXPECT_NEAR(std::abs(v.numeric()), std::exp(-11.0 * std::abs(t)), 1e-12);
    }
    Value at0 = member_phiM(p, "T", 0, point({Q(0)}));
    EXPECT_TRUE(at0.is_exact());
}

TEST(Characters, StableClassValue) {
    const auto& g = catalog().group("SL2");
    HCParameter p = weight_parameter(g, 12);
    StableClass cls{"e4", "G", true, true, {{"e4+", point({frac(1, 8)}), Cyc(1)}, {"e4-", point({frac(-1, 8)}), Cyc(1)}}};
    StableCharacterValue s = stable_averaged_SPhi(p, cls, "G");
    EXPECT_TRUE(s.value.is_exact());
    EXPECT_EQ(s.contributions.size(), 4u);
    StableClass empty{"none", "G", true, true, {}};
    EXPECT_THROW(stable_averaged_SPhi(p, empty, "G"), IncompleteCatalog);
}

TEST(Characters, WeylIntegration) {
    HCParameter p = make_hc_parameter(catalog().group("SU2"), {frac(5, 2)});
    auto f = [](double theta) { return std::exp(std::cos(theta)) * (1 + std::sin(3 * theta) * std::sin(3 * theta)); };
    WeylIntegrationResult r = weyl_integration_check(p, f);
    EXPECT_LT(r.residual, 1e-6);
    QuadratureOptions off;
    off.normalization_scale = 1.01;
    WeylIntegrationResult bad = weyl_integration_check(p, f, off);
    EXPECT_GT(bad.residual, 1e-4);
    HCParameter split = weight_parameter(catalog().group("SL2"), 12);
    EXPECT_THROW(weyl_integration_check(split, f), UnsupportedForQuadrature);
}
