#include <gtest/gtest.h>

#include <set>

#include "stf/errors.hpp"
#include "stf/rootsys.hpp"

using namespace stf;

namespace {

struct Shape {
    const char* type;
    size_t roots;
    size_t weyl;
    bool minus_one;
};

class RootShapes : public ::testing::TestWithParam<Shape> {};

}  // namespace

TEST_P(RootShapes, CountsAndReflections) {
    const Shape s = GetParam();
    auto d = build_root_datum(s.type);
    EXPECT_EQ(d->roots.size(), s.roots);
    EXPECT_EQ(weyl_group(*d).size(), s.weyl);
    EXPECT_EQ(positive_systems(*d).size(), s.weyl);
    EXPECT_EQ(contains_minus_one(*d), s.minus_one);
    for (size_t a = 0; a < d->roots.size(); ++a) {
        EXPECT_EQ(d->coroot_pairing(d->roots[a], static_cast<int>(a)), Q(2));
        EXPECT_EQ(d->reflect(static_cast<int>(a), d->roots[a]), -d->roots[a]);
        EXPECT_EQ(d->negative[d->negative[a]], static_cast<int>(a));
        for (size_t b = 0; b < d->roots.size(); ++b)
            EXPECT_GE(d->root_index(d->reflect(static_cast<int>(a), d->roots[b])), 0);
    }
    std::set<RootMask> masks;
    for (const auto& p : positive_systems(*d)) {
        masks.insert(p.mask);
        EXPECT_EQ(p.positive_roots.size(), s.roots / 2);
        for (int r : p.positive_roots) EXPECT_GT(d->pair(p.chamber_point, d->roots[r]), 0);
    }
    EXPECT_EQ(masks.size(), s.weyl);
}

INSTANTIATE_TEST_SUITE_P(Catalog, RootShapes,
                         ::testing::Values(Shape{"A1", 2, 2, true}, Shape{"A1xA1", 4, 4, true},
                                           Shape{"A2", 6, 6, false}, Shape{"B2", 8, 8, true},
                                           Shape{"C2", 8, 8, true}, Shape{"G2", 12, 12, true},
                                           Shape{"T1", 0, 1, false}));

TEST(RootDatum, RhoPairsToOneOnSimpleCoroots) {
    for (const char* t : {"A1", "A2", "B2", "G2"}) {
        auto d = build_root_datum(t);
        QVec rho = d->rho();
        for (int s : d->simple_roots) EXPECT_EQ(d->coroot_pairing(rho, s), Q(1)) << t;
    }
}

TEST(RootDatum, WeylSignsAreDeterminants) {
    auto d = build_root_datum("G2");
    int plus = 0;
    for (const auto& w : weyl_group(*d)) {
        EXPECT_EQ(det(w.matrix), Q(w.sign));
        EXPECT_EQ(static_cast<int>(w.word.size()) % 2 == 0 ? 1 : -1, w.sign);
        plus += w.sign > 0;
    }
    EXPECT_EQ(plus, 6);
}

TEST(RootDatum, RejectsUnknownTypes) {
    EXPECT_THROW(build_root_datum("E8"), UnsupportedCartanType);
    EXPECT_THROW(build_root_datum(""), UnsupportedCartanType);
}

TEST(RootDatum, RegularityAndDiscriminant) {
    auto d = build_root_datum("A1");
    TorusPoint h = make_point({frac(1, 4)});
    EXPECT_TRUE(is_regular(*d, h));
    EXPECT_FALSE(is_regular(*d, make_point({Q(0)})));
    EXPECT_FALSE(is_regular(*d, make_point({frac(1, 2)})));
    // e^{i pi/2} - e^{-i pi/2} = 2i
    Value disc = weyl_discriminant(*d, d->base_positive, h);
    ASSERT_TRUE(disc.is_exact());
    EXPECT_EQ(*disc.exact(), Cyc(2) * Cyc::imag_unit());
}

TEST(GroupCatalog, LoadsShippedEntries) {
    GroupCatalog c = load_group_catalog(std::string(STF_DATA_DIR) + "/groups.json");
    EXPECT_TRUE(c.has("SL2"));
    EXPECT_TRUE(c.has("Spin5"));
    EXPECT_EQ(c.group("SL2").member_cosets().size(), 2u);
    EXPECT_EQ(c.group("Sp4R").member_cosets().size(), 4u);
    EXPECT_EQ(c.group("SU21").member_cosets().size(), 3u);
    EXPECT_EQ(c.group("SU2").member_cosets().size(), 1u);
    EXPECT_EQ(c.group("SL2").levi("T").dim_a, 1);
    EXPECT_THROW(c.group("SL2").levi("M9"), UnknownLevi);
    EXPECT_THROW(c.group("nope"), BrokenReference);
}

TEST(GroupCatalog, SchemaErrors) {
    EXPECT_THROW(load_group_catalog_text("{\"schema\": \"rootsys/9\", \"groups\": []}"), SchemaError);
    EXPECT_THROW(load_group_catalog_text("not json"), SchemaError);
    const char* bad_type = R"({"schema": "rootsys/1", "groups": [{"label": "X", "cartan_type": "F4",
        "real_form": "compact", "compact": true, "q": 0, "component_group": [{"label": "1"}],
        "members": ["pi"], "levis": []}]})";
    EXPECT_THROW(load_group_catalog_text(bad_type), Error);
}
