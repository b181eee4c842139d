#include <gtest/gtest.h>

#include <json.hpp>

#include "stf/errors.hpp"
#include "stf/trace.hpp"

using namespace stf;

namespace {

const Catalogs& cats() {
    static Catalogs c = load_catalogs(STF_DATA_DIR);
    return c;
}

std::string arith_text() { return read_file(std::string(STF_DATA_DIR) + "/arith_SL2_level1.json"); }

ArithmeticData arith_edited(const std::function<void(nlohmann::json&)>& edit) {
    auto j = nlohmann::json::parse(arith_text());
    edit(j);
    return load_arith_data_text(j.dump());
}

// dimension of weight-k cusp forms for the full modular group
long cusp_dimension(int k) {
    if (k < 12 || k % 2) return 0;
    return k % 12 == 2 ? k / 12 - 1 : k / 12;
}

long integer_of(const Value& v) {
    EXPECT_TRUE(v.is_exact());
    EXPECT_TRUE(v.exact()->is_rational());
    Q q = v.exact()->rational();
    EXPECT_EQ(q.get_den(), 1);
    return q.get_num().get_si();
}

}  // namespace

TEST(Trace, MultiplicityMatchesCuspDimension) {
    ArithmeticData a = cats().arith("SL2", 1);
    for (int k : {12, 14, 24}) {
        for (const char* m : {"D+", "D-"}) {
            Report r = multiplicity(cats(), a, k, m);
            ASSERT_TRUE(r.integer.has_value()) << k;
            EXPECT_EQ(*r.integer, cusp_dimension(k)) << k << " " << m;
            EXPECT_TRUE(r.exact);
            EXPECT_FALSE(r.filtered.empty());
        }
    }
}

TEST(Trace, ParallelTermsAreDeterministic) {
    ArithmeticData a = cats().arith("SL2", 1);
    TraceOptions one, four;
    four.jobs = 4;
    Report r1 = multiplicity(cats(), a, 20, "D+", one);
    Report r4 = multiplicity(cats(), a, 20, "D+", four);
    ASSERT_EQ(r1.terms.size(), r4.terms.size());
    for (size_t i = 0; i < r1.terms.size(); ++i) {
        EXPECT_EQ(r1.terms[i].endo, r4.terms[i].endo);
        EXPECT_EQ(r1.terms[i].cls, r4.terms[i].cls);
        EXPECT_TRUE(r1.terms[i].product.close_to(r4.terms[i].product, 0.0));
    }
    EXPECT_EQ(r1.integer, r4.integer);
}

TEST(Trace, PacketSumAndLefschetz) {
    ArithmeticData a = cats().arith("SL2", 1);
    for (int k : {12, 18, 26}) {
        PacketSumReport ps = packet_sum_crosscheck(cats(), a, k);
        EXPECT_EQ(integer_of(ps.packet_sum), 2 * cusp_dimension(k));
        EXPECT_EQ(integer_of(ps.invariant_side), 2 * cusp_dimension(k));
        EXPECT_EQ(integer_of(invariant_side(cats(), a, k)), 2 * cusp_dimension(k));
        Report l = lefschetz(cats(), a, k);
        EXPECT_EQ(integer_of(l.total), -2 * cusp_dimension(k));
    }
}

TEST(Trace, RegularityRequired) {
    ArithmeticData a = cats().arith("SL2", 1);
    EXPECT_THROW(multiplicity(cats(), a, 2, "D+"), RegularityRequired);
}

TEST(Trace, MissingBlockIsReported) {
    ArithmeticData a = arith_edited([](auto& j) {
        auto& s = j["stable"];
        s.erase(s.begin() + 1);
    });
    try {
        multiplicity(cats(), a, 12, "D+");
        FAIL() << "expected IncompleteArithmeticData";
    } catch (const IncompleteArithmeticData& e) {
        EXPECT_NE(std::string(e.what()).find("SL2/SL2"), std::string::npos);
    }
}

TEST(Trace, CorruptedVolumeIsNotIntegral) {
    ArithmeticData a = arith_edited([](auto& j) { j["stable"][0]["classes"][0]["orbital"] = "-1/13"; });
    EXPECT_THROW(multiplicity(cats(), a, 12, "D+"), NonIntegralMultiplicity);
}

TEST(Trace, UnknownLevelIsInputError) { EXPECT_THROW(cats().arith("SL2", 7), InputError); }

TEST(Trace, ArithSchema) {
    EXPECT_THROW(arith_edited([](auto& j) { j["schema"] = "arith/0"; }), SchemaError);
    ArithmeticData a = cats().arith("SL2", 1);
    EXPECT_EQ(a.profile.vol, Q(1));
    EXPECT_EQ(a.rejected.size(), 1u);
    EXPECT_EQ(a.fingerprint, fingerprint(arith_text()));
}

TEST(Trace, Fingerprint) {
    EXPECT_EQ(fingerprint(""), "cbf29ce484222325");
    EXPECT_EQ(fingerprint("a"), "af63dc4c8601ec8c");
    EXPECT_NE(fingerprint("ab"), fingerprint("ba"));
}

TEST(Trace, SpectralFactors) {
    const Catalogs& c = cats();
    const GroupEntry& sl2 = c.groups.group("SL2");
    HCParameter p = weight_parameter(sl2, 12);
    const PacketDatum& ds = c.packets.packet("SL2_ds");
    const PacketDatum& te = c.packets.packet("TE_i_chi");
    int plus = ds.member_index("D+"), minus = ds.member_index("D-");
    EXPECT_EQ(p_mu(p, ds, ds, plus, 0, c.endo.group("SL2")), Cyc(frac(1, 2)));
    EXPECT_EQ(p_mu(p, te, ds, plus, 1, c.endo.group("TE_i")), Cyc(2));
    EXPECT_EQ(p_mu(p, te, ds, minus, 1, c.endo.group("TE_i")), Cyc(-2));
    EXPECT_EQ(f_mu(p, te, ds, 1, 0, 0, c.endo.group("TE_i")), Cyc(0));
    EXPECT_EQ(f_mu(p, ds, ds, 0, 0, 1, c.endo.group("SL2")), Cyc(-1));
    EXPECT_THROW(pseudo_coefficient_transfer(c.packets.packet("SL2_ps"), 0, 0, p), NotDiscreteSeries);
    PseudoCoefficient f = pseudo_coefficient_transfer(ds, minus, 1, p);
    EXPECT_EQ(f.trace("SL2", p.lambda), Cyc(-1));
    EXPECT_EQ(f.trace("SL2", {frac(3, 2)}), Cyc(0));
}

TEST(Trace, StableDistributionRoutes) {
    const Catalogs& c = cats();
    const GroupEntry& sl2 = c.groups.group("SL2");
    HCParameter p = weight_parameter(sl2, 16);
    PseudoCoefficient f = pseudo_coefficient_transfer(c.packets.packet("SL2_ds"), 0, 0, p);
    ArithmeticData a = c.arith("SL2", 1);
    for (const auto& block : a.blocks) {
        if (block.datum != "SL2/SL2") continue;
        for (const auto& ac : block.classes) {
            StableDistribution sd = stable_distribution_SGM(p, block.levi, ac.cls, f, frac(1, 2), a.profile);
            EXPECT_NEAR(std::abs(sd.route_a.numeric() - sd.route_b.numeric()), 0.0, 1e-9) << ac.cls.label;
        }
    }
    StableClass unip{"u", "G", false, true, {{"u", make_point({Q(0)}), Cyc(1)}}};
    StableDistribution zero = stable_distribution_SGM(p, "G", unip, f, frac(1, 2), a.profile);
    ASSERT_TRUE(zero.value.is_exact());
    EXPECT_TRUE(zero.value.exact()->is_zero());
    NormalizationProfile off = a.profile;
    off.vol = 2;
    StableClass e4{"e4", "G", true, true, {{"e4+", make_point({frac(1, 4)}), Cyc(1)}}};
    EXPECT_THROW(stable_distribution_SGM(p, "G", e4, f, frac(1, 2), off), RouteMismatch);
}
