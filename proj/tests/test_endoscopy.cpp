#include <gtest/gtest.h>

#include <json.hpp>

#include "stf/endoscopy.hpp"
#include "stf/errors.hpp"

using namespace stf;

namespace {

struct Shipped {
    GroupCatalog groups = load_group_catalog(std::string(STF_DATA_DIR) + "/groups.json");
    PacketCatalog packets = load_packet_catalog(std::string(STF_DATA_DIR) + "/packets.json");
    std::string text = read_file(std::string(STF_DATA_DIR) + "/endo.json");
    EndoCatalog endo = load_endo_catalog_text(text, &groups, &packets);
};

const Shipped& shipped() {
    static Shipped s;
    return s;
}

// the shipped catalog with one edit applied to its JSON
EndoCatalog edited(const std::function<void(nlohmann::json&)>& edit) {
    auto j = nlohmann::json::parse(shipped().text);
    edit(j);
    return load_endo_catalog_text(j.dump(), &shipped().groups, &shipped().packets);
}

StableClass elliptic_class() {
    StableClass c{"e4", "G", true, true, {{"e4", make_point({frac(1, 8)}), Cyc(1)}}};
    return c;
}

}  // namespace

TEST(Endoscopy, IotaValues) {
    const EndoCatalog& c = shipped().endo;
    EXPECT_EQ(iota(c, c.datum("SL2/SL2")), Q(1));
    EXPECT_EQ(iota(c, c.datum("SL2/TE_i")), frac(1, 4));
    EXPECT_EQ(iota(c, c.datum("SL2/TE_w")), frac(1, 4));
    EndoGroup g{"G", {}, true, Q(1), 1, 1, 1};
    EXPECT_EQ(iota(g, g, 3), frac(1, 3));
    EndoGroup h{"H", {}, true, Q(4), 2, 4, 2};
    EXPECT_EQ(iota(h, g, 2), Q(2));
}

TEST(Endoscopy, CoefficientRelationOnLinks) {
    const Shipped& s = shipped();
    EXPECT_EQ(verify_endo_links(s.endo, s.packets), static_cast<int>(s.endo.links.size()));
    auto r = check_coefficient_relation(s.endo.group("SL2"), s.endo.group("TE_i"), s.packets.packet("SL2_ds"),
                                        s.packets.packet("TE_i_chi"));
    EXPECT_EQ(r.lhs, Q(2));
    EXPECT_EQ(r.rhs, Q(2));
    EXPECT_EQ(stable_spectral_coefficient(s.packets.packet("SL2_ds")), frac(1, 2));
    EXPECT_EQ(stable_spectral_coefficient(s.packets.packet("TE_i_chi")), Q(1));
}

TEST(Endoscopy, CorruptedCenterOrder) {
    const Shipped& s = shipped();
    EndoGroup te = s.endo.group("TE_i");
    te.center_order = 3;
    EXPECT_THROW(check_coefficient_relation(s.endo.group("SL2"), te, s.packets.packet("SL2_ds"),
                                            s.packets.packet("TE_i_chi")),
                 CoefficientRelationFailure);
    EndoGroup missing = s.endo.group("TE_i");
    missing.center_order = 0;
    EXPECT_THROW(check_coefficient_relation(s.endo.group("SL2"), missing, s.packets.packet("SL2_ds"),
                                            s.packets.packet("TE_i_chi")),
                 IncompleteCatalog);
}

TEST(Endoscopy, StableCoefficient) {
    const EndoCatalog& c = shipped().endo;
    EXPECT_EQ(stable_b_coefficient(c.group("TE_i"), elliptic_class()), Q(2));
    StableClass split = elliptic_class();
    split.elliptic = false;
    EXPECT_EQ(stable_b_coefficient(c.group("SL2"), split), Q(0));
    StableClass unip = elliptic_class();
    unip.semisimple = false;
    EXPECT_THROW(stable_b_coefficient(c.group("SL2"), unip), RequiresSemisimple);
    CoefficientBundle b = coefficients(c, c.datum("SL2/TE_i"), shipped().packets.packet("TE_i_chi"), "TE_i",
                                       elliptic_class());
    EXPECT_EQ(b.iota, frac(1, 4));
    EXPECT_EQ(b.s_phi_prime_order, 1);
    EXPECT_EQ(b.stable_b, Q(2));
}

TEST(Endoscopy, CanonicalRoundTrip) {
    const Shipped& s = shipped();
    std::string once = serialize_endo_catalog(s.endo);
    EndoCatalog again = load_endo_catalog_text(once, &s.groups, &s.packets);
    EXPECT_EQ(serialize_endo_catalog(again), once);
    EXPECT_EQ(again.data.size(), s.endo.data.size());
    EXPECT_EQ(s.endo.data_for("SL2").size(), 3u);
    EXPECT_EQ(s.endo.group("SU21_K").components.size(), 2u);
}

TEST(Endoscopy, SchemaViolations) {
    EXPECT_THROW(edited([](auto& j) { j["groups"][0]["tamagawa"] = 0; }), SchemaError);
    EXPECT_THROW(edited([](auto& j) { j["groups"][2]["pi0_center_order"] = 4; }), SchemaError);
    EXPECT_THROW(edited([](auto& j) { j["schema"] = "endo/0"; }), SchemaError);
    EXPECT_THROW(edited([](auto& j) { j["data"][0]["levis"][1]["endo"] = "GL9"; }), BrokenReference);
    EXPECT_THROW(edited([](auto& j) { j["data"][0]["levis"][1]["levi"] = "M7"; }), UnknownLevi);
    EXPECT_THROW(edited([](auto& j) { j["links"][0]["packet"] = "missing"; }), BrokenReference);
    EXPECT_THROW(edited([](auto& j) { j["links"][1]["s"] = 2; }), Error);
    EXPECT_THROW(edited([](auto& j) { j["data"][0]["mu_shift"] = {0, 0}; }), Error);
}
