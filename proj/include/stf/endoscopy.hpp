#pragma once

#include <string>
#include <vector>

#include "stf/characters.hpp"
#include "stf/packets.hpp"
#include "stf/rational.hpp"
#include "stf/rootsys.hpp"

namespace stf {

// numeric invariants of a group (or K-group) entering the coefficients;
// components name group-catalog entries, empty for Levi-only records
struct EndoGroup {
    std::string label;
    std::vector<std::string> components;
    bool quasi_split = true;
    Q tamagawa = 1;
    long center_order = 0;        // |Z(G^)^Gamma|, 0 when infinite or not authored
    long pi0_center_order = 0;    // |pi_0(Z(G^)^Gamma)|, 0 when not authored
    long ker1_order = 0;          // |ker^1(F, Z(G^))|, 0 when not authored
};

struct EndoLevi {
    std::string endo;  // EndoGroup label of M'
    std::string levi;  // Levi label inside the group-catalog entry of G'
};

// one elliptic endoscopic datum G' of G
struct EndoDatum {
    std::string label;
    std::string group;       // EndoGroup label of G
    std::string endoscopic;  // EndoGroup label of G'
    long out_order = 1;
    std::vector<EndoLevi> levis;
    QVec mu_shift;
    QVec lambda_shift;
};

struct EndoLink {
    std::string datum;
    std::string packet;
    std::string packet_prime;
    int s = 0;  // element of S_phi attached to G'
};

struct EndoCatalog {
    std::vector<EndoGroup> groups;
    std::vector<EndoDatum> data;
    std::vector<EndoLink> links;

    const EndoGroup& group(const std::string& label) const;
    const EndoDatum& datum(const std::string& label) const;
    std::vector<const EndoDatum*> data_for(const std::string& group) const;
};

struct CoefficientBundle {
    Q iota;
    long s_phi_prime_order = 1;
    Q stable_b;
};

struct CoefficientRelationReport {
    Q lhs;  // |S_phi| / |S_phi'|
    Q rhs;  // |Z(G'^)^Gamma| / |Z(G^)^Gamma|
};

// cross-references into the group and packet catalogs are checked when given
EndoCatalog load_endo_catalog_text(const std::string& text, const GroupCatalog* groups = nullptr,
                                   const PacketCatalog* packets = nullptr, const std::string& where = "endo");
EndoCatalog load_endo_catalog(const std::string& path, const GroupCatalog* groups = nullptr,
                              const PacketCatalog* packets = nullptr);
// canonical text: sorted keys, two-space indent
std::string serialize_endo_catalog(const EndoCatalog& c);

Q iota(const EndoGroup& g, const EndoGroup& g_prime, long out_order);
Q iota(const EndoCatalog& c, const EndoDatum& d);
Q stable_spectral_coefficient(const PacketDatum& packet_prime);
CoefficientRelationReport check_coefficient_relation(const EndoGroup& g, const EndoGroup& g_prime,
                                                     const PacketDatum& packet, const PacketDatum& packet_prime);
// b(delta) = tau(M') for a semisimple class elliptic in M'
Q stable_b_coefficient(const EndoGroup& m_prime, const StableClass& delta);
CoefficientBundle coefficients(const EndoCatalog& c, const EndoDatum& d, const PacketDatum& packet_prime,
                               const std::string& m_prime, const StableClass& delta);

// every link of the catalog through check_coefficient_relation
int verify_endo_links(const EndoCatalog& c, const PacketCatalog& packets);

}  // namespace stf
