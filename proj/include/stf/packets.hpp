#pragma once

#include <random>
#include <string>
#include <vector>

#include "stf/cyclotomic.hpp"
#include "stf/rational.hpp"

namespace stf {

// S_phi = F_2^rank with elements as bitmasks; E = E(T_M) a subgroup;
// R_phi = S_phi / E. Every character of S_phi is a packet member (the
// tempered packet of G over phi_M), grouped by its restriction to E into the
// members of Pi_{phi_M}. Within a group the first listed member is the base
// extension and the others are its twists by characters of R_phi.
struct PacketMember {
    std::string label;
    int component = 0;       // index into PacketDatum::components (K-groups)
    std::vector<int> pairing;  // <s, pi> for s = 0 .. |S|-1, values +-1
};

struct VirtualCharacterIndex {
    std::string levi;
    int pi = 0;  // index of the member of Pi_{phi_M} (an E-class)
    int r = 0;   // index into r_reps
};

struct PacketDatum {
    std::string label;
    std::string group;
    std::string levi = "G";
    std::vector<std::string> components;
    int rank = 0;
    std::vector<PacketMember> members;
    std::vector<Cyc> rho;  // rho(Delta, s), unit modulus

    std::vector<bool> in_e;
    std::vector<unsigned> r_reps;   // smallest element of each coset of E
    std::vector<int> coset_of;      // s -> index into r_reps
    std::vector<int> member_class;  // member -> index of its E-class
    std::vector<int> class_base;    // E-class -> base member

    int s_order() const { return 1 << rank; }
    int e_order() const;
    int r_order() const { return static_cast<int>(r_reps.size()); }
    int class_count() const { return static_cast<int>(class_base.size()); }
    std::vector<VirtualCharacterIndex> taus() const;
    int member_index(const std::string& label) const;
    // chi(r) for the R-character twisting the base of the member's class
    int twist_value(int member, int r) const;
};

struct SpectralCoefficient {
    Q d_tau;
    long r_centralizer_order = 1;
    Q value;
};

// linear action on a_M / a_G. general mode also uses the coset W_pi(r) with
// the signs eps_pi(w) and |W^0_pi|
struct AMAction {
    QMat r;
    std::vector<std::pair<QMat, int>> w_pi_r;
    long w0_order = 1;
};

struct AdjointReport {
    long checks_21 = 0;
    long checks_22 = 0;
    long scaling_checks = 0;
};

// members given in any order; e_generators span E. Validates the exact
// sequence, the character property of every row and completeness.
PacketDatum build_packet(std::string label, int rank, const std::vector<unsigned>& e_generators,
                         std::vector<PacketMember> members, std::vector<Cyc> rho = {});

// Delta(phi^s, pi) = rho(s) <s, pi>; indices outside the packet give 0
Cyc delta_phi_pi(const PacketDatum& p, int s, int member);
Cyc delta_pi_phi(const PacketDatum& p, int member, int s);
Cyc delta_tau_phi(const PacketDatum& p, const VirtualCharacterIndex& tau, int s);
Cyc delta_phi_tau(const PacketDatum& p, int s, const VirtualCharacterIndex& tau);

// both products of the two transfer matrices and the scaling
// identity; throws AdjointRelationFailure naming the offending pair
AdjointReport verify_adjoint_relations(const PacketDatum& p);

SpectralCoefficient spectral_coefficient(const PacketDatum& p, const VirtualCharacterIndex& tau, bool cuspidal,
                                         const AMAction& action);

// random packet over F_2^rank: random E, random member order and components,
// rho drawn from the fourth roots of unity
PacketDatum random_packet(int rank, std::mt19937_64& rng);

struct PacketCatalog {
    std::vector<PacketDatum> packets;
    const PacketDatum& packet(const std::string& label) const;
    bool has(const std::string& label) const;
};

PacketCatalog load_packet_catalog_text(const std::string& text, const std::string& where = "packets");
PacketCatalog load_packet_catalog(const std::string& path);

}  // namespace stf
