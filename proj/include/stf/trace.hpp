#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "stf/characters.hpp"
#include "stf/endoscopy.hpp"
#include "stf/packets.hpp"
#include "stf/rootsys.hpp"

namespace stf {

// volume constants paired with the character normalization of Phi_M; route B
// of the stable distribution carries vol / upsilon, route A does not
struct NormalizationProfile {
    std::string label = "unit";
    Q vol = 1;
    Q upsilon = 1;
};

struct ArithClass {
    StableClass cls;
    Q orbital;  // (h_M)^{M'}(delta)
};

// classes of one Levi M' of one endoscopic datum G'
struct ArithBlock {
    std::string datum;
    std::string levi;
    std::vector<ArithClass> classes;
};

struct InvariantClass {
    std::string levi;
    std::string label;
    TorusPoint gamma;
    Q coefficient;  // a^M(gamma)
};

struct ArithmeticData {
    std::string label;
    std::string group;   // endoscopy-catalog group record
    std::string packet;  // discrete-series packet of the weights
    int level = 1;
    NormalizationProfile profile;
    std::vector<ArithBlock> blocks;
    std::vector<InvariantClass> invariant;
    std::vector<std::string> rejected;  // classes flagged non-semisimple or non-elliptic
    std::string fingerprint;
};

ArithmeticData load_arith_data_text(const std::string& text, const std::string& where = "arith");
ArithmeticData load_arith_data(const std::string& path);

struct Catalogs {
    std::string dir;
    GroupCatalog groups;
    PacketCatalog packets;
    EndoCatalog endo;
    std::vector<std::pair<std::string, std::string>> fingerprints;  // file, hash

    ArithmeticData arith(const std::string& group, int level) const;
};

Catalogs load_catalogs(const std::string& dir);
std::string default_catalog_dir();
std::string fingerprint(const std::string& text);  // 64-bit FNV-1a, hex

struct GeometricTerm {
    std::string endo;
    std::string levi;
    std::string cls;
    int sign = 1;  // (-1)^{dim A_M' / A_G'}
    Q weyl_quotient;
    Q iota;
    Value coefficient;  // P_mu(M') or F_mu(M')
    Value sphi;         // S Phi_M'(phi', delta)
    Q orbital;
    Value product;
    Value route_b;  // S Phi through the averaged-character route
};

struct Report {
    std::string quantity;
    std::string subject;
    Value total;
    std::optional<long> integer;
    std::vector<GeometricTerm> terms;
    std::vector<std::string> filtered;
    std::vector<std::pair<std::string, std::string>> fingerprints;
    double tolerance = 1e-9;
    bool exact = true;
};

struct TraceOptions {
    double tolerance = 1e-9;
    int jobs = 1;
};

// mu = lambda - rho must be regular
void require_regular(const HCParameter& p);

// f'(phi') for the pseudo-coefficient of pi_R transferred to G': supported on phi'_mu
struct PseudoCoefficient {
    std::string group;
    QVec lambda;
    Cyc value;
    Cyc trace(const std::string& g, const QVec& l) const { return g == group && l == lambda ? value : Cyc(0); }
};

// the parameter of G' matched with p: lambda' = lambda - lambda*
HCParameter endoscopic_parameter(const HCParameter& p, const EndoDatum& d, const GroupEntry& g_prime);
PseudoCoefficient pseudo_coefficient_transfer(const PacketDatum& packet, int member, int s,
                                              const HCParameter& p_prime);
// S^{G'}(phi'_mu) Delta(phi'_mu, pi_R) tau(M')
Cyc p_mu(const HCParameter& p, const PacketDatum& packet_prime, const PacketDatum& packet, int member, int s,
         const EndoGroup& m_prime);
// (-1)^{d + q(G')} tau(M') S^{G'}(phi') sum_pi Delta(phi', pi)
Cyc f_mu(const HCParameter& p, const PacketDatum& packet_prime, const PacketDatum& packet, int s, int d, int q_prime,
         const EndoGroup& m_prime);

struct StableDistribution {
    Value route_a;  // per-member characters
    Value route_b;  // averaged characters through C-bar
    Value value;
    StableCharacterValue sphi;
};

// S^{G'}_{M'}(delta, f') both ways; RouteMismatch when they disagree
StableDistribution stable_distribution_SGM(const HCParameter& p_prime, const std::string& levi, const StableClass& delta,
                                           const PseudoCoefficient& f, const Q& s_coefficient,
                                           const NormalizationProfile& profile, double tolerance = 1e-9);

// weight-k discrete series of an SL(2)-type packet
Report tr_Rdisc(const Catalogs& c, const ArithmeticData& a, int weight, const std::string& member,
                const TraceOptions& opt = {});
Report multiplicity(const Catalogs& c, const ArithmeticData& a, int weight, const std::string& member,
                    const TraceOptions& opt = {});

struct PacketSumReport {
    Value packet_sum;
    Value invariant_side;
    std::vector<Report> members;
};
PacketSumReport packet_sum_crosscheck(const Catalogs& c, const ArithmeticData& a, int weight,
                                      const TraceOptions& opt = {});
// invariant-side evaluation of I(f_mu), f_mu summed over the packet
Value invariant_side(const Catalogs& c, const ArithmeticData& a, int weight);

Report lefschetz(const Catalogs& c, const ArithmeticData& a, int weight, const TraceOptions& opt = {});

}  // namespace stf
