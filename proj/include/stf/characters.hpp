#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "stf/cbar.hpp"
#include "stf/rootsys.hpp"

namespace stf {

// Harish-Chandra pair (zeta, lambda). lambda is in simple-root coordinates of
// the group's datum; zeta is read off lambda - rho on components with a
// logarithm and taken from zeta_values otherwise.
struct HCParameter {
    GroupEntry group;
    QVec lambda;
    std::map<std::string, Cyc> zeta_values;
    std::string central_character_label = "1";

    Cyc zeta(const std::string& component) const;
    QVec infinitesimal_character() const { return lambda; }
};

// validates regularity and lambda - rho in the character lattice
HCParameter make_hc_parameter(const GroupEntry& group, const QVec& lambda,
                              std::map<std::string, Cyc> zeta_values = {});
// SL(2)-type entries: holomorphic weight k <-> lambda = (k - 1) * fundamental weight
HCParameter weight_parameter(const GroupEntry& group, int k);

using CharacterValue = Value;

// Delta_B(H)^{-1} zeta(z) sum_s eps(s) e^{(s lambda)(H)}
CharacterValue stable_ds_character(const HCParameter& p, const TorusPoint& gamma);

// Phi_M(pi, gamma) = |D^G_M(gamma)|^{1/2} Theta_pi(gamma) for one packet member
CharacterValue member_phiM(const HCParameter& p, const std::string& levi, int member, const TorusPoint& gamma);

// sum over the packet of member_phiM; continuous extension at singular points
CharacterValue member_sum_phiM(const HCParameter& p, const std::string& levi, const TorusPoint& gamma);

// (-1)^{|R+_H cap -R+|}
int epsilon_R(const RootDatum& d, RootMask real_roots, RootMask r_plus, const TorusPoint& h);

// Averaged character through the C-bar formula. A table for the full datum
// may be passed; other real-root subsystems use a shared engine.
CharacterValue averaged_character_phiM(const HCParameter& p, const std::string& levi, const TorusPoint& gamma,
                                       const CbarTable* table = nullptr);
// true when gamma lies in Z(B) exp t(R) for the Levi (real roots real, M-roots imaginary)
bool in_levi_locus(const GroupEntry& g, const LeviEntry& m, const TorusPoint& gamma);

// Continuous extension at a singular elliptic point. Levi "" means M = G.
CharacterValue singular_character_limit(const HCParameter& p, const TorusPoint& gamma, const std::string& levi = "");
// numeric limit of the regular values along gamma exp(h D), h -> 0+, by
// Richardson extrapolation over halving steps
CharacterValue richardson_limit(const std::function<Value(const TorusPoint&)>& f, const TorusPoint& gamma,
                                const QVec& direction_turns, const QVec& direction_real, double h0 = 0.25,
                                int levels = 7);
CharacterValue richardson_character_limit(const HCParameter& p, const TorusPoint& gamma,
                                          const std::string& levi = "");
// Weyl dimension polynomial prod <lambda, a^vee> / <rho, a^vee>
Q weyl_dimension(const RootDatum& d, const QVec& lambda);

// one fiber element of a stable class: a conjugacy class gamma with its
// unit-modulus transfer factor Delta(delta, gamma)
struct FiberElement {
    std::string label;
    TorusPoint gamma;
    Cyc transfer = Cyc(1);
};

struct StableClass {
    std::string label;
    std::string levi;
    bool semisimple = true;
    bool elliptic = true;
    std::vector<FiberElement> fiber;
};

struct Contribution {
    int member = 0;  // -1: the packet sum at a singular point
    int fiber_index = 0;
    Cyc transfer;
    Value term;
};

struct StableCharacterValue {
    Value value;
    std::vector<Contribution> contributions;
};

// sum over packet members and the fiber of conj(Phi_M(pi, gamma)) Delta(delta, gamma)
StableCharacterValue stable_averaged_SPhi(const HCParameter& p, const StableClass& delta, const std::string& levi);

// Class function on SU(2): f(theta) for the element with eigenvalues e^{+-i theta}
struct QuadratureOptions {
    int nodes = 256;
    double normalization_scale = 1.0;  // != 1 injects a deliberate mismatch
};

struct WeylIntegrationResult {
    double group_side = 0;  // Haar quadrature over the group
    double torus_side = 0;  // Weyl integral formula on the torus
    double residual = 0;
};

// Theta(pi, f) = integral over G of f Theta_pi, both ways
WeylIntegrationResult weyl_integration_check(const HCParameter& p, const std::function<double(double)>& f,
                                             const QuadratureOptions& opt = {});

}  // namespace stf
