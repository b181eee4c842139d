#pragma once

#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "stf/rootsys.hpp"

namespace stf {

// A root subsystem S of one ambient datum together with a pair of positive
// systems (for Q = S^vee and for S), all as masks over the ambient roots.
struct CbarKey {
    RootMask system = 0;
    RootMask q_plus = 0;
    RootMask r_plus = 0;
    auto tie() const { return std::tie(system, q_plus, r_plus); }
    bool operator<(const CbarKey& o) const { return tie() < o.tie(); }
    bool operator==(const CbarKey& o) const { return tie() == o.tie(); }
};

struct AxiomReport {
    bool ok = true;
    long invariance_checks = 0;
    long support_checks = 0;
    long reflection_checks = 0;
    long non_wall_reflections = 0;  // reflections through no wall of Q+ or R+
    long empty_checks = 0;
    bool values_even_or_one = true;  // descriptive only
    std::string first_failure;
};

struct CbarTable {
    std::string cartan_type;
    RootDatumPtr datum;
    // every (S, Q+, R+) reachable from the full system through orthogonal
    // subsystems, S = all roots included
    std::map<CbarKey, long> values;
    AxiomReport report;

    long at(RootMask q_plus, RootMask r_plus) const;  // full system
};

// Recursive evaluator usable on any subsystem of a datum whose Weyl group
// contains -1 (every subsystem reached from a supported type has this).
class CbarEngine {
public:
    explicit CbarEngine(RootDatumPtr datum, bool require_minus_one = true);
    long value(RootMask system, RootMask q_plus, RootMask r_plus);
    const RootDatum& datum() const { return *d_; }

private:
    RootDatumPtr d_;
    std::map<CbarKey, long> memo_;
};

// helpers shared by the engine, the solver and the verifier
RootMask orthogonal_subsystem(const RootDatum& d, RootMask system, int root);
std::vector<int> simple_roots_of(const RootDatum& d, RootMask positive);
// roots (both signs) whose reflection crosses a wall of the Q+ or the R+
// chamber; axiom (3) is imposed for these reflections
RootMask wall_roots(const RootDatum& d, RootMask q_plus, RootMask r_plus);
// every v in the Q+ chamber is negative on every X in the R+ chamber
bool cbar_support_condition(const RootDatum& d, RootMask system, RootMask q_plus, RootMask r_plus);
std::vector<RootMask> subsystem_positive_systems(const RootDatum& d, RootMask system);
std::vector<std::vector<int>> subsystem_weyl_perms(const RootDatum& d, RootMask system);
RootMask apply_perm(const std::vector<int>& perm, RootMask m);
std::vector<RootMask> orthogonal_closure(const RootDatum& d);

// C-bar of an arbitrary subsystem through a process-wide engine per datum;
// thread safe. Throws MinusOneRequired when W(system) lacks -1.
long cbar_value(const RootDatumPtr& d, RootMask system, RootMask q_plus, RootMask r_plus);
bool subsystem_contains_minus_one(const RootDatum& d, RootMask system);

CbarTable build_cbar_table(const RootDatum& d);
CbarTable build_cbar_table(RootDatumPtr d);
CbarTable solve_cbar_by_axioms(RootDatumPtr d);
AxiomReport verify_cbar_axioms(const CbarTable& t);
long cbar(const CbarTable& t, RootMask q_plus, RootMask r_plus);

// disk cache keyed by (schema, cartan type); cache_dir empty disables it
CbarTable load_or_build_cbar_table(RootDatumPtr d, const std::string& cache_dir);
std::string cbar_table_json(const CbarTable& t);
std::string default_cache_dir();  // $STF_CACHE_DIR or empty

}  // namespace stf
