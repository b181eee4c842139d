#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "stf/cyclotomic.hpp"
#include "stf/errors.hpp"
#include "stf/rational.hpp"

namespace stf {

// Subsets of the root list of one datum (at most 12 roots in the catalog).
using RootMask = std::uint64_t;

struct WeylElement {
    QMat matrix;            // acts on column vectors in simple-root coordinates
    std::vector<int> word;  // reduced word in the simple reflections
    int sign = 1;           // determinant
    std::vector<int> perm;  // induced permutation of root indices
};

struct PositiveSystem {
    std::vector<int> positive_roots;  // sorted root indices
    QVec chamber_point;               // B(chamber_point, a) > 0 on positive roots
    RootMask mask = 0;
};

// Vectors live in V = span of the simple roots, written in simple-root
// coordinates; B is the invariant form. Coroots are identified with elements
// of V through B, so <v, a^vee> = B(v, a^vee).
struct RootDatum {
    std::string cartan_type;
    int rank = 0;
    QMat form;
    std::vector<QVec> roots;
    std::vector<QVec> coroots;
    std::vector<int> simple_roots;
    QMat weight_lattice_basis;  // rows are the fundamental weights
    std::vector<int> negative;  // index of -a
    std::vector<WeylElement> weyl;
    std::vector<PositiveSystem> positive;
    RootMask base_positive = 0;
    RootMask all_roots = 0;

    Q pair(const QVec& a, const QVec& b) const;     // B(a, b)
    Q coroot_pairing(const QVec& v, int root) const;  // <v, a^vee>
    int root_index(const QVec& v) const;              // -1 if not a root
    QVec reflect(int root, const QVec& v) const;
    QVec rho() const;
    std::vector<int> reflection_perm(int root) const;
    int positive_system_index(RootMask m) const;  // -1 if not one of ours

private:
    friend RootDatum build_root_datum_impl(const std::string&);
    std::map<QVec, int, QVecLess> index_;
};

using RootDatumPtr = std::shared_ptr<const RootDatum>;

std::string canonical_cartan_type(const std::string& type);
RootDatumPtr build_root_datum(const std::string& cartan_type);
const std::vector<WeylElement>& weyl_group(const RootDatum& d);
bool contains_minus_one(const RootDatum& d);
const std::vector<PositiveSystem>& positive_systems(const RootDatum& d);

// H = 2 pi i (turns + drift) + real, in simple-root coordinates;
// gamma = z exp(H). drift is a floating offset used for limits and quadrature.
struct TorusPoint {
    std::string component = "1";
    QVec turns;
    std::vector<double> drift;  // empty means zero
    std::vector<double> real;   // empty means zero

    bool exact() const;
    double real_at(size_t i) const { return i < real.size() ? real[i] : 0.0; }
    double drift_at(size_t i) const { return i < drift.size() ? drift[i] : 0.0; }
};

TorusPoint make_point(const QVec& turns, const std::string& component = "1");

// a(H) = 2 pi i (turns + drift) + real
struct RootValue {
    Q turns;
    double drift = 0.0;
    double real = 0.0;
    bool exact() const { return drift == 0.0 && real == 0.0; }
    // e^{a(H)} = 1
    bool trivial_exponential() const { return exact() && turns.get_den() == 1; }
};
RootValue root_value(const RootDatum& d, int root, const TorusPoint& h);
RootValue vector_value(const RootDatum& d, const QVec& v, const TorusPoint& h);
// exp(H) regular: e^{a(H)} != 1 for every root
bool is_regular(const RootDatum& d, const TorusPoint& h);
bool is_regular_for(const RootDatum& d, RootMask roots, const TorusPoint& h);
TorusPoint act(const WeylElement& w, const TorusPoint& h);
// h + t * (direction_turns as drift, direction_real as real part)
TorusPoint displaced(const TorusPoint& h, double t, const QVec& direction_turns, const QVec& direction_real);

// e^{2 pi i turns + real}; exact iff real == 0
Value exp_value(const Q& turns, double real);
// e^{v}, exact iff v.exact()
Value exp_value(const RootValue& v);

// prod over the positive system of (e^{a(H)/2} - e^{-a(H)/2})
Value weyl_discriminant(const RootDatum& d, const PositiveSystem& p, const TorusPoint& h);
Value weyl_discriminant(const RootDatum& d, RootMask positive, const TorusPoint& h);

// ---- group catalog (schema rootsys/1) ----

struct ComponentElement {
    std::string label;
    bool has_log = false;
    QVec log_turns;  // z = exp(2 pi i log_turns) when has_log
};

struct LeviEntry {
    std::string label;
    bool cuspidal = true;
    RootMask m_roots = 0;     // roots of (M, T)
    RootMask real_roots = 0;  // R
    QMat y;                   // b-coordinates -> t-coordinates
    QVec positive_chamber;    // fixes the positive system of (G, T)
    int dim_a = 0;            // dim A_M / A_G
    int weyl_order = 1;       // |W_0^M|
    std::vector<std::vector<int>> invariance_words;
    std::string member_characters;  // "compact_cartan", "sl2_split", or ""
    std::string measure = "unit";
};

struct GroupEntry {
    std::string label;
    std::string cartan_type;
    std::string real_form;
    bool compact = false;
    int q = 0;
    std::string character_lattice = "weight";
    std::vector<ComponentElement> components;
    RootMask compact_roots = 0;  // compact imaginary roots; W_K is generated by their reflections
    std::vector<std::string> member_labels;
    std::vector<LeviEntry> levis;
    RootDatumPtr datum;

    const LeviEntry& levi(const std::string& label) const;  // UnknownLevi
    const ComponentElement& component(const std::string& label) const;
    // right-coset representatives of W_K in W(G,B), as Weyl indices
    std::vector<int> member_cosets() const;
    std::vector<int> compact_weyl() const;  // Weyl indices of W_K
};

struct GroupCatalog {
    std::vector<GroupEntry> groups;
    const GroupEntry& group(const std::string& label) const;
    bool has(const std::string& label) const;
};

GroupCatalog load_group_catalog_text(const std::string& text);
GroupCatalog load_group_catalog(const std::string& path);

std::string read_file(const std::string& path);

}  // namespace stf
