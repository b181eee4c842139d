#include "stf/characters.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <mutex>

namespace stf {

namespace {

constexpr double kTau = 6.283185307179586476925286766559;

bool has(RootMask m, size_t i) { return m >> i & 1; }

RootMask positive_in(const RootDatum& d, RootMask roots, const QVec& chamber) {
    RootMask r = 0;
    for (size_t i = 0; i < d.roots.size(); ++i)
        if (has(roots, i) && d.pair(chamber, d.roots[i]) > 0) r |= RootMask(1) << i;
    return r;
}

QVec half_sum(const RootDatum& d, RootMask positive) {
    QVec v(d.rank, 0);
    for (size_t i = 0; i < d.roots.size(); ++i)
        if (has(positive, i)) v = v + d.roots[i];
    return Q(1, 2) * v;
}

bool is_full_group(const LeviEntry& m, const RootDatum& d) { return m.m_roots == d.all_roots; }

const LeviEntry* full_levi(const GroupEntry& g) {
    for (const auto& m : g.levis)
        if (is_full_group(m, *g.datum)) return &m;
    return nullptr;
}

Value exp_of(const RootDatum& d, const QVec& v, const TorusPoint& h) { return exp_value(vector_value(d, v, h)); }

void check_dimension(const RootDatum& d, const TorusPoint& h) {
    if (static_cast<int>(h.turns.size()) != d.rank)
        throw InputError("torus point has dimension " + std::to_string(h.turns.size()) + ", expected " +
                         std::to_string(d.rank));
}

}  // namespace

Cyc HCParameter::zeta(const std::string& component) const {
    const ComponentElement& c = group.component(component);
    if (c.has_log) {
        const RootDatum& d = *group.datum;
        return Cyc::exp_turns(d.pair(lambda - d.rho(), c.log_turns));
    }
    auto it = zeta_values.find(component);
    if (it != zeta_values.end()) return it->second;
    if (component == "1") return Cyc(1);
    throw IncompleteCatalog("no value of zeta on component '" + component + "' of " + group.label);
}

HCParameter make_hc_parameter(const GroupEntry& group, const QVec& lambda, std::map<std::string, Cyc> zeta_values) {
    const RootDatum& d = *group.datum;
    if (static_cast<int>(lambda.size()) != d.rank) throw InputError("lambda has the wrong dimension");
    for (size_t i = 0; i < d.roots.size(); ++i)
        if (d.coroot_pairing(lambda, static_cast<int>(i)) == 0)
            throw InputError("lambda " + to_string(lambda) + " is singular");
    QVec shift = lambda - d.rho();
    if (group.character_lattice == "root") {
        for (const auto& x : shift)
            if (x.get_den() != 1) throw InputError("lambda - rho is not in the root lattice");
    } else {
        for (size_t i = 0; i < d.roots.size(); ++i)
            if (d.coroot_pairing(shift, static_cast<int>(i)).get_den() != 1)
                throw InputError("lambda - rho is not in the weight lattice");
    }
    for (const auto& [label, v] : zeta_values) {
        group.component(label);
        if (v * v.conj() != Cyc(1)) throw InputError("zeta(" + label + ") is not of modulus one");
    }
    HCParameter p;
    p.group = group;
    p.lambda = lambda;
    p.zeta_values = std::move(zeta_values);
    return p;
}

HCParameter weight_parameter(const GroupEntry& group, int k) {
    const RootDatum& d = *group.datum;
    if (d.rank != 1 || d.roots.size() != 2) throw InputError(group.label + " is not of type A1");
    return make_hc_parameter(group, Q(k - 1) * d.weight_lattice_basis[0]);
}

CharacterValue stable_ds_character(const HCParameter& p, const TorusPoint& gamma) {
    const RootDatum& d = *p.group.datum;
    check_dimension(d, gamma);
    Value delta = weyl_discriminant(d, d.base_positive, gamma);
    Value sum(0);
    for (const auto& w : d.weyl) {
        Value e = exp_of(d, mat_vec(w.matrix, p.lambda), gamma);
        sum += w.sign > 0 ? e : -e;
    }
    return Value(p.zeta(gamma.component)) * sum / delta;
}

namespace {

CharacterValue compact_member(const HCParameter& p, int member, const TorusPoint& gamma) {
    const GroupEntry& g = p.group;
    const RootDatum& d = *g.datum;
    auto cosets = g.member_cosets();
    if (member < 0 || member >= static_cast<int>(cosets.size()))
        throw InputError("no packet member " + std::to_string(member) + " in " + g.label);
    const WeylElement& w = d.weyl[cosets[member]];
    Value delta = weyl_discriminant(d, d.base_positive, gamma);
    Value sum(0);
    for (int u : g.compact_weyl()) {
        QMat uw = mat_mul(d.weyl[u].matrix, w.matrix);
        int sign = d.weyl[u].sign * w.sign;
        Value e = exp_of(d, mat_vec(uw, p.lambda), gamma);
        sum += sign > 0 ? e : -e;
    }
    Value v = Value(p.zeta(gamma.component)) * sum / delta;
    return g.q % 2 ? -v : v;
}

CharacterValue sl2_split_member(const HCParameter& p, const LeviEntry& m, const TorusPoint& gamma) {
    const RootDatum& d = *p.group.datum;
    if (d.roots.size() != 2) throw IncompleteCatalog("sl2_split characters need an A1 datum");
    if (!in_levi_locus(p.group, m, gamma)) return Value(0);
    RootValue a = root_value(d, 1, gamma);
    Q n = d.coroot_pairing(p.lambda, 1);
    if (n < 0) n = -n;
    double t = std::abs(a.real) / 2;
    if (t == 0.0) return Value(p.zeta(gamma.component));
    return Value(p.zeta(gamma.component)) * Value::numeric(std::exp(-n.get_d() * t));
}

}  // namespace

CharacterValue member_phiM(const HCParameter& p, const std::string& levi, int member, const TorusPoint& gamma) {
    const LeviEntry& m = p.group.levi(levi);
    check_dimension(*p.group.datum, gamma);
    if (member < 0 || member >= static_cast<int>(p.group.member_labels.size()))
        throw InputError("no packet member " + std::to_string(member) + " in " + p.group.label);
    if (m.member_characters == "compact_cartan") {
        if (!is_full_group(m, *p.group.datum)) throw IncompleteCatalog("compact_cartan characters need M = G");
        for (double x : gamma.real)
            if (x != 0.0) return Value(0);
        return compact_member(p, member, gamma);
    }
    if (m.member_characters == "sl2_split") return sl2_split_member(p, m, gamma);
    throw IncompleteCatalog("no per-member characters for Levi " + levi + " of " + p.group.label);
}

int epsilon_R(const RootDatum& d, RootMask real_roots, RootMask r_plus, const TorusPoint& h) {
    int flips = 0;
    for (size_t i = 0; i < d.roots.size(); ++i) {
        if (!has(real_roots, i)) continue;
        double re = root_value(d, static_cast<int>(i), h).real;
        if (re == 0.0) throw SingularPoint("real root " + to_string(d.roots[i]) + " vanishes on H");
        if (re > 0 && !has(r_plus, i)) ++flips;
    }
    return flips % 2 ? -1 : 1;
}

bool in_levi_locus(const GroupEntry& g, const LeviEntry& m, const TorusPoint& gamma) {
    const RootDatum& d = *g.datum;
    for (size_t i = 0; i < d.roots.size(); ++i) {
        RootValue v = root_value(d, static_cast<int>(i), gamma);
        if (has(m.real_roots, i) && (v.turns != 0 || v.drift != 0.0)) return false;
        if (has(m.m_roots, i) && v.real != 0.0) return false;
    }
    return true;
}

namespace {

// boundary = true evaluates the one-sided limit from the R+ chamber at a point
// where only real roots vanish
CharacterValue averaged_core(const HCParameter& p, const LeviEntry& m, const TorusPoint& gamma,
                             const CbarTable* table, bool boundary) {
    const GroupEntry& g = p.group;
    const RootDatum& d = *g.datum;
    RootMask real = m.real_roots;
    RootMask r_plus = positive_in(d, real, m.positive_chamber);
    RootMask pm = positive_in(d, m.m_roots, m.positive_chamber);
    RootMask r_h = 0;
    int eps = 1;
    if (boundary) {
        r_h = r_plus;
    } else {
        for (size_t i = 0; i < d.roots.size(); ++i)
            if (has(real, i) && root_value(d, static_cast<int>(i), gamma).real > 0) r_h |= RootMask(1) << i;
        eps = epsilon_R(d, real, r_plus, gamma);
    }

    Value sum(0);
    for (const auto& w : d.weyl) {
        QVec v = mat_vec(m.y, mat_vec(w.matrix, p.lambda));
        RootMask q_plus = 0;
        for (size_t i = 0; i < d.roots.size(); ++i)
            if (has(real, i) && d.pair(v, d.roots[i]) > 0) q_plus |= RootMask(1) << i;
        long c = (table && real == d.all_roots) ? table->at(q_plus, r_h) : cbar_value(g.datum, real, q_plus, r_h);
        if (c == 0) continue;
        sum += Value(Q(c * w.sign)) * exp_of(d, v, gamma);
    }
    Value delta = weyl_discriminant(d, pm, gamma);
    Value out = Value(p.zeta(gamma.component)) * sum / delta;
    return eps < 0 ? -out : out;
}

}  // namespace

CharacterValue averaged_character_phiM(const HCParameter& p, const std::string& levi, const TorusPoint& gamma,
                                       const CbarTable* table) {
    const GroupEntry& g = p.group;
    const RootDatum& d = *g.datum;
    const LeviEntry& m = g.levi(levi);
    check_dimension(d, gamma);
    if (!m.cuspidal) return Value(0);
    if (!in_levi_locus(g, m, gamma)) return Value(0);
    if (!is_regular(d, gamma)) throw SingularPoint("gamma is singular in T(R)");
    return averaged_core(p, m, gamma, table, false);
}

Q weyl_dimension(const RootDatum& d, const QVec& lambda) {
    QVec rho = d.rho();
    Q r = 1;
    for (size_t i = 0; i < d.roots.size(); ++i)
        if (has(d.base_positive, i))
            r *= d.coroot_pairing(lambda, static_cast<int>(i)) / d.coroot_pairing(rho, static_cast<int>(i));
    return r;
}

CharacterValue richardson_limit(const std::function<Value(const TorusPoint&)>& f, const TorusPoint& gamma,
                                const QVec& direction_turns, const QVec& direction_real, double h0, int levels) {
    // with no real direction the path extends to h < 0; its even part has the
    // same limit and an expansion in h^2
    bool two_sided = is_zero(direction_real);
    double ratio = two_sided ? 4 : 2;
    std::vector<std::vector<std::complex<double>>> t(levels);
    double h = h0;
    for (int j = 0; j < levels; ++j, h /= 2) {
        std::complex<double> v = f(displaced(gamma, h, direction_turns, direction_real)).numeric();
        if (two_sided) v = (v + f(displaced(gamma, -h, direction_turns, direction_real)).numeric()) / 2.0;
        t[j].push_back(v);
        double pw = 1;
        for (int k = 1; k <= j; ++k) {
            pw *= ratio;
            t[j].push_back((pw * t[j][k - 1] - t[j - 1][k - 1]) / (pw - 1));
        }
    }
    return Value::numeric(t.back().back());
}

CharacterValue richardson_character_limit(const HCParameter& p, const TorusPoint& gamma, const std::string& levi) {
    const RootDatum& d = *p.group.datum;
    const LeviEntry* m = levi.empty() ? full_levi(p.group) : &p.group.levi(levi);
    if (!m || is_full_group(*m, d)) {
        return richardson_limit([&](const TorusPoint& x) { return stable_ds_character(p, x); }, gamma, d.rho(),
                                QVec(d.rank, 0));
    }
    QVec dt = half_sum(d, positive_in(d, m->m_roots, m->positive_chamber));
    QVec dr = half_sum(d, positive_in(d, m->real_roots, m->positive_chamber));
    std::string label = m->label;
    return richardson_limit([&](const TorusPoint& x) { return averaged_character_phiM(p, label, x); }, gamma, dt,
                            dr);
}

namespace {

// limit of sum sign * e^{v(H)} / Delta_B(H) along gamma exp(2 pi i h rho), h -> 0:
// the m-th derivatives of numerator and denominator, m = number of singular
// positive roots
Cyc lhopital_limit(const RootDatum& d, const std::vector<std::pair<int, QVec>>& terms, const TorusPoint& gamma) {
    QVec dir = d.rho();
    int order = 0;
    Cyc den(1);
    for (size_t i = 0; i < d.roots.size(); ++i) {
        if (!has(d.base_positive, i)) continue;
        RootValue v = root_value(d, static_cast<int>(i), gamma);
        if (v.trivial_exponential()) {
            ++order;
            Q b = d.pair(d.roots[i], dir);
            den *= Cyc(v.turns.get_num() % 2 == 0 ? b : -b);
        } else {
            Q half = v.turns / 2;
            den *= Cyc::exp_turns(half) - Cyc::exp_turns(-half);
        }
    }
    for (int k = 2; k <= order; ++k) den *= Cyc(k);
    Cyc num(0);
    for (const auto& [sign, v] : terms) {
        Q b = d.pair(v, dir);
        Q bm = 1;
        for (int k = 0; k < order; ++k) bm *= b;
        Cyc term = Cyc::exp_turns(d.pair(v, gamma.turns)) * Cyc(bm);
        num += sign > 0 ? term : -term;
    }
    return num / den;
}

}  // namespace

CharacterValue singular_character_limit(const HCParameter& p, const TorusPoint& gamma, const std::string& levi) {
    const GroupEntry& g = p.group;
    const RootDatum& d = *g.datum;
    check_dimension(d, gamma);
    const LeviEntry* m = levi.empty() ? full_levi(g) : &g.levi(levi);
    bool full = !m || is_full_group(*m, d);
    if (is_regular(d, gamma)) throw InputError("gamma is regular; evaluate the character directly");

    if (!full) {
        if (!m->cuspidal) return Value(0);
        if (!in_levi_locus(g, *m, gamma)) throw NotElliptic("gamma is not in Z(B) exp t(R) for Levi " + m->label);
        bool real_walls_only = true;
        for (size_t i = 0; i < d.roots.size(); ++i)
            if (!has(m->real_roots, i) && root_value(d, static_cast<int>(i), gamma).trivial_exponential())
                real_walls_only = false;
        if (real_walls_only) return averaged_core(p, *m, gamma, nullptr, true);
        return richardson_character_limit(p, gamma, m->label);
    }
    for (double x : gamma.real)
        if (x != 0.0) throw NotElliptic("gamma has a nonzero real part and is not elliptic");
    if (!gamma.exact()) return richardson_character_limit(p, gamma, "");

    Cyc z = p.zeta(gamma.component);
    bool central = true;
    for (size_t i = 0; i < d.roots.size(); ++i)
        if (!root_value(d, static_cast<int>(i), gamma).trivial_exponential()) central = false;
    if (central) {
        Cyc e = Cyc::exp_turns(d.pair(p.lambda - d.rho(), gamma.turns));
        return Value(z * e * Cyc(weyl_dimension(d, p.lambda)));
    }

    std::vector<std::pair<int, QVec>> terms;
    for (const auto& w : d.weyl) terms.emplace_back(w.sign, mat_vec(w.matrix, p.lambda));
    return Value(z * lhopital_limit(d, terms, gamma));
}

CharacterValue member_sum_phiM(const HCParameter& p, const std::string& levi, const TorusPoint& gamma) {
    const GroupEntry& g = p.group;
    const RootDatum& d = *g.datum;
    const LeviEntry& m = g.levi(levi);
    check_dimension(d, gamma);
    int members = static_cast<int>(g.member_labels.size());
    bool compact = m.member_characters == "compact_cartan";
    if (!compact || is_regular(d, gamma)) {
        Value sum(0);
        for (int pi = 0; pi < members; ++pi) sum += member_phiM(p, levi, pi, gamma);
        return sum;
    }
    if (!is_full_group(m, d)) throw IncompleteCatalog("compact_cartan characters need M = G");
    for (double x : gamma.real)
        if (x != 0.0) return Value(0);
    if (!gamma.exact()) {
        return richardson_limit(
            [&](const TorusPoint& x) {
                Value sum(0);
                for (int pi = 0; pi < members; ++pi) sum += member_phiM(p, levi, pi, x);
                return sum;
            },
            gamma, d.rho(), QVec(d.rank, 0));
    }
    std::vector<std::pair<int, QVec>> terms;
    auto cosets = g.member_cosets();
    for (int pi = 0; pi < members; ++pi) {
        const WeylElement& w = d.weyl[cosets[pi]];
        for (int u : g.compact_weyl())
            terms.emplace_back(d.weyl[u].sign * w.sign, mat_vec(mat_mul(d.weyl[u].matrix, w.matrix), p.lambda));
    }
    Cyc v = p.zeta(gamma.component) * lhopital_limit(d, terms, gamma);
    return Value(g.q % 2 ? -v : v);
}

StableCharacterValue stable_averaged_SPhi(const HCParameter& p, const StableClass& delta, const std::string& levi) {
    if (delta.fiber.empty()) throw IncompleteCatalog("stable class " + delta.label + " has no fiber data");
    StableCharacterValue out;
    out.value = Value(0);
    if (!delta.semisimple || !delta.elliptic) return out;
    int members = static_cast<int>(p.group.member_labels.size());
    for (size_t k = 0; k < delta.fiber.size(); ++k) {
        const FiberElement& f = delta.fiber[k];
        if (f.transfer * f.transfer.conj() != Cyc(1))
            throw IncompleteCatalog("transfer factor for " + f.label + " is not of modulus one");
        if (is_regular(*p.group.datum, f.gamma)) {
            for (int pi = 0; pi < members; ++pi) {
                Value term = member_phiM(p, levi, pi, f.gamma).conj() * Value(f.transfer);
                out.contributions.push_back({pi, static_cast<int>(k), f.transfer, term});
                out.value += term;
            }
        } else {
            Value term = member_sum_phiM(p, levi, f.gamma).conj() * Value(f.transfer);
            out.contributions.push_back({-1, static_cast<int>(k), f.transfer, term});
            out.value += term;
        }
    }
    return out;
}

WeylIntegrationResult weyl_integration_check(const HCParameter& p, const std::function<double(double)>& f,
                                             const QuadratureOptions& opt) {
    const GroupEntry& g = p.group;
    const RootDatum& d = *g.datum;
    if (!g.compact) throw UnsupportedForQuadrature(g.label + " is not compact");
    if (d.roots.size() != 2) throw UnsupportedForQuadrature("quadrature is implemented for compact A1 only");
    auto theta_char = [&](double theta) {
        TorusPoint x = make_point(QVec(1, 0));
        x.drift = {theta / kTau};
        return stable_ds_character(p, x).numeric().real();
    };
    // Hopf coordinates with u = sin^2(eta): Haar measure du dxi / (2 pi), cos(theta) = sqrt(1-u) cos(xi)
    WeylIntegrationResult r;
    int n = opt.nodes;
    double gs = 0;
    using GL = boost::math::quadrature::gauss<double, 40>;
    for (int j = 0; j < n; ++j) {
        double xi = (j + 0.5) * kTau / n;
        gs += GL::integrate(
            [&](double u) {
                double c = std::sqrt(1 - u) * std::cos(xi);
                double theta = std::acos(std::max(-1.0, std::min(1.0, c)));
                return f(theta) * theta_char(theta);
            },
            0.0, 1.0);
    }
    r.group_side = gs / n;
    double ts = 0;
    for (int j = 0; j < n; ++j) {
        double theta = (j + 0.5) * kTau / n;
        double s = 2 * std::sin(theta);
        ts += s * s * f(theta) * theta_char(theta);
    }
    r.torus_side = opt.normalization_scale * 0.5 * ts / n;
    r.residual = std::abs(r.group_side - r.torus_side);
    return r;
}

}  // namespace stf
