#include "stf/packets.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <set>

#include "json_util.hpp"
#include "stf/errors.hpp"
#include "stf/rootsys.hpp"

namespace stf {

namespace {

using detail::json;

int parity(unsigned x) { return std::popcount(x) & 1; }

}  // namespace

int PacketDatum::e_order() const { return static_cast<int>(std::count(in_e.begin(), in_e.end(), true)); }

std::vector<VirtualCharacterIndex> PacketDatum::taus() const {
    std::vector<VirtualCharacterIndex> out;
    for (int c = 0; c < class_count(); ++c)
        for (int r = 0; r < r_order(); ++r) out.push_back({levi, c, r});
    return out;
}

int PacketDatum::member_index(const std::string& name) const {
    for (size_t i = 0; i < members.size(); ++i)
        if (members[i].label == name) return static_cast<int>(i);
    throw InputError("packet " + label + " has no member '" + name + "'");
}

int PacketDatum::twist_value(int member, int r) const {
    const auto& a = members[member].pairing;
    const auto& b = members[class_base[member_class[member]]].pairing;
    unsigned s = r_reps[r];
    return a[s] * b[s];
}

PacketDatum build_packet(std::string label, int rank, const std::vector<unsigned>& e_generators,
                         std::vector<PacketMember> members, std::vector<Cyc> rho) {
    if (rank < 0 || rank > 8) throw InvalidPacket(label + ": rank of S_phi must lie in 0..8");
    PacketDatum p;
    p.label = std::move(label);
    p.rank = rank;
    int n = p.s_order();

    p.in_e.assign(n, false);
    p.in_e[0] = true;
    for (unsigned g : e_generators) {
        if (g >= static_cast<unsigned>(n)) throw InvalidPacket(p.label + ": E generator outside S_phi");
        for (int s = 0; s < n; ++s)
            if (p.in_e[s]) p.in_e[s ^ g] = true;
    }
    p.coset_of.assign(n, -1);
    for (int s = 0; s < n; ++s) {
        if (p.coset_of[s] >= 0) continue;
        int idx = static_cast<int>(p.r_reps.size());
        p.r_reps.push_back(static_cast<unsigned>(s));
        for (int e = 0; e < n; ++e)
            if (p.in_e[e]) p.coset_of[s ^ e] = idx;
    }
    if (p.e_order() * p.r_order() != n)
        throw InvalidPacket(p.label + ": |E| * |R| = " + std::to_string(p.e_order() * p.r_order()) +
                            " differs from |S| = " + std::to_string(n));

    if (static_cast<int>(members.size()) != n)
        throw InvalidPacket(p.label + ": " + std::to_string(members.size()) + " members but |S_phi| = " +
                            std::to_string(n));
    std::set<std::vector<int>> seen;
    for (const auto& m : members) {
        if (static_cast<int>(m.pairing.size()) != n)
            throw InvalidPacket(p.label + ": pairing row of " + m.label + " has the wrong length");
        for (int s = 0; s < n; ++s) {
            if (m.pairing[s] != 1 && m.pairing[s] != -1)
                throw InvalidPacket(p.label + ": pairing of " + m.label + " is not +-1");
            for (int t = 0; t < n; ++t)
                if (m.pairing[s ^ t] != m.pairing[s] * m.pairing[t])
                    throw InvalidPacket(p.label + ": pairing row of " + m.label + " is not a character");
        }
        if (!seen.insert(m.pairing).second) throw InvalidPacket(p.label + ": two members share a pairing row");
    }
    p.members = std::move(members);

    if (rho.empty()) rho.assign(n, Cyc(1));
    if (static_cast<int>(rho.size()) != n) throw InvalidPacket(p.label + ": rho has the wrong length");
    for (const auto& x : rho)
        if (x * x.conj() != Cyc(1)) throw InvalidPacket(p.label + ": rho value " + x.str() + " is not a unit");
    p.rho = std::move(rho);

    std::map<std::vector<int>, int> classes;
    for (size_t i = 0; i < p.members.size(); ++i) {
        std::vector<int> restriction;
        for (int s = 0; s < n; ++s)
            if (p.in_e[s]) restriction.push_back(p.members[i].pairing[s]);
        auto [it, fresh] = classes.emplace(restriction, p.class_count());
        if (fresh) p.class_base.push_back(static_cast<int>(i));
        p.member_class.push_back(it->second);
    }
    if (p.class_count() != p.e_order()) throw InvalidPacket(p.label + ": E-classes do not match |E|");
    return p;
}

Cyc delta_phi_pi(const PacketDatum& p, int s, int member) {
    if (s < 0 || s >= p.s_order() || member < 0 || member >= static_cast<int>(p.members.size())) return Cyc(0);
    return p.rho[s] * Cyc(p.members[member].pairing[s]);
}

Cyc delta_pi_phi(const PacketDatum& p, int member, int s) {
    return delta_phi_pi(p, s, member).conj() / Cyc(p.s_order());
}

Cyc delta_tau_phi(const PacketDatum& p, const VirtualCharacterIndex& tau, int s) {
    if (tau.pi < 0 || tau.pi >= p.class_count() || tau.r < 0 || tau.r >= p.r_order()) return Cyc(0);
    Cyc sum(0);
    for (size_t m = 0; m < p.members.size(); ++m)
        if (p.member_class[m] == tau.pi)
            sum += Cyc(p.twist_value(static_cast<int>(m), tau.r)) * delta_pi_phi(p, static_cast<int>(m), s);
    return sum;
}

Cyc delta_phi_tau(const PacketDatum& p, int s, const VirtualCharacterIndex& tau) {
    if (tau.pi < 0 || tau.pi >= p.class_count() || tau.r < 0 || tau.r >= p.r_order()) return Cyc(0);
    Cyc sum(0);
    for (size_t m = 0; m < p.members.size(); ++m)
        if (p.member_class[m] == tau.pi)
            sum += Cyc(p.twist_value(static_cast<int>(m), tau.r)) * delta_phi_pi(p, s, static_cast<int>(m));
    return sum / Cyc(p.r_order());
}

AdjointReport verify_adjoint_relations(const PacketDatum& p) {
    AdjointReport rep;
    int n = p.s_order();
    auto taus = p.taus();
    std::vector<std::vector<Cyc>> a(n), b(taus.size());
    for (int s = 0; s < n; ++s)
        for (const auto& t : taus) a[s].push_back(delta_phi_tau(p, s, t));
    for (const auto& t : taus)
        for (int s = 0; s < n; ++s) b[&t - taus.data()].push_back(delta_tau_phi(p, t, s));

    auto where = [&](const VirtualCharacterIndex& t) {
        return "(" + t.levi + ", " + std::to_string(t.pi) + ", " + std::to_string(t.r) + ")";
    };
    for (int s1 = 0; s1 < n; ++s1)
        for (int s2 = 0; s2 < n; ++s2) {
            Cyc sum(0);
            for (size_t t = 0; t < taus.size(); ++t) sum += a[s1][t] * b[t][s2];
            ++rep.checks_21;
            if (sum != Cyc(s1 == s2 ? 1 : 0))
                throw AdjointRelationFailure(p.label + ": sum over tau fails at s1 = " + std::to_string(s1) +
                                             ", s2 = " + std::to_string(s2) + " (got " + sum.str() + ")");
        }
    for (size_t t1 = 0; t1 < taus.size(); ++t1)
        for (size_t t2 = 0; t2 < taus.size(); ++t2) {
            Cyc sum(0);
            for (int s = 0; s < n; ++s) sum += b[t1][s] * a[s][t2];
            ++rep.checks_22;
            if (sum != Cyc(t1 == t2 ? 1 : 0))
                throw AdjointRelationFailure(p.label + ": sum over s fails at tau = " + where(taus[t1]) +
                                             ", tau1 = " + where(taus[t2]) + " (got " + sum.str() + ")");
        }
    Cyc scale = Cyc(frac(p.r_order(), n));
    for (size_t t = 0; t < taus.size(); ++t)
        for (int s = 0; s < n; ++s) {
            ++rep.scaling_checks;
            if (b[t][s] != scale * a[s][t].conj())
                throw AdjointRelationFailure(p.label + ": scaling identity fails at tau = " + where(taus[t]) +
                                             ", s = " + std::to_string(s));
        }
    return rep;
}

SpectralCoefficient spectral_coefficient(const PacketDatum& p, const VirtualCharacterIndex& tau, bool cuspidal,
                                         const AMAction& action) {
    if (tau.r < 0 || tau.r >= p.r_order()) throw InputError("r is not an element of R_phi");
    auto one_minus_det = [](const QMat& w) {
        QMat m = w;
        for (size_t i = 0; i < m.size(); ++i)
            for (size_t j = 0; j < m.size(); ++j) m[i][j] = Q(i == j ? 1 : 0) - w[i][j];
        Q d = m.empty() ? Q(1) : det(m);
        return d < 0 ? Q(-d) : d;
    };
    SpectralCoefficient c;
    // R_phi is abelian, so R_{pi,r} is all of R_pi
    c.r_centralizer_order = p.r_order();
    c.d_tau = one_minus_det(action.r);
    if (cuspidal) {
        if (c.d_tau == 0) throw NotElliptic("det(1 - r) = 0 on a_M / a_G: tau is not elliptic");
        c.value = 1 / c.d_tau / Q(c.r_centralizer_order);
        return c;
    }
    Q sum = 0;
    for (const auto& [w, sign] : action.w_pi_r) {
        Q d = one_minus_det(w);
        if (d != 0) sum += Q(sign) / d;
    }
    c.value = sum / Q(action.w0_order) / Q(c.r_centralizer_order);
    return c;
}

PacketDatum random_packet(int rank, std::mt19937_64& rng) {
    int n = 1 << rank;
    std::uniform_int_distribution<unsigned> elem(0, n - 1);
    std::vector<unsigned> gens;
    int g = rank == 0 ? 0 : static_cast<int>(rng() % (rank + 1));
    for (int i = 0; i < g; ++i) gens.push_back(elem(rng));
    std::vector<PacketMember> members;
    for (int c = 0; c < n; ++c) {
        PacketMember m;
        m.label = "pi" + std::to_string(c);
        m.component = static_cast<int>(rng() % 2);
        for (int s = 0; s < n; ++s) m.pairing.push_back(parity(static_cast<unsigned>(c & s)) ? -1 : 1);
        members.push_back(std::move(m));
    }
    std::shuffle(members.begin(), members.end(), rng);
    std::vector<Cyc> rho;
    for (int s = 0; s < n; ++s) rho.push_back(Cyc::root_of_unity(4, static_cast<long>(rng() % 4)));
    PacketDatum p = build_packet("random-" + std::to_string(rank), rank, gens, std::move(members), std::move(rho));
    p.components = {"G0", "G1"};
    return p;
}

const PacketDatum& PacketCatalog::packet(const std::string& label) const {
    for (const auto& p : packets)
        if (p.label == label) return p;
    throw BrokenReference("no packet '" + label + "'");
}

bool PacketCatalog::has(const std::string& label) const {
    for (const auto& p : packets)
        if (p.label == label) return true;
    return false;
}

PacketCatalog load_packet_catalog_text(const std::string& text, const std::string& where) {
    using namespace detail;
    json doc = parse_json(text, where);
    check_schema(doc, "packets/1");
    PacketCatalog cat;
    for (const auto& e : need(doc, "packets", where)) {
        std::string label = to_str(need(e, "label", where), where);
        std::string at = where + ": packet " + label;
        int rank = to_int(need(e, "rank", at), at);
        std::vector<unsigned> gens;
        if (e.contains("e_generators"))
            for (const auto& x : e.at("e_generators")) gens.push_back(static_cast<unsigned>(to_int(x, at)));
        std::vector<std::string> components = {to_str(need(e, "group", at), at)};
        if (e.contains("components")) {
            components.clear();
            for (const auto& x : e.at("components")) components.push_back(to_str(x, at));
        }
        std::vector<PacketMember> members;
        for (const auto& m : need(e, "members", at)) {
            PacketMember pm;
            pm.label = to_str(need(m, "label", at), at);
            if (m.contains("component")) pm.component = to_int(m.at("component"), at);
            if (pm.component < 0 || pm.component >= static_cast<int>(components.size()))
                throw SchemaError(at + ": member " + pm.label + " has no component " + std::to_string(pm.component));
            for (const auto& x : need(m, "pairing", at)) pm.pairing.push_back(to_int(x, at));
            members.push_back(std::move(pm));
        }
        std::vector<Cyc> rho;
        if (e.contains("rho"))
            for (const auto& x : e.at("rho")) rho.push_back(to_cyc(x, at));
        PacketDatum p = build_packet(label, rank, gens, std::move(members), std::move(rho));
        p.group = to_str(need(e, "group", at), at);
        if (e.contains("levi")) p.levi = to_str(e.at("levi"), at);
        p.components = components;
        auto declared = [&](const char* key, int actual) {
            if (e.contains(key) && to_int(e.at(key), at) != actual)
                throw InvalidPacket(at + ": declared " + key + " " + std::to_string(to_int(e.at(key), at)) +
                                    " but the data give " + std::to_string(actual));
        };
        declared("s_order", p.s_order());
        declared("e_order", p.e_order());
        declared("r_order", p.r_order());
        if (cat.has(label)) throw SchemaError(at + ": duplicate label");
        cat.packets.push_back(std::move(p));
    }
    return cat;
}

PacketCatalog load_packet_catalog(const std::string& path) { return load_packet_catalog_text(read_file(path), path); }

}  // namespace stf
