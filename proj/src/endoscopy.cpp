#include "stf/endoscopy.hpp"

#include <algorithm>

#include "json_util.hpp"
#include "stf/errors.hpp"

namespace stf {

namespace {

using detail::json;

long positive_long(const json& j, const std::string& at, const char* what) {
    long v = detail::to_int(j, at);
    if (v < 1) throw SchemaError(at + ": " + what + " must be a positive integer");
    return v;
}

}  // namespace

const EndoGroup& EndoCatalog::group(const std::string& label) const {
    for (const auto& g : groups)
        if (g.label == label) return g;
    throw BrokenReference("no endoscopic group record '" + label + "'");
}

const EndoDatum& EndoCatalog::datum(const std::string& label) const {
    for (const auto& d : data)
        if (d.label == label) return d;
    throw BrokenReference("no endoscopic datum '" + label + "'");
}

std::vector<const EndoDatum*> EndoCatalog::data_for(const std::string& g) const {
    std::vector<const EndoDatum*> out;
    for (const auto& d : data)
        if (d.group == g) out.push_back(&d);
    return out;
}

EndoCatalog load_endo_catalog_text(const std::string& text, const GroupCatalog* groups, const PacketCatalog* packets,
                                   const std::string& where) {
    using namespace detail;
    json doc = parse_json(text, where);
    check_schema(doc, "endo/1");
    EndoCatalog c;
    for (const auto& e : need(doc, "groups", where)) {
        EndoGroup g;
        g.label = to_str(need(e, "label", where), where);
        std::string at = where + ": group " + g.label;
        if (e.contains("components"))
            for (const auto& x : e.at("components")) g.components.push_back(to_str(x, at));
        if (e.contains("quasi_split")) g.quasi_split = to_bool(e.at("quasi_split"), at);
        g.tamagawa = to_q(need(e, "tamagawa", at), at);
        if (g.tamagawa <= 0) throw SchemaError(at + ": tamagawa number must be positive");
        if (e.contains("center_order")) g.center_order = positive_long(e.at("center_order"), at, "center_order");
        if (e.contains("pi0_center_order")) g.pi0_center_order = positive_long(e.at("pi0_center_order"), at, "pi0_center_order");
        if (e.contains("ker1_order")) g.ker1_order = positive_long(e.at("ker1_order"), at, "ker1_order");
        if (g.pi0_center_order && g.ker1_order && g.tamagawa != frac(g.pi0_center_order, g.ker1_order))
            throw SchemaError(at + ": tamagawa " + to_string(g.tamagawa) + " differs from |pi_0| / |ker^1| = " +
                              to_string(frac(g.pi0_center_order, g.ker1_order)));
        if (groups)
            for (const auto& comp : g.components)
                if (!groups->has(comp)) throw BrokenReference(at + ": no group-catalog entry '" + comp + "'");
        for (const auto& prev : c.groups)
            if (prev.label == g.label) throw SchemaError(at + ": duplicate label");
        c.groups.push_back(std::move(g));
    }
    for (const auto& e : need(doc, "data", where)) {
        EndoDatum d;
        d.label = to_str(need(e, "label", where), where);
        std::string at = where + ": datum " + d.label;
        d.group = to_str(need(e, "group", at), at);
        d.endoscopic = to_str(need(e, "endoscopic", at), at);
        d.out_order = positive_long(need(e, "out_order", at), at, "out_order");
        const EndoGroup& gp = c.group(d.endoscopic);
        c.group(d.group);
        for (const auto& l : need(e, "levis", at)) {
            EndoLevi lv{to_str(need(l, "endo", at), at), to_str(need(l, "levi", at), at)};
            if (!std::any_of(c.groups.begin(), c.groups.end(), [&](const EndoGroup& g) { return g.label == lv.endo; }))
                throw BrokenReference(at + ": Levi record '" + lv.endo + "' does not exist");
            if (groups && !gp.components.empty()) groups->group(gp.components[0]).levi(lv.levi);
            d.levis.push_back(lv);
        }
        if (e.contains("mu_shift")) d.mu_shift = to_qvec(e.at("mu_shift"), at);
        if (e.contains("lambda_shift")) d.lambda_shift = to_qvec(e.at("lambda_shift"), at);
        if (groups && !gp.components.empty()) {
            size_t r = static_cast<size_t>(groups->group(gp.components[0]).datum->rank);
            if ((!d.mu_shift.empty() && d.mu_shift.size() != r) || (!d.lambda_shift.empty() && d.lambda_shift.size() != r))
                throw SchemaError(at + ": parameter shift does not match the rank of " + gp.components[0]);
        }
        for (const auto& prev : c.data)
            if (prev.label == d.label) throw SchemaError(at + ": duplicate label");
        c.data.push_back(std::move(d));
    }
    if (doc.contains("links"))
        for (const auto& e : doc.at("links")) {
            EndoLink l{to_str(need(e, "datum", where), where), to_str(need(e, "packet", where), where),
                       to_str(need(e, "packet_prime", where), where)};
            if (e.contains("s")) l.s = to_int(e.at("s"), where);
            c.datum(l.datum);
            if (packets) {
                const PacketDatum& pk = packets->packet(l.packet);
                packets->packet(l.packet_prime);
                if (l.s < 0 || l.s >= pk.s_order())
                    throw SchemaError(where + ": link " + l.datum + ": s is not an element of S_phi of " + l.packet);
            }
            c.links.push_back(l);
        }
    return c;
}

EndoCatalog load_endo_catalog(const std::string& path, const GroupCatalog* groups, const PacketCatalog* packets) {
    return load_endo_catalog_text(read_file(path), groups, packets, path);
}

std::string serialize_endo_catalog(const EndoCatalog& c) {
    using detail::from_q;
    using detail::from_qvec;
    json doc;
    doc["schema"] = "endo/1";
    json gs = json::array();
    for (const auto& g : c.groups) {
        json e;
        e["label"] = g.label;
        e["components"] = g.components;
        e["quasi_split"] = g.quasi_split;
        e["tamagawa"] = from_q(g.tamagawa);
        if (g.center_order) e["center_order"] = g.center_order;
        if (g.pi0_center_order) e["pi0_center_order"] = g.pi0_center_order;
        if (g.ker1_order) e["ker1_order"] = g.ker1_order;
        gs.push_back(e);
    }
    doc["groups"] = gs;
    json ds = json::array();
    for (const auto& d : c.data) {
        json e;
        e["label"] = d.label;
        e["group"] = d.group;
        e["endoscopic"] = d.endoscopic;
        e["out_order"] = d.out_order;
        json ls = json::array();
        for (const auto& l : d.levis) ls.push_back({{"endo", l.endo}, {"levi", l.levi}});
        e["levis"] = ls;
        if (!d.mu_shift.empty()) e["mu_shift"] = from_qvec(d.mu_shift);
        if (!d.lambda_shift.empty()) e["lambda_shift"] = from_qvec(d.lambda_shift);
        ds.push_back(e);
    }
    doc["data"] = ds;
    json ls = json::array();
    for (const auto& l : c.links)
        ls.push_back({{"datum", l.datum}, {"packet", l.packet}, {"packet_prime", l.packet_prime}, {"s", l.s}});
    doc["links"] = ls;
    return doc.dump(2) + "\n";
}

Q iota(const EndoGroup& g, const EndoGroup& g_prime, long out_order) {
    return g.tamagawa / g_prime.tamagawa / Q(out_order);
}

Q iota(const EndoCatalog& c, const EndoDatum& d) { return iota(c.group(d.group), c.group(d.endoscopic), d.out_order); }

Q stable_spectral_coefficient(const PacketDatum& packet_prime) { return frac(1, packet_prime.s_order()); }

CoefficientRelationReport check_coefficient_relation(const EndoGroup& g, const EndoGroup& g_prime,
                                                     const PacketDatum& packet, const PacketDatum& packet_prime) {
    if (!g.center_order || !g_prime.center_order)
        throw IncompleteCatalog(g.label + " / " + g_prime.label + ": center orders are not authored");
    CoefficientRelationReport r{frac(packet.s_order(), packet_prime.s_order()),
                                frac(g_prime.center_order, g.center_order)};
    if (r.lhs != r.rhs)
        throw CoefficientRelationFailure(g.label + " / " + g_prime.label + ": |S_phi|/|S_phi'| = " + to_string(r.lhs) +
                                         " but |Z(G'^)^Gamma|/|Z(G^)^Gamma| = " + to_string(r.rhs));
    return r;
}

Q stable_b_coefficient(const EndoGroup& m_prime, const StableClass& delta) {
    if (!delta.semisimple) throw RequiresSemisimple("class " + delta.label + " is not semisimple");
    if (!delta.elliptic) return 0;
    return m_prime.tamagawa;
}

CoefficientBundle coefficients(const EndoCatalog& c, const EndoDatum& d, const PacketDatum& packet_prime,
                               const std::string& m_prime, const StableClass& delta) {
    return {iota(c, d), packet_prime.s_order(), stable_b_coefficient(c.group(m_prime), delta)};
}

int verify_endo_links(const EndoCatalog& c, const PacketCatalog& packets) {
    int n = 0;
    for (const auto& l : c.links) {
        const EndoDatum& d = c.datum(l.datum);
        check_coefficient_relation(c.group(d.group), c.group(d.endoscopic), packets.packet(l.packet),
                                   packets.packet(l.packet_prime));
        ++n;
    }
    return n;
}

}  // namespace stf
