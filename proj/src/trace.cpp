#include "stf/trace.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <mutex>
#include <thread>

#include "json_util.hpp"
#include "stf/errors.hpp"

namespace stf {

namespace {

using detail::json;

TorusPoint parse_point(const json& j, const std::string& at) {
    using namespace detail;
    TorusPoint t = make_point(to_qvec(need(j, "turns", at), at));
    if (j.contains("component")) t.component = to_str(j.at("component"), at);
    if (j.contains("real"))
        for (const auto& x : j.at("real")) {
            if (!x.is_number()) throw SchemaError(at + ": real coordinates must be numbers");
            t.real.push_back(x.get<double>());
        }
    return t;
}

bool close(const Value& a, const Value& b, double tol) { return a.close_to(b, tol); }

const LeviEntry& full_levi_of(const GroupEntry& g) {
    for (const auto& m : g.levis)
        if (m.m_roots == g.datum->all_roots) return m;
    throw IncompleteCatalog(g.label + " has no Levi entry for the group itself");
}

void parallel_for(size_t n, int jobs, const std::function<void(size_t)>& fn) {
    if (jobs <= 1 || n < 2) {
        for (size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<size_t> next{0};
    std::exception_ptr error;
    std::mutex mu;
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t)
        pool.emplace_back([&] {
            for (size_t i = next++; i < n; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(mu);
                    if (!error) error = std::current_exception();
                }
            }
        });
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

std::optional<long> snap(const Value& v, double tol) {
    if (v.is_exact() && v.exact()->is_rational()) {
        Q q = v.exact()->rational();
        if (q.get_den() == 1 && q.get_num().fits_slong_p()) return q.get_num().get_si();
        return std::nullopt;
    }
    std::complex<double> z = v.numeric();
    double r = std::round(z.real());
    if (std::abs(z.imag()) <= tol && std::abs(z.real() - r) <= tol) return static_cast<long>(r);
    return std::nullopt;
}

HCParameter weight_hc(const GroupEntry& g, int k) {
    const RootDatum& d = *g.datum;
    if (d.rank != 1 || d.roots.size() != 2) throw InputError(g.label + " is not of type A1");
    QVec mu = Q(k - 1) * d.weight_lattice_basis[0] - d.rho();
    if (d.coroot_pairing(mu, 1) == 0) throw RegularityRequired("weight " + std::to_string(k) + " gives singular mu");
    HCParameter p = weight_parameter(g, k);
    require_regular(p);
    return p;
}

struct Context {
    const Catalogs& c;
    const ArithmeticData& a;
    const EndoGroup& g_endo;
    const GroupEntry& g;
    const PacketDatum& packet;
    HCParameter p;
};

struct Job {
    const EndoDatum* datum;
    const EndoLink* link;
    const EndoLevi* levi;
    const ArithClass* cls;
};

const EndoLink& link_for(const Context& x, const EndoDatum& d) {
    for (const auto& l : x.c.endo.links)
        if (l.datum == d.label && l.packet == x.packet.label) return l;
    throw IncompleteCatalog("no link between datum " + d.label + " and packet " + x.packet.label);
}

std::vector<Job> jobs_for(const Context& x) {
    std::vector<Job> jobs;
    std::vector<std::string> missing;
    for (const EndoDatum* d : x.c.endo.data_for(x.a.group)) {
        const EndoLink& l = link_for(x, *d);
        for (const auto& lv : d->levis) {
            const ArithBlock* block = nullptr;
            for (const auto& b : x.a.blocks)
                if (b.datum == d->label && b.levi == lv.levi) block = &b;
            if (!block) {
                missing.push_back("(" + d->label + ", " + lv.levi + ")");
                continue;
            }
            for (const auto& cls : block->classes) jobs.push_back({d, &l, &lv, &cls});
        }
    }
    if (!missing.empty()) {
        std::string s;
        for (const auto& m : missing) s += (s.empty() ? "" : ", ") + m;
        throw IncompleteArithmeticData("no orbital data for " + s);
    }
    return jobs;
}

Context context(const Catalogs& c, const ArithmeticData& a, int weight) {
    const EndoGroup& ge = c.endo.group(a.group);
    if (ge.components.empty()) throw IncompleteCatalog("group record " + a.group + " names no group");
    const GroupEntry& g = c.groups.group(ge.components[0]);
    return {c, a, ge, g, c.packets.packet(a.packet), weight_hc(g, weight)};
}

// coefficients P_mu for one member, or F_mu in lefschetz mode
Report assemble(const Context& x, int member, bool lefschetz_mode, const TraceOptions& opt) {
    std::vector<Job> jobs = jobs_for(x);
    std::vector<GeometricTerm> terms(jobs.size());
    parallel_for(jobs.size(), opt.jobs, [&](size_t i) {
        const Job& j = jobs[i];
        const EndoGroup& gp_endo = x.c.endo.group(j.datum->endoscopic);
        const GroupEntry& gp = x.c.groups.group(gp_endo.components.at(0));
        const EndoGroup& mp = x.c.endo.group(j.levi->endo);
        const PacketDatum& pp = x.c.packets.packet(j.link->packet_prime);
        HCParameter p_prime = endoscopic_parameter(x.p, *j.datum, gp);
        const LeviEntry& m = gp.levi(j.levi->levi);
        const LeviEntry& full = full_levi_of(gp);
        int dim = m.dim_a - full.dim_a;
        Q s_coeff = stable_spectral_coefficient(pp);

        GeometricTerm t;
        t.endo = j.datum->label;
        t.levi = j.levi->levi;
        t.cls = j.cls->cls.label;
        t.sign = dim % 2 ? -1 : 1;
        t.weyl_quotient = frac(m.weyl_order, full.weyl_order);
        t.iota = iota(x.c.endo, *j.datum);
        t.orbital = j.cls->orbital;

        PseudoCoefficient f = pseudo_coefficient_transfer(x.packet, lefschetz_mode ? 0 : member, j.link->s, p_prime);
        if (lefschetz_mode) f.value = Cyc(1);
        StableDistribution sd =
            stable_distribution_SGM(p_prime, m.label, j.cls->cls, f, s_coeff, x.a.profile, opt.tolerance);
        t.sphi = sd.sphi.value;
        Q tau_m = stable_b_coefficient(mp, j.cls->cls);
        if (lefschetz_mode) {
            t.coefficient = Value(f_mu(x.p, pp, x.packet, j.link->s, dim, gp.q, mp));
            t.product = Value(t.iota * t.weyl_quotient * t.orbital) * t.coefficient * t.sphi;
            t.route_b = t.product;
        } else {
            t.coefficient = Value(p_mu(x.p, pp, x.packet, member, j.link->s, mp));
            t.product = Value(t.iota * Q(t.sign) * t.weyl_quotient * t.orbital) * t.coefficient * t.sphi;
            // splitting: iota |W^M'|/|W^G'| b(delta) S^{G'}_{M'}(delta, f') (h_M)^{M'}(delta)
            t.route_b = Value(t.iota * t.weyl_quotient * tau_m * t.orbital) * sd.route_b;
            if (!close(t.product, t.route_b, opt.tolerance))
                throw RouteMismatch("term " + t.endo + " / " + t.levi + " / " + t.cls + " does not split: " +
                                    t.product.str() + " vs " + t.route_b.str());
        }
        terms[i] = std::move(t);
    });
    Report r;
    r.terms = std::move(terms);
    r.total = Value(0);
    for (const auto& t : r.terms) {
        r.total += t.product;
        if (!t.product.is_exact()) r.exact = false;
    }
    r.filtered = x.a.rejected;
    r.fingerprints = x.c.fingerprints;
    r.fingerprints.emplace_back(x.a.label, x.a.fingerprint);
    r.tolerance = opt.tolerance;
    return r;
}

}  // namespace

ArithmeticData load_arith_data_text(const std::string& text, const std::string& where) {
    using namespace detail;
    json doc = parse_json(text, where);
    check_schema(doc, "arith/1");
    ArithmeticData a;
    a.fingerprint = fingerprint(text);
    a.label = to_str(need(doc, "label", where), where);
    a.group = to_str(need(doc, "group", where), where);
    a.packet = to_str(need(doc, "packet", where), where);
    a.level = to_int(need(doc, "level", where), where);
    if (doc.contains("profile")) {
        const json& pr = doc.at("profile");
        a.profile.label = to_str(need(pr, "label", where), where);
        a.profile.vol = to_q(need(pr, "vol", where), where);
        a.profile.upsilon = to_q(need(pr, "upsilon", where), where);
        if (a.profile.vol <= 0 || a.profile.upsilon == 0) throw SchemaError(where + ": degenerate profile");
    }
    for (const auto& b : need(doc, "stable", where)) {
        ArithBlock block;
        block.datum = to_str(need(b, "datum", where), where);
        block.levi = to_str(need(b, "levi", where), where);
        std::string at = where + ": block " + block.datum + " / " + block.levi;
        for (const auto& c : need(b, "classes", at)) {
            ArithClass ac;
            ac.cls.label = to_str(need(c, "label", at), at);
            ac.cls.levi = block.levi;
            if (c.contains("semisimple")) ac.cls.semisimple = to_bool(c.at("semisimple"), at);
            if (c.contains("elliptic")) ac.cls.elliptic = to_bool(c.at("elliptic"), at);
            ac.orbital = to_q(need(c, "orbital", at), at);
            for (const auto& f : need(c, "fiber", at)) {
                FiberElement fe;
                fe.label = f.contains("label") ? to_str(f.at("label"), at) : ac.cls.label;
                fe.gamma = parse_point(f, at);
                if (f.contains("transfer")) fe.transfer = to_cyc(f.at("transfer"), at);
                ac.cls.fiber.push_back(std::move(fe));
            }
            if (!ac.cls.semisimple || !ac.cls.elliptic) {
                a.rejected.push_back(block.datum + " / " + block.levi + " / " + ac.cls.label +
                                     (!ac.cls.semisimple ? " (not semisimple)" : " (not elliptic)"));
                continue;
            }
            if (ac.cls.fiber.empty()) throw SchemaError(at + ": class " + ac.cls.label + " has an empty fiber");
            block.classes.push_back(std::move(ac));
        }
        a.blocks.push_back(std::move(block));
    }
    if (doc.contains("invariant"))
        for (const auto& b : doc.at("invariant")) {
            std::string levi = to_str(need(b, "levi", where), where);
            for (const auto& c : need(b, "classes", where)) {
                InvariantClass ic;
                ic.levi = levi;
                ic.label = to_str(need(c, "label", where), where);
                ic.gamma = parse_point(c, where);
                ic.coefficient = to_q(need(c, "coefficient", where), where);
                a.invariant.push_back(std::move(ic));
            }
        }
    return a;
}

ArithmeticData load_arith_data(const std::string& path) { return load_arith_data_text(read_file(path), path); }

std::string fingerprint(const std::string& text) {
    unsigned long long h = 14695981039346656037ULL;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", h);
    return buf;
}

std::string default_catalog_dir() { return STF_DATA_DIR; }

Catalogs load_catalogs(const std::string& dir) {
    Catalogs c;
    c.dir = dir;
    auto path = [&](const char* f) { return (std::filesystem::path(dir) / f).string(); };
    std::string gt = read_file(path("groups.json"));
    std::string pt = read_file(path("packets.json"));
    std::string et = read_file(path("endo.json"));
    c.groups = load_group_catalog_text(gt);
    c.packets = load_packet_catalog_text(pt, path("packets.json"));
    c.endo = load_endo_catalog_text(et, &c.groups, &c.packets, path("endo.json"));
    for (const auto& p : c.packets.packets)
        if (!c.groups.has(p.group)) throw BrokenReference("packet " + p.label + " names unknown group " + p.group);
    c.fingerprints = {{"groups.json", fingerprint(gt)}, {"packets.json", fingerprint(pt)}, {"endo.json", fingerprint(et)}};
    return c;
}

ArithmeticData Catalogs::arith(const std::string& group, int level) const {
    auto p = std::filesystem::path(dir) / ("arith_" + group + "_level" + std::to_string(level) + ".json");
    if (!std::filesystem::exists(p))
        throw InputError("no arithmetic data for " + group + " at level " + std::to_string(level));
    return load_arith_data(p.string());
}

void require_regular(const HCParameter& p) {
    const RootDatum& d = *p.group.datum;
    QVec mu = p.lambda - d.rho();
    for (size_t i = 0; i < d.roots.size(); ++i)
        if (d.coroot_pairing(mu, static_cast<int>(i)) == 0)
            throw RegularityRequired("mu = " + to_string(mu) + " is singular");
}

HCParameter endoscopic_parameter(const HCParameter& p, const EndoDatum& d, const GroupEntry& g_prime) {
    QVec l = p.lambda;
    if (!d.lambda_shift.empty()) {
        if (d.lambda_shift.size() != l.size()) throw DomainMismatch("lambda shift of " + d.label + " has the wrong rank");
        l = l - d.lambda_shift;
    }
    if (static_cast<int>(l.size()) != g_prime.datum->rank)
        throw DomainMismatch("parameter of rank " + std::to_string(l.size()) + " does not fit " + g_prime.label);
    HCParameter out = make_hc_parameter(g_prime, l);
    require_regular(out);
    return out;
}

PseudoCoefficient pseudo_coefficient_transfer(const PacketDatum& packet, int member, int s,
                                              const HCParameter& p_prime) {
    if (packet.levi != "G") throw NotDiscreteSeries("packet " + packet.label + " is induced from " + packet.levi);
    require_regular(p_prime);
    return {p_prime.group.label, p_prime.lambda, delta_phi_pi(packet, s, member)};
}

Cyc p_mu(const HCParameter& p, const PacketDatum& packet_prime, const PacketDatum& packet, int member, int s,
         const EndoGroup& m_prime) {
    require_regular(p);
    return Cyc(stable_spectral_coefficient(packet_prime)) * delta_phi_pi(packet, s, member) * Cyc(m_prime.tamagawa);
}

Cyc f_mu(const HCParameter& p, const PacketDatum& packet_prime, const PacketDatum& packet, int s, int d, int q_prime,
         const EndoGroup& m_prime) {
    require_regular(p);
    Cyc sum(0);
    for (int m = 0; m < static_cast<int>(packet.members.size()); ++m) sum += delta_phi_pi(packet, s, m);
    Cyc v = Cyc(m_prime.tamagawa * stable_spectral_coefficient(packet_prime)) * sum;
    return (d + q_prime) % 2 ? -v : v;
}

StableDistribution stable_distribution_SGM(const HCParameter& p_prime, const std::string& levi, const StableClass& delta,
                                           const PseudoCoefficient& f, const Q& s_coefficient,
                                           const NormalizationProfile& profile, double tolerance) {
    StableDistribution out;
    out.route_a = out.route_b = out.value = Value(0);
    out.sphi.value = Value(0);
    if (!delta.semisimple || !delta.elliptic) return out;
    const GroupEntry& g = p_prime.group;
    const LeviEntry& m = g.levi(levi);
    int dim = m.dim_a - full_levi_of(g).dim_a;
    Cyc ft = f.trace(g.label, p_prime.lambda);
    Cyc pre = Cyc(s_coefficient) * ft;
    if (dim % 2) pre = -pre;

    out.sphi = stable_averaged_SPhi(p_prime, delta, levi);
    out.route_a = Value(pre) * out.sphi.value;

    Cyc pre_b = pre * Cyc(profile.vol / profile.upsilon);
    if (g.q % 2) pre_b = -pre_b;
    Value b(0);
    for (const auto& fe : delta.fiber) {
        Value phi = is_regular(*g.datum, fe.gamma) ? averaged_character_phiM(p_prime, levi, fe.gamma)
                                                   : singular_character_limit(p_prime, fe.gamma, levi);
        b += Value(fe.transfer) * phi.conj();
    }
    out.route_b = Value(pre_b) * b;
    if (!close(out.route_a, out.route_b, tolerance))
        throw RouteMismatch("S^G_M(" + delta.label + ") on " + g.label + " / " + levi + ": spectral route " +
                            out.route_a.str() + ", geometric route " + out.route_b.str());
    out.value = out.route_a;
    return out;
}

Report tr_Rdisc(const Catalogs& c, const ArithmeticData& a, int weight, const std::string& member,
                const TraceOptions& opt) {
    Context x = context(c, a, weight);
    Report r = assemble(x, x.packet.member_index(member), false, opt);
    r.quantity = "tr_Rdisc";
    r.subject = a.group + " level " + std::to_string(a.level) + " weight " + std::to_string(weight) + " " + member;
    return r;
}

Report multiplicity(const Catalogs& c, const ArithmeticData& a, int weight, const std::string& member,
                    const TraceOptions& opt) {
    Report r = tr_Rdisc(c, a, weight, member, opt);
    r.quantity = "multiplicity";
    r.integer = snap(r.total, 1e-6);
    if (!r.integer || *r.integer < 0)
        throw NonIntegralMultiplicity(r.subject + ": total " + r.total.str() + " is not a non-negative integer");
    return r;
}

Value invariant_side(const Catalogs& c, const ArithmeticData& a, int weight) {
    Context x = context(c, a, weight);
    const GroupEntry& g = x.g;
    const LeviEntry& full = full_levi_of(g);
    Value total(0);
    for (const auto& ic : a.invariant) {
        const LeviEntry& m = g.levi(ic.levi);
        int dim = m.dim_a - full.dim_a;
        Q w = frac(m.weyl_order, full.weyl_order) * ic.coefficient * a.profile.vol / a.profile.upsilon;
        if ((dim + g.q) % 2) w = -w;
        Value phi = is_regular(*g.datum, ic.gamma) ? averaged_character_phiM(x.p, ic.levi, ic.gamma)
                                                   : singular_character_limit(x.p, ic.gamma, ic.levi);
        total += Value(w) * phi.conj();
    }
    return total;
}

PacketSumReport packet_sum_crosscheck(const Catalogs& c, const ArithmeticData& a, int weight, const TraceOptions& opt) {
    PacketSumReport r;
    r.packet_sum = Value(0);
    const PacketDatum& packet = c.packets.packet(a.packet);
    for (const auto& m : packet.members) {
        r.members.push_back(multiplicity(c, a, weight, m.label, opt));
        r.packet_sum += Value(*r.members.back().integer);
    }
    r.invariant_side = invariant_side(c, a, weight);
    if (!close(r.packet_sum, r.invariant_side, opt.tolerance))
        throw StabilizationInconsistency("weight " + std::to_string(weight) + ": packet sum " + r.packet_sum.str() +
                                         " but the invariant side gives " + r.invariant_side.str());
    return r;
}

Report lefschetz(const Catalogs& c, const ArithmeticData& a, int weight, const TraceOptions& opt) {
    Context x = context(c, a, weight);
    Report r;
    if (x.packet.members.empty() || x.packet.levi != "G") {
        r.total = Value(0);
        r.integer = 0;
    } else {
        r = assemble(x, 0, true, opt);
        Value per_member(0);
        for (const auto& m : x.packet.members) per_member += tr_Rdisc(c, a, weight, m.label, opt).total;
        if (x.g.q % 2) per_member = -per_member;
        if (!close(r.total, per_member, opt.tolerance))
            throw LefschetzInconsistency("weight " + std::to_string(weight) + ": L = " + r.total.str() +
                                         " but (-1)^q(G) times the packet traces is " + per_member.str());
        r.integer = snap(r.total, 1e-6);
        if (!r.integer) throw LefschetzInconsistency("L = " + r.total.str() + " is not an integer");
    }
    r.quantity = "lefschetz";
    r.subject = a.group + " level " + std::to_string(a.level) + " weight " + std::to_string(weight);
    return r;
}

}  // namespace stf
